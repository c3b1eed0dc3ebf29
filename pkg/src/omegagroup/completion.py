"""The completion of a normed Omega-group, realised as lazily approximable elements.

A completed element is a Cauchy sequence with a modulus; equality of
completed elements is not decidable, so comparisons go through
:func:`is_within`, which answers Yes, No or Unknown and is never wrong when
it commits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence

from .core import CheckResult, OmegaGroup, OperationDescriptor, Report, scalar
from .sequences import (
    CauchySequence,
    Modulus,
    constant,
    equivalent_upto,
    seq_add,
    seq_apply_op,
    seq_neg,
    two_pow,
)

__all__ = [
    "CompletedElement",
    "Completion",
    "Verdict",
    "Within",
    "embed",
    "approx",
    "comp_add",
    "comp_neg",
    "comp_sub",
    "comp_apply_op",
    "norm_approx",
    "is_within",
    "diagonal_limit",
    "completion_uniqueness_suite",
]

_UNKNOWN = object()


@dataclass(frozen=True, eq=False)
class CompletedElement:
    """A point of the completion, represented by one of its Cauchy sequences.

    ``exact`` holds the base element when the point is known to come from
    the base group (embedded constants and exact combinations of them).
    """

    rep: CauchySequence
    exact: Any = _UNKNOWN

    @property
    def group(self) -> OmegaGroup:
        return self.rep.group

    @property
    def is_exact(self) -> bool:
        return self.exact is not _UNKNOWN

    def approx(self, k: int):
        return approx(self, k)

    def __add__(self, other):
        return comp_add(self, other)

    def __neg__(self):
        return comp_neg(self)

    def __sub__(self, other):
        return comp_sub(self, other)


def embed(group: OmegaGroup, a) -> CompletedElement:
    return CompletedElement(constant(group, a), a)


def approx(x: CompletedElement, k: int):
    """A base element within ``2**-k`` of ``x``."""
    if k < 0:
        raise ValueError("precision must be nonnegative")
    if x.is_exact:
        return x.exact
    return x.rep[x.rep.rate(k + 1)]


def comp_add(x: CompletedElement, y: CompletedElement) -> CompletedElement:
    exact = x.group.add(x.exact, y.exact) if x.is_exact and y.is_exact else _UNKNOWN
    return CompletedElement(seq_add(x.rep, y.rep), exact)


def comp_neg(x: CompletedElement) -> CompletedElement:
    exact = x.group.neg(x.exact) if x.is_exact else _UNKNOWN
    return CompletedElement(seq_neg(x.rep), exact)


def comp_sub(x: CompletedElement, y: CompletedElement) -> CompletedElement:
    return comp_add(x, comp_neg(y))


def comp_apply_op(op: OperationDescriptor, xs: Sequence[CompletedElement]) -> CompletedElement:
    xs = list(xs)
    if len(xs) != op.arity:
        raise ValueError("%s takes %d arguments, got %d" % (op.symbol, op.arity, len(xs)))
    exact = op(*(x.exact for x in xs)) if all(x.is_exact for x in xs) else _UNKNOWN
    return CompletedElement(seq_apply_op(op, [x.rep for x in xs]), exact)


def norm_approx(x: CompletedElement, k: int) -> Fraction:
    """The norm of ``x`` to within ``2**-k``."""
    return Fraction(x.group.norm(approx(x, k)))


class Verdict(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Within:
    """Outcome of :func:`is_within` with the bounds it was decided on."""

    verdict: Verdict
    lower: Fraction
    upper: Fraction

    def __bool__(self):
        return self.verdict is Verdict.YES


def is_within(x: CompletedElement, y: CompletedElement, epsilon, budget_k: int) -> Within:
    """Decide ``|x - y| <= epsilon`` from an approximation at precision ``budget_k``."""
    epsilon = scalar(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if budget_k < 0:
        raise ValueError("budget_k must be nonnegative")
    zero = Fraction(0)
    if x is y:
        return Within(Verdict.YES, zero, zero)
    if x.is_exact and y.is_exact:
        d = Fraction(x.group.distance(x.exact, y.exact))
        return Within(Verdict.YES if d <= epsilon else Verdict.NO, d, d)
    centre = norm_approx(comp_sub(x, y), budget_k)
    slack = two_pow(budget_k)
    lower, upper = max(zero, centre - slack), centre + slack
    if upper <= epsilon:
        verdict = Verdict.YES
    elif lower > epsilon:
        verdict = Verdict.NO
    else:
        verdict = Verdict.UNKNOWN
    return Within(verdict, lower, upper)


def diagonal_limit(
    terms: Callable[[int], CompletedElement], modulus: Callable[[int], int]
) -> CompletedElement:
    """Limit of a Cauchy sequence of completed elements.

    ``modulus`` bounds the sequence ``terms`` itself: ``|X_p - X_q| <= 2**-k``
    for ``p, q >= modulus(k)``.  Term ``n`` of the result is a base
    approximation of ``X_{modulus(n)}`` to ``2**-n``; any two such terms past
    ``n`` are within ``3 * 2**-n``.
    """
    modulus = Modulus(modulus)
    group = terms(0).group
    rep = CauchySequence(
        group, lambda n: approx(terms(modulus(n)), n), lambda k: k + 2
    )
    return CompletedElement(rep)


class Completion:
    """The completed Omega-group of ``base``, as a namespace of lifted operations."""

    def __init__(self, base: OmegaGroup):
        self.base = base
        self.name = "completion(%s)" % base.name
        self.zero = embed(base, base.zero)

    def embed(self, a) -> CompletedElement:
        return embed(self.base, a)

    def add(self, x, y):
        return comp_add(x, y)

    def neg(self, x):
        return comp_neg(x)

    def apply(self, symbol: str, *xs):
        return comp_apply_op(self.base.op(symbol), xs)

    def norm_approx(self, x, k: int) -> Fraction:
        return norm_approx(x, k)


def completion_uniqueness_suite(
    group: OmegaGroup, pairs: Sequence, k_max: int
) -> Report:
    """Check that two constructions of the same point agree everywhere observable.

    For each pair ``(x, y)`` of completed elements and every ``k <= k_max``:
    ``x`` and ``y`` are equivalent at ``k``, their norms agree to
    ``2**-(k-2)``, and so do ``x + x`` against ``y + y`` and every operation
    applied to copies of ``x`` against the same operation on copies of ``y``.
    """
    report = Report("completion uniqueness: " + group.name)
    tolerance = lambda k: two_pow(k - 2)  # noqa: E731
    for index, (x, y) in enumerate(pairs):
        derived = [("add", comp_add(x, x), comp_add(y, y))]
        for op in group.ops:
            derived.append(
                (op.symbol, comp_apply_op(op, [x] * op.arity), comp_apply_op(op, [y] * op.arity))
            )
        laws = {"equivalent": None, "norm": None}
        laws.update({name: None for name, _, _ in derived})
        for k in range(k_max + 1):
            if laws["equivalent"] is None and not equivalent_upto(x.rep, y.rep, k):
                laws["equivalent"] = k
            if laws["norm"] is None and abs(norm_approx(x, k) - norm_approx(y, k)) > tolerance(k):
                laws["norm"] = k
            for name, u, v in derived:
                if laws[name] is None and group.distance(approx(u, k), approx(v, k)) > tolerance(k):
                    laws[name] = k
        for name, failed_at in laws.items():
            witness = None if failed_at is None else {"pair": str(index), "k": str(failed_at)}
            report.results.append(
                CheckResult("pair%d.%s" % (index, name), failed_at is None, k_max + 1, 0, witness)
            )
    return report
