"""Normed Omega-groups: the abstraction, sampled axiom checks and difference bounds.

An Omega-group here is an abelian group ``(zero, add, neg)`` together with a
finite list of polyadditive operations.  Every operation carries a declared
upper bound on its operator norm; the group norm takes exact rational values
so that every axiom check below is an exact comparison.
"""

from __future__ import annotations

import math
import operator
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Sequence

Scalar = Fraction

__all__ = [
    "Scalar",
    "scalar",
    "NoValidSample",
    "InvalidParameter",
    "OperationDescriptor",
    "OmegaGroup",
    "Ball",
    "CheckResult",
    "Report",
    "check_group_axioms",
    "check_norm_axioms",
    "check_polyadditivity",
    "check_op_norm",
    "check_reverse_triangle",
    "op_norm_estimate",
    "bound_op_difference",
    "linearized_inverse",
    "invert_epsilon_bound",
    "reverse_triangle_check",
    "precision_for",
]


class NoValidSample(ValueError):
    """Every sampled tuple contained an element of norm zero."""


class InvalidParameter(ValueError):
    """Raised when an instance or representation is built from bad parameters."""


def scalar(value) -> Fraction:
    """Coerce ``value`` to an exact nonnegative rational."""
    if isinstance(value, float):
        raise TypeError("scalars are exact rationals; got float %r" % value)
    q = Fraction(value)
    if q < 0:
        raise ValueError("scalar must be nonnegative, got %s" % q)
    return q


def _is_rational(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


@dataclass(frozen=True)
class OperationDescriptor:
    """An n-ary polyadditive operation with a declared bound on its norm."""

    symbol: str
    arity: int
    evaluator: Callable[..., Any]
    norm_bound: Fraction

    def __post_init__(self):
        if self.arity < 1:
            raise InvalidParameter("arity must be positive, got %d" % self.arity)
        object.__setattr__(self, "norm_bound", scalar(self.norm_bound))

    def __call__(self, *args):
        if len(args) != self.arity:
            raise TypeError(
                "%s takes %d arguments, got %d" % (self.symbol, self.arity, len(args))
            )
        return self.evaluator(*args)


@dataclass(frozen=True, eq=False)
class OmegaGroup:
    """A normed abelian Omega-group over some carrier.

    ``sampler`` draws a carrier element from a :class:`random.Random`; it
    drives every property check.  ``parse`` and ``format`` convert elements
    to and from the literal syntax used on the command line.
    """

    name: str
    zero: Any
    add: Callable[[Any, Any], Any]
    neg: Callable[[Any], Any]
    norm: Callable[[Any], Fraction]
    sampler: Callable[[random.Random], Any]
    ops: tuple = ()
    eq: Callable[[Any, Any], bool] = operator.eq
    parse: Callable[[str], Any] | None = field(default=None, compare=False)
    format: Callable[[Any], str] = field(default=str, compare=False)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def distance(self, a, b) -> Fraction:
        return self.norm(self.sub(a, b))

    def op(self, symbol: str) -> OperationDescriptor:
        for op in self.ops:
            if op.symbol == symbol:
                return op
        raise KeyError("%s has no operation %r" % (self.name, symbol))

    def sum(self, items):
        total = self.zero
        for item in items:
            total = self.add(total, item)
        return total

    @lru_cache(maxsize=None)
    def without_ops(self) -> "OmegaGroup":
        """The underlying abelian group, forgetting every operation."""
        return OmegaGroup(
            name=self.name,
            zero=self.zero,
            add=self.add,
            neg=self.neg,
            norm=self.norm,
            sampler=self.sampler,
            ops=(),
            eq=self.eq,
            parse=self.parse,
            format=self.format,
        )


@dataclass(frozen=True)
class Ball:
    group: OmegaGroup
    center: Any
    radius: Fraction
    closed: bool = False

    def __post_init__(self):
        if scalar(self.radius) <= 0:
            raise ValueError("ball radius must be positive")

    def __contains__(self, point) -> bool:
        d = self.group.distance(self.center, point)
        return d <= self.radius if self.closed else d < self.radius


@dataclass
class CheckResult:
    name: str
    passed: bool
    samples: int
    seed: int
    counterexample: dict | None = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "samples": self.samples,
            "seed": self.seed,
            "counterexample": self.counterexample,
        }


@dataclass
class Report:
    title: str
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r.passed]

    def __getitem__(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def extend(self, other: "Report") -> "Report":
        self.results.extend(other.results)
        return self


class _Check:
    """Accumulates the first counterexample for one named law."""

    def __init__(self, name, group, samples, seed):
        self.name = name
        self.group = group
        self.samples = samples
        self.seed = seed
        self.witness = None

    def fail(self, **elements):
        if self.witness is None:
            self.witness = {k: _show(self.group, v) for k, v in elements.items()}

    def result(self) -> CheckResult:
        return CheckResult(
            self.name, self.witness is None, self.samples, self.seed, self.witness
        )


def _show(group, value) -> str:
    if isinstance(value, list):
        return "(" + ", ".join(group.format(v) for v in value) + ")"
    return group.format(value)


def _samples(group: OmegaGroup, rng: random.Random, arity: int):
    return [group.sampler(rng) for _ in range(arity)]


def check_group_axioms(group: OmegaGroup, n_samples: int, seed: int = 0) -> Report:
    """Sample triples and test the abelian-group laws with exact equality."""
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rng = random.Random(seed)
    eq, add, neg, zero = group.eq, group.add, group.neg, group.zero
    names = ("associativity", "commutativity", "identity", "inverse")
    checks = {n: _Check("group." + n, group, n_samples, seed) for n in names}
    for _ in range(n_samples):
        a, b, c = _samples(group, rng, 3)
        if not eq(add(add(a, b), c), add(a, add(b, c))):
            checks["associativity"].fail(a=a, b=b, c=c)
        if not eq(add(a, b), add(b, a)):
            checks["commutativity"].fail(a=a, b=b)
        if not (eq(add(a, zero), a) and eq(add(zero, a), a)):
            checks["identity"].fail(a=a)
        if not (eq(add(a, neg(a)), zero) and eq(add(neg(a), a), zero)):
            checks["inverse"].fail(a=a)
    return Report("group axioms: " + group.name, [c.result() for c in checks.values()])


def check_norm_axioms(group: OmegaGroup, n_samples: int, seed: int = 0) -> Report:
    """Nonnegativity, definiteness, triangle inequality and symmetry of the norm."""
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rng = random.Random(seed)
    eq, norm, zero = group.eq, group.norm, group.zero
    names = ("nonnegative", "definite", "triangle", "symmetric")
    checks = {n: _Check("norm." + n, group, n_samples, seed) for n in names}
    if norm(zero) != 0:
        checks["definite"].fail(a=zero)
    for _ in range(n_samples):
        a, b = _samples(group, rng, 2)
        na = norm(a)
        if not _is_rational(na) or na < 0:
            checks["nonnegative"].fail(a=a)
            continue
        if (na == 0) != eq(a, zero):
            checks["definite"].fail(a=a)
        if norm(group.add(a, b)) > na + norm(b):
            checks["triangle"].fail(a=a, b=b)
        if norm(group.neg(a)) != na:
            checks["symmetric"].fail(a=a)
    return Report("norm axioms: " + group.name, [c.result() for c in checks.values()])


def check_polyadditivity(
    group: OmegaGroup, op: OperationDescriptor, n_samples: int, seed: int = 0
) -> Report:
    """Additivity of ``op`` in each argument slot separately."""
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rng = random.Random(seed)
    report = Report("polyadditivity: %s.%s" % (group.name, op.symbol))
    for slot in range(op.arity):
        check = _Check(
            "polyadditivity.%s.slot%d" % (op.symbol, slot + 1), group, n_samples, seed
        )
        for _ in range(n_samples):
            args = _samples(group, rng, op.arity)
            extra = group.sampler(rng)
            joined = list(args)
            joined[slot] = group.add(args[slot], extra)
            other = list(args)
            other[slot] = extra
            if not group.eq(op(*joined), group.add(op(*args), op(*other))):
                check.fail(args=list(args), b=extra)
        report.results.append(check.result())
    return report


def _norm_ratio_samples(group, op, n_samples, rng):
    for _ in range(n_samples):
        args = _samples(group, rng, op.arity)
        norms = [group.norm(a) for a in args]
        yield args, norms, group.norm(op(*args))


def check_op_norm(
    group: OmegaGroup, op: OperationDescriptor, n_samples: int, seed: int = 0
) -> Report:
    """Check ``|(a)op| <= norm_bound * prod |a_i|`` on sampled tuples."""
    rng = random.Random(seed)
    check = _Check("op_norm.%s" % op.symbol, group, n_samples, seed)
    for args, norms, value in _norm_ratio_samples(group, op, n_samples, rng):
        if value > op.norm_bound * math.prod(norms):
            check.fail(args=list(args))
    return Report("operation norm: %s.%s" % (group.name, op.symbol), [check.result()])


def op_norm_estimate(
    group: OmegaGroup, op: OperationDescriptor, n_samples: int, seed: int = 0
) -> Fraction:
    """Sampled lower estimate of the operator norm of ``op``."""
    rng = random.Random(seed)
    best = None
    for _, norms, value in _norm_ratio_samples(group, op, n_samples, rng):
        denom = math.prod(norms)
        if denom == 0:
            continue
        ratio = Fraction(value) / denom
        if best is None or ratio > best:
            best = ratio
    if best is None:
        raise NoValidSample(
            "no sampled tuple for %s had all arguments of positive norm" % op.symbol
        )
    return best


def bound_op_difference(
    op: OperationDescriptor, caps: Sequence, radii: Sequence
) -> Fraction:
    """Bound on ``|(c)op - (a)op|`` given ``|c_i - a_i| <= R_i`` and norms at most ``C_i``.

    Telescoping ``(c)op - (a)op`` by polyadditivity yields one term per
    nonempty set ``S`` of perturbed slots, with norm at most
    ``|op| * prod_{i in S} R_i * prod_{j not in S} C_j``.  Summed over all
    ``S`` this is exactly ``|op| * (prod (C_i + R_i) - prod C_i)``.
    """
    if len(caps) != op.arity or len(radii) != op.arity:
        raise ValueError("expected %d caps and radii" % op.arity)
    caps = [scalar(c) for c in caps]
    radii = [scalar(r) for r in radii]
    grown = math.prod(c + r for c, r in zip(caps, radii))
    return op.norm_bound * (grown - math.prod(caps))


def linearized_inverse(norm_bound, caps: Sequence, epsilon) -> Fraction:
    """Radius ``delta <= 1`` making every slot-perturbation bound at most ``epsilon``.

    For ``delta <= 1`` each term ``delta^|S| prod_{j not in S} (C_j + delta)``
    is at most ``delta * prod_{j not in S} (C_j + 1)``, so the forward bound
    is linear in ``delta`` and can be inverted in closed form.
    """
    epsilon = scalar(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    caps = [scalar(c) for c in caps]
    # sum over nonempty S of prod_{j not in S} (C_j + 1)
    slope = math.prod(c + 2 for c in caps) - math.prod(c + 1 for c in caps)
    return min(Fraction(1), epsilon / (1 + scalar(norm_bound) * slope))


def invert_epsilon_bound(op: OperationDescriptor, caps: Sequence, epsilon) -> Fraction:
    """Radius ``delta`` such that perturbing every slot by ``delta`` moves ``op`` by at most ``epsilon``.

    The guarantee holds for caps ``C_i + delta``; it is re-checked here with a
    forward call to :func:`bound_op_difference`.
    """
    if len(caps) != op.arity:
        raise ValueError("expected %d caps" % op.arity)
    delta = linearized_inverse(op.norm_bound, caps, epsilon)
    forward = bound_op_difference(op, [scalar(c) + delta for c in caps], [delta] * op.arity)
    assert forward <= epsilon, "linearized inverse overshot"
    return delta


def precision_for(delta) -> int:
    """Smallest ``m >= 0`` with ``2**-m <= delta``."""
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if delta >= 1:
        return 0
    # 2**-m <= p/q  <=>  q <= p * 2**m
    m = max(0, (delta.denominator // delta.numerator).bit_length() - 1)
    while delta.numerator << m < delta.denominator:
        m += 1
    return m


def reverse_triangle_check(group: OmegaGroup, a, b) -> bool:
    return group.distance(a, b) >= abs(group.norm(a) - group.norm(b))


def check_reverse_triangle(group: OmegaGroup, n_samples: int, seed: int = 0) -> Report:
    rng = random.Random(seed)
    check = _Check("reverse_triangle", group, n_samples, seed)
    for _ in range(n_samples):
        a, b = _samples(group, rng, 2)
        if not reverse_triangle_check(group, a, b):
            check.fail(a=a, b=b)
    return Report("reverse triangle: " + group.name, [check.result()])
