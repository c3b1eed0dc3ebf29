"""Cauchy sequences with explicit binary moduli, and arithmetic that propagates them.

A :class:`CauchySequence` promises ``|a_p - a_q| <= 2**-k`` whenever
``p, q >= rate(k)``.  Sums, operations and norms of such sequences come with
moduli computed from the inputs' moduli, so every derived sequence keeps the
same promise.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Mapping, Sequence

from .core import (
    CheckResult,
    OmegaGroup,
    OperationDescriptor,
    Report,
    invert_epsilon_bound,
    precision_for,
)
from .instances import rational_abs

__all__ = [
    "Modulus",
    "CauchySequence",
    "constant",
    "spot_check_cauchy",
    "check_limit",
    "equivalent_upto",
    "seq_add",
    "seq_neg",
    "seq_sub",
    "seq_apply_op",
    "seq_norm",
    "tail_caps",
    "pointwise_sequence",
    "uniform_convergence_check",
    "UniformConvergenceReport",
]


def two_pow(k: int) -> Fraction:
    """``2**-k`` as an exact rational."""
    return Fraction(1, 1 << k) if k >= 0 else Fraction(1 << -k)


class Modulus:
    """Rate of convergence ``k -> N``, forced monotone by a running maximum."""

    def __init__(self, rate: Callable[[int], int]):
        if isinstance(rate, Modulus):
            rate = rate._rate
        self._rate = rate
        self._values: list = []
        self._lock = threading.Lock()

    def __call__(self, k: int) -> int:
        if k < 0:
            raise ValueError("precision must be nonnegative")
        values = self._values
        if k < len(values):
            return values[k]
        with self._lock:
            while len(values) <= k:
                n = self._rate(len(values))
                if n < 0:
                    raise ValueError("modulus returned negative index %d" % n)
                values.append(max(n, values[-1]) if values else n)
        return values[k]


@dataclass(frozen=True, eq=False)
class CauchySequence:
    """A pure index -> element generator with a modulus of convergence."""

    group: OmegaGroup
    gen: Callable[[int], Any]
    modulus: Any

    def __post_init__(self):
        modulus = self.modulus if isinstance(self.modulus, Modulus) else Modulus(self.modulus)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "gen", lru_cache(maxsize=512)(self.gen))

    def __getitem__(self, n: int):
        if n < 0:
            raise IndexError("sequence indices are nonnegative")
        return self.gen(n)

    def rate(self, k: int) -> int:
        return self.modulus(k)


def constant(group: OmegaGroup, value) -> CauchySequence:
    return CauchySequence(group, lambda n: value, lambda k: 0)


def spot_check_cauchy(
    s: CauchySequence, k_max: int, probes_per_level: int = 8, seed: int = 0
) -> Report:
    """Probe index pairs beyond ``rate(k)`` for every ``k <= k_max``."""
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    rng = random.Random(seed)
    group = s.group
    report = Report("cauchy spot check: " + group.name)
    for k in range(k_max + 1):
        n0 = s.rate(k)
        span = n0 + 8
        pairs = [(n0, n0), (n0, n0 + 1)]
        pairs += [
            (n0 + rng.randint(0, span), n0 + rng.randint(0, span))
            for _ in range(probes_per_level)
        ]
        witness = None
        bound = two_pow(k)
        for p, q in pairs:
            if group.distance(s[p], s[q]) > bound:
                witness = {"k": str(k), "p": str(p), "q": str(q)}
                break
        report.results.append(
            CheckResult("cauchy.k=%d" % k, witness is None, len(pairs), seed, witness)
        )
    return report


def check_limit(s: CauchySequence, candidate, k: int) -> bool:
    """Test whether ``candidate`` is within ``2**-k`` of the limit of ``s``.

    A true limit always passes; a point farther than ``2**-k + 2**-(k+1)``
    from the limit always fails.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    group = s.group
    n = s.rate(k + 1)
    # a term past rate(k+2) that strays more than 2**-(k+1) breaks the modulus
    if group.distance(s[n], s[s.rate(k + 2)]) > two_pow(k + 1):
        return False
    return group.distance(s[n], candidate) <= two_pow(k)


def equivalent_upto(s: CauchySequence, t: CauchySequence, k: int) -> bool:
    """Compare ``s`` and ``t`` at precision ``2**-k``.

    Equivalent sequences give True at every ``k``.  Sequences whose limits
    are at least ``2**-(k-1)`` apart give False.
    """
    if s.group is not t.group and s.group.name != t.group.name:
        raise ValueError("sequences live in different groups")
    n0 = max(s.rate(k + 2), t.rate(k + 2))
    bound = two_pow(k)
    return all(
        s.group.distance(s[n], t[n]) <= bound for n in (n0, n0 + 1, 2 * n0 + 1)
    )


def seq_add(s: CauchySequence, t: CauchySequence) -> CauchySequence:
    group = s.group
    return CauchySequence(
        group,
        lambda n: group.add(s[n], t[n]),
        lambda k: max(s.rate(k + 1), t.rate(k + 1)),
    )


def seq_neg(s: CauchySequence) -> CauchySequence:
    group = s.group
    return CauchySequence(group, lambda n: group.neg(s[n]), s.modulus)


def seq_sub(s: CauchySequence, t: CauchySequence) -> CauchySequence:
    return seq_add(s, seq_neg(t))


def tail_caps(ss: Sequence[CauchySequence]) -> list:
    """Bounds on the norms of every term past ``rate(0)``, one per sequence."""
    return [s.group.norm(s[s.rate(0)]) + 1 for s in ss]


def seq_apply_op(op: OperationDescriptor, ss: Sequence[CauchySequence]) -> CauchySequence:
    """Apply ``op`` termwise; the modulus comes from the inverted difference bound."""
    ss = list(ss)
    if len(ss) != op.arity:
        raise ValueError("%s takes %d sequences, got %d" % (op.symbol, op.arity, len(ss)))
    group = ss[0].group
    caps = tail_caps(ss)

    def rate(k):
        m = precision_for(invert_epsilon_bound(op, caps, two_pow(k)))
        return max(s.rate(m) for s in ss)

    return CauchySequence(group, lambda n: op(*(s[n] for s in ss)), rate)


def seq_norm(s: CauchySequence) -> CauchySequence:
    """The norms ``|a_n|`` as a sequence of rationals under the absolute value."""
    group = s.group
    return CauchySequence(rational_abs(), lambda n: Fraction(group.norm(s[n])), s.modulus)


def pointwise_sequence(group: OmegaGroup, components: Mapping[Any, CauchySequence]):
    """Assemble per-point sequences into one sequence in the map group ``group``."""
    points = list(components)
    return CauchySequence(
        group,
        lambda n: {x: components[x][n] for x in points},
        lambda k: max(components[x].rate(k) for x in points),
    )


@dataclass
class UniformConvergenceReport(Report):
    thresholds: dict = field(default_factory=dict)


def uniform_convergence_check(
    fs,
    f,
    k_max: int,
    group: OmegaGroup | None = None,
    probes: int = 4,
    seed: int = 0,
    max_index: int = 1 << 24,
) -> UniformConvergenceReport:
    """Search, for every ``k <= k_max``, a threshold ``N`` past which ``sup_x |f_n(x) - f(x)| <= 2**-k``.

    ``fs`` is a :class:`CauchySequence` over a map group or any callable
    ``n -> map``.  The base set is finite, so the sup is an exact maximum.
    """
    if group is None:
        group = fs.group
    term = fs.__getitem__ if isinstance(fs, CauchySequence) else fs
    rng = random.Random(seed)
    report = UniformConvergenceReport("uniform convergence: " + group.name)

    def close(n, bound):
        return group.distance(term(n), f) <= bound

    for k in range(k_max + 1):
        bound = two_pow(k)
        found = None
        n_cand = 0
        while n_cand <= max_index:
            idx = {n_cand + 1, n_cand + 2, 2 * n_cand + 1, 4 * n_cand + 3}
            idx.update(n_cand + 1 + rng.randint(0, 3 * n_cand + 8) for _ in range(probes))
            if all(close(n, bound) for n in sorted(idx)):
                found = n_cand
                break
            n_cand = 1 if n_cand == 0 else 2 * n_cand
        witness = None if found is not None else {"k": str(k), "searched_to": str(max_index)}
        report.thresholds[k] = found
        report.results.append(
            CheckResult("uniform.k=%d" % k, found is not None, probes, seed, witness)
        )
    return report
