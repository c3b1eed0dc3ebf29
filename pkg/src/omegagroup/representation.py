"""Representations of Omega-groups, their norms, completions and map extensions.

A representation ``f`` of ``A1`` in ``A2`` sends each ``a1`` to an additive
endomorphism ``f(a1)`` of ``A2``; here it is stored as the two-argument
action ``f(a1, a2)``.  Which operations of ``A1`` it carries, and how, is
declared in ``transports``: the only supported transport is
``"composition"`` for a binary product, i.e. ``f(ab) = f(a) o f(b)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping

from .completion import CompletedElement, Completion, _UNKNOWN
from .core import (
    CheckResult,
    InvalidParameter,
    NoValidSample,
    OmegaGroup,
    OperationDescriptor,
    Report,
    linearized_inverse,
    precision_for,
    scalar,
)
from .instances import make_instance, matrix_ring, octonions, rational_abs, vector_space
from .sequences import CauchySequence, tail_caps, two_pow

__all__ = [
    "Representation",
    "CompletedRepresentation",
    "ModuleInstance",
    "IneffectiveRepresentation",
    "check_representation_laws",
    "rep_norm_estimate",
    "bound_rep_difference",
    "rep_seq",
    "complete_representation",
    "extend_to_maps",
    "induced_map_representation",
    "omega_ring_product",
    "check_effective",
    "representation_catalog",
    "parse_representation_spec",
]


class IneffectiveRepresentation(ValueError):
    """Two distinct sampled elements act identically on every probe."""


@dataclass(frozen=True, eq=False)
class Representation:
    source: OmegaGroup
    target: OmegaGroup
    action: Callable[[Any, Any], Any]
    norm_bound: Fraction
    transports: Mapping[str, str] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        try:
            object.__setattr__(self, "norm_bound", scalar(self.norm_bound))
        except (TypeError, ValueError) as exc:
            raise InvalidParameter("representation norm must be a finite rational: %s" % exc)
        for symbol, kind in self.transports.items():
            op = self.source.op(symbol)
            if kind != "composition":
                raise InvalidParameter("unknown transport %r for %s" % (kind, symbol))
            if op.arity != 2:
                raise InvalidParameter(
                    "only binary products can be transported; %s has arity %d"
                    % (symbol, op.arity)
                )

    def __call__(self, a1, a2):
        return self.action(a1, a2)


def _sample_pairs(f: Representation, n_samples: int, rng):
    for _ in range(n_samples):
        yield f.source.sampler(rng), f.target.sampler(rng)


def check_representation_laws(f: Representation, n_samples: int, seed: int = 0) -> Report:
    """Sampled check of the homomorphism laws in both slots and of the norm bound."""
    rng = random.Random(seed)
    src, tgt = f.source, f.target
    names = ["additive_in_target", "additive_in_source", "norm_bound"]
    names += ["commutes.%s" % op.symbol for op in tgt.ops]
    names += ["transport.%s" % s for s in f.transports]
    witnesses: dict = {name: None for name in names}

    def fail(name, **elements):
        if witnesses[name] is None:
            witnesses[name] = {
                k: (src.format(v) if k.startswith("a") else tgt.format(v))
                for k, v in elements.items()
            }

    for _ in range(n_samples):
        a, b = src.sampler(rng), src.sampler(rng)
        m, m2 = tgt.sampler(rng), tgt.sampler(rng)
        fa_m = f(a, m)
        if not tgt.eq(f(a, tgt.add(m, m2)), tgt.add(fa_m, f(a, m2))):
            fail("additive_in_target", a=a, m=m, m2=m2)
        if not tgt.eq(f(src.add(a, b), m), tgt.add(fa_m, f(b, m))):
            fail("additive_in_source", a=a, a2=b, m=m)
        if tgt.norm(fa_m) > f.norm_bound * src.norm(a) * tgt.norm(m):
            fail("norm_bound", a=a, m=m)
        for op in tgt.ops:
            ms = [tgt.sampler(rng) for _ in range(op.arity)]
            if not tgt.eq(f(a, op(*ms)), op(*(f(a, x) for x in ms))):
                fail("commutes.%s" % op.symbol, a=a, m=ms[0])
        for symbol in f.transports:
            product = src.op(symbol)
            if not tgt.eq(f(product(a, b), m), f(a, f(b, m))):
                fail("transport.%s" % symbol, a=a, a2=b, m=m)
    return Report(
        "representation laws: " + (f.name or "%s -> %s" % (src.name, tgt.name)),
        [CheckResult("rep." + n, w is None, n_samples, seed, w) for n, w in witnesses.items()],
    )


def rep_norm_estimate(f: Representation, n_samples: int, seed: int = 0) -> Fraction:
    """Sampled sup of ``|f(a)(b)| / (|a| |b|)``."""
    rng = random.Random(seed)
    best = None
    for a, b in _sample_pairs(f, n_samples, rng):
        denom = f.source.norm(a) * f.target.norm(b)
        if denom == 0:
            continue
        ratio = Fraction(f.target.norm(f(a, b))) / denom
        if best is None or ratio > best:
            best = ratio
    if best is None:
        raise NoValidSample("no sampled pair had both norms positive")
    return best


def bound_rep_difference(f: Representation, c1, r1, c2, r2) -> Fraction:
    """Bound on ``|f(c1')(c2') - f(a1)(a2)|`` when ``|c_i' - a_i| <= R_i`` and norms are at most ``C_i``.

    From ``f(c1')(c2') - f(a1)(a2) = f(c1'-a1)(c2'-a2) + f(a1)(c2'-a2) + f(c1'-a1)(a2)``.
    """
    c1, r1, c2, r2 = (scalar(v) for v in (c1, r1, c2, r2))
    return f.norm_bound * (r1 * r2 + c1 * r2 + r1 * c2)


def rep_seq(f: Representation, s1: CauchySequence, s2: CauchySequence) -> CauchySequence:
    """The sequence ``f(s1_n)(s2_n)`` with a modulus derived from :func:`bound_rep_difference`."""
    caps = tail_caps([s1, s2])

    def rate(k):
        epsilon = two_pow(k)
        delta = linearized_inverse(f.norm_bound, caps, epsilon)
        forward = bound_rep_difference(f, caps[0] + delta, delta, caps[1] + delta, delta)
        assert forward <= epsilon, "linearized inverse overshot"
        m = precision_for(delta)
        return max(s1.rate(m), s2.rate(m))

    return CauchySequence(f.target, lambda n: f(s1[n], s2[n]), rate)


@dataclass(frozen=True, eq=False)
class CompletedRepresentation:
    """The continuous extension of ``base`` to the completions of its source and target."""

    base: Representation
    source: Completion
    target: Completion

    @property
    def norm_bound(self) -> Fraction:
        return self.base.norm_bound

    def __call__(self, x: CompletedElement, y: CompletedElement) -> CompletedElement:
        exact = self.base(x.exact, y.exact) if x.is_exact and y.is_exact else _UNKNOWN
        return CompletedElement(rep_seq(self.base, x.rep, y.rep), exact)


def complete_representation(f: Representation) -> CompletedRepresentation:
    return CompletedRepresentation(f, Completion(f.source), Completion(f.target))


def extend_to_maps(f: Representation, points) -> Representation:
    """``f*(a)(g)(x) = f(a)(g(x))`` on maps from ``points`` into the target."""
    points = tuple(points)
    target = make_instance("map", points=points, target=f.target)
    return Representation(
        f.source,
        target,
        lambda a, g: {x: f(a, g[x]) for x in points},
        f.norm_bound,
        dict(f.transports),
        name="%s*" % (f.name or "f"),
    )


def induced_map_representation(f: Representation, points) -> Representation:
    """``f_X(g1)(g2)(x) = f(g1(x))(g2(x))`` between map groups over ``points``."""
    points = tuple(points)
    source = make_instance("map", points=points, target=f.source)
    target = make_instance("map", points=points, target=f.target)
    return Representation(
        source,
        target,
        lambda g1, g2: {x: f(g1[x], g2[x]) for x in points},
        f.norm_bound,
        dict(f.transports),
        name="%s_X" % (f.name or "f"),
    )


def check_effective(f: Representation, n_samples: int = 100, probes: int = 8, seed: int = 0):
    """Raise :class:`IneffectiveRepresentation` if two distinct samples act alike on all probes."""
    rng = random.Random(seed)
    points = [f.target.sampler(rng) for _ in range(probes)]
    for _ in range(n_samples):
        a, b = f.source.sampler(rng), f.source.sampler(rng)
        if f.source.eq(a, b):
            continue
        if all(f.target.eq(f(a, m), f(b, m)) for m in points):
            raise IneffectiveRepresentation(
                "%s and %s act identically on every probe"
                % (f.source.format(a), f.source.format(b))
            )


def omega_ring_product(
    f: Representation, n_samples: int = 100, probes: int = 8, seed: int = 0
) -> OperationDescriptor:
    """The product ``ab := f(a)(b)`` induced by an effective self-representation."""
    if f.source.name != f.target.name:
        raise InvalidParameter(
            "product needs a representation of a group in itself, got %s -> %s"
            % (f.source.name, f.target.name)
        )
    check_effective(f, n_samples, probes, seed)
    return OperationDescriptor("mul", 2, f.action, f.norm_bound)


@dataclass(frozen=True, eq=False)
class ModuleInstance:
    """An Omega-ring acting effectively on an abelian group."""

    ring: OmegaGroup
    group: OmegaGroup
    action: Representation

    def __post_init__(self):
        if self.action.source is not self.ring:
            raise InvalidParameter("action must be a representation of the ring")
        check_effective(self.action)


# -- catalog ---------------------------------------------------------------


def _matvec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def representation_catalog(name: str, n: int | None = None) -> Representation:
    """Demo representations: ``q-mult``, ``matrix-vec``, ``matrix-left``, ``octonion-left``."""
    if name == "q-mult":
        q = rational_abs()
        return Representation(q, q.without_ops(), lambda a, b: a * b, 1, {"mul": "composition"}, name)
    if name == "matrix-vec":
        ring = matrix_ring(n)
        return Representation(
            ring, vector_space(n), _matvec, 1, {"mul": "composition"}, "%s:%d" % (name, n)
        )
    if name == "matrix-left":
        ring = matrix_ring(n)
        mul = ring.op("mul")
        return Representation(
            ring, ring.without_ops(), mul.evaluator, 1, {"mul": "composition"}, "%s:%d" % (name, n)
        )
    if name == "octonion-left":
        o = octonions()
        # left multiplication does not compose: L_ab != L_a L_b for octonions
        return Representation(o, o.without_ops(), o.op("mul").evaluator, 1, {}, name)
    raise InvalidParameter("unknown representation %r" % name)


def parse_representation_spec(spec: str) -> Representation:
    head, _, rest = spec.strip().partition(":")
    if head in ("matrix-vec", "matrix-left"):
        try:
            n = int(rest)
        except ValueError:
            raise InvalidParameter("%s needs a dimension, e.g. %s:3" % (head, head)) from None
        return representation_catalog(head, n)
    if rest:
        raise InvalidParameter("unknown representation %r" % spec)
    return representation_catalog(head)
