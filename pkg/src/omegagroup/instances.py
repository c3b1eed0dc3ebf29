"""Concrete normed Omega-groups.

Rationals with the absolute value and with a p-adic norm, square matrices
under the max-row-sum norm, octonions under the coordinate 1-norm, column
vectors under the max norm, and maps from a finite set into any of these.
All norms are exact rationals.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from .core import InvalidParameter, OmegaGroup, OperationDescriptor

__all__ = [
    "valuation",
    "padic_norm",
    "rational_abs",
    "rational_padic",
    "matrix_ring",
    "vector_space",
    "octonions",
    "map_group",
    "make_instance",
    "parse_instance_spec",
    "basis_octonion",
    "octonion_mul",
    "octonion_nonassociativity_witness",
    "parse_literal",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def valuation(q, p: int) -> int:
    """Exponent of ``p`` in the nonzero rational ``q``."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def padic_norm(q, p: int) -> Fraction:
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    return Fraction(p) ** -valuation(q, p)


# -- literals --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(\[|\]|,|[^\[\],\s]+)")


def parse_literal(text: str):
    """Parse ``[1, -3/2, [e1, 0]]``-style nested literals.

    Leaves are returned as strings; callers convert them.
    """
    tokens = _TOKEN.findall(text.strip())
    if "".join(tokens) != re.sub(r"\s+", "", text):
        raise ValueError("cannot parse literal %r" % text)
    pos = 0

    def value():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of literal %r" % text)
        tok = tokens[pos]
        pos += 1
        if tok == "[":
            items = []
            if pos < len(tokens) and tokens[pos] == "]":
                pos += 1
                return items
            while True:
                items.append(value())
                if pos >= len(tokens):
                    raise ValueError("unterminated list in %r" % text)
                sep = tokens[pos]
                pos += 1
                if sep == "]":
                    return items
                if sep != ",":
                    raise ValueError("expected ',' in %r" % text)
        if tok in ("]", ","):
            raise ValueError("unexpected %r in %r" % (tok, text))
        return tok

    result = value()
    if pos != len(tokens):
        raise ValueError("trailing input in literal %r" % text)
    return result


def _rational(token) -> Fraction:
    if isinstance(token, Fraction):
        return token
    if not isinstance(token, str):
        raise ValueError("expected a rational, got %r" % (token,))
    try:
        return Fraction(token.strip())
    except ValueError:
        raise ValueError("not a rational: %r" % token) from None


# -- rationals -------------------------------------------------------------


def _sample_rational(rng) -> Fraction:
    if rng.random() < 0.08:
        return Fraction(0)
    return Fraction(rng.randint(-40, 40), rng.randint(1, 12))


def _rational_ops():
    return (
        OperationDescriptor("mul", 2, lambda a, b: a * b, 1),
        OperationDescriptor("triple", 3, lambda a, b, c: a * b * c, 1),
    )


def _parse_rational(text: str) -> Fraction:
    return _rational(text)


@lru_cache(maxsize=None)
def rational_abs() -> OmegaGroup:
    return OmegaGroup(
        name="q-abs",
        zero=Fraction(0),
        add=lambda a, b: a + b,
        neg=lambda a: -a,
        norm=abs,
        sampler=_sample_rational,
        ops=_rational_ops(),
        parse=_parse_rational,
    )


@lru_cache(maxsize=None)
def rational_padic(p: int) -> OmegaGroup:
    """Rationals with the ``p``-adic norm ``p**-v_p(a)``."""
    if not isinstance(p, int) or not _is_prime(p):
        raise InvalidParameter("%s is not prime" % (p,))

    def sample(rng):
        if rng.random() < 0.08:
            return Fraction(0)
        unit = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
        return unit * Fraction(p) ** rng.randint(-3, 4)

    return OmegaGroup(
        name="q-padic:%d" % p,
        zero=Fraction(0),
        add=lambda a, b: a + b,
        neg=lambda a: -a,
        norm=lambda a: padic_norm(a, p),
        sampler=sample,
        ops=(OperationDescriptor("mul", 2, lambda a, b: a * b, 1),),
        parse=_parse_rational,
    )


# -- matrices and vectors --------------------------------------------------


def _fmt_array(value) -> str:
    if isinstance(value, (tuple, list)):
        return "[" + ", ".join(_fmt_array(v) for v in value) + "]"
    return str(value)


def _sample_entry(rng) -> Fraction:
    if rng.random() < 0.3:
        return Fraction(0)
    return Fraction(rng.randint(-9, 9), rng.randint(1, 6))


@lru_cache(maxsize=None)
def matrix_ring(n: int) -> OmegaGroup:
    """``n x n`` rational matrices with the max-row-sum norm."""
    if not isinstance(n, int) or n < 1:
        raise InvalidParameter("matrix dimension must be >= 1, got %s" % (n,))
    idx = range(n)
    zero = tuple(tuple(Fraction(0) for _ in idx) for _ in idx)

    def mul(a, b):
        cols = list(zip(*b))
        return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)

    def sample(rng):
        if rng.random() < 0.05:
            return zero
        return tuple(tuple(_sample_entry(rng) for _ in idx) for _ in idx)

    def parse(text):
        rows = parse_literal(text)
        if not isinstance(rows, list) or len(rows) != n or any(
            not isinstance(r, list) or len(r) != n for r in rows
        ):
            raise ValueError("expected a %dx%d matrix literal, got %r" % (n, n, text))
        return tuple(tuple(_rational(x) for x in r) for r in rows)

    return OmegaGroup(
        name="matrix:%d" % n,
        zero=zero,
        add=lambda a, b: tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b)),
        neg=lambda a: tuple(tuple(-x for x in r) for r in a),
        norm=lambda a: max(sum(abs(x) for x in r) for r in a),
        sampler=sample,
        ops=(OperationDescriptor("mul", 2, mul, 1),),
        parse=parse,
        format=_fmt_array,
    )


@lru_cache(maxsize=None)
def vector_space(n: int) -> OmegaGroup:
    """Rational column vectors of length ``n`` with the max norm; no operations."""
    if not isinstance(n, int) or n < 1:
        raise InvalidParameter("vector length must be >= 1, got %s" % (n,))
    zero = tuple(Fraction(0) for _ in range(n))

    def sample(rng):
        if rng.random() < 0.05:
            return zero
        return tuple(_sample_entry(rng) for _ in range(n))

    def parse(text):
        items = parse_literal(text)
        if not isinstance(items, list) or len(items) != n:
            raise ValueError("expected a length-%d vector literal, got %r" % (n, text))
        return tuple(_rational(x) for x in items)

    return OmegaGroup(
        name="vector:%d" % n,
        zero=zero,
        add=lambda a, b: tuple(x + y for x, y in zip(a, b)),
        neg=lambda a: tuple(-x for x in a),
        norm=lambda a: max(abs(x) for x in a),
        sampler=sample,
        parse=parse,
        format=_fmt_array,
    )


# -- octonions -------------------------------------------------------------

# Cayley table: for each oriented triple (i, j, k), e_i e_j = e_k and cyclically.
_TRIPLES = ((1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5))


def _structure_constants():
    table = {}
    for i in range(8):
        table[0, i] = (1, i)
        table[i, 0] = (1, i)
    for i in range(1, 8):
        table[i, i] = (-1, 0)
    for i, j, k in _TRIPLES:
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            table[a, b] = (1, c)
            table[b, a] = (-1, c)
    return table


_TABLE = _structure_constants()


def octonion_mul(a, b):
    out = [Fraction(0)] * 8
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                sign, k = _TABLE[i, j]
                out[k] += sign * x * y
    return tuple(out)


def basis_octonion(i: int, coefficient=1):
    out = [Fraction(0)] * 8
    out[i] = Fraction(coefficient)
    return tuple(out)


def _format_octonion(a) -> str:
    terms = []
    for i, x in enumerate(a):
        if not x:
            continue
        if i == 0:
            terms.append(str(x))
        elif x == 1:
            terms.append("e%d" % i)
        elif x == -1:
            terms.append("-e%d" % i)
        else:
            terms.append("%s*e%d" % (x, i))
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


_OCT_TERM = re.compile(r"([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(e[0-7])?")


def _parse_octonion(text: str):
    text = text.strip()
    if text.startswith("["):
        items = parse_literal(text)
        if not isinstance(items, list) or len(items) != 8:
            raise ValueError("expected 8 octonion coordinates, got %r" % text)
        return tuple(_rational(x) for x in items)
    out = [Fraction(0)] * 8
    pos = 0
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise ValueError("empty octonion literal")
    while pos < len(compact):
        m = _OCT_TERM.match(compact, pos)
        if m is None or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError("cannot parse octonion literal %r" % text)
        coeff = Fraction(m.group(2) or 1)
        if m.group(1) == "-":
            coeff = -coeff
        elif m.group(1) == "" and pos > 0:
            raise ValueError("cannot parse octonion literal %r" % text)
        out[int(m.group(3)[1]) if m.group(3) else 0] += coeff
        pos = m.end()
    return tuple(out)


@lru_cache(maxsize=None)
def octonions() -> OmegaGroup:
    """Rational octonions with the coordinate 1-norm.

    Each structure constant is +-1, so ``|ab| <= |a||b|`` and the product's
    declared norm bound is 1.
    """
    zero = tuple(Fraction(0) for _ in range(8))

    def sample(rng):
        if rng.random() < 0.05:
            return zero
        return tuple(_sample_entry(rng) for _ in range(8))

    return OmegaGroup(
        name="octonion",
        zero=zero,
        add=lambda a, b: tuple(x + y for x, y in zip(a, b)),
        neg=lambda a: tuple(-x for x in a),
        norm=lambda a: sum(abs(x) for x in a),
        sampler=sample,
        ops=(OperationDescriptor("mul", 2, octonion_mul, 1),),
        parse=_parse_octonion,
        format=_format_octonion,
    )


def octonion_nonassociativity_witness(a=None, b=None, c=None):
    """Return ``(a, b, c, (ab)c, a(bc))`` for a triple on which the product is not associative."""
    if a is None:
        a, b, c = basis_octonion(1), basis_octonion(2), basis_octonion(4)
    left = octonion_mul(octonion_mul(a, b), c)
    right = octonion_mul(a, octonion_mul(b, c))
    if left == right:
        raise ValueError("triple associates")
    return a, b, c, left, right


# -- maps from a finite set ------------------------------------------------


def _lift(op: OperationDescriptor, points) -> OperationDescriptor:
    def evaluator(*fs):
        return {x: op(*(f[x] for f in fs)) for x in points}

    return OperationDescriptor(op.symbol, op.arity, evaluator, op.norm_bound)


def map_group(points, target: OmegaGroup) -> OmegaGroup:
    """Total maps from the finite set ``points`` into ``target``, with the sup norm.

    Elements are dicts ``{point: value}``; every operation acts pointwise.
    """
    points = tuple(points)
    if not points:
        raise InvalidParameter("map base set must be nonempty")
    if len(set(points)) != len(points):
        raise InvalidParameter("map base points must be distinct")

    def parse(text):
        items = parse_literal(text)
        if not isinstance(items, list) or len(items) != len(points):
            raise ValueError("expected %d map values, got %r" % (len(points), text))
        return {x: target.parse(_unparse(v)) for x, v in zip(points, items)}

    def fmt(f):
        return "{" + ", ".join("%s: %s" % (x, target.format(f[x])) for x in points) + "}"

    return OmegaGroup(
        name="map:%d:%s" % (len(points), target.name),
        zero={x: target.zero for x in points},
        add=lambda f, g: {x: target.add(f[x], g[x]) for x in points},
        neg=lambda f: {x: target.neg(f[x]) for x in points},
        norm=lambda f: max(target.norm(f[x]) for x in points),
        sampler=lambda rng: {x: target.sampler(rng) for x in points},
        ops=tuple(_lift(op, points) for op in target.ops),
        eq=lambda f, g: all(target.eq(f[x], g[x]) for x in points),
        parse=parse if target.parse is not None else None,
        format=fmt,
    )


def _unparse(value) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_unparse(v) for v in value) + "]"
    return value


# -- construction from specs -----------------------------------------------


def make_instance(kind: str, **params) -> OmegaGroup:
    """Build an instance by kind name: ``q-abs``, ``q-padic``, ``matrix``, ``vector``, ``octonion``, ``map``."""
    if kind == "q-abs":
        return rational_abs()
    if kind == "q-padic":
        return rational_padic(params["p"])
    if kind == "matrix":
        return matrix_ring(params["n"])
    if kind == "vector":
        return vector_space(params["n"])
    if kind == "octonion":
        return octonions()
    if kind == "map":
        return _cached_map(tuple(params["points"]), params["target"])
    raise InvalidParameter("unknown instance kind %r" % kind)


@lru_cache(maxsize=None)
def _cached_map(points, target):
    return map_group(points, target)


def _int_param(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise InvalidParameter("%s must be an integer, got %r" % (what, text)) from None


def parse_instance_spec(spec: str) -> OmegaGroup:
    """Parse ``q-abs``, ``q-padic:<p>``, ``matrix:<n>``, ``vector:<n>``, ``octonion`` or ``map:<n>:<inner>``."""
    head, _, rest = spec.strip().partition(":")
    if head in ("q-abs", "octonion") and not rest:
        return make_instance(head)
    if head == "q-padic" and rest:
        return make_instance("q-padic", p=_int_param(rest, "prime"))
    if head in ("matrix", "vector") and rest:
        return make_instance(head, n=_int_param(rest, "dimension"))
    if head == "map" and rest:
        count, _, inner = rest.partition(":")
        n = _int_param(count, "number of points")
        if n < 1:
            raise InvalidParameter("map base set must be nonempty")
        if not inner:
            raise InvalidParameter("map spec needs a target: map:<n>:<inner-spec>")
        points = tuple("x%d" % i for i in range(n))
        return make_instance("map", points=points, target=parse_instance_spec(inner))
    raise InvalidParameter("unknown instance spec %r" % spec)
