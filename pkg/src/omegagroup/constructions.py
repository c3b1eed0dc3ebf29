"""Named Cauchy sequences: square roots over Q and Q_p, geometric series."""

from __future__ import annotations

import threading
from fractions import Fraction

from .core import InvalidParameter, OmegaGroup
from .instances import rational_abs, rational_padic, valuation
from .sequences import CauchySequence, two_pow

__all__ = [
    "babylonian_sqrt",
    "bisection_sqrt",
    "hensel_sqrt",
    "hensel_root_mod",
    "geometric_series",
    "padic_precision",
]


def _positive_rational(q) -> Fraction:
    q = Fraction(q)
    if q <= 0:
        raise InvalidParameter("square root needs a positive rational, got %s" % q)
    return q


def babylonian_sqrt(q) -> CauchySequence:
    """Heron iterates ``x <- (x + q/x)/2`` from 1, over the rationals with ``|.|``.

    Term ``n`` is iterate number ``n.bit_length()``, so the size of term
    ``n`` grows linearly in ``n`` rather than exponentially.  Every iterate
    from the first on is ``>= sqrt(q)`` and ``q/x <= sqrt(q)``, so all later
    terms lie in ``[q/x, x]``; the modulus is the first index whose bracket
    is narrow enough.
    """
    q = _positive_rational(q)
    iterates = [Fraction(1)]
    lock = threading.Lock()

    def iterate(j):
        if j < len(iterates):
            return iterates[j]
        with lock:
            while len(iterates) <= j:
                x = iterates[-1]
                iterates.append((x + q / x) / 2)
        return iterates[j]

    def gen(n):
        return iterate(n.bit_length())

    def rate(k):
        j = 1
        while True:
            x = iterate(j)
            if x - q / x <= two_pow(k):
                return 1 << (j - 1)
            j += 1

    return CauchySequence(rational_abs(), gen, rate)


def bisection_sqrt(q) -> CauchySequence:
    """Midpoints of the bisection brackets of ``sqrt(q)`` in ``[0, max(1, q)]``."""
    q = _positive_rational(q)
    hi = max(Fraction(1), q)
    # smallest e with 2**e >= hi
    e = 0
    while (1 << e) < hi:
        e += 1

    def gen(n):
        lo, up = Fraction(0), hi
        for _ in range(n):
            mid = (lo + up) / 2
            if mid * mid <= q:
                lo = mid
            else:
                up = mid
        return (lo + up) / 2

    # all later midpoints share the bracket of width hi * 2**-n
    return CauchySequence(rational_abs(), gen, lambda k: k + e)


def padic_precision(p: int, k: int) -> int:
    """Smallest ``m`` with ``p**-m <= 2**-k``."""
    m, power, target = 0, 1, 1 << k
    while power < target:
        power *= p
        m += 1
    return m


def _mod_rational(q: Fraction, modulus: int) -> int:
    return q.numerator * pow(q.denominator, -1, modulus) % modulus


def hensel_root_mod(q, p: int, digits: int, root: int | None = None) -> int:
    """Square root of the p-adic unit ``q`` modulo ``p**digits`` by Newton iteration."""
    q = Fraction(q)
    if root is None:
        root = _residue_root(q, p)
    x, e = root % p, 1
    while e < digits:
        e = min(2 * e, digits)
        mod = p**e
        x = (x - (x * x - _mod_rational(q, mod)) * pow(2 * x, -1, mod)) % mod
    return x % p**digits


def _residue_root(q: Fraction, p: int) -> int:
    r = _mod_rational(q, p)
    for x in range(1, p):
        if x * x % p == r:
            return x
    raise InvalidParameter("%s is not a square modulo %d" % (q, p))


def hensel_sqrt(q, p: int) -> CauchySequence:
    """A square root of ``q`` in ``Q_p`` as its truncations mod ``p**(n+1)``.

    ``q`` must have even valuation and a unit part that is a nonzero square
    mod ``p``; the root is the lift of the smallest residue root.
    """
    group = rational_padic(p)
    if p == 2:
        raise InvalidParameter("p-adic square roots are only supported for odd p")
    q = Fraction(q)
    if q == 0:
        raise InvalidParameter("square root of zero is not supported")
    v = valuation(q, p)
    if v % 2:
        raise InvalidParameter("%s has odd %d-adic valuation" % (q, p))
    unit = q / Fraction(p) ** v
    scale = Fraction(p) ** (v // 2)
    root = _residue_root(unit, p)

    def gen(n):
        return scale * hensel_root_mod(unit, p, n + 1, root)

    def rate(k):
        # terms past n agree mod p**(n+1) before scaling
        return max(0, padic_precision(p, k) - 1 - v // 2)

    return CauchySequence(group, gen, rate)


def geometric_series(group: OmegaGroup, r) -> CauchySequence:
    """Partial sums ``1 + r + ... + r**n`` in a rational instance with ``|r| < 1``.

    The norm is multiplicative on these instances, so the tail past ``n`` is
    bounded by ``|r|**(n+1) / (1 - |r|)``.
    """
    if not (group.name == "q-abs" or group.name.startswith("q-padic:")):
        raise InvalidParameter("geometric series need a rational instance, got %s" % group.name)
    r = Fraction(r)
    rho = Fraction(group.norm(r))
    if rho >= 1:
        raise InvalidParameter("geometric series needs |r| < 1 in %s, got %s" % (group.name, rho))

    def gen(n):
        if r == 1:
            return Fraction(n + 1)
        return (1 - r ** (n + 1)) / (1 - r)

    def rate(k):
        n, tail = 0, rho
        while tail > two_pow(k) * (1 - rho):
            n += 1
            tail *= rho
        return n

    return CauchySequence(group, gen, rate)
