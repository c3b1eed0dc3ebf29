"""Acceptance criteria 1-11.

Each test tags itself with its criterion number; the terminal summary prints
one PASS/FAIL line per criterion.  Run alone with
``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import io
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import SHIPPED
from oracles import bisect_sqrt, cayley_dickson, hensel_lift_digits
from omegagroup.cli import main, padic_digits
from omegagroup.completion import (
    CompletedElement,
    approx,
    comp_add,
    comp_apply_op,
    embed,
    norm_approx,
)
from omegagroup.constructions import babylonian_sqrt, bisection_sqrt, geometric_series, hensel_sqrt
from omegagroup.core import (
    bound_op_difference,
    check_group_axioms,
    check_norm_axioms,
    check_op_norm,
    check_polyadditivity,
    check_reverse_triangle,
    invert_epsilon_bound,
    linearized_inverse,
    op_norm_estimate,
)
from omegagroup.expressions import evaluate_text
from omegagroup.instances import octonions, parse_instance_spec, rational_abs, rational_padic
from omegagroup.representation import (
    Representation,
    bound_rep_difference,
    check_representation_laws,
    complete_representation,
    induced_map_representation,
    omega_ring_product,
    parse_representation_spec,
    rep_norm_estimate,
    rep_seq,
)
from omegagroup.sequences import (
    CauchySequence,
    check_limit,
    constant,
    equivalent_upto,
    pointwise_sequence,
    seq_add,
    seq_apply_op,
    two_pow,
    uniform_convergence_check,
)

Q = rational_abs()
Q7 = rational_padic(7)
CATALOG = ["q-mult", "matrix-vec:3", "matrix-left:3", "octonion-left"]
TEXT = {
    1: "axiom conformance of shipped instances (1000 samples)",
    2: "operation-norm soundness (1000 tuples)",
    3: "difference-bound soundness and inverse re-check",
    4: "exact-real oracle agreement",
    5: "p-adic oracle agreement",
    6: "completion laws and embedding",
    7: "equivalence-relation behavior",
    8: "limit arithmetic on 50 convergent pairs",
    9: "representation laws",
    10: "uniform convergence on a 4-point set",
    11: "CLI determinism",
}


@pytest.fixture
def criterion(record_property):
    def tag(n):
        record_property("criterion", (n, TEXT[n]))

    return tag


def groups():
    return [parse_instance_spec(s) for s in SHIPPED]


# 1 -----------------------------------------------------------------------


@pytest.mark.parametrize("spec", SHIPPED)
def test_axiom_conformance(criterion, spec):
    criterion(1)
    g = parse_instance_spec(spec)
    reports = [check_group_axioms(g, 1000), check_norm_axioms(g, 1000), check_reverse_triangle(g, 1000)]
    reports += [check_polyadditivity(g, op, 1000) for op in g.ops]
    failures = [f.name for r in reports for f in r.failures]
    assert failures == []


# 2 -----------------------------------------------------------------------


@pytest.mark.parametrize("spec", SHIPPED)
def test_operation_norm_soundness(criterion, spec):
    criterion(2)
    g = parse_instance_spec(spec)
    assert g.ops
    for op in g.ops:
        assert check_op_norm(g, op, 1000).passed
        assert op_norm_estimate(g, op, 1000) <= op.norm_bound


# 3 -----------------------------------------------------------------------


def test_op_difference_bound(criterion):
    criterion(3)
    for g in groups():
        rng = random.Random(g.name)
        for op in g.ops:
            for _ in range(500):
                a = [g.sampler(rng) for _ in range(op.arity)]
                d = [g.sampler(rng) for _ in range(op.arity)]
                c = [g.add(x, y) for x, y in zip(a, d)]
                caps = [max(g.norm(x), g.norm(y)) for x, y in zip(a, c)]
                radii = [g.norm(y) for y in d]
                assert g.distance(op(*c), op(*a)) <= bound_op_difference(op, caps, radii)


def test_rep_difference_bound(criterion):
    criterion(3)
    for spec in CATALOG:
        f = parse_representation_spec(spec)
        src, tgt = f.source, f.target
        rng = random.Random(spec)
        for _ in range(500):
            a1, a2 = src.sampler(rng), tgt.sampler(rng)
            c1, c2 = src.add(a1, src.sampler(rng)), tgt.add(a2, tgt.sampler(rng))
            bound = bound_rep_difference(
                f,
                max(src.norm(a1), src.norm(c1)),
                src.distance(c1, a1),
                max(tgt.norm(a2), tgt.norm(c2)),
                tgt.distance(c2, a2),
            )
            assert tgt.distance(f(c1, c2), f(a1, a2)) <= bound


def test_invert_epsilon_recheck(criterion):
    criterion(3)
    rng = random.Random(3)
    ops = [op for g in groups() for op in g.ops]
    reps = [parse_representation_spec(s) for s in CATALOG]
    for _ in range(100):
        op = rng.choice(ops)
        eps = Fraction(rng.randint(1, 1000), 1000) * two_pow(rng.randint(0, 40))
        caps = [Fraction(rng.randint(0, 10**6), rng.randint(1, 1000)) for _ in range(op.arity)]
        delta = invert_epsilon_bound(op, caps, eps)
        assert 0 < delta <= 1
        assert bound_op_difference(op, [c + delta for c in caps], [delta] * op.arity) <= eps

        f = rng.choice(reps)
        delta = linearized_inverse(f.norm_bound, caps[:1] * 2, eps)
        assert bound_rep_difference(f, caps[0] + delta, delta, caps[0] + delta, delta) <= eps


# 4 -----------------------------------------------------------------------


def test_exact_real_oracle(criterion):
    criterion(4)
    lo, hi = bisect_sqrt(2, 64)
    x = approx(evaluate_text("sqrt:2", Q), 30)
    assert lo - two_pow(30) <= x <= hi + two_pow(30)
    sq = approx(evaluate_text("mul(sqrt:2, sqrt:2)", Q), 20)
    assert abs(sq - 2) <= two_pow(18)


# 5 -----------------------------------------------------------------------


def test_padic_oracle(criterion):
    criterion(5)
    x = evaluate_text("padic-sqrt:2@7", Q7)
    oracle = hensel_lift_digits(2, 7, 10)
    a = approx(x, 28)
    assert a.numerator % 7**10 == oracle
    expected = []
    n = oracle
    for _ in range(10):
        n, d = divmod(n, 7)
        expected.append(str(d))
    assert padic_digits(a, 7, 28) == " ".join(expected)
    square = approx(evaluate_text("mul(padic-sqrt:2@7, padic-sqrt:2@7)", Q7), 28)
    assert Q7.distance(square, 2) <= Fraction(1, 7**10)


# 6 -----------------------------------------------------------------------


def test_representative_independence(criterion):
    criterion(6)
    k = 20
    bab = CompletedElement(babylonian_sqrt(2)), CompletedElement(babylonian_sqrt(3))
    bis = CompletedElement(bisection_sqrt(2)), CompletedElement(bisection_sqrt(3))
    mul = Q.op("mul")
    g = complete_representation(parse_representation_spec("q-mult"))
    for build in (
        lambda x, y: comp_add(x, y),
        lambda x, y: comp_apply_op(mul, [x, y]),
        lambda x, y: g(x, y),
    ):
        assert equivalent_upto(build(*bab).rep, build(*bis).rep, k)
    for x, y in zip(bab, bis):
        assert abs(norm_approx(x, k) - norm_approx(y, k)) <= two_pow(k - 1)


@pytest.mark.parametrize("spec", SHIPPED)
def test_embed_homomorphism(criterion, spec):
    criterion(6)
    g = parse_instance_spec(spec)
    rng = random.Random(6)
    for _ in range(500):
        a, b = g.sampler(rng), g.sampler(rng)
        ea, eb = embed(g, a), embed(g, b)
        assert g.eq(approx(comp_add(ea, eb), 12), g.add(a, b))
        assert norm_approx(ea, 12) == g.norm(a)
        for op in g.ops:
            args = [a, b, a][: op.arity]
            lifted = comp_apply_op(op, [embed(g, v) for v in args])
            assert g.eq(approx(lifted, 12), op(*args))


# 7 -----------------------------------------------------------------------


def _representatives(q):
    """Four equivalent Cauchy sequences converging to sqrt(q)."""
    b = babylonian_sqrt(q)
    null = CauchySequence(Q, lambda n: two_pow(n), lambda k: k)
    return [
        b,
        bisection_sqrt(q),
        seq_add(b, null),
        CauchySequence(Q, lambda n: b[n + 3], b.modulus),
    ]


def test_equivalence_relation(criterion):
    criterion(7)
    # limits sqrt(2) * {1, 2, 3, 4} are more than 1 apart
    families = [_representatives(q) for q in (2, 8, 18, 32)]
    rng = random.Random(7)
    pairs = []
    for i in range(100):
        fs, ft = rng.choice(families), rng.choice(families)
        pairs.append((rng.choice(fs), rng.choice(fs if i % 2 else ft)))
    for s, t in pairs:
        for k in range(21):
            assert equivalent_upto(s, s, k)
            assert equivalent_upto(s, t, k) == equivalent_upto(t, s, k)
    checked = 0
    for s, t in pairs:
        family = next(f for f in families if t in f)
        u = rng.choice(family) if rng.random() < 0.5 else rng.choice(rng.choice(families))
        for k in range(20):
            if equivalent_upto(s, t, k + 1) and equivalent_upto(t, u, k + 1):
                checked += 1
                assert equivalent_upto(s, u, k)
    assert checked >= 500


# 8 -----------------------------------------------------------------------


def _convergent(rng, group):
    """A Cauchy sequence with an independently known rational approximation of its limit."""
    kind = rng.randrange(3)
    if group is Q:
        if kind == 0:
            q = Fraction(rng.randint(1, 200), rng.randint(1, 20))
            return babylonian_sqrt(q), bisect_sqrt(q, 80)[0]
        if kind == 1:
            r = Fraction(rng.randint(-9, 9), 10)
            return geometric_series(Q, r), 1 / (1 - r)
        c = Fraction(rng.randint(-50, 50), rng.randint(1, 9))
        return constant(Q, c), c
    if kind == 0:
        q = rng.choice([1, 2, 4, 8, 9, 11, 15, 16, 18, 22, 23, 25, 29, 30])
        return hensel_sqrt(q, 7), Fraction(hensel_lift_digits(q, 7, 30))
    if kind == 1:
        r = 7 * Fraction(rng.randint(-20, 20), rng.choice([1, 2, 3, 5]))
        return geometric_series(Q7, r), 1 / (1 - r)
    c = Fraction(rng.randint(-500, 500), rng.randint(1, 9))
    return constant(Q7, c), c


def test_limit_arithmetic(criterion):
    criterion(8)
    k = 15
    rng = random.Random(8)
    for i in range(50):
        group = Q if i % 2 == 0 else Q7
        (s, a), (t, b) = _convergent(rng, group), _convergent(rng, group)
        total, product = seq_add(s, t), seq_apply_op(group.op("mul"), [s, t])
        assert check_limit(total, a + b, k)
        assert check_limit(product, a * b, k)
        assert not check_limit(total, a + b + two_pow(k - 2), k)


# 9 -----------------------------------------------------------------------


@pytest.mark.parametrize("spec", CATALOG)
def test_representation_norm(criterion, spec):
    criterion(9)
    f = parse_representation_spec(spec)
    rng = random.Random(9)
    for _ in range(1000):
        a, b = f.source.sampler(rng), f.target.sampler(rng)
        assert f.target.norm(f(a, b)) <= f.norm_bound * f.source.norm(a) * f.target.norm(b)
    assert rep_norm_estimate(f, 1000) <= f.norm_bound
    assert check_representation_laws(f, 200).passed


@pytest.mark.parametrize("spec", CATALOG)
def test_restriction_law(criterion, spec):
    criterion(9)
    f = parse_representation_spec(spec)
    g = complete_representation(f)
    rng = random.Random(10)
    for _ in range(200):
        a, b = f.source.sampler(rng), f.target.sampler(rng)
        # constant sequences carry no exact value, so the full modulus path is exercised
        x = CompletedElement(constant(f.source, a))
        y = CompletedElement(constant(f.target, b))
        out = g(x, y)
        assert equivalent_upto(out.rep, embed(f.target, f(a, b)).rep, 20)
        assert f.target.distance(approx(out, 20), f(a, b)) <= two_pow(20)


def test_ring_products_distribute(criterion):
    criterion(9)
    self_rep = Representation(Q, Q, lambda a, b: a * b, 1)
    for f in (self_rep, parse_representation_spec("matrix-left:3"), parse_representation_spec("octonion-left")):
        mul = omega_ring_product(f)
        report = check_polyadditivity(f.source, mul, 1000, seed=9)
        assert report.passed, report.failures


def test_octonion_nonassociativity_witness(criterion):
    criterion(9)
    o = octonions()
    mul = omega_ring_product(parse_representation_spec("octonion-left"))
    assert check_polyadditivity(o, mul, 1000, seed=11).passed
    rng = random.Random(12)
    witness = None
    for _ in range(100):
        a, b, c = o.sampler(rng), o.sampler(rng), o.sampler(rng)
        left, right = mul(mul(a, b), c), mul(a, mul(b, c))
        if left != right:
            witness = (a, b, c)
            assert left == cayley_dickson(cayley_dickson(a, b), c)
            assert right == cayley_dickson(a, cayley_dickson(b, c))
            break
    assert witness is not None


# 10 ----------------------------------------------------------------------


def test_uniform_convergence(criterion):
    criterion(10)
    group = parse_instance_spec("map:4:q-abs")
    points = ["x0", "x1", "x2", "x3"]
    harmonic = CauchySequence(Q, lambda n: Fraction(1, n + 1), lambda k: 1 << (k + 1))

    def family(*qs):
        comps, limit = {}, {}
        for x, q in zip(points, qs):
            comps[x] = babylonian_sqrt(q) if q else harmonic
            limit[x] = bisect_sqrt(q, 80)[0] if q else Fraction(0)
        return pointwise_sequence(group, comps), limit

    F, lf = family(2, 0, 5, Fraction(1, 3))
    G, lg = family(0, 3, 7, 11)
    H, lh = family(13, 2, 0, 3)
    k_max = 12

    total = seq_add(F, G)
    assert uniform_convergence_check(total, {x: lf[x] + lg[x] for x in points}, k_max).passed

    triple = seq_apply_op(group.op("triple"), [F, G, H])
    assert uniform_convergence_check(triple, {x: lf[x] * lg[x] * lh[x] for x in points}, k_max).passed

    fx = induced_map_representation(parse_representation_spec("q-mult"), points)
    composite = rep_seq(fx, F, G)
    assert uniform_convergence_check(composite, {x: lf[x] * lg[x] for x in points}, k_max).passed


# 11 ----------------------------------------------------------------------


@pytest.mark.parametrize("spec", SHIPPED)
def test_cli_determinism(criterion, spec):
    criterion(11)
    argv = ["verify", spec, "--json", "--samples", "200", "--seed", "5"]
    outputs = []
    for _ in range(2):
        buf = io.StringIO()
        assert main(argv, buf) == 0
        outputs.append(buf.getvalue().encode("utf-8"))
    assert outputs[0] == outputs[1]


def test_cli_determinism_across_processes(criterion):
    criterion(11)
    cmd = [sys.executable, "-m", "omegagroup", "verify", "q-padic:7", "--json", "--samples", "300", "--seed", "1"]
    first, second = (subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2))
    assert first == second and first


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
