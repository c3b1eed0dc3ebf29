"""``omega`` command line: verify instances, approximate expressions, run representation demos.

Exit status is 0 on success, 1 when a property check fails and 2 for usage
or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .completion import approx, embed, is_within
from .constructions import padic_precision
from .core import (
    CheckResult,
    NoValidSample,
    Report,
    check_group_axioms,
    check_norm_axioms,
    check_op_norm,
    check_polyadditivity,
    check_reverse_triangle,
    op_norm_estimate,
)
from .expressions import evaluate_text
from .instances import parse_instance_spec, valuation
from .representation import complete_representation, parse_representation_spec
from .sequences import two_pow

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def verify_report(spec: str, samples: int, seed: int) -> Report:
    """Run every axiom suite on the instance named by ``spec``."""
    group = parse_instance_spec(spec)
    report = Report(group.name)
    report.extend(check_group_axioms(group, samples, seed))
    report.extend(check_norm_axioms(group, samples, seed))
    for op in group.ops:
        report.extend(check_polyadditivity(group, op, samples, seed))
    for op in group.ops:
        report.extend(check_op_norm(group, op, samples, seed))
        name = "op_norm_estimate.%s" % op.symbol
        try:
            estimate = op_norm_estimate(group, op, samples, seed)
        except NoValidSample as exc:
            report.results.append(CheckResult(name, False, samples, seed, {"error": str(exc)}))
            continue
        witness = None
        if estimate > op.norm_bound:
            witness = {"estimate": str(estimate), "declared": str(op.norm_bound)}
        report.results.append(CheckResult(name, witness is None, samples, seed, witness))
    report.extend(check_reverse_triangle(group, samples, seed))
    return report


def verify_json(report: Report, elapsed_ms=None) -> str:
    payload = {
        "instance": report.title,
        "suites": [r.as_dict() for r in report.results],
        "elapsed_ms": elapsed_ms,
    }
    return json.dumps(payload, indent=2, ensure_ascii=False)


def cmd_verify(args, out) -> int:
    start = time.perf_counter()
    try:
        report = verify_report(args.spec, args.samples, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    elapsed = round((time.perf_counter() - start) * 1000, 1) if args.timing else None
    if args.json:
        out.write(verify_json(report, elapsed) + "\n")
    else:
        out.write("instance %s\n" % report.title)
        for r in report.results:
            line = "%s %s (samples=%d, seed=%d)" % (
                "PASS" if r.passed else "FAIL", r.name, r.samples, r.seed
            )
            if r.counterexample:
                line += " counterexample: " + json.dumps(r.counterexample, ensure_ascii=False)
            out.write(line + "\n")
        summary = "all %d checks passed" % len(report.results)
        if not report.passed:
            summary = "%d of %d checks failed" % (len(report.failures), len(report.results))
        out.write(summary + "\n")
        if elapsed is not None:
            out.write("elapsed %s ms\n" % elapsed)
    return EXIT_OK if report.passed else EXIT_FAILED


def format_decimal(q: Fraction, k: int) -> str:
    """``q`` rounded to enough decimal places to resolve ``2**-k``."""
    places = 1
    while Fraction(1, 10**places) > two_pow(k + 1):
        places += 1
    scaled = round(abs(q) * 10**places)
    digits = str(scaled).rjust(places + 1, "0")
    sign = "-" if q < 0 and scaled else ""
    return "%s%s.%s" % (sign, digits[:-places], digits[-places:])


def _map_scalars(value, fn):
    if isinstance(value, Fraction) or isinstance(value, int):
        return fn(Fraction(value))
    if isinstance(value, dict):
        return "{" + ", ".join("%s: %s" % (x, _map_scalars(v, fn)) for x, v in value.items()) + "}"
    return "[" + ", ".join(_map_scalars(v, fn) for v in value) + "]"


def padic_digits(q: Fraction, p: int, k: int) -> str:
    """Base-``p`` digits of ``q`` (units digit first) determined to precision ``2**-k``.

    Digits below the point, if any, precede a ``.``.
    """
    m = padic_precision(p, k)
    q = Fraction(q)
    v = valuation(q, p) if q else 0
    shift = min(v, 0)
    unit = q * Fraction(p) ** (-shift)
    count = m - shift
    if count <= 0:
        return "(no digits determined)"
    mod = p**count
    n = unit.numerator * pow(unit.denominator, -1, mod) % mod
    digits = []
    for _ in range(count):
        n, d = divmod(n, p)
        digits.append(str(d))
    if shift < 0:
        digits.insert(-shift, ".")
    return " ".join(digits)


def render(group, value, fmt: str, k: int) -> str:
    if fmt == "rational":
        return group.format(value)
    if fmt == "decimal":
        return _map_scalars(value, lambda q: format_decimal(q, k))
    if fmt == "padic-digits":
        if not group.name.startswith("q-padic:"):
            raise UsageError("padic-digits output needs a q-padic instance, not %s" % group.name)
        return padic_digits(value, int(group.name.split(":")[1]), k)
    raise UsageError("unknown format %r" % fmt)


def cmd_approx(args, out) -> int:
    if args.prec < 0:
        raise UsageError("--prec must be nonnegative")
    try:
        group = parse_instance_spec(args.spec)
        x = evaluate_text(args.expression, group)
        value = approx(x, args.prec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write("%s\n" % render(group, value, args.format, args.prec))
    if args.format == "decimal":
        out.write("error bound: 2^-%d plus half a unit in the last place\n" % args.prec)
    else:
        out.write("error bound: 2^-%d\n" % args.prec)
    return EXIT_OK


def cmd_rep(args, out) -> int:
    if args.prec < 0:
        raise UsageError("--prec must be nonnegative")
    try:
        f = parse_representation_spec(args.rep)
        g = complete_representation(f)
        x = evaluate_text(args.arg1, f.source)
        y = evaluate_text(args.arg2, f.target)
        value = approx(g(x, y), args.prec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    k = args.prec
    a1, a2 = approx(x, k + 2), approx(y, k + 2)
    restricted = g(embed(f.source, a1), embed(f.target, a2))
    verdict = is_within(restricted, embed(f.target, f(a1, a2)), two_pow(k), k + 2)
    out.write("%s\n" % f.target.format(value))
    out.write("error bound: 2^-%d\n" % k)
    out.write("restriction law: %s\n" % verdict.verdict)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omega", description="Normed Omega-groups, completions and representations."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the axiom suites on an instance")
    p.add_argument("spec", help="q-abs, q-padic:<p>, matrix:<n>, octonion, map:<n>:<inner>")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--timing", action="store_true", help="report wall-clock time")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("approx", help="approximate an expression in the completion")
    p.add_argument("spec")
    p.add_argument("expression")
    p.add_argument("--prec", type=int, required=True, help="precision k; error <= 2^-k")
    p.add_argument(
        "--format", choices=("rational", "decimal", "padic-digits"), default="rational"
    )
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("rep", help="evaluate a completed representation g(x)(y)")
    p.add_argument("rep", help="q-mult, matrix-vec:<n>, matrix-left:<n>, octonion-left")
    p.add_argument("arg1")
    p.add_argument("arg2")
    p.add_argument("--prec", type=int, required=True)
    p.set_defaults(func=cmd_rep)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "samples", 1) < 1:
        print("omega: error: --samples must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print("omega: error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
