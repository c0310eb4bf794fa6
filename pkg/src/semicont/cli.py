"""Command-line front end.

    semicont classify  SPEC --at X [X ...]
    semicont envelope  SPEC (--grid N | --at X [X ...])
    semicont analyze   SPEC
    semicont integrate SPEC --tol P/Q --max-depth K
    semicont compare   SPEC --tol P/Q --max-depth K

Common flags: ``--csv PATH``, ``--quiet``, ``--jobs N``.  Exit status is 0 on
success, 1 for usage, parse and semantic errors, 2 when an internal
invariant check fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

from .core_numeric import ArgumentError, Enclosure, format_rational, parse_rational
from .envelopes import Property, classify_point, envelope_table, exceptional_points
from .function_model import DomainError, FunctionModel
from .measure_integration import (
    Verdict,
    compare_report,
    darboux_integrals,
    lebesgue_integral,
    measurability_report,
)
from .specfile import SpecError, parse_spec


class UsageError(Exception):
    pass


class InvariantError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage().strip()}\n{self.prog}: error: {message}")


def fmt(q: Fraction) -> str:
    """Exact ``p/q`` followed by a 12-significant-digit decimal annotation."""
    if q.denominator == 1:
        return str(q.numerator)
    with localcontext() as ctx:
        ctx.prec = 40
        d = Decimal(q.numerator) / Decimal(q.denominator)
    return f"{format_rational(q)} (~{d:.12g})"


def fmt_enc(e: Enclosure) -> str:
    if e.lo == e.hi:
        return fmt(e.lo)
    return f"[{fmt(e.lo)}, {fmt(e.hi)}] width {fmt(e.width)}"


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _opt(q: Optional[Fraction]) -> str:
    return "" if q is None else format_rational(q)


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ArgumentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    if not text.isdigit() or int(text) < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(text)


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--csv", metavar="PATH", help="also write machine-readable CSV here")
    common.add_argument("--quiet", action="store_true", help="suppress the text report")
    common.add_argument("--jobs", type=_positive_int, default=1, help="worker threads for tabulation")

    parser = _Parser(prog="semicont", description="Envelopes, semicontinuity and integrals "
                     "of piecewise polynomials with countable modifications.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("classify", parents=[common], help="pointwise continuity profile")
    p.add_argument("spec")
    p.add_argument("--at", nargs="+", type=_rational_arg, required=True, metavar="X")

    p = sub.add_parser("envelope", parents=[common], help="envelope table")
    p.add_argument("spec")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--grid", type=_positive_int, metavar="N", help="N+1 equally spaced points")
    g.add_argument("--at", nargs="+", type=_rational_arg, metavar="X")

    p = sub.add_parser("analyze", parents=[common], help="exceptional points and measurability")
    p.add_argument("spec")

    for name, text in (("integrate", "Darboux and Lebesgue integrals"),
                       ("compare", "Riemann versus Lebesgue verdict")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("spec")
        p.add_argument("--tol", type=_rational_arg, default=Fraction(1, 10**6))
        p.add_argument("--max-depth", type=_positive_int, default=20)
    return parser


# ---------------------------------------------------------------------------
# subcommands: each returns (text lines, csv rows)


def _cmd_classify(f: FunctionModel, args):
    lines, rows = [], [("x", "usc", "lsc", "left", "right", "cont")]
    for x in args.at:
        pc = classify_point(f, x)
        if pc.is_cont and not (pc.is_usc and pc.is_lsc):
            raise InvariantError(f"classification incoherent at {x}")
        lines.append(f"x={format_rational(x)}: usc={_yn(pc.is_usc)} lsc={_yn(pc.is_lsc)} "
                     f"left={_yn(pc.is_left_cont)} right={_yn(pc.is_right_cont)} cont={_yn(pc.is_cont)}")
        rows.append((format_rational(x), _yn(pc.is_usc), _yn(pc.is_lsc), _yn(pc.is_left_cont),
                     _yn(pc.is_right_cont), _yn(pc.is_cont)))
    return lines, rows


def _cmd_envelope(f: FunctionModel, args):
    if args.grid is not None:
        a, b, n = f.domain_lo, f.domain_hi, args.grid
        xs = [a + (b - a) * Fraction(j, n) for j in range(n + 1)]
    else:
        xs = args.at
    table = envelope_table(f, xs, workers=args.jobs)
    rows = [("x", "f", "fstar", "flstar", "fstar_left", "finf_left", "fstar_right", "finf_right", "osc")]
    lines = []
    for x, env in table:
        if not env.two_sided_inf <= env.value <= env.two_sided_sup:
            raise InvariantError(f"sandwich violated at {x}")
        rows.append((format_rational(x), format_rational(env.value), format_rational(env.two_sided_sup),
                     format_rational(env.two_sided_inf), _opt(env.left_sup), _opt(env.left_inf),
                     _opt(env.right_sup), _opt(env.right_inf), format_rational(env.oscillation)))
        side = lambda s, i: "undefined" if s is None else f"({fmt(s)}, {fmt(i)})"
        lines.append(f"x={fmt(x)}: f={fmt(env.value)} f*={fmt(env.two_sided_sup)} "
                     f"f_*={fmt(env.two_sided_inf)} left={side(env.left_sup, env.left_inf)} "
                     f"right={side(env.right_sup, env.right_inf)} osc={fmt(env.oscillation)}")
    return lines, rows


def _cmd_analyze(f: FunctionModel, args):
    lines = ["exceptional points:"]
    rows = [("property", "kind", "value")]
    for prop in Property:
        rep = exceptional_points(f, prop)
        pts = ", ".join(fmt(x) for x in rep.points) or "none"
        lines.append(f"  {prop.value}: {pts}")
        rows.extend((prop.value, "point", format_rational(x)) for x in rep.points)
        if rep.dense is not None:
            d = rep.dense
            regions = lambda lss: " U ".join(str(ls.base_set) for ls in lss if ls.base_set) or "{}"
            lines.append(f"    dense({d.tag.value}) failures: modified points in {regions(d.modified_region)}; "
                         f"other points in {regions(d.unmodified_region)}")
            if d.tagged_points:
                lines.append("    modified breakpoints failing: " + ", ".join(fmt(x) for x in d.tagged_points))
            rows.append((prop.value, "dense", d.tag.value))
            rows.extend((prop.value, "dense-point", format_rational(x)) for x in d.tagged_points)
    cert = measurability_report(f)
    if cert.exception_kind == "dense":
        exc = f"dense({cert.exception_tag.value}), countable"
    elif cert.exception_kind == "finite":
        exc = f"{cert.exception_cardinality} points"
    else:
        exc = "empty"
    lines += [
        "measurability certificate:",
        f"  pieces: {cert.n_pieces}, breakpoints: {cert.n_breakpoints}",
        "  base piecewise function: Borel (continuous pieces glued at finitely many points)",
        f"  exception set: {exc}",
        f"  conclusion: {'measurable' if cert.measurable else 'NOT certified'}",
    ]
    for s in cert.spot_checks:
        lines.append(f"  level set {{f {s.relation.value} {fmt(s.c)}}}: measure {fmt_enc(s.measure)}, "
                     f"shape {'ok' if s.shape_ok else 'BAD'}, "
                     f"{'matches' if s.matches_base else 'DIFFERS FROM'} unmodified")
    if not cert.all_checks_pass:
        raise InvariantError("level-set spot check failed")
    rows.append(("measurable", "certificate", _yn(cert.measurable)))
    return lines, rows


def _cmd_integrate(f: FunctionModel, args):
    dr = darboux_integrals(f, args.tol, args.max_depth)
    leb = lebesgue_integral(f, args.tol, args.max_depth)
    if dr.lower_integral.lo > leb.hi or leb.lo > dr.upper_integral.hi:
        raise InvariantError("Lebesgue enclosure escapes the Darboux integrals")
    lines = [
        f"darboux depth: {dr.partition_depth}",
        f"lower integral: {fmt_enc(dr.lower_integral)}",
        f"upper integral: {fmt_enc(dr.upper_integral)}",
        f"gap: {fmt(dr.gap)}",
        f"lebesgue: {fmt_enc(leb)}",
    ]
    rows = [("quantity", "lo", "hi"),
            ("lower_integral", format_rational(dr.lower_integral.lo), format_rational(dr.lower_integral.hi)),
            ("upper_integral", format_rational(dr.upper_integral.lo), format_rational(dr.upper_integral.hi)),
            ("lebesgue", format_rational(leb.lo), format_rational(leb.hi))]
    return lines, rows


def _cmd_compare(f: FunctionModel, args):
    rep = compare_report(f, args.tol, args.max_depth)
    dr = rep.darboux
    if rep.riemann_integrable is Verdict.YES:
        head = f"riemann: integrable, value {fmt_enc(rep.riemann_value)}"
    elif rep.riemann_integrable is Verdict.NO:
        head = f"riemann: NOT integrable (gap={fmt(dr.certified_gap)})"
    else:
        head = f"riemann: undecided at tolerance (gap<={fmt(dr.gap)})"
    lines = [f"{head}, lebesgue: {fmt_enc(rep.lebesgue_value)}"]
    if rep.agree is not None:
        lines.append(f"agree: {_yn(rep.agree)}")
    lines.append(f"darboux depth: {dr.partition_depth}, lower {fmt_enc(dr.lower_integral)}, "
                 f"upper {fmt_enc(dr.upper_integral)}")
    rows = [("field", "lo", "hi"),
            ("verdict", rep.riemann_integrable.value, ""),
            ("lebesgue", format_rational(rep.lebesgue_value.lo), format_rational(rep.lebesgue_value.hi))]
    if rep.riemann_value is not None:
        rows.append(("riemann", format_rational(rep.riemann_value.lo), format_rational(rep.riemann_value.hi)))
    for eps, enc in rep.oscillation_evidence:
        lines.append(f"measure{{osc >= {fmt(eps)}}}: {fmt_enc(enc)}")
        rows.append((f"osc_measure_{format_rational(eps)}", format_rational(enc.lo), format_rational(enc.hi)))
    if rep.riemann_integrable is Verdict.YES and not all(0 in e for _, e in rep.oscillation_evidence):
        raise InvariantError("integrable verdict with a positive-measure oscillation set")
    return lines, rows


_COMMANDS = {
    "classify": _cmd_classify,
    "envelope": _cmd_envelope,
    "analyze": _cmd_analyze,
    "integrate": _cmd_integrate,
    "compare": _cmd_compare,
}


def run(argv, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = _build_parser().parse_args(list(argv))
    except UsageError as exc:
        print(exc, file=stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    try:
        with open(args.spec, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot read {args.spec}: {exc}", file=stderr)
        return 1
    try:
        f = parse_spec(text)
    except SpecError as exc:
        print(f"error: {args.spec}: {exc}", file=stderr)
        return 1
    try:
        lines, rows = _COMMANDS[args.command](f, args)
    except (DomainError, ArgumentError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except InvariantError as exc:
        print(f"internal invariant violated: {exc}", file=stderr)
        return 2
    if args.csv:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    if not args.quiet:
        stdout.write("\n".join(lines) + "\n")
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
