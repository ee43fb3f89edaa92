"""Command-line front end: scans, scaling runs, and verification.

Subcommands:

* ``phase-diagram`` - thermodynamic-limit scan over a (gamma, h) grid.
* ``finite-gap``    - finite-size gaps; exact rationals on the h = 0 line,
  eigensolver values elsewhere, with a cross-check column when both apply.
* ``scaling``       - certified scaling report for an engineered sequence.
* ``verify``        - cross-oracle suites; nonzero exit on any failure.

Exit codes: 0 success, 1 verification/runtime failure, 2 usage error,
3 bit-budget exhaustion.  Identical invocations produce byte-identical
output files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Optional, Sequence

from . import classical, gaplaw, scaling, sector, verify
from .classical import FieldPoint
from .errors import BitBudgetError, XYGapError
from .exactnum import TruncatedSeries, decimal_str, format_rational, gamma_value
from .sequences import DEFAULT_BIT_BUDGET, HARD_BIT_CAP, SequenceKind

BUDGET_ENV_VAR = "XYGAP_BIT_BUDGET"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(ValueError):
    pass


def parse_grid(text: str) -> list[float]:
    """Inclusive grid "lo:hi:count"; count 1 degenerates to [lo]."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must look like lo:hi:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from None
    if count < 1:
        raise UsageError(f"grid count must be >= 1, got {count}")
    if count == 1:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count - 1)] + [hi]


def parse_sizes(text: str) -> list[int]:
    """Size list: "2:64:even", "3:99:odd", "1:50:all", or "16,64,256"."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3 or parts[2] not in ("even", "odd", "all"):
            raise UsageError(
                f"size range must look like start:stop:even|odd|all, got {text!r}"
            )
        try:
            start, stop = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise UsageError(f"bad size range {text!r}: {exc}") from None
        if start < 1 or stop < start:
            raise UsageError(f"need 1 <= start <= stop in {text!r}")
        sizes = range(start, stop + 1)
        if parts[2] == "even":
            return [n for n in sizes if n % 2 == 0]
        if parts[2] == "odd":
            return [n for n in sizes if n % 2 == 1]
        return list(sizes)
    try:
        out = [int(tok) for tok in text.split(",") if tok]
    except ValueError as exc:
        raise UsageError(f"bad size list {text!r}: {exc}") from None
    if not out or any(n < 1 for n in out):
        raise UsageError(f"sizes must be positive integers, got {text!r}")
    return out


def parse_gamma(text: str) -> Fraction:
    """Exact field value from "p/q" or a decimal literal like "0.25"."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad field value {text!r}: {exc}") from None


_SEQ_KINDS = {kind.value: kind for kind in SequenceKind}


def _resolve_budget(args) -> int:
    budget = args.bit_budget
    if budget is None:
        env = os.environ.get(BUDGET_ENV_VAR)
        budget = int(env) if env else DEFAULT_BIT_BUDGET
    if not 64 <= budget <= HARD_BIT_CAP:
        raise UsageError(f"bit budget must lie in [64, {HARD_BIT_CAP}], got {budget}")
    return budget


def _write_text(path: Optional[str], text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")


def cmd_phase_diagram(args) -> int:
    gammas = parse_grid(args.gamma)
    hs = parse_grid(args.h)
    if any(g < 0 for g in gammas):
        raise UsageError("transverse field grid must be nonnegative")
    points = [FieldPoint(gamma=g, h=h) for g in gammas for h in hs]
    if args.jobs > 1:
        # map preserves input order, so the output stays deterministic
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(classical.phase_record, points))
    else:
        records = [classical.phase_record(p) for p in points]
    if args.format == "json":
        _write_text(args.output, classical.scan_json(records))
    else:
        _write_text(args.output, "\n".join(classical.scan_csv_lines(records)))
    return EXIT_OK


FINITE_GAP_EXACT_HEADER = "N,gamma,delta,branch,gap,gap_decimal,gap_numeric"
FINITE_GAP_NUMERIC_HEADER = "N,gamma,h,gap_numeric"


def _finite_gap_field(args, budget: int) -> Fraction:
    if args.gamma_series is not None:
        spec = TruncatedSeries(_SEQ_KINDS[args.gamma_series], args.terms)
        return gamma_value(spec, budget)
    if args.gamma is None:
        raise UsageError("one of --gamma or --gamma-series is required")
    return parse_gamma(args.gamma)


def cmd_finite_gap(args, budget: int) -> int:
    sizes = parse_sizes(args.N)
    gamma = _finite_gap_field(args, budget)
    if args.h == 0.0:
        if not 0 <= gamma < 1:
            raise UsageError(f"the exact h=0 route needs 0 <= gamma < 1, got {gamma}")
        lines = [FINITE_GAP_EXACT_HEADER]
        for size in sizes:
            rec = gaplaw.gap_record(size, gamma)
            numeric = ""
            if size <= args.cross_max:
                numeric = format(
                    sector.finite_gap_numeric(size, FieldPoint(float(gamma), 0.0)), ".17g"
                )
            if rec.branch == gaplaw.BRANCH_DEGENERATE:
                lines.append(
                    f"{size},{format_rational(gamma)},{format_rational(rec.delta.value)},"
                    f"{rec.branch},,,{numeric}"
                )
            else:
                lines.append(
                    f"{size},{format_rational(gamma)},{format_rational(rec.delta.value)},"
                    f"{rec.branch},{format_rational(rec.gap)},{decimal_str(rec.gap, 17)},{numeric}"
                )
        _write_text(args.output, "\n".join(lines))
        return EXIT_OK
    lines = [FINITE_GAP_NUMERIC_HEADER]
    for size in sizes:
        gap = sector.finite_gap_numeric(size, FieldPoint(float(gamma), args.h))
        lines.append(
            f"{size},{format_rational(gamma)},{format(args.h, '.17g')},{format(gap, '.17g')}"
        )
    _write_text(args.output, "\n".join(lines))
    return EXIT_OK


def cmd_scaling(args, budget: int) -> int:
    kind = _SEQ_KINDS[args.seq]
    k_default = 5 if kind is SequenceKind.DOUBLE_EXP else 4
    k_trunc = args.terms if args.terms is not None else k_default
    seq = scaling.SizeSequence(kind=kind, rule=args.rule)
    spec = TruncatedSeries(kind, k_trunc)
    report = scaling.build_scaling_report(seq, spec, budget)
    _write_text(args.output, scaling.report_to_json(report))
    if args.csv is not None:
        _write_text(args.csv, "\n".join(scaling.report_csv_lines(report)))
    return EXIT_OK


def cmd_verify(args, budget: int) -> int:
    results = verify.run_all(max_size=args.max_N, seed=args.seed, bit_budget=budget)
    for res in results:
        print(f"{'PASS' if res.passed else 'FAIL'} {res.name}: {res.detail}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    return EXIT_OK if not failed else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xygap",
        description="Gap behavior of the infinite-range XY model in transverse "
        "and longitudinal fields",
    )
    parser.add_argument(
        "--bit-budget", type=int, default=None,
        help=f"max bits for exact integers (default {DEFAULT_BIT_BUDGET}, "
        f"or ${BUDGET_ENV_VAR})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phase-diagram", help="thermodynamic-limit scan on a (gamma, h) grid")
    p.add_argument("--gamma", required=True, help="grid lo:hi:count, e.g. 0:2:81")
    p.add_argument("--h", required=True, help="grid lo:hi:count, e.g. -1:1:81")
    p.add_argument("-o", "--output", default=None, help="output path ('-' = stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for the scan")

    p = sub.add_parser("finite-gap", help="finite-size gaps at fixed field values")
    p.add_argument("--gamma", default=None, help='exact value, e.g. "1/3" or "0.25"')
    p.add_argument(
        "--gamma-series", choices=sorted(_SEQ_KINDS), default=None,
        help="use the truncated series over this sequence instead of --gamma",
    )
    p.add_argument("--terms", type=int, default=5, help="series truncation for --gamma-series")
    p.add_argument("--h", type=float, default=0.0, help="longitudinal field (default 0)")
    p.add_argument("--N", required=True, help='sizes: "2:64:even" or "16,64,256"')
    p.add_argument(
        "--cross-max", type=int, default=64,
        help="largest N given an eigensolver cross-check column at h=0",
    )
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("scaling", help="certified scaling report for an engineered sequence")
    p.add_argument("--seq", choices=sorted(_SEQ_KINDS), required=True)
    p.add_argument("--rule", choices=(scaling.RULE_PLAIN, scaling.RULE_DOUBLED),
                   default=scaling.RULE_PLAIN)
    p.add_argument("--terms", "--K", dest="terms", type=int, default=None,
                   help="series truncation (default: largest in budget)")
    p.add_argument("-o", "--output", default=None, help="JSON report path")
    p.add_argument("--csv", default=None, help="also write the CSV summary here")

    p = sub.add_parser("verify", help="run the cross-oracle suites")
    p.add_argument("--max-N", type=int, default=64, help="largest size for the numeric oracle")
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)

    return parser


def _mend_argv(argv: Sequence[str]) -> list[str]:
    """Let '--h -1:1:81' work: merge values that look like negative grids."""
    out = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (
            tok in ("--h", "--gamma")
            and nxt is not None
            and nxt.startswith("-")
            and ":" in nxt
        ):
            out.append(f"{tok}={nxt}")
            skip = True
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(_mend_argv(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        budget = _resolve_budget(args)
        if args.command == "phase-diagram":
            return cmd_phase_diagram(args)
        if args.command == "finite-gap":
            return cmd_finite_gap(args, budget)
        if args.command == "scaling":
            return cmd_scaling(args, budget)
        return cmd_verify(args, budget)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BitBudgetError as exc:
        print(f"bit budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (XYGapError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
