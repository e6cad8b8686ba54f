"""Command-line entry point: ``euclidmin <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from typing import Optional, Sequence

from . import intervals as ivl
from .errors import CheckFailed, EuclidMinError, InvalidInput
from .field import FieldDescriptor, IntPolynomial
from .report import (
    SCHEMA_VERSION,
    ReportOptions,
    a_equals_s_beats_bayer_fluckiger,
    blichfeldt_scan,
    field_report,
    field_report_to_markdown,
    hermite_consistency,
    hermite_summary,
    improvement_grid,
    reproduce_bound_table,
    table_to_csv,
    table_to_json,
    table_to_markdown,
    to_json,
)

VERIFY_FIELDS = ("x^2+1", "x^2-2", "x^2-x-1", "x^3-x-1", "x^4+1")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=ivl.DEFAULT_PREC)
    common.add_argument("--format", choices=("json", "csv", "markdown"), default="markdown")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--node-budget", type=int, default=10**8)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="euclidmin", description="Euclidean-minimum bounds and lattice checks.")
    sub = p.add_subparsers(dest="command", required=True)

    def field_args(sp, need_poly=False):
        sp.add_argument("--poly", help='defining polynomial, e.g. "x^3 - x - 1" or "[-1,-1,0,1]"')
        if not need_poly:
            sp.add_argument("--signature", nargs=2, type=int, metavar=("R", "S"))
        sp.add_argument("--disc", type=int, help="|discriminant| to use instead of the equation order's")

    sp = sub.add_parser("bound", parents=[common], help="all bounds for one field")
    field_args(sp)

    sp = sub.add_parser("table", parents=[common], help="bound table for small degrees")
    sp.add_argument("--n-max", type=int, default=5)

    sp = sub.add_parser("hermite", parents=[common], help="Hermite constant estimates")
    sp.add_argument("n", type=int, nargs="*", default=[1, 2, 3, 4, 5, 6, 7, 8, 24])

    sub.add_parser("scan", parents=[common], help="degrees where Blichfeldt's bound is below sqrt(n)")

    sp = sub.add_parser("lattice", parents=[common], help="full report including the embedding lattice")
    field_args(sp, need_poly=True)
    sp.add_argument("--coeff-box", type=int)
    sp.add_argument("--grid-bits", type=int)
    sp.add_argument("--target", action="append", default=[], help="ambient target, comma separated rationals")
    sp.add_argument("--random-targets", type=int, default=0)

    sp = sub.add_parser("verify", parents=[common], help="run every global claim and the sample fields")
    sp.add_argument("--poly", action="append", help="fields to check (default: a built-in sample)")
    return p


def _source(args) -> object:
    if args.poly:
        return IntPolynomial.parse(args.poly)
    sig = getattr(args, "signature", None)
    if sig:
        if args.disc is None:
            raise InvalidInput("--signature needs --disc")
        r, s = sig
        return FieldDescriptor(r + 2 * s, r, s, args.disc)
    raise InvalidInput("give --poly or --signature")


def _options(args) -> ReportOptions:
    return ReportOptions(
        precision_bits=args.precision_bits,
        seed=args.seed,
        node_budget=args.node_budget,
        coeff_box=getattr(args, "coeff_box", None),
        grid_bits=getattr(args, "grid_bits", None),
        targets=tuple(tuple(t.split(",")) for t in getattr(args, "target", [])),
        random_targets=getattr(args, "random_targets", 0),
    )


def _dicts_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _emit_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return _dicts_to_csv(report["bounds"])
    return field_report_to_markdown(report)


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.precision_bits < 53 or args.precision_bits > ivl.MAX_PREC:
        raise InvalidInput(f"--precision-bits must lie in [53, {ivl.MAX_PREC}]")
    fmt = args.format

    if args.command == "table":
        if args.n_max < 1:
            raise InvalidInput("--n-max must be at least 1")
        rows = reproduce_bound_table(args.n_max)
        render = {"json": table_to_json, "csv": table_to_csv, "markdown": table_to_markdown}[fmt]
        out.write(render(rows))
        return 0

    if args.command == "hermite":
        rows = [hermite_summary(n) for n in args.n]
        if fmt == "json":
            out.write(to_json({"schema_version": SCHEMA_VERSION, "rows": rows}))
        elif fmt == "csv":
            out.write(_dicts_to_csv(rows))
        else:
            out.write("| n | exact | Blichfeldt | Wen 1 | Wen 2 | best |\n|---|---|---|---|---|---|\n")
            for r in rows:
                out.write(f"| {r['n']} | {r['exact'] or '-'} | {r['blichfeldt']} | {r['wen1']} | {r['wen2']} | {r['best_provenance']} |\n")
        return 0

    if args.command == "scan":
        found = blichfeldt_scan()
        if fmt == "json":
            out.write(to_json({"schema_version": SCHEMA_VERSION, "dimensions": found}))
        elif fmt == "csv":
            out.write("n\n" + "".join(f"{n}\n" for n in found))
        else:
            out.write(f"Blichfeldt bound below sqrt(n) for n = {found[0]}..{found[-1]} ({len(found)} values)\n")
        return 0

    if args.command in ("bound", "lattice"):
        opts = _options(args)
        if args.command == "bound":
            opts.max_lattice_dim = 0
        report = field_report(_source(args), args.disc, opts)
        out.write(_emit_report(report, fmt))
        if not report["passed"]:
            raise CheckFailed("at least one lattice check was violated")
        return 0

    if args.command == "verify":
        claims = [hermite_consistency(), improvement_grid(), a_equals_s_beats_bayer_fluckiger()]
        scan = blichfeldt_scan()
        claims.append(_scan_claim(scan))
        reports = [field_report(p, None, _options(args)) for p in (args.poly or VERIFY_FIELDS)]
        payload = {
            "schema_version": SCHEMA_VERSION,
            "seed": args.seed,
            "claims": [c.as_dict() for c in claims],
            "fields": [{"polynomial": r["input"]["polynomial"], "passed": r["passed"], "checks": r["checks"]} for r in reports],
        }
        passed = all(c.passed for c in claims) and all(r["passed"] for r in reports)
        payload["passed"] = passed
        if fmt == "json":
            out.write(to_json(payload))
        else:
            for c in claims:
                out.write(f"{'PASS' if c.passed else 'FAIL'} {c.name}\n")
            for r in reports:
                for c in r["checks"]:
                    out.write(f"{'FAIL' if c['status'] == 'violated' else 'PASS'} {r['input']['polynomial']}: {c['name']} ({c['status']})\n")
        if not passed:
            raise CheckFailed("verification failed")
        return 0
    raise InvalidInput(f"unknown command {args.command}")


def _scan_claim(found):
    from .report import ClaimResult

    ok = found == list(range(2, 44))
    return ClaimResult("blichfeldt_scan", ok, {"first": found[0] if found else None, "last": found[-1] if found else None})


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return run(argv)
    except EuclidMinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return InvalidInput.exit_code


if __name__ == "__main__":
    sys.exit(main())
