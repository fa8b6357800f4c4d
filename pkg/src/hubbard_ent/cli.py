"""Command line front end: ``hubbard-ent {scan-u,scan-n,scan-mz,validate}``.

Scans write data only (CSV or JSON).  Exit codes: 0 success, 1 usage or
configuration error, 2 when some grid points failed numerically.
"""

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import DomainError
from .scans import METHODS, scan_coupling, scan_filling, scan_magnetization
from .special import QuadratureSpec
from .validation import SUITES, run_suite, summarize

COLUMNS = ("param", "energy_per_site", "w", "Ev", "method", "status")
PRECISION_ENV = "HUBBARD_ENT_PRECISION"
EXIT_OK, EXIT_USAGE, EXIT_PARTIAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _precision():
    raw = os.environ.get(PRECISION_ENV, "17")
    try:
        digits = int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
    if not 1 <= digits <= 17:
        raise UsageError(f"{PRECISION_ENV} must lie in 1..17, got {digits}")
    return digits


def format_number(x, digits=17):
    return f"{x:.{digits}g}"


def record_row(record):
    return {"param": record.parameter, "energy_per_site": record.energy_per_site,
            "w": record.w, "Ev": record.E_v, "method": record.method, "status": record.status}


def write_csv(rows, metadata, stream, digits=17):
    """Metadata as one ``# {json}`` comment line, then the fixed header and rows."""
    stream.write("# " + json.dumps(metadata, sort_keys=True) + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([format_number(row[c], digits) if isinstance(row[c], float) else row[c]
                         for c in COLUMNS])


def read_csv(stream):
    """Inverse of :func:`write_csv`; returns ``(metadata, rows)``."""
    metadata = {}
    lines = []
    for line in stream:
        if line.startswith("# "):
            metadata.update(json.loads(line[2:]))
        else:
            lines.append(line)
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError(f"unexpected header {reader.fieldnames}")
    rows = []
    for raw in reader:
        row = dict(raw)
        for key in ("param", "energy_per_site", "w", "Ev"):
            row[key] = float(row[key])
        rows.append(row)
    return metadata, rows


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def write_json(rows, metadata, stream, digits=17):
    payload = {
        "metadata": metadata,
        "rows": [{k: _json_safe(float(format_number(v, digits)) if isinstance(v, float) else v)
                  for k, v in row.items()} for row in rows],
    }
    json.dump(payload, stream, indent=1)
    stream.write("\n")


def _couplings(values):
    out = []
    for v in values:
        try:
            out.append(float(v))
        except ValueError:
            raise UsageError(f"--U expects a number or 'inf', got {v!r}") from None
    return out


def _common(p, L_default):
    p.add_argument("--L", type=int, default=L_default, help="number of sites")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output path, '-' for standard output")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                   help="worker processes for grid points")


def build_parser():
    parser = _Parser(prog="hubbard-ent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scan-u", help="half-filling sweep in U")
    _common(p, 70)
    p.add_argument("--u-min", type=float, default=-8.0)
    p.add_argument("--u-max", type=float, default=8.0)
    p.add_argument("--points", type=int, default=33)
    p.add_argument("--methods", default="integral",
                   help=f"comma separated subset of {','.join(METHODS)}")
    p.add_argument("--tol", type=float, default=1e-10, help="quadrature absolute tolerance")

    p = sub.add_parser("scan-n", help="zero-field sweep in filling n")
    _common(p, 60)
    p.add_argument("--U", action="append", help="coupling, repeatable; 'inf' allowed")

    p = sub.add_parser("scan-mz", help="half-filling sweep in magnetization")
    _common(p, 60)
    p.add_argument("--N", type=int, default=None, help="electrons (default L)")
    p.add_argument("--U", action="append", help="coupling, repeatable")

    p = sub.add_parser("validate", help="oracle and invariant checks")
    p.add_argument("--suite", default="quick", help=f"one of {sorted(SUITES)}")
    return parser


def _emit(args, blocks, metadata, stdout):
    """Write rows of every block (one block per coupling) and pick the exit code."""
    rows = []
    metadata = dict(metadata, version=__version__, blocks=[])
    for label, records in blocks:
        start = len(rows)
        rows.extend(record_row(r) for r in records)
        metadata["blocks"].append({"U": label, "start": start, "stop": len(rows)})
    digits = _precision()
    buf = io.StringIO()
    (write_csv if args.format == "csv" else write_json)(rows, metadata, buf, digits)
    if args.out == "-":
        stdout.write(buf.getvalue())
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    failed = any(row["status"] != "ok" and not row["status"].startswith("skipped")
                 for row in rows)
    return EXIT_PARTIAL if failed else EXIT_OK


def _scan_u(args, stdout):
    if args.points < 1:
        raise UsageError("--points must be at least 1")
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    bad = [m for m in methods if m not in METHODS]
    if not methods or bad:
        raise UsageError(f"--methods must be a subset of {','.join(METHODS)}")
    if "bethe" in methods and (args.L < 2 or args.L % 2):
        raise UsageError("--methods bethe needs an even --L")
    try:
        quad = QuadratureSpec(abs_tol=args.tol)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    grid = np.linspace(args.u_min, args.u_max, args.points).tolist()
    records = scan_coupling(args.L, grid, methods, quad=quad, workers=args.workers)
    meta = {"command": "scan-u", "L": args.L, "u_min": args.u_min, "u_max": args.u_max,
            "points": args.points, "methods": list(methods), "tol": args.tol}
    return _emit(args, [("grid", records)], meta, stdout)


def _scan_n(args, stdout):
    if args.L < 6 or args.L % 2:
        raise UsageError("--L must be even and at least 6 for the singlet filling grid")
    couplings = _couplings(args.U or ["4"])
    if any(U < 0 or math.isnan(U) for U in couplings):
        raise UsageError("--U must be >= 0")
    blocks = [(str(U), scan_filling(args.L, U, workers=args.workers)) for U in couplings]
    meta = {"command": "scan-n", "L": args.L, "U": [str(U) for U in couplings]}
    return _emit(args, blocks, meta, stdout)


def _scan_mz(args, stdout):
    N = args.L if args.N is None else args.N
    if args.L < 1 or not 0 < N <= args.L:
        raise UsageError("need 0 < --N <= --L")
    couplings = _couplings(args.U or ["4"])
    if any(not (0 <= U < math.inf) for U in couplings):
        raise UsageError("--U must be finite and >= 0")
    if N < args.L and args.L % 2:
        raise UsageError("--N below --L needs an even --L")
    blocks = [(str(U), scan_magnetization(args.L, N, U, workers=args.workers)) for U in couplings]
    meta = {"command": "scan-mz", "L": args.L, "N": N, "U": [str(U) for U in couplings]}
    return _emit(args, blocks, meta, stdout)


def _validate(args, stdout):
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}")
    checks = run_suite(args.suite)
    for c in checks:
        stdout.write(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  ({c.detail})\n")
    summary = summarize(checks)
    stdout.write(json.dumps(summary) + "\n")
    return EXIT_OK if summary["ok"] else EXIT_PARTIAL


COMMANDS = {"scan-u": _scan_u, "scan-n": _scan_n, "scan-mz": _scan_mz, "validate": _validate}


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "workers", 1) < 1:
            raise UsageError("--workers must be at least 1")
        return COMMANDS[args.command](args, stdout)
    except UsageError as exc:
        print(f"hubbard-ent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hubbard-ent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
