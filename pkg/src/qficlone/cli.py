"""Command-line front end.

    qficlone curve    --machine uqcm --d 2 --n 101 [-o out.csv] [--format json]
    qficlone scan     --machine pqcm --d 2:30 [--n 4001] [--workers 4]
    qficlone verify   --d 2:8 [--tol 1e-20]
    qficlone optimize --machine pqcm --d 10 --eta-a 0.4

Exit codes: 0 ok, 1 usage, 2 I/O, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from typing import Optional

from . import kernels
from .core import DomainError, Machine, TradeoffPoint
from .machines import frontier_sample
from .scan import DEFAULT_N, DEFAULT_REFINE_TOL, bifurcation_scan, qfi_sum_curve
from .verify import run_checks

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_VERIFY = 0, 1, 2, 3
CURVE_COLUMNS = ["eta_a", "eta_b", "fid_a", "fid_b", "qfi_a", "qfi_b", "sum_fid", "sum_qfi"]
SCAN_COLUMNS = ["d", "global_min_eta_a", "symmetric_point", "is_symmetric", "extrema_count"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: str
    machine: str
    d_min: int
    d_max: int
    n: int
    tol: Optional[float]
    output: Optional[str]
    format: str
    eta_a: Optional[float] = None
    workers: int = 1
    draws: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.d_min < 2:
            raise UsageError(f"dimension must be >= 2, got {self.d_min}")
        if self.d_max < self.d_min:
            raise UsageError(f"empty dimension range {self.d_min}:{self.d_max}")
        if self.n < 3:
            raise UsageError(f"--n must be >= 3, got {self.n}")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.eta_a is not None and not 0.0 <= self.eta_a <= 1.0:
            raise UsageError("--eta-a must lie in [0, 1]")

    @property
    def d(self) -> int:
        return self.d_min


def _parse_range(text: str) -> tuple[int, int]:
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise UsageError(f"bad dimension {text!r}; expected D or DMIN:DMAX") from None


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _csv(columns, rows, trailer: Optional[str] = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    if trailer:
        buf.write(trailer + "\n")
    return buf.getvalue()


def _json(config: RunConfig, columns, rows, summary=None) -> str:
    doc = {
        "config": asdict(config),
        "columns": columns,
        "data": [dict(zip(columns, row)) for row in rows],
    }
    if summary is not None:
        doc["summary"] = summary
    return json.dumps(doc, indent=2) + "\n"


def _emit(config: RunConfig, text: str):
    if config.output in (None, "-"):
        sys.stdout.write(text)
        return
    with open(config.output, "w", newline="") as fh:
        fh.write(text)


def cmd_curve(config: RunConfig) -> int:
    if config.d_min != config.d_max:
        raise UsageError("curve takes a single dimension")
    curve = qfi_sum_curve(config.machine, config.d, config.n, config.tol or DEFAULT_REFINE_TOL)
    rows = [TradeoffPoint.from_etas(a, b, config.d).as_row() for a, b in zip(curve.eta_a, curve.eta_b)]
    text = (_json(config, CURVE_COLUMNS, rows) if config.format == "json"
            else _csv(CURVE_COLUMNS, rows))
    _emit(config, text)
    return EXIT_OK


def cmd_scan(config: RunConfig) -> int:
    rec = bifurcation_scan(config.machine, config.d_min, config.d_max, config.n,
                           config.tol or DEFAULT_REFINE_TOL, config.workers)
    rows = [(r.d, r.global_min_eta_a, r.symmetric_point, r.is_symmetric, r.extrema_count) for r in rec.rows]
    summary = {"last_symmetric_d": rec.last_symmetric_d, "first_asymmetric_d": rec.first_asymmetric_d}
    if config.format == "json":
        text = _json(config, SCAN_COLUMNS, rows, summary)
    else:
        trailer = f"# last_symmetric_d={summary['last_symmetric_d']} first_asymmetric_d={summary['first_asymmetric_d']}"
        text = _csv(SCAN_COLUMNS, rows, trailer)
    _emit(config, text)
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    checks = run_checks(config.d_min, config.d_max, config.tol, config.draws, config.seed)
    lines = [f"{'check':<20} {'max_residual':>12} {'tol':>9}  status"]
    failed = []
    for c in checks:
        lines.append(f"{c.name:<20} {c.max_residual:12.3e} {c.tol:9.1e}  {'ok' if c.passed else 'FAIL'}")
        if not c.passed:
            failed.append(c)
    _emit(config, "\n".join(lines) + "\n")
    for c in failed:
        d, eta, machine = c.worst
        print(f"verification failed: {c.name} at (d={d}, eta={eta!r}, machine={machine})", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_optimize(config: RunConfig) -> int:
    if config.eta_a is None:
        raise UsageError("optimize needs --eta-a")
    if config.d_min != config.d_max:
        raise UsageError("optimize takes a single dimension")
    s = frontier_sample(config.machine, config.eta_a, config.d, config.tol or DEFAULT_REFINE_TOL)
    p = TradeoffPoint.from_etas(s.eta_a, s.eta_b, config.d)
    columns = CURVE_COLUMNS + ["a", "b", "c"]
    rows = [p.as_row() + (s.params.a, s.params.b, s.params.c)]
    text = _json(config, columns, rows) if config.format == "json" else _csv(columns, rows)
    _emit(config, text)
    return EXIT_OK


COMMANDS = {"curve": cmd_curve, "scan": cmd_scan, "verify": cmd_verify, "optimize": cmd_optimize}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qficlone", description="QFI distribution in asymmetric cloning machines")
    parser.add_argument("--version", action="version", version=f"%(prog)s (kernel: {kernels.BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, d_default=None):
        p.add_argument("--machine", choices=[m.value for m in Machine], default="uqcm")
        p.add_argument("--d", default=d_default, required=d_default is None,
                       help="dimension D, or range DMIN:DMAX where accepted")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("curve", help="trade-off curve along the optimal frontier")
    common(p)
    p.add_argument("--n", type=int, default=101)

    p = sub.add_parser("scan", help="global-minimum location of the summed QFI per dimension")
    common(p)
    p.add_argument("--n", type=int, default=DEFAULT_N)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("verify", help="oracle vs closed-form residual suite")
    common(p, d_default="2:8")
    p.add_argument("--draws", type=int, default=10, help="random machine draws per dimension")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("optimize", help="optimal frontier point for one eta_A")
    common(p)
    p.add_argument("--eta-a", type=float, required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        d_min, d_max = _parse_range(args.d)
        config = RunConfig(
            command=args.command,
            machine=args.machine,
            d_min=d_min,
            d_max=d_max,
            n=getattr(args, "n", 3),
            tol=args.tol,
            output=args.output,
            format=args.format,
            eta_a=getattr(args, "eta_a", None),
            workers=getattr(args, "workers", 1),
            draws=getattr(args, "draws", 10),
            seed=getattr(args, "seed", 0),
        )
        return COMMANDS[config.command](config)
    except (UsageError, DomainError) as exc:
        print(f"qficlone: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qficlone: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
