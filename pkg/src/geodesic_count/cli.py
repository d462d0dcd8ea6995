"""Command-line entry point: sieve, correlate, verify, error-scan, mainterm, cosets, trace.

Settings come from flags, then a JSON config file (--config), then
defaults.  The sieve cache defaults to $GEODESIC_COUNT_CACHE.
Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CacheFormatError, ResourceError, SieveRangeError
from .quadfield import ideal_count_sieve, load_or_sieve, write_sieve_cache

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
CACHE_ENV = "GEODESIC_COUNT_CACHE"
COMMANDS = ("sieve", "correlate", "verify", "error-scan", "mainterm", "cosets", "trace")
DEFAULTS = {
    "p": 3,
    "sign": "plus",
    "xmax": 1000.0,
    "xmin": 1.0,
    "d": 0.1,
    "grid": None,
    "format": "csv",
    "workers": None,
    "limit": None,
    "suite": "all",
    "tol": {},
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    p: int = 3
    sign: str = "plus"
    xmax: float = 1000.0
    xmin: float = 1.0
    d: float = 0.1
    grid: tuple[str, int] | None = None
    tol: dict = field(default_factory=dict)
    cache: str | None = None
    out: str | None = None
    format: str = "csv"
    workers: int = 1
    limit: int | None = None
    suite: str = "all"

    def validate(self) -> None:
        if not 0.0 < self.d < 1.0:
            raise UsageError("--d must lie in (0, 1)")
        if self.xmax < 0:
            raise UsageError("--xmax must be non-negative")
        if self.grid is not None and self.grid[1] < 2:
            raise UsageError("grid count must be at least 2")
        if self.sign not in ("plus", "minus"):
            raise UsageError("--sign is plus or minus")
        if self.format not in ("csv", "json"):
            raise UsageError("--format is csv or json")

    @property
    def branch(self) -> int:
        return 1 if self.sign == "plus" else -1


def parse_grid(text: str) -> tuple[str, int]:
    kind, _, count = text.partition(":")
    if kind not in ("lin", "geo") or not count.isdigit():
        raise argparse.ArgumentTypeError(f"grid must look like lin:N or geo:N, got {text!r}")
    return kind, int(count)


def parse_tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"--tol expects NAME=VAL, got {text!r}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default settings")
    common.add_argument("--cache", help="sieve cache file (default $%s)" % CACHE_ENV)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--workers", type=int)
    common.add_argument("--tol", type=parse_tol, action="append", metavar="NAME=VAL")
    common.add_argument("--p", type=int)
    common.add_argument("--sign", choices=("plus", "minus"))
    common.add_argument("--xmax", type=float)
    common.add_argument("--xmin", type=float)
    common.add_argument("--d", type=float)
    common.add_argument("--grid", type=parse_grid, metavar="{lin,geo}:N")

    parser = argparse.ArgumentParser(prog="geodesic-count", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    s = sub.add_parser("sieve", parents=[common], help="write the ideal-count cache")
    s.add_argument("--limit", type=int)
    sub.add_parser("correlate", parents=[common], help="S, main term and error on a grid")
    v = sub.add_parser("verify", parents=[common], help="run invariant suites")
    v.add_argument("--suite", choices=("geometry", "specfun", "trace", "group", "all"))
    sub.add_parser("error-scan", parents=[common], help="windowed RMS of the error and its exponent")
    sub.add_parser("mainterm", parents=[common], help="c_p and the main coefficient")
    sub.add_parser("cosets", parents=[common], help="double-coset classes with |B| <= xmax")
    sub.add_parser("trace", parents=[common], help="geometric sides, closed and direct")
    return parser


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config {path}: expected a JSON object")
    unknown = set(data) - set(DEFAULTS) - {"cache"}
    if unknown:
        raise UsageError(f"config {path}: unknown keys {sorted(unknown)}")
    if isinstance(data.get("grid"), str):
        data["grid"] = parse_grid(data["grid"])
    return data


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Flags override the config file, which overrides the defaults."""
    file_cfg = load_config(args.config)
    merged = dict(DEFAULTS)
    merged.update(file_cfg)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = dict(value) if key == "tol" else value
    if "tol" in file_cfg and args.tol:
        merged["tol"] = {**file_cfg["tol"], **dict(args.tol)}
    cache = args.cache or file_cfg.get("cache") or os.environ.get(CACHE_ENV)
    workers = merged["workers"] or os.cpu_count() or 1
    cfg = RunConfig(
        command=args.command,
        p=int(merged["p"]),
        sign=merged["sign"],
        xmax=float(merged["xmax"]),
        xmin=float(merged["xmin"]),
        d=float(merged["d"]),
        grid=tuple(merged["grid"]) if merged["grid"] else None,
        tol={k: float(v) for k, v in merged["tol"].items()},
        cache=cache,
        out=args.out,
        format=merged["format"],
        workers=int(workers),
        limit=merged["limit"],
        suite=merged["suite"],
    )
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# output helpers


def emit(cfg: RunConfig, columns: list[str], rows: list[list], extra: dict | None = None) -> None:
    """Rows as CSV or as a JSON object {columns, rows, ...}."""
    if cfg.format == "json":
        payload = {"columns": columns, "rows": rows}
        if extra:
            payload.update(extra)
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
        text = buf.getvalue()
    write_text(cfg, text)


def write_text(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> float | int:
    # integers print without a trailing .0
    return int(x) if float(x).is_integer() else float(x)


def grid_points(cfg: RunConfig, lo: float | None = None) -> np.ndarray:
    hi = cfg.xmax
    if cfg.grid is None or hi <= 0:
        return np.array([hi])
    kind, n = cfg.grid
    lo = max(lo if lo is not None else cfg.xmin, 1.0)
    if kind == "lin":
        return np.linspace(lo, hi, n)
    return np.geomspace(lo, hi, n)


def table_for(cfg: RunConfig, n_max: int):
    return load_or_sieve(max(int(n_max), 1), cache=cfg.cache, workers=cfg.workers)


# ---------------------------------------------------------------------------
# commands


def cmd_sieve(cfg: RunConfig) -> int:
    limit = cfg.limit if cfg.limit is not None else int(cfg.xmax)
    if limit < 1:
        raise UsageError("--limit must be at least 1")
    target = cfg.out or cfg.cache
    if target is None:
        raise UsageError(f"give --out, --cache or set ${CACHE_ENV}")
    write_sieve_cache(target, ideal_count_sieve(limit, workers=cfg.workers))
    return EXIT_OK


def cmd_correlate(cfg: RunConfig) -> int:
    from .counting import error_series, main_coefficient

    xs = grid_points(cfg)
    n_max = int(math.floor(xs[-1]))
    if n_max < 1:
        rows = [[_fmt(x), 0, 0, 0] for x in xs]
    else:
        table = table_for(cfg, cfg.p * n_max + cfg.branch)
        es = error_series(table, cfg.p, cfg.branch, xs)
        rows = [[_fmt(x), int(s), _fmt(m), _fmt(e)] for x, s, m, e in zip(es.xs, es.S, es.M, es.E)]
    emit(cfg, ["x", "S", "M", "E"], rows, {"p": cfg.p, "sign": cfg.sign, "main_coefficient": main_coefficient(cfg.p)})
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from .verify import SUITES, check_names, run_suite

    unknown = set(cfg.tol) - set(check_names())
    if unknown:
        raise UsageError(f"unknown tolerance names {sorted(unknown)}")
    suites = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    results = [r for s in suites for r in run_suite(s, cfg.tol)]
    rows = [[r.name, r.error, r.tol, "pass" if r.passed else "FAIL"] for r in results]
    emit(cfg, ["check", "error", "tol", "status"], rows)
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"verification failed: {failed[0].name} (error {failed[0].error:.3g} > tol {failed[0].tol:.3g})", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_error_scan(cfg: RunConfig) -> int:
    from .counting import rms_window_series, exponent_fit

    count = cfg.grid[1] if cfg.grid else 24
    lo = max(cfg.xmin, 10.0)
    if cfg.xmax < 4 * lo:
        raise UsageError("error-scan needs xmax >= 4 xmin")
    table = table_for(cfg, cfg.p * int(cfg.xmax) + cfg.branch)
    starts, rms = rms_window_series(table, cfg.p, cfg.branch, lo, cfg.xmax, count)
    fit = exponent_fit(starts, rms)
    rows = [[_fmt(x), _fmt(y)] for x, y in zip(starts, rms)]
    emit(cfg, ["X", "rms_E"], rows, {"fit": fit.as_dict()})
    print(f"slope {fit.slope:.6f} stderr {fit.stderr:.6f} samples {fit.samples}", file=sys.stderr)
    return EXIT_OK


def cmd_mainterm(cfg: RunConfig) -> int:
    from .counting import VERIFIED_PRIMES, c_p, coset_count_coefficient, is_prime, main_coefficient

    primes = [cfg.p] if cfg.p else [q for q in range(2, 101) if is_prime(q)]
    if not all(is_prime(q) for q in primes):
        raise UsageError(f"{cfg.p} is not prime")
    rows = [[q, c_p(q), _fmt(main_coefficient(q)), _fmt(coset_count_coefficient(q)), q in VERIFIED_PRIMES] for q in primes]
    emit(cfg, ["p", "c_p", "main_coefficient", "coset_coefficient", "verified"], rows)
    return EXIT_OK


def cmd_cosets(cfg: RunConfig) -> int:
    from .group import CSV_COLUMNS, class_rows, enumerate_double_cosets

    rows = class_rows(enumerate_double_cosets(cfg.p, cfg.xmax))
    emit(cfg, CSV_COLUMNS, rows)
    return EXIT_OK


def cmd_trace(cfg: RunConfig) -> int:
    from .specfun.testfunctions import F3, F4, SmoothingParams
    from .trace import dumps_report, smoothed_count_check, trace_report

    tol = cfg.tol.get("trace", 1e-6)
    prm = SmoothingParams(cfg.xmax, cfg.d)
    reports = [
        trace_report("a", cfg.p, cfg.xmax, cfg.d, F3(prm), tol),
        trace_report("b", cfg.p, cfg.xmax, cfg.d, F3(prm), tol),
        trace_report("c", cfg.p, cfg.xmax, cfg.d, F4(prm), tol),
    ]
    smoothed = smoothed_count_check(cfg.p, cfg.xmax, cfg.d).as_dict()
    write_text(cfg, dumps_report({"geometric_sides": reports, "smoothed_count": smoothed}) + "\n")
    ok = all(r["pass"] for r in reports) and smoothed["pass"]
    return EXIT_OK if ok else EXIT_FAIL


HANDLERS = {
    "sieve": cmd_sieve,
    "correlate": cmd_correlate,
    "verify": cmd_verify,
    "error-scan": cmd_error_scan,
    "mainterm": cmd_mainterm,
    "cosets": cmd_cosets,
    "trace": cmd_trace,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "mainterm" and args.p is None:
            cfg = resolve_config(args)
            cfg.p = 0 if "p" not in load_config(args.config) else cfg.p
        else:
            cfg = resolve_config(args)
        return HANDLERS[cfg.command](cfg)
    except (ResourceError, MemoryError, SieveRangeError, CacheFormatError, OSError) as exc:
        # checked first: CacheFormatError is also a ValueError
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
