"""Command-line entry point: ``portes {test,mc-test,simulate,fit-stable,invertq}``.

Exit codes: 0 success, 1 usage or parse error, 2 domain violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .errors import PortesError
from .innovations import InnovationSource
from .models import INVERTQ_WARNING, fit_var, invertq
from .montecarlo import DEFAULT_LAGS, McConfig, VarAdapter, asymptotic_test, mc_goodness_of_fit, mc_randomness_test
from .stable import fitstable
from .statistics import Method
from .varima import VarimaSpec, varima_sim

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2


class UsageError(Exception):
    pass


def read_csv(stream, header: bool = False) -> np.ndarray:
    """Parse an ``n x k`` numeric CSV; each column is one component series."""
    rows = list(csv.reader(stream))
    if header and rows:
        rows = rows[1:]
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise UsageError("input contains no data rows")
    k = len(rows[0])
    out = np.empty((len(rows), k))
    first = 2 if header else 1
    for i, row in enumerate(rows):
        if len(row) != k:
            raise UsageError(f"row {i + first}: expected {k} columns, found {len(row)}")
        for j, cell in enumerate(row):
            try:
                out[i, j] = float(cell)
            except ValueError:
                raise UsageError(f"row {i + first}, column {j + 1}: cannot parse {cell!r} as a number") from None
            if not np.isfinite(out[i, j]):
                raise UsageError(f"row {i + first}, column {j + 1}: value must be finite")
    return out


def write_csv(stream, z: np.ndarray) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    for row in np.atleast_2d(z):
        writer.writerow([repr(float(v)) for v in row])


def parse_lags(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"lags must be a comma list of integers, got {text!r}") from None


def parse_array(text: str):
    """A comma list of numbers, or any JSON array (for matrix coefficients)."""
    text = text.strip()
    try:
        if text.startswith("["):
            return json.loads(text)
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse {text!r} as numbers or a JSON array") from None


def parse_fit(text: str) -> int:
    kind, _, order = text.partition(":")
    if kind.lower() != "var" or not order.isdigit() or int(order) < 1:
        raise argparse.ArgumentTypeError(f"--fit expects var:p with p >= 1, got {text!r}")
    return int(order)


def _add_input(p):
    p.add_argument("input", nargs="?", default="-", help="CSV path, or - for stdin (default)")
    p.add_argument("--header", action="store_true", help="first CSV row is a header")


def _add_test_flags(p, mc_default: bool):
    p.add_argument("--method", default="mahdi-mcleod", help="statistic name (default mahdi-mcleod)")
    p.add_argument("--lags", type=parse_lags, default=DEFAULT_LAGS, help="comma list (default 5,10,...,30)")
    p.add_argument("--season", type=int, default=1)
    p.add_argument("--squared", action="store_true", help="test squared residuals")
    p.add_argument("--order", type=int, default=None, help="fitted order for chi-square df")
    p.add_argument("--fit", type=parse_fit, default=None, metavar="var:p", help="fit a VAR(p) first")
    p.add_argument("--mc", action="store_true", default=mc_default, help="Monte Carlo p-values")
    p.add_argument("--nrep", type=int, default=1000)
    p.add_argument("--seed", type=int, default=123)
    p.add_argument("--ncores", type=int, default=None, help="workers (default $PORTES_NCORES or 1)")
    p.add_argument("--innov-dist", default="gaussian", choices=["gaussian", "t", "stable", "bootstrap"])
    p.add_argument("--dft", type=int, default=None)
    p.add_argument("--format", choices=["table", "json"], default="table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="portes", description="Portmanteau goodness-of-fit tests.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="asymptotic chi-square test (or --mc)")
    _add_input(p)
    _add_test_flags(p, mc_default=False)

    p = sub.add_parser("mc-test", help="Monte Carlo randomness or goodness-of-fit test")
    _add_input(p)
    _add_test_flags(p, mc_default=True)

    p = sub.add_parser("simulate", help="simulate a seasonal VARIMA process as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    for name in ("ar", "ma", "ar-season", "ma-season", "d", "d-season", "constant", "trend", "demean", "sigma"):
        p.add_argument(f"--{name}", type=parse_array, default=None)
    p.add_argument("--period", type=int, default=None)
    p.add_argument("--trunc-lag", type=int, default=None)
    p.add_argument("--ma-plus", action="store_true", help="univariate MA written as 1 + theta B")
    p.add_argument("--innov-dist", default="gaussian", choices=["gaussian", "t"])
    p.add_argument("--dft", type=int, default=None)
    p.add_argument("--seed", type=int, default=123)

    p = sub.add_parser("fit-stable", help="McCulloch stable parameters per column")
    _add_input(p)
    p.add_argument("--format", choices=["table", "json"], default="table")

    p = sub.add_parser("invertq", help="stationarity/invertibility check")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--ar", type=parse_array)
    group.add_argument("--ma", type=parse_array)
    return parser


def _read_input(args) -> np.ndarray:
    if args.input == "-":
        return read_csv(sys.stdin, args.header)
    try:
        with open(args.input, newline="") as fh:
            return read_csv(fh, args.header)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None


def _ncores(args) -> int:
    if args.ncores is not None:
        return args.ncores
    env = os.environ.get("PORTES_NCORES")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"PORTES_NCORES must be an integer, got {env!r}") from None
    return 1


def _run_test(args, out) -> int:
    try:
        method = Method.parse(args.method)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if method is Method.CUSTOM:
        raise UsageError("custom statistics are only available from Python")
    cfg = None
    if args.mc:
        try:
            cfg = McConfig(
                nrep=args.nrep,
                seed=args.seed,
                ncores=_ncores(args),
                innov_dist=args.innov_dist,
                dft=args.dft,
                lags=args.lags,
                season=args.season,
                squared_residuals=args.squared,
                method=method,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    z = _read_input(args)
    if cfg is not None:
        if args.fit is not None:
            adapter = VarAdapter(p=args.fit, innov_dist=cfg.innov_dist, dft=cfg.dft)
            report = mc_goodness_of_fit(adapter, z, cfg)
        else:
            report = mc_randomness_test(z, cfg)
    else:
        obj = fit_var(z, args.fit) if args.fit is not None else z
        order = args.order if args.order is not None else (args.fit or 0)
        report = asymptotic_test(obj, args.lags, args.season, method, order, args.squared)
    out.write(report.to_json() if args.format == "json" else report.format_table())
    out.write("\n")
    return EXIT_OK


def _spec_from_args(args) -> VarimaSpec:
    return VarimaSpec(
        ar=args.ar,
        ma=args.ma,
        ar_season=args.ar_season,
        ma_season=args.ma_season,
        d=0 if args.d is None else args.d,
        d_season=0 if args.d_season is None else args.d_season,
        period=args.period,
        constant=args.constant,
        trend=args.trend,
        demean=args.demean,
        sigma=args.sigma,
        trunc_lag=args.trunc_lag,
        k=args.k,
        ma_plus_convention=args.ma_plus,
    )


def _run_simulate(args, out) -> int:
    spec = _spec_from_args(args)
    src = InnovationSource(args.innov_dist, sigma=spec.sigma, dft=args.dft)
    z = varima_sim(spec, args.n, src, np.random.default_rng(args.seed))
    write_csv(out, z)
    return EXIT_OK


def _run_fit_stable(args, out) -> int:
    params = fitstable(_read_input(args))
    rows = params.as_rows()
    if args.format == "json":
        out.write(json.dumps(rows, indent=2))
    else:
        lines = [f"{'column':>6} {'alpha':>10} {'beta':>10} {'scale':>10} {'location':>10}"]
        for j, r in enumerate(rows, 1):
            lines.append(f"{j:>6} " + " ".join(f"{v:>10.6f}" for v in r.values()))
        out.write("\n".join(lines))
    out.write("\n")
    return EXIT_OK


def _run_invertq(args, out) -> int:
    coeffs = args.ar if args.ar is not None else args.ma
    verdict = invertq(coeffs)
    out.write(f"{verdict.value}\n")
    if not verdict:
        print(INVERTQ_WARNING, file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


_COMMANDS = {
    "test": _run_test,
    "mc-test": _run_test,
    "simulate": _run_simulate,
    "fit-stable": _run_fit_stable,
    "invertq": _run_invertq,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        buf = io.StringIO()
        code = _COMMANDS[args.command](args, buf)
        out.write(buf.getvalue())
        return code
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PortesError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
