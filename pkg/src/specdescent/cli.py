"""Command-line interface.

Subcommands: predict (closed-form edges and kappa for one aspect ratio),
cond (one matrix's condition number), sweep (Monte Carlo grid run
writing records.csv, aggregate.csv and manifest.json), solve (min-norm
least squares from CSV files) and rerun (repeat a sweep from its
manifest). Single values print as JSON on stdout, bulk data goes to CSV;
floats carry 17 significant digits so files round-trip losslessly, with
infinities spelled "inf".

Exit codes: 0 ok, 2 usage/validation, 3 numerical failure, 4 I/O.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, mp_theory, spectral
from .errors import DomainError, NumericalError, SpecdescentError
from .experiments import Ensemble, SweepConfig, aggregate, run_sweep
from .kernels import ScalarFunction
from .randmat import Seed, gaussian_matrix, rademacher_matrix

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

RECORD_COLUMNS = ("n", "d", "gamma", "trial", "seed", "sigma_max",
                  "sigma_min", "kappa", "kappa_mp", "wall_time_ms")
AGGREGATE_COLUMNS = ("n", "d", "gamma", "trials", "kappa_q25", "kappa_median",
                     "kappa_q75", "kappa_mp", "inf_count")


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if value != value:
        return "nan"
    if value == float("inf"):
        return "inf"
    if value == float("-inf"):
        return "-inf"
    return f"{value:.17g}"


def _json_value(x):
    x = float(x)
    if x == float("inf"):
        return "inf"
    if x == float("-inf"):
        return "-inf"
    if x != x:
        return "nan"
    return x


def _print_json(payload) -> None:
    print(json.dumps(payload, separators=(",", ":")))


def _parse_scalar_fn(text: str) -> ScalarFunction:
    name, _, params = text.partition(":")
    try:
        if name == "linear":
            return ScalarFunction.linear()
        if name == "affine":
            a, b = (float(v) for v in params.split(",")) if params else (1.0, 1.0)
            return ScalarFunction.affine(a, b)
        if name == "exp":
            return ScalarFunction.exp_scaled(float(params) if params else 1.0)
    except ValueError as exc:
        raise DomainError(f"bad scalar function {text!r}: {exc}")
    raise DomainError(
        f"unknown scalar function {name!r} (use linear, affine:A,B or exp:RATE)")


def _ensemble_from_args(args) -> Ensemble:
    kind = args.ensemble
    if kind == "gaussian":
        return Ensemble.gaussian()
    if kind == "rademacher":
        return Ensemble.rademacher()
    if kind == "rbf":
        return Ensemble.radial(args.sigma)
    if kind == "dot":
        return Ensemble.dot(_parse_scalar_fn(args.scalar_fn))
    raise SpecdescentError(f"unhandled ensemble {kind!r}")


def _resolve_threads(value) -> int:
    if value is not None:
        return max(1, int(value))
    env = os.environ.get("SPECDESCENT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def cmd_predict(args) -> int:
    pred = mp_theory.predict(args.gamma)
    _print_json({"lower": _json_value(pred.lower_edge),
                 "upper": _json_value(pred.upper_edge),
                 "kappa": _json_value(pred.predicted_kappa)})
    return EXIT_OK


def cmd_cond(args) -> int:
    if args.ensemble == "identity-test":
        matrix = np.eye(args.n, args.d)
    elif args.ensemble == "gaussian":
        matrix = gaussian_matrix(args.n, args.d, Seed(args.seed))
    elif args.ensemble == "rademacher":
        matrix = rademacher_matrix(args.n, args.d, Seed(args.seed))
    else:
        matrix = _ensemble_from_args(args).draw(args.n, args.d, Seed(args.seed))
    kappa = spectral.condition_number(matrix, rank_tol=args.rank_tol)
    print("inf" if kappa == float("inf") else repr(float(kappa)))
    return EXIT_OK


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def write_records_csv(path: Path, records) -> None:
    _write_csv(path, RECORD_COLUMNS,
               [(r.n, r.d, r.gamma, r.trial, r.seed, r.sigma_max, r.sigma_min,
                 r.kappa, r.kappa_mp, r.wall_time_ms) for r in records])


def write_aggregate_csv(path: Path, rows) -> None:
    _write_csv(path, AGGREGATE_COLUMNS,
               [(r.n, r.d, r.gamma, r.trials, r.kappa_q25, r.kappa_median,
                 r.kappa_q75, r.kappa_mp, r.inf_count) for r in rows])


def _parse_float_token(token: str, path, line_no: int) -> float:
    token = token.strip()
    if token == "inf":
        return float("inf")
    if token == "-inf":
        return float("-inf")
    try:
        return float(token)
    except ValueError:
        raise SpecdescentError(f"{path}:{line_no}: cannot parse {token!r}")


def read_records_csv(path) -> list:
    """Rows of records.csv as dicts, with the inf convention applied."""
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or lines[0].split(",") != list(RECORD_COLUMNS):
        raise SpecdescentError(f"{path}: unexpected records.csv header")
    out = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        values = line.split(",")
        if len(values) != len(RECORD_COLUMNS):
            raise SpecdescentError(f"{path}:{i}: expected "
                                   f"{len(RECORD_COLUMNS)} fields")
        row = {}
        for col, tok in zip(RECORD_COLUMNS, values):
            if col in ("n", "d", "trial", "seed"):
                row[col] = int(tok)
            else:
                row[col] = _parse_float_token(tok, path, i)
        out.append(row)
    return out


def _sweep_params(args) -> dict:
    return {
        "n": args.n,
        "d_grid": list(args.d_grid),
        "trials": args.trials,
        "ensemble": args.ensemble,
        "sigma": args.sigma,
        "scalar_fn": args.scalar_fn,
        "seed": args.seed,
        "rank_tol": args.rank_tol,
        "out": str(args.out),
        "threads": args.threads,
    }


def _run_sweep_to_dir(args) -> int:
    out = Path(args.out)
    started = datetime.datetime.now(datetime.timezone.utc)
    config = SweepConfig(n=args.n, d_grid=tuple(args.d_grid), trials=args.trials,
                         ensemble=_ensemble_from_args(args),
                         master_seed=Seed(args.seed), rank_tol=args.rank_tol)
    threads = _resolve_threads(args.threads)

    def log(row):
        print(f"[sweep] d={row.d} gamma={row.gamma:.4g} trials={row.trials} "
              f"kappa_median={_fmt(row.kappa_median)} inf={row.inf_count}",
              file=sys.stderr)

    t0 = time.perf_counter()
    records = run_sweep(config, threads=threads, log=log)
    rows = aggregate(records)
    try:
        out.mkdir(parents=True, exist_ok=True)
        write_records_csv(out / "records.csv", records)
        write_aggregate_csv(out / "aggregate.csv", rows)
        manifest = {
            "tool": "specdescent",
            "version": __version__,
            "subcommand": "sweep",
            "params": _sweep_params(args),
            "master_seed": args.seed,
            "started_at": started.isoformat(),
            "finished_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        }
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    except OSError as exc:
        print(f"error: cannot write to {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"[sweep] wrote {len(records)} records, {len(rows)} grid points "
          f"to {out} in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    return _run_sweep_to_dir(args)


def cmd_rerun(args) -> int:
    try:
        manifest = json.loads(Path(args.manifest).read_text())
    except OSError as exc:
        print(f"error: cannot read manifest: {exc}", file=sys.stderr)
        return EXIT_IO
    if manifest.get("subcommand") != "sweep":
        raise SpecdescentError("manifest does not describe a sweep run")
    params = manifest["params"]
    ns = argparse.Namespace(
        n=int(params["n"]),
        d_grid=[int(v) for v in params["d_grid"]],
        trials=int(params["trials"]),
        ensemble=params["ensemble"],
        sigma=params.get("sigma"),
        scalar_fn=params.get("scalar_fn"),
        seed=int(params["seed"]),
        rank_tol=params.get("rank_tol"),
        out=args.out or params["out"],
        threads=args.threads if args.threads is not None else params.get("threads"),
    )
    return _run_sweep_to_dir(ns)


def _read_matrix_csv(path) -> np.ndarray:
    path = Path(path)
    rows = []
    width = None
    with path.open() as fh:
        for i, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            values = [_parse_float_token(tok, path, i) for tok in line.split(",")]
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise SpecdescentError(
                    f"{path}:{i}: expected {width} fields, got {len(values)}")
            rows.append(values)
    if not rows:
        raise SpecdescentError(f"{path}: no data rows")
    return np.asarray(rows, dtype=np.float64)


def cmd_solve(args) -> int:
    A = _read_matrix_csv(args.matrix)
    b = _read_matrix_csv(args.rhs).reshape(-1)
    if b.shape[0] != A.shape[0]:
        raise SpecdescentError(
            f"rhs has {b.shape[0]} entries but the matrix has {A.shape[0]} rows")
    result = spectral.min_norm_solve(A, b, rank_tol=args.rank_tol)
    _print_json({"x": [_json_value(v) for v in result.x],
                 "residual_norm": _json_value(result.residual_norm),
                 "effective_rank": result.effective_rank})
    return EXIT_OK


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _d_grid(text: str) -> list:
    try:
        grid = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad d grid {text!r}: {exc}")
    if not grid:
        raise argparse.ArgumentTypeError("d grid is empty")
    return grid


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specdescent",
        description="Condition numbers of random and kernel matrices, "
                    "measured and predicted.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="closed-form edges and kappa for gamma")
    p.add_argument("--gamma", type=_positive_float, required=True)
    p.set_defaults(fn=cmd_predict)

    p = sub.add_parser("cond", help="condition number of one sampled matrix")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--ensemble", default="gaussian",
                   choices=["gaussian", "rademacher", "rbf", "dot", "identity-test"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma", type=_positive_float, default=1.0,
                   help="bandwidth for --ensemble rbf")
    p.add_argument("--scalar-fn", default="affine:1,1",
                   help="scalar function for --ensemble dot "
                        "(linear, affine:A,B, exp:RATE)")
    p.add_argument("--rank-tol", type=float, default=None)
    p.set_defaults(fn=cmd_cond)

    p = sub.add_parser("sweep", help="Monte Carlo sweep over a d grid")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--d-grid", type=_d_grid, required=True,
                   help="comma-separated increasing list of d values")
    p.add_argument("--trials", type=_positive_int, default=10)
    p.add_argument("--ensemble", default="gaussian",
                   choices=["gaussian", "rademacher", "rbf", "dot"])
    p.add_argument("--sigma", type=_positive_float, default=1.0)
    p.add_argument("--scalar-fn", default="affine:1,1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rank-tol", type=float, default=None)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--threads", type=_positive_int, default=None,
                   help="worker threads (default: SPECDESCENT_THREADS or CPUs)")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("solve", help="minimum-norm least squares from CSV files")
    p.add_argument("matrix", help="matrix CSV, one row per line")
    p.add_argument("rhs", help="right-hand side CSV")
    p.add_argument("--rank-tol", type=float, default=None)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("rerun", help="repeat a sweep from its manifest.json")
    p.add_argument("manifest")
    p.add_argument("--out", default=None, help="override the output directory")
    p.add_argument("--threads", type=_positive_int, default=None)
    p.set_defaults(fn=cmd_rerun)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (SpecdescentError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
