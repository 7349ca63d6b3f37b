"""Command-line entry point: ``wpls solve``, ``wpls gen`` and ``wpls bench``.

Exit codes: 0 success, 2 input error, 3 numeric error, 4 generation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import _backend
from .bench import RANK_MODES, BenchConfig, format_summary, run_bench, summarize, write_records
from .errors import GenerationError, InvalidInputError, MatrixMarketError, NumericalError, ShapeError
from .generate import GenParams, generate
from .mmio import read_matrix, write_matrix
from .solver import WplsProblem, solve

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_GENERATION = 0, 2, 3, 4


def _list(conv):
    def parse(text):
        return [conv(t) for t in text.split(",") if t.strip()]

    return parse


def _flatten(values):
    return tuple(v for group in values for v in group)


def _fail(code, message):
    print(f"wpls: error: {message}", file=sys.stderr)
    return code


def cmd_solve(args) -> int:
    mats = {}
    for name in ("x", "y", "w"):
        path = getattr(args, name)
        try:
            mats[name] = read_matrix(path)
        except OSError as exc:
            return _fail(EXIT_INPUT, f"cannot read --{name} {path}: {exc.strerror}")
        except MatrixMarketError as exc:
            return _fail(EXIT_INPUT, f"--{name}: {exc}")
    try:
        problem = WplsProblem(mats["x"], mats["y"], mats["w"])
    except (ShapeError, InvalidInputError) as exc:
        return _fail(EXIT_INPUT, f"inconsistent inputs (--x {args.x}, --y {args.y}, --w {args.w}): {exc}")
    try:
        report = solve(problem, args.method, args.tol)
    except NumericalError as exc:
        return _fail(EXIT_NUMERIC, str(exc))
    write_matrix(report.c, args.out, comments=[f"method {report.method}"])
    if args.report:
        Path(args.report).write_text(
            json.dumps(
                {
                    "method": report.method,
                    "detected_rank": report.detected_rank,
                    "e_method": report.e_method,
                    "solve_seconds": report.solve_seconds,
                },
                indent=1,
            )
            + "\n"
        )
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        params = GenParams.standard(
            args.n1,
            args.kappa,
            deficient=args.deficient,
            seed=args.seed,
            n2=args.n2,
            max_attempts=args.max_attempts,
            factor_tol=args.factor_tol,
        )
        if args.rank is not None or args.m1 is not None or args.m2 is not None:
            m1 = args.m1 or params.m1
            params = GenParams(
                n1=params.n1,
                m1=m1,
                m2=args.m2 or 2 * m1,
                n2=params.n2,
                r=args.rank if args.rank is not None else params.r,
                kappa_r=params.kappa_r,
                seed=params.seed,
                max_attempts=params.max_attempts,
                factor_tol=params.factor_tol,
            )
    except InvalidInputError as exc:
        return _fail(EXIT_INPUT, str(exc))
    try:
        g = generate(params)
    except GenerationError as exc:
        return _fail(EXIT_GENERATION, f"{exc} (e.g. --seed {args.seed + 1})")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_matrix(g.problem.x, out / "X.mtx")
    write_matrix(g.problem.y, out / "Y.mtx")
    write_matrix(g.problem.w, out / "W.mtx")
    meta = {
        "e_exact": g.e_exact,
        "r": g.true_rank,
        "kappa_r": params.kappa_r,
        "seed": params.seed,
        "attempts_used": g.attempts_used,
        "n1": params.n1,
        "m1": params.m1,
        "m2": params.m2,
        "n2": params.n2,
    }
    (out / "meta.json").write_text(json.dumps(meta, indent=1) + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        config = BenchConfig(
            n1_list=_flatten(args.n1),
            kappa_list=_flatten(args.kappa),
            rank_modes=tuple(args.rank_modes),
            trials=args.trials,
            n2=args.n2,
            seed=args.seed,
            fmt=args.format,
            repeat=args.repeat,
            warmup=not args.no_warmup,
            transposed_dagger=args.transposed_dagger,
        )
    except ValueError as exc:
        return _fail(EXIT_INPUT, str(exc))
    progress = (lambda line: print(line, file=sys.stderr)) if args.verbose else None
    result = run_bench(config, progress)
    write_records(result.records, args.out, config.fmt)
    print(f"backend: {_backend.name}")
    print(format_summary(summarize(result.records, result.failures), result.failures), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wpls", description="Weighted pairing least-squares solvers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a problem stored as three Matrix Market files")
    p.add_argument("--x", required=True, help="X, m1 x n1")
    p.add_argument("--y", required=True, help="Y, m2 x n2")
    p.add_argument("--w", required=True, help="pairing weights W, m1 x m2, nonnegative")
    p.add_argument("--method", choices=("gi123", "dagger", "auto"), default="auto")
    p.add_argument("--out", required=True, help="where to write C, n1 x n2")
    p.add_argument("--report", help="optional JSON report path")
    p.add_argument("--tol", default="auto", type=_tol, help="pivot threshold: auto, bare or a number")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="generate a synthetic problem with known minimum")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--deficient", action="store_true", help="rank ceil(7 n1 / 8) instead of n1")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--n2", type=int, default=32)
    p.add_argument("--m1", type=int, help="default 2 n1")
    p.add_argument("--m2", type=int, help="default 2 m1")
    p.add_argument("--rank", type=int, help="explicit rank, overrides --deficient")
    p.add_argument("--max-attempts", type=int, default=50)
    p.add_argument("--factor-tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time and compare both solvers over a grid")
    p.add_argument("--n1", type=_list(int), nargs="+", required=True, help="e.g. 64,128")
    p.add_argument("--kappa", type=_list(float), nargs="+", required=True, help="e.g. 16,256,4096")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True)
    p.add_argument("--rank-modes", nargs="+", choices=RANK_MODES, default=list(RANK_MODES))
    p.add_argument("--n2", type=int, default=32)
    p.add_argument("--repeat", type=int, default=5, help="timing rounds per record; the fastest is kept")
    p.add_argument("--no-warmup", action="store_true")
    p.add_argument(
        "--transposed-dagger",
        action="store_true",
        help="also run the dagger variant that wrongly forms (RR')^-1 (records tagged dagger_t)",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def _tol(text):
    if text in ("auto", "bare"):
        return text
    return float(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
