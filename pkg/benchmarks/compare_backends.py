"""Time the compiled and pure-Python kernel backends on the same inputs.

    python benchmarks/compare_backends.py [--n 64 128] [--repeat 5]

Prints the best-of-``repeat`` time per kernel and solver for each backend
and the speedup of the compiled one.
"""

import argparse
import time

import numpy as np

from wpls import _backend
from wpls.cholesky import gen_chol
from wpls.generate import GenParams, generate
from wpls.ginverse import inv123
from wpls.linalg import svd_oracle
from wpls.solver import residue_direct, solve_123, solve_dagger


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(n, seed):
    g = generate(GenParams.standard(n, 256.0, deficient=True, seed=seed))
    p = g.problem
    h = p.w.sum(axis=1)
    gram = p.x.T @ (h[:, None] * p.x)
    f = gen_chol(gram)
    c = solve_123(p).c
    a = np.random.default_rng(seed).standard_normal((2 * n, n))
    return {
        "gen_chol": lambda: gen_chol(gram),
        "inv123": lambda: inv123(f),
        "residue": lambda: residue_direct(p, c),
        "svd_oracle": lambda: svd_oracle(a),
        "solve_123": lambda: solve_123(p, evaluate=False),
        "solve_dagger": lambda: solve_dagger(p, evaluate=False),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[64, 128])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    names = _backend.available()
    if "compiled" not in names:
        print("compiled extension not built; only the python backend is timed")
    print(f"{'n':>5} {'operation':<14}" + "".join(f"{b + ' (ms)':>16}" for b in names) + (
        f"{'speedup':>10}" if len(names) == 2 else ""))
    for n in args.n:
        ops = cases(n, args.seed)
        for op, fn in ops.items():
            row = {}
            for b in names:
                with _backend.use_backend(b):
                    fn()
                    row[b] = best_of(fn, args.repeat)
            line = f"{n:>5} {op:<14}" + "".join(f"{row[b] * 1e3:16.3f}" for b in names)
            if len(names) == 2:
                line += f"{row['python'] / row['compiled']:10.1f}"
            print(line)


if __name__ == "__main__":
    main()
