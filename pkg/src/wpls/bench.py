"""Benchmark grid: generate problems, time both solvers, measure accuracy.

For every (n1, kappa, trial) one problem per rank mode is generated, then
all (rank mode, method) solves are timed in interleaved rounds so slow drift
of the machine affects all of them alike. A record keeps the fastest of
``repeat`` rounds. The first problem of each (n1, kappa) is solved once by
every method before recording, to absorb first-call effects.

Accuracy is ``(E_method - E_exact) / E_exact`` with ``E_exact`` known from
the generator.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
from collections import defaultdict
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .errors import GenerationError
from .generate import GenParams, generate
from .solver import solve_123, solve_dagger

RANK_MODES = ("full", "deficient")
CSV_COLUMNS = (
    "method",
    "n1",
    "kappa",
    "rank_mode",
    "trial",
    "solve_seconds",
    "rel_accuracy",
    "detected_rank",
    "attempts_used",
)


@dataclass(frozen=True)
class BenchConfig:
    n1_list: tuple
    kappa_list: tuple
    rank_modes: tuple = RANK_MODES
    trials: int = 10
    n2: int = 32
    seed: int = 0
    fmt: str = "csv"
    repeat: int = 5
    warmup: bool = True
    transposed_dagger: bool = False
    max_attempts: int = 50
    factor_tol: float = 1e-10

    def __post_init__(self):
        bad = set(self.rank_modes) - set(RANK_MODES)
        if bad:
            raise ValueError(f"unknown rank modes {sorted(bad)}")
        if self.trials < 1 or self.repeat < 1:
            raise ValueError("trials and repeat must be positive")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {self.fmt!r}")

    @property
    def methods(self) -> tuple:
        return ("gi123", "dagger", "dagger_t") if self.transposed_dagger else ("gi123", "dagger")


@dataclass(frozen=True)
class BenchRecord:
    method: str
    n1: int
    kappa: float
    rank_mode: str
    trial: int
    solve_seconds: float
    rel_accuracy: float
    detected_rank: int
    attempts_used: int


@dataclass(frozen=True)
class BenchFailure:
    n1: int
    kappa: float
    rank_mode: str
    trial: int
    seed: int
    attempts_used: int
    message: str


@dataclass
class BenchResult:
    config: BenchConfig
    records: list
    failures: list


@dataclass(frozen=True)
class CellSummary:
    method: str
    n1: int
    kappa: float
    rank_mode: str
    count: int
    failures: int
    mean_seconds: float
    median_seconds: float
    mean_rel_accuracy: float


def problem_seed(seed: int, n1: int, kappa: float, rank_mode: str, trial: int) -> int:
    """Seed of one grid problem; independent of the other grid entries."""
    key = [seed, n1, int(round(kappa * 1000)), RANK_MODES.index(rank_mode), trial]
    return int(np.random.SeedSequence(key).generate_state(1, np.uint64)[0])


_SOLVERS = {
    "gi123": lambda p, evaluate: solve_123(p, evaluate=evaluate),
    "dagger": lambda p, evaluate: solve_dagger(p, evaluate=evaluate),
    "dagger_t": lambda p, evaluate: solve_dagger(p, transposed=True, evaluate=evaluate),
}


def run_bench(config: BenchConfig, progress=None) -> BenchResult:
    """Run the whole grid sequentially. ``progress`` is called with a short text line per trial."""
    records, failures = [], []
    methods = config.methods
    for n1 in config.n1_list:
        for kappa in config.kappa_list:
            warmed = False
            for trial in range(config.trials):
                gens = {}
                for mode in config.rank_modes:
                    seed = problem_seed(config.seed, n1, kappa, mode, trial)
                    params = GenParams.standard(
                        n1,
                        kappa,
                        deficient=mode == "deficient",
                        seed=seed,
                        n2=config.n2,
                        max_attempts=config.max_attempts,
                        factor_tol=config.factor_tol,
                    )
                    try:
                        gens[mode] = generate(params)
                    except GenerationError as exc:
                        failures.append(BenchFailure(n1, kappa, mode, trial, seed, exc.attempts_used, str(exc)))
                if not gens:
                    continue
                if config.warmup and not warmed:
                    for mode, g in gens.items():
                        for method in methods:
                            _SOLVERS[method](g.problem, False)
                    warmed = True

                first, best = {}, defaultdict(lambda: float("inf"))
                for rep in range(config.repeat):
                    order = methods if rep % 2 == 0 else methods[::-1]
                    for mode, g in gens.items():
                        for method in order:
                            rpt = _SOLVERS[method](g.problem, rep == 0)
                            if rep == 0:
                                first[mode, method] = rpt
                            best[mode, method] = min(best[mode, method], rpt.solve_seconds)

                for mode, g in gens.items():
                    for method in methods:
                        rpt = first[mode, method]
                        rel = (rpt.e_method - g.e_exact) / g.e_exact if g.e_exact else float("nan")
                        records.append(
                            BenchRecord(
                                method, n1, float(kappa), mode, trial, best[mode, method], rel,
                                rpt.detected_rank, g.attempts_used,
                            )
                        )
                if progress:
                    progress(f"n1={n1} kappa={kappa:g} trial={trial + 1}/{config.trials}")
    return BenchResult(config, records, failures)


def summarize(records, failures=()) -> list:
    groups = defaultdict(list)
    for r in records:
        groups[r.method, r.n1, r.kappa, r.rank_mode].append(r)
    failed = defaultdict(int)
    for f in failures:
        failed[f.n1, float(f.kappa), f.rank_mode] += 1
    cells = []
    for (method, n1, kappa, mode), recs in sorted(groups.items(), key=lambda kv: _cell_order(kv[0])):
        times = [r.solve_seconds for r in recs]
        cells.append(
            CellSummary(
                method, n1, kappa, mode, len(recs), failed[n1, kappa, mode],
                statistics.fmean(times), statistics.median(times),
                statistics.fmean(r.rel_accuracy for r in recs),
            )
        )
    return cells


def _cell_order(key):
    method, n1, kappa, mode = key
    return (RANK_MODES.index(mode), method, n1, kappa)


def format_summary(cells, failures=()) -> str:
    """Text tables of mean time, median time and mean accuracy per cell."""
    cols = sorted({(c.n1, c.kappa) for c in cells})
    rows = []
    for c in cells:
        if (c.rank_mode, c.method) not in rows:
            rows.append((c.rank_mode, c.method))
    by_key = {(c.rank_mode, c.method, c.n1, c.kappa): c for c in cells}

    out = io.StringIO()
    head = "".join(f"{'n1=%d k=%g' % col:>16}" for col in cols)
    tables = (
        ("Mean solving time (ms)", lambda c: f"{c.mean_seconds * 1e3:16.3f}"),
        ("Median solving time (ms)", lambda c: f"{c.median_seconds * 1e3:16.3f}"),
        ("Mean accuracy (E_method - E_exact) / E_exact", lambda c: f"{c.mean_rel_accuracy:16.3e}"),
    )
    for title, fmt in tables:
        out.write(f"{title}\n{'':22}{head}\n")
        for mode, method in rows:
            line = f"  {mode:<10}{method:<10}"
            for n1, kappa in cols:
                cell = by_key.get((mode, method, n1, kappa))
                line += fmt(cell) if cell else f"{'-':>16}"
            out.write(line + "\n")
        out.write("\n")
    if failures:
        out.write(f"Generation failures ({len(failures)}), excluded from the means:\n")
        for f in failures:
            out.write(f"  n1={f.n1} kappa={f.kappa:g} {f.rank_mode} trial={f.trial} seed={f.seed}: {f.message}\n")
    return out.getvalue()


def write_records(records, path, fmt: str = "csv") -> None:
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps([asdict(r) for r in records], indent=1) + "\n")
        return
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in (getattr(r, c) for c in CSV_COLUMNS)])


def read_records(path, fmt: str = "csv") -> list:
    types = {f.name: f.type for f in fields(BenchRecord)}
    conv = {"str": str, "int": int, "float": float}
    path = Path(path)
    if fmt == "json":
        rows = json.loads(path.read_text())
    else:
        with path.open(newline="") as fh:
            rows = list(csv.DictReader(fh))
    return [BenchRecord(**{k: conv[types[k]](v) for k, v in row.items()}) for row in rows]
