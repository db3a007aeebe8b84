"""Synthetic data, benchmark sweeps and log-log slope fitting.

Random numbers come from numpy's ``PCG64`` bit generator.  Each trial gets its
own seed derived from ``SeedSequence([master_seed, n, trial])`` so adding sizes
or trials never perturbs existing ones.
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import modified
from .baselines import duplicate_columns, hungarian_solve, sinkhorn_solve
from .builders import SampleSet, build_independence_problem, sample_set
from .errors import InsufficientData, InvalidParams, SolverDisagreement

SOLVERS = ("modified", "hungarian", "sinkhorn")
EXACT_SOLVERS = ("modified", "hungarian")
CASES = ("independent", "dependent")
RECORD_FIELDS = ("solver", "case", "n", "trial", "seed", "op_count", "elapsed_ns", "objective")
AGREEMENT_TOL = 1e-8


@dataclass
class SweepConfig:
    sizes: Sequence[int]
    solvers: Sequence[str] = ("modified", "hungarian")
    case: str = "independent"
    trials: int = 10
    p: int = 1
    seed: int = 0
    reg: float = 0.1
    accuracy: float = 1e-4
    max_iter: int = 100_000
    threads: int | None = None

    def __post_init__(self):
        self.sizes = [int(s) for s in self.sizes]
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise InvalidParams("sizes must be positive")
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise InvalidParams("sizes must be strictly increasing")
        if self.trials < 1:
            raise InvalidParams("trials must be >= 1")
        unknown = set(self.solvers) - set(SOLVERS)
        if unknown or not self.solvers:
            raise InvalidParams(f"unknown solvers {sorted(unknown)}")
        if self.case not in CASES:
            raise InvalidParams(f"case must be one of {CASES}")
        if self.p not in (1, 2):
            raise InvalidParams("p must be 1 or 2")


@dataclass(frozen=True)
class BenchRecord:
    solver: str
    case: str
    n: int
    trial: int
    seed: int
    op_count: int
    elapsed_ns: int
    objective: float

    def row(self) -> list[str]:
        return [
            self.solver,
            self.case,
            str(self.n),
            str(self.trial),
            str(self.seed),
            str(self.op_count),
            str(self.elapsed_ns),
            repr(self.objective),
        ]


def trial_seed(seed: int, n: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, n, trial]).generate_state(1, np.uint64)[0])


def gen_synthetic(n: int, seed: int, case: str = "independent") -> SampleSet:
    """Draw ``X ~ N(5*1, 30*I)`` in 10-d and ``Y`` with 25 Unif(10, 20) coordinates.

    The independent case pairs ``X`` with ``Y``; the dependent case pairs ``X``
    with ``Z = X[:5] + Y[:5]``.
    """
    if n < 1:
        raise InvalidParams("n must be >= 1")
    if case not in CASES:
        raise InvalidParams(f"case must be one of {CASES}")
    rng = np.random.Generator(np.random.PCG64(seed))
    x = rng.normal(5.0, math.sqrt(30.0), size=(n, 10))
    y = rng.uniform(10.0, 20.0, size=(n, 25))
    if case == "independent":
        return sample_set(x, y)
    return sample_set(x, x[:, :5] + y[:, :5])


def _run_trial(config: SweepConfig, n: int, trial: int) -> list[BenchRecord]:
    seed = trial_seed(config.seed, n, trial)
    problem = build_independence_problem(gen_synthetic(n, seed, config.case), config.p)
    out = []
    exact = {}
    for solver in config.solvers:
        if solver == "modified":
            rep = modified.solve(problem)
            ops, ns, obj = rep.op_count, rep.elapsed_ns, rep.scaled_objective
            exact[solver] = obj
        elif solver == "hungarian":
            t0 = time.perf_counter_ns()
            rep = hungarian_solve(duplicate_columns(problem))
            ops, obj = rep.op_count, rep.scaled_objective
            ns = time.perf_counter_ns() - t0
            exact[solver] = obj
        else:
            rep = sinkhorn_solve(problem, config.reg, config.accuracy, config.max_iter)
            ops, ns, obj = rep.op_count, rep.elapsed_ns, rep.objective
        out.append(BenchRecord(solver, config.case, n, trial, seed, int(ops), int(ns), float(obj)))
    values = list(exact.values())
    if values and max(values) - min(values) > AGREEMENT_TOL:
        raise SolverDisagreement(f"n={n} trial={trial}: exact objectives differ {exact}")
    return out


def default_threads() -> int:
    env = os.environ.get("OT_SEMIASSIGN_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(config: SweepConfig) -> list[BenchRecord]:
    jobs = [(n, t) for n in config.sizes for t in range(config.trials)]
    threads = config.threads or default_threads()
    if threads <= 1:
        chunks = [_run_trial(config, n, t) for n, t in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda job: _run_trial(config, *job), jobs))
    order = {s: k for k, s in enumerate(SOLVERS)}
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: (order[r.solver], r.n, r.trial))
    return records


def estimate_loglog_slope(records: Iterable[BenchRecord], solver: str) -> float:
    """OLS slope of ln(mean op_count per size) against ln(n)."""
    by_n: dict[int, list[int]] = {}
    for r in records:
        if r.solver == solver:
            by_n.setdefault(r.n, []).append(r.op_count)
    if len(by_n) < 3:
        raise InsufficientData(f"need >= 3 sizes for {solver!r}, have {len(by_n)}")
    sizes = sorted(by_n)
    x = np.log(sizes)
    y = np.log([np.mean(by_n[s]) for s in sizes])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


@dataclass
class SizeSummary:
    solver: str
    n: int
    min_ops: int
    mean_ops: float
    max_ops: int
    min_ns: int
    mean_ns: float
    max_ns: int


def summarize(records: Sequence[BenchRecord]) -> tuple[list[SizeSummary], dict[str, float]]:
    groups: dict[tuple[str, int], list[BenchRecord]] = {}
    for r in records:
        groups.setdefault((r.solver, r.n), []).append(r)
    rows = []
    for (solver, n), rs in sorted(groups.items(), key=lambda kv: (SOLVERS.index(kv[0][0]), kv[0][1])):
        ops = [r.op_count for r in rs]
        ns = [r.elapsed_ns for r in rs]
        rows.append(
            SizeSummary(solver, n, min(ops), float(np.mean(ops)), max(ops), min(ns), float(np.mean(ns)), max(ns))
        )
    slopes = {}
    for solver in dict.fromkeys(r.solver for r in records):
        try:
            slopes[solver] = estimate_loglog_slope(records, solver)
        except InsufficientData:
            pass
    return rows, slopes


def write_records(records: Sequence[BenchRecord], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(RECORD_FIELDS)
    for r in records:
        writer.writerow(r.row())


def read_records(fh) -> list[BenchRecord]:
    reader = csv.DictReader(fh)
    return [
        BenchRecord(
            d["solver"],
            d["case"],
            int(d["n"]),
            int(d["trial"]),
            int(d["seed"]),
            int(d["op_count"]),
            int(d["elapsed_ns"]),
            float(d["objective"]),
        )
        for d in reader
    ]


def records_to_csv(records: Sequence[BenchRecord]) -> str:
    buf = io.StringIO()
    write_records(records, buf)
    return buf.getvalue()
