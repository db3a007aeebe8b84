"""Time the compiled and pure-Python kernels on independence-test instances.

Usage: python3 benchmarks/bench_backends.py [--sizes 6,9,12] [--repeats 3]
"""

import argparse
import time

from ot_semiassign import _backend, bench, modified
from ot_semiassign.baselines import duplicate_columns, hungarian_solve
from ot_semiassign.builders import build_independence_problem


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="6,9,12")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    backends = _backend.available()
    print(f"backends: {', '.join(backends)}")
    print("solver,n,m," + ",".join(f"{b}_s" for b in backends) + (",speedup" if len(backends) > 1 else ""))
    for n in (int(s) for s in args.sizes.split(",")):
        problem = build_independence_problem(bench.gen_synthetic(n, bench.trial_seed(0, n, 0)), 1)
        square = duplicate_columns(problem)
        for name, run in (
            # empty start so the kernel does every augmentation
            ("modified", lambda b: modified.solve(problem, init="empty", backend=b)),
            ("hungarian", lambda b: hungarian_solve(square, backend=b)),
        ):
            times = [best_of(lambda: run(b), args.repeats) for b in backends]
            line = f"{name},{n},{problem.m}," + ",".join(f"{t:.5f}" for t in times)
            if len(times) > 1:
                line += f",{times[1] / times[0]:.1f}x"
            print(line)


if __name__ == "__main__":
    main()
