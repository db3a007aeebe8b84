"""Command-line interface.

Exit status: 0 on success, 1 on usage errors, 2 on data or solver errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import bench, modified
from .baselines import brute_force_solve, duplicate_columns, hungarian_solve
from .builders import (
    sample_set,
    solve_many_to_many,
    solve_many_to_many_relaxed,
    solve_one_to_many,
    wasserstein_independence_statistic,
)
from .core import new_problem, to_max_weight, verify_certificate
from .errors import SemiAssignError


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _read_rows(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None


def _floats(row, where):
    try:
        return [float(c) for c in row]
    except ValueError:
        raise DataError(f"{where}: non-numeric value in {row}") from None


def read_problem_csv(path):
    """Header ``caps,<m_1>,...,<m_n>`` then one row of ``n`` costs per line."""
    rows = _read_rows(path)
    if not rows or rows[0][0].strip().lower() != "caps":
        raise DataError(f"{path}: first row must be 'caps,<m_1>,...,<m_n>'")
    try:
        caps = [int(c) for c in rows[0][1:]]
    except ValueError:
        raise DataError(f"{path}: capacities must be integers") from None
    cost = [_floats(r, f"{path} line {k + 2}") for k, r in enumerate(rows[1:])]
    if any(len(r) != len(caps) for r in cost):
        raise DataError(f"{path}: every cost row needs {len(caps)} values")
    return new_problem(cost, caps)


def read_samples_csv(path):
    """Header ``#dy=<d_y>,y_1,...,z_1,...`` then one sample per row."""
    rows = _read_rows(path)
    if not rows or not rows[0][0].strip().startswith("#dy="):
        raise DataError(f"{path}: header must start with '#dy=<d_y>'")
    try:
        dy = int(rows[0][0].strip()[4:])
    except ValueError:
        raise DataError(f"{path}: bad #dy token {rows[0][0]!r}") from None
    data = [_floats(r, f"{path} line {k + 2}") for k, r in enumerate(rows[1:])]
    if not data:
        raise DataError(f"{path}: no samples")
    width = len(data[0])
    if any(len(r) != width for r in data) or not 0 < dy < width:
        raise DataError(f"{path}: rows must have d_y={dy} y-values followed by z-values")
    arr = np.array(data)
    return sample_set(arr[:, :dy], arr[:, dy:])


def read_payoff_csv(path):
    rows = _read_rows(path)
    if not rows:
        raise DataError(f"{path}: empty payoff file")
    data = [_floats(r, f"{path} line {k + 1}") for k, r in enumerate(rows)]
    if any(len(r) != len(data[0]) for r in data):
        raise DataError(f"{path}: ragged payoff matrix")
    return np.array(data)


def read_sidecar(path):
    """Optional ``<payoff>.caps`` file with lines ``caps,...`` and ``needs,...``."""
    side = Path(str(path) + ".caps")
    out = {}
    if side.exists():
        for row in _read_rows(side):
            try:
                out[row[0].strip().lower()] = [int(c) for c in row[1:]]
            except ValueError:
                raise DataError(f"{side}: capacities must be integers") from None
    return out


def _cmd_solve(args, out):
    problem = read_problem_csv(args.problem)
    if args.solver == "modified":
        report = modified.solve(problem, tight_eps=args.eps)
        cert = verify_certificate(report.dual, report.matching, to_max_weight(problem), problem.caps)
        status = "ok" if cert.ok else "FAILED"
        cert_line = (
            f"certificate: {status} (dual_feasible={cert.dual_feasible} "
            f"complementary_slack={cert.complementary_slack} gap={cert.duality_gap:.3g})"
        )
    elif args.solver == "hungarian":
        report = hungarian_solve(duplicate_columns(problem), tight_eps=args.eps)
        cert_line = "certificate: n/a (square instance)"
    else:
        report = brute_force_solve(problem)
        cert_line = "certificate: n/a (exhaustive)"
    print(f"objective: {_fmt(report.objective)}", file=out)
    print(f"scaled_objective: {_fmt(report.scaled_objective)}", file=out)
    print("assignment: " + " ".join(str(j) for j in report.assignment), file=out)
    print(cert_line, file=out)
    print(f"op_count: {report.op_count}", file=out)


def _cmd_indep(args, out):
    samples = read_samples_csv(args.samples)
    print(f"statistic: {_fmt(wasserstein_independence_statistic(samples, args.p))}", file=out)


def _cmd_assign(args, out):
    payoff = read_payoff_csv(args.payoff)
    side = read_sidecar(args.payoff)
    caps = args.caps if args.caps is not None else side.get("caps")
    if caps is None:
        raise UsageError("assign: --caps is required (or a <payoff>.caps sidecar)")
    if args.mode == "one-to-many":
        result = solve_one_to_many(payoff, caps)
    else:
        needs = args.needs if args.needs is not None else side.get("needs")
        if needs is None:
            raise UsageError("assign many-to-many: --needs is required (or a sidecar 'needs' line)")
        solver = solve_many_to_many_relaxed if args.relaxed else solve_many_to_many
        result = solver(payoff, needs, caps)
    print(f"total_payoff: {_fmt(result.payoff)}", file=out)
    print("plan:", file=out)
    for row in result.selection:
        print(",".join(str(int(v)) for v in row), file=out)


def _cmd_bench(args, out):
    config = bench.SweepConfig(
        sizes=args.sizes,
        solvers=args.solvers,
        case=args.case,
        trials=args.trials,
        p=args.p,
        seed=args.seed,
        threads=args.threads,
    )
    records = bench.run_sweep(config)
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            bench.write_records(records, fh)
        summary_out = out
    else:
        bench.write_records(records, out)
        summary_out = sys.stderr
    rows, slopes = bench.summarize(records)
    print("solver,n,min_ops,mean_ops,max_ops,min_ns,mean_ns,max_ns", file=summary_out)
    for r in rows:
        print(
            f"{r.solver},{r.n},{r.min_ops},{r.mean_ops:.1f},{r.max_ops},"
            f"{r.min_ns},{r.mean_ns:.0f},{r.max_ns}",
            file=summary_out,
        )
    for solver, slope in slopes.items():
        print(f"slope[{solver}]: {slope:.3f}", file=summary_out)


def build_parser():
    parser = _Parser(prog="ot-semiassign", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("solve", help="solve a semi-assignment problem file")
    s.add_argument("problem")
    s.add_argument("--eps", type=float, default=None, help="tightness tolerance")
    s.add_argument("--solver", choices=("modified", "hungarian", "brute"), default="modified")
    s.set_defaults(func=_cmd_solve)

    t = sub.add_parser("indep-test", help="Wasserstein independence statistic of a samples file")
    t.add_argument("samples")
    t.add_argument("--p", type=int, choices=(1, 2), default=1)
    t.set_defaults(func=_cmd_indep)

    a = sub.add_parser("assign", help="one-to-many or many-to-many assignment")
    a.add_argument("mode", choices=("one-to-many", "many-to-many"))
    a.add_argument("payoff")
    a.add_argument("--caps", type=_int_list, default=None, help="role sizes / agent capacities")
    a.add_argument("--needs", type=_int_list, default=None, help="task needs (many-to-many)")
    a.add_argument("--relaxed", action="store_true", help="allow repeated task-agent pairs")
    a.set_defaults(func=_cmd_assign)

    b = sub.add_parser("bench", help="benchmark sweep on synthetic independence instances")
    b.add_argument("--sizes", type=_int_list, required=True)
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--solvers", type=_str_list, default=["modified", "hungarian"])
    b.add_argument("--case", choices=bench.CASES, default="independent")
    b.add_argument("--p", type=int, choices=(1, 2), default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--threads", type=int, default=None)
    b.add_argument("--out", default=None)
    b.set_defaults(func=_cmd_bench)
    return parser


def cli_dispatch(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        args.func(args, out)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (DataError, SemiAssignError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(cli_dispatch())
