"""Reference solvers: classic Hungarian, entropic Sinkhorn and brute force."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from . import _backend
from .core import (
    Labeling,
    PseudoMatching,
    SemiAssignProblem,
    SolveReport,
    default_tight_eps,
)
from .errors import InvalidParams, NotConverged, TooLarge

BRUTE_FORCE_LIMIT = 10**6


@dataclass(frozen=True)
class SquareAssignInstance:
    cost: np.ndarray
    col_origin: np.ndarray
    n_source_cols: int


@dataclass
class ApproxReport:
    plan: np.ndarray
    objective: float
    iterations: int
    marginal_violation: float
    rounded_plan: np.ndarray
    converged: bool
    plan_objective: float
    op_count: int
    elapsed_ns: int


def duplicate_columns(problem: SemiAssignProblem) -> SquareAssignInstance:
    """Expand column ``j`` into ``caps[j]`` identical columns (an m x m instance)."""
    origin = np.repeat(np.arange(problem.n), problem.caps)
    return SquareAssignInstance(problem.cost[:, origin], origin, problem.n)


def hungarian_solve(
    square: SquareAssignInstance,
    tight_eps: Optional[float] = None,
    backend: Optional[str] = None,
) -> SolveReport:
    """Classic Kuhn-Munkres on the square instance, mapped back to source columns.

    Uses the same greedy start, slack tracking and op-count rules as the
    modified solver.  ``dual`` is the labeling of the square instance.
    """
    kernels = _backend.get(backend)
    t0 = time.perf_counter_ns()
    c = square.cost
    k = c.shape[0]
    w = c.max() - c
    eps = default_tight_eps(w) if tight_eps is None else float(tight_eps)
    rl = w.max(axis=1).astype(np.float64)
    cl = np.zeros(k)
    ops = k * k
    r2c = np.full(k, -1, dtype=np.int64)
    used = np.zeros(k, dtype=np.int64)
    ops += kernels.greedy_match(w, rl, cl, np.ones(k, dtype=np.int64), eps, r2c, used)
    c2r = np.full(k, -1, dtype=np.int64)
    matched = np.flatnonzero(r2c >= 0)
    c2r[r2c[matched]] = matched
    k_ops, n_aug, n_alpha = kernels.hungarian_augment_all(w, rl, cl, r2c, c2r, eps)
    ops += k_ops
    elapsed = time.perf_counter_ns() - t0
    objective = float(c[np.arange(k), r2c].sum())
    matching = PseudoMatching.from_assignment(square.col_origin[r2c], square.n_source_cols)
    return SolveReport(
        matching=matching,
        objective=objective,
        scaled_objective=objective / k,
        dual=Labeling(rl, cl, eps),
        op_count=int(ops),
        elapsed_ns=elapsed,
        solver="hungarian",
        augmentations=int(n_aug),
        label_updates=int(n_alpha),
        extra={"backend": kernels.BACKEND, "square_assignment": r2c, "square_weights": w},
    )


def _round_to_polytope(plan, a, b):
    # Altschuler-Weed-Rigollet rounding onto U(a, b)
    x = np.minimum(a / np.maximum(plan.sum(axis=1), 1e-300), 1.0)
    p = plan * x[:, None]
    y = np.minimum(b / np.maximum(p.sum(axis=0), 1e-300), 1.0)
    p = p * y[None, :]
    err_r = a - p.sum(axis=1)
    err_c = b - p.sum(axis=0)
    total = err_r.sum()
    if total > 0:
        p = p + np.outer(err_r, err_c) / total
    return p


def sinkhorn_solve(
    problem: SemiAssignProblem,
    reg: float = 0.1,
    accuracy: float = 1e-4,
    max_iter: int = 100_000,
    strict: bool = False,
) -> ApproxReport:
    """Log-domain Sinkhorn on row masses ``1/m`` and column masses ``caps/m``.

    Stops when the l1 violation of both marginals is at most ``accuracy``.
    ``objective`` is the cost of ``rounded_plan``, which lies in the transport
    polytope and therefore never beats the exact optimum.  With ``strict``
    a :class:`NotConverged` carrying the report is raised on ``max_iter``.
    """
    if not reg > 0 or not accuracy > 0 or max_iter < 1:
        raise InvalidParams("reg and accuracy must be positive, max_iter >= 1")
    t0 = time.perf_counter_ns()
    C = problem.cost
    m, n = C.shape
    a = np.full(m, 1.0 / m)
    b = problem.caps / m
    log_a = np.log(a)
    log_b = np.log(b)
    f = np.zeros(m)
    g = np.zeros(n)
    neg_c = -C / reg
    plan = np.exp(neg_c)
    viol = math.inf
    converged = False
    ops = 0
    it = 0
    for it in range(1, max_iter + 1):
        f = reg * (log_a - logsumexp(neg_c + g[None, :] / reg, axis=1))
        g = reg * (log_b - logsumexp(neg_c + f[:, None] / reg, axis=0))
        ops += 2 * m * n
        plan = np.exp(neg_c + (f[:, None] + g[None, :]) / reg)
        viol = float(np.abs(plan.sum(axis=1) - a).sum() + np.abs(plan.sum(axis=0) - b).sum())
        if viol <= accuracy:
            converged = True
            break
    rounded = _round_to_polytope(plan, a, b)
    report = ApproxReport(
        plan=plan,
        objective=float((rounded * C).sum()),
        iterations=it,
        marginal_violation=viol,
        rounded_plan=rounded,
        converged=converged,
        plan_objective=float((plan * C).sum()),
        op_count=ops,
        elapsed_ns=time.perf_counter_ns() - t0,
    )
    if strict and not converged:
        raise NotConverged(f"no convergence after {max_iter} iterations (violation {viol:.3g})", report)
    return report


def multinomial(m: int, caps) -> int:
    out = math.factorial(m)
    for c in caps:
        out //= math.factorial(int(c))
    return out


def brute_force_solve(problem: SemiAssignProblem, limit: int = BRUTE_FORCE_LIMIT) -> SolveReport:
    """Exhaustive minimum over every capacity-respecting assignment.

    Assignments are visited in lexicographic order of ``row_to_col`` and only
    a strictly better cost replaces the incumbent, so ties resolve to the
    lexicographically smallest assignment.
    """
    m, n = problem.m, problem.n
    count = multinomial(m, problem.caps)
    if count > limit:
        raise TooLarge(f"{count} assignments exceed the brute-force limit {limit}")
    t0 = time.perf_counter_ns()
    cost = problem.cost.tolist()
    remaining = problem.caps.tolist()
    current = [0] * m
    best = [math.inf, None]
    reads = 0

    def visit(i, partial):
        nonlocal reads
        if i == m:
            if partial < best[0]:
                best[0] = partial
                best[1] = list(current)
            return
        row = cost[i]
        for j in range(n):
            if remaining[j]:
                remaining[j] -= 1
                current[i] = j
                reads += 1
                visit(i + 1, partial + row[j])
                remaining[j] += 1

    visit(0, 0.0)
    matching = PseudoMatching.from_assignment(best[1], n)
    objective = float(problem.cost[np.arange(m), matching.row_to_col].sum())
    return SolveReport(
        matching=matching,
        objective=objective,
        scaled_objective=objective / m,
        dual=None,
        op_count=reads,
        elapsed_ns=time.perf_counter_ns() - t0,
        solver="brute",
        extra={"enumerated": count},
    )
