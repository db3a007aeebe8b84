"""Map applications onto semi-assignment instances and back.

* Wasserstein independence statistic: the transport between the empirical
  joint measure and the product of its marginals collapses to an ``n^2 x n``
  instance with every column capacity equal to ``n``.
* General two-marginal transport with integer masses: duplicate row ``i``
  ``n_i`` times.
* One-to-many and many-to-many assignment, padded with zero-payoff dummies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from . import modified
from .core import SemiAssignProblem, SolveReport, new_problem
from .errors import (
    DimensionMismatch,
    EmptySamples,
    Infeasible,
    InvalidEntry,
    InvalidP,
    MapMismatch,
    MassMismatch,
    NegativePayoff,
    TooFewPlayers,
)


@dataclass(frozen=True)
class SampleSet:
    y: np.ndarray
    z: np.ndarray

    @property
    def n(self) -> int:
        return self.y.shape[0]


def sample_set(y, z) -> SampleSet:
    y = np.asarray(y, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if y.ndim == 1:
        y = y[:, None]
    if z.ndim == 1:
        z = z[:, None]
    if y.ndim != 2 or z.ndim != 2:
        raise DimensionMismatch("samples must be 2-D (count x dimension)")
    if y.shape[0] == 0 or z.shape[0] == 0:
        raise EmptySamples("no samples")
    if y.shape[0] != z.shape[0]:
        raise DimensionMismatch(f"{y.shape[0]} y samples but {z.shape[0]} z samples")
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(z))):
        raise InvalidEntry("samples contain NaN or infinite entries")
    return SampleSet(y, z)


@dataclass(frozen=True)
class GeneralOTSpec:
    cost: np.ndarray
    row_masses: np.ndarray
    col_masses: np.ndarray

    @property
    def total(self) -> int:
        return int(self.row_masses.sum())


def general_ot_spec(cost, row_masses, col_masses) -> GeneralOTSpec:
    c = np.asarray(cost, dtype=np.float64)
    r = np.asarray(row_masses, dtype=np.int64)
    k = np.asarray(col_masses, dtype=np.int64)
    if c.ndim != 2 or c.shape != (r.size, k.size):
        raise DimensionMismatch(f"cost {c.shape} vs masses ({r.size}, {k.size})")
    if np.any(r <= 0) or np.any(k <= 0):
        raise MassMismatch("masses must be positive integers")
    if r.sum() != k.sum():
        raise MassMismatch(f"row mass {r.sum()} != column mass {k.sum()}")
    return GeneralOTSpec(c, r, k)


@dataclass(frozen=True)
class RowDupMap:
    owner: np.ndarray  # source row of each duplicated row
    n_source_rows: int


@dataclass(frozen=True)
class TransportPlan:
    mass: np.ndarray

    def cost(self, c) -> float:
        return float((self.mass * np.asarray(c)).sum())


@dataclass(frozen=True)
class PadInfo:
    dummy_col: Optional[int] = None
    dummy_row: Optional[int] = None
    dummy_need: int = 0


def build_independence_problem(samples: SampleSet, p: float = 1) -> SemiAssignProblem:
    """Row ``i*n + j`` is the product atom ``(y_i, z_j)``; column ``k`` the joint atom.

    ``cost[i*n + j, k] = ||y_i - y_k||_p + ||z_j - z_k||_p``.
    """
    if p not in (1, 2):
        raise InvalidP(f"p must be 1 or 2, got {p!r}")
    return _independence_problem(samples, p)


def _independence_problem(samples, p):
    n = samples.n
    if n < 1:
        raise EmptySamples("no samples")
    dy = cdist(samples.y, samples.y, "minkowski", p=p)
    dz = cdist(samples.z, samples.z, "minkowski", p=p)
    cost = (dy[:, None, :] + dz[None, :, :]).reshape(n * n, n)
    return new_problem(cost, np.full(n, n))


def wasserstein_independence_statistic(samples: SampleSet, p: float = 1, **solve_opts) -> float:
    problem = build_independence_problem(samples, p)
    report = modified.solve(problem, **solve_opts)
    return report.objective / problem.m


def build_general_ot(spec: GeneralOTSpec) -> tuple[SemiAssignProblem, RowDupMap]:
    if spec.row_masses.sum() != spec.col_masses.sum():
        raise MassMismatch("row and column masses differ")
    owner = np.repeat(np.arange(spec.cost.shape[0]), spec.row_masses)
    problem = new_problem(spec.cost[owner], spec.col_masses)
    return problem, RowDupMap(owner, spec.cost.shape[0])


def extract_plan(report: SolveReport, dup: RowDupMap, spec: GeneralOTSpec) -> TransportPlan:
    r2c = report.matching.row_to_col
    m, n = spec.cost.shape
    if dup.owner.shape[0] != r2c.shape[0] or dup.n_source_rows != m:
        raise MapMismatch("report does not come from this duplication map")
    if np.any(r2c < 0) or np.any(r2c >= n):
        raise MapMismatch("report has unassigned or out-of-range rows")
    counts = np.zeros((m, n))
    np.add.at(counts, (dup.owner, r2c), 1.0)
    return TransportPlan(counts / spec.total)


def _check_payoff(payoff):
    p = np.asarray(payoff, dtype=np.float64)
    if p.ndim != 2 or p.size == 0:
        raise DimensionMismatch("payoff must be a nonempty matrix")
    if not np.all(np.isfinite(p)):
        raise InvalidEntry("payoff contains NaN or infinite entries")
    if np.any(p < 0):
        raise NegativePayoff("payoffs must be nonnegative")
    return p


def build_one_to_many(payoff, roles) -> tuple[SemiAssignProblem, PadInfo]:
    """Players (rows) to roles (columns); role ``j`` takes exactly ``roles[j]`` players."""
    p = _check_payoff(payoff)
    roles = np.asarray(roles, dtype=np.int64)
    if roles.shape != (p.shape[1],):
        raise DimensionMismatch(f"{roles.size} roles for {p.shape[1]} payoff columns")
    if np.any(roles <= 0):
        raise InvalidEntry("role sizes must be positive")
    m1, need = p.shape[0], int(roles.sum())
    if m1 < need:
        raise TooFewPlayers(f"{m1} players cannot fill {need} role slots")
    pad = PadInfo()
    caps = roles
    if m1 > need:
        p = np.hstack([p, np.zeros((m1, 1))])
        caps = np.append(roles, m1 - need)
        pad = PadInfo(dummy_col=p.shape[1] - 1, dummy_need=m1 - need)
    return new_problem(p.max() - p, caps), pad


def build_many_to_many(payoff, task_needs, agent_caps) -> tuple[GeneralOTSpec, PadInfo]:
    """Tasks (rows) to agents (columns) as an integer-mass transport problem.

    Task ``i`` receives ``task_needs[i]`` units and agent ``j`` gives
    ``agent_caps[j]``; a zero-payoff dummy task absorbs spare agent capacity.
    This is a relaxation of the 0/1 problem: the transport plan may send
    several units of one task to the same agent.  :func:`solve_many_to_many`
    solves the 0/1 problem exactly.
    """
    p = _check_payoff(payoff)
    needs = np.asarray(task_needs, dtype=np.int64)
    caps = np.asarray(agent_caps, dtype=np.int64)
    if needs.shape != (p.shape[0],) or caps.shape != (p.shape[1],):
        raise DimensionMismatch("needs/caps do not match the payoff shape")
    if np.any(needs <= 0) or np.any(caps <= 0):
        raise InvalidEntry("needs and capacities must be positive")
    spare = int(caps.sum() - needs.sum())
    if spare < 0:
        raise Infeasible(f"tasks need {needs.sum()} slots, agents offer {caps.sum()}")
    pad = PadInfo()
    if spare > 0:
        p = np.vstack([p, np.zeros((1, p.shape[1]))])
        needs = np.append(needs, spare)
        pad = PadInfo(dummy_row=p.shape[0] - 1, dummy_need=spare)
    return general_ot_spec(p.max() - p, needs, caps), pad


@dataclass
class AssignmentResult:
    selection: np.ndarray  # 0/1 (or count) matrix over the unpadded payoff
    payoff: float
    report: SolveReport


def solve_one_to_many(payoff, roles, **solve_opts) -> AssignmentResult:
    p = _check_payoff(payoff)
    problem, pad = build_one_to_many(p, roles)
    report = modified.solve(problem, **solve_opts)
    sel = np.zeros(p.shape)
    for i, j in enumerate(report.matching.row_to_col.tolist()):
        if j != pad.dummy_col:
            sel[i, j] = 1.0
    return AssignmentResult(sel, float((sel * p).sum()), report)


def solve_many_to_many_relaxed(payoff, task_needs, agent_caps, **solve_opts) -> AssignmentResult:
    """Solve the transport relaxation; ``selection`` holds unit counts."""
    p = _check_payoff(payoff)
    spec, pad = build_many_to_many(p, task_needs, agent_caps)
    problem, dup = build_general_ot(spec)
    report = modified.solve(problem, **solve_opts)
    counts = extract_plan(report, dup, spec).mass * spec.total
    counts = np.rint(counts[: p.shape[0]])
    return AssignmentResult(counts, float((counts * p).sum()), report)


def build_many_to_many_distinct(payoff, task_needs, agent_caps):
    """Exact 0/1 many-to-many instance as a semi-assignment problem.

    Each (task, agent) pair becomes a row of unit mass that either goes to its
    agent's column (pair used) or to its task's "unused" column.  Task column
    ``i`` has capacity ``n_agents - needs[i]``; agent column ``j`` capacity
    ``caps[j]``, topped up by zero-payoff dummy rows.  Forbidden moves carry a
    penalty larger than any payoff difference, so an optimum pays a penalty
    only when no 0/1 plan exists.
    """
    p = _check_payoff(payoff)
    needs = np.asarray(task_needs, dtype=np.int64)
    caps = np.asarray(agent_caps, dtype=np.int64)
    n_tasks, n_agents = p.shape
    if needs.shape != (n_tasks,) or caps.shape != (n_agents,):
        raise DimensionMismatch("needs/caps do not match the payoff shape")
    if np.any(needs <= 0) or np.any(caps <= 0):
        raise InvalidEntry("needs and capacities must be positive")
    spare = int(caps.sum() - needs.sum())
    if spare < 0:
        raise Infeasible(f"tasks need {needs.sum()} slots, agents offer {caps.sum()}")
    if np.any(needs > n_agents):
        raise Infeasible("a task needs more distinct agents than exist")
    unused_tasks = [i for i in range(n_tasks) if needs[i] < n_agents]
    n_cols = n_agents + len(unused_tasks)
    n_rows = n_tasks * n_agents + spare
    top = float(p.max())
    penalty = 2.0 * n_rows * max(top, 1.0) + 1.0
    cost = np.full((n_rows, n_cols), penalty)
    for i, j in itertools.product(range(n_tasks), range(n_agents)):
        r = i * n_agents + j
        cost[r, j] = top - p[i, j]
        if i in unused_tasks:
            cost[r, n_agents + unused_tasks.index(i)] = top
    cost[n_tasks * n_agents :, :n_agents] = top
    col_caps = np.concatenate([caps, n_agents - needs[unused_tasks]])
    return new_problem(cost, col_caps), penalty


def solve_many_to_many(payoff, task_needs, agent_caps, **solve_opts) -> AssignmentResult:
    """Maximum-payoff 0/1 plan: task ``i`` gets ``needs[i]`` distinct agents,
    agent ``j`` works at most ``caps[j]`` tasks."""
    p = _check_payoff(payoff)
    problem, penalty = build_many_to_many_distinct(p, task_needs, agent_caps)
    report = modified.solve(problem, **solve_opts)
    n_tasks, n_agents = p.shape
    r2c = report.matching.row_to_col
    rows = np.arange(problem.m)
    if np.any(problem.cost[rows, r2c] >= penalty):
        raise Infeasible("no 0/1 plan meets every task's need within agent capacities")
    sel = (r2c[: n_tasks * n_agents].reshape(n_tasks, n_agents) == np.arange(n_agents)).astype(float)
    return AssignmentResult(sel, float((sel * p).sum()), report)
