"""Problem instances, pseudo-matchings, labelings and optimality certificates.

A semi-assignment instance is an ``m x n`` cost matrix together with a column
capacity profile ``caps`` where ``sum(caps) == m``.  A feasible solution sends
every row to exactly one column and column ``j`` receives exactly ``caps[j]``
rows.  The solvers work on the equivalent maximum-weight form
``w = max(C) - C``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CapacityMismatch,
    DimensionMismatch,
    EmptyProblem,
    InvalidEntry,
    NotPerfect,
)

UNASSIGNED = -1


@dataclass(frozen=True)
class SemiAssignProblem:
    cost: np.ndarray
    caps: np.ndarray

    @property
    def m(self) -> int:
        return self.cost.shape[0]

    @property
    def n(self) -> int:
        return self.cost.shape[1]


@dataclass(frozen=True)
class WeightMatrix:
    """Nonnegative weights ``w = offset - C`` with ``offset = max(C)``."""

    w: np.ndarray
    offset: float

    def to_cost(self, weight_total: float, m: int) -> float:
        # min-cost == m * offset - max-weight
        return m * self.offset - weight_total


@dataclass
class PseudoMatching:
    row_to_col: np.ndarray
    col_usage: np.ndarray

    @classmethod
    def empty(cls, m: int, n: int) -> "PseudoMatching":
        return cls(
            np.full(m, UNASSIGNED, dtype=np.int64), np.zeros(n, dtype=np.int64)
        )

    @classmethod
    def from_assignment(cls, row_to_col: Sequence[int], n: int) -> "PseudoMatching":
        r2c = np.asarray(row_to_col, dtype=np.int64)
        usage = np.bincount(r2c[r2c >= 0], minlength=n).astype(np.int64)
        return cls(r2c, usage)

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.row_to_col >= 0))

    def copy(self) -> "PseudoMatching":
        return PseudoMatching(self.row_to_col.copy(), self.col_usage.copy())


@dataclass
class Labeling:
    row_labels: np.ndarray
    col_labels: np.ndarray
    tight_eps: float = 0.0

    def reduced(self, w: np.ndarray) -> np.ndarray:
        """Matrix of ``l(i) + l(j) - w[i, j]``; tight edges are those <= tight_eps."""
        return self.row_labels[:, None] + self.col_labels[None, :] - w

    def tight_neighbors(self, w: np.ndarray, cols) -> set[int]:
        red = self.reduced(w)[:, list(cols)]
        return set(np.flatnonzero((red <= self.tight_eps).any(axis=1)).tolist())

    def copy(self) -> "Labeling":
        return Labeling(self.row_labels.copy(), self.col_labels.copy(), self.tight_eps)


@dataclass
class SolveReport:
    matching: PseudoMatching
    objective: float
    scaled_objective: float
    dual: Optional[Labeling]
    op_count: int
    elapsed_ns: int
    solver: str = "modified"
    augmentations: int = 0
    label_updates: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def elapsed(self) -> float:
        """Wall time in seconds."""
        return self.elapsed_ns * 1e-9

    @property
    def assignment(self) -> list[int]:
        return self.matching.row_to_col.tolist()


@dataclass(frozen=True)
class CertificateReport:
    dual_feasible: bool
    complementary_slack: bool
    duality_gap: float

    @property
    def ok(self) -> bool:
        return self.dual_feasible and self.complementary_slack


def new_problem(cost, caps) -> SemiAssignProblem:
    """Validate and freeze a semi-assignment instance."""
    c = np.array(cost, dtype=np.float64)
    if c.size == 0:
        raise EmptyProblem("cost matrix is empty")
    if c.ndim == 1:
        c = c[:, None]
    if c.ndim != 2:
        raise DimensionMismatch(f"cost must be a matrix, got {c.ndim} dims")
    m, n = c.shape
    k = np.asarray(caps)
    if k.ndim != 1 or k.shape[0] != n:
        raise DimensionMismatch(f"caps has length {k.size}, expected {n}")
    if not np.all(np.isfinite(c)):
        raise InvalidEntry("cost contains NaN or infinite entries")
    if not np.all(np.equal(np.mod(k, 1), 0)):
        raise CapacityMismatch("capacities must be integers")
    k = k.astype(np.int64)
    if np.any(k <= 0):
        raise CapacityMismatch("capacities must be positive")
    if int(k.sum()) != m:
        raise CapacityMismatch(f"sum of capacities {int(k.sum())} != row count {m}")
    c.setflags(write=False)
    k.setflags(write=False)
    return SemiAssignProblem(c, k)


def to_max_weight(problem: SemiAssignProblem) -> WeightMatrix:
    offset = float(problem.cost.max())
    w = offset - problem.cost
    return WeightMatrix(w, offset)


def default_tight_eps(w: np.ndarray) -> float:
    return 1e-9 * max(1.0, float(np.abs(w).max()) if w.size else 0.0)


def _check_dims(matching: PseudoMatching, m: int, n: int) -> None:
    if matching.row_to_col.shape != (m,) or matching.col_usage.shape != (n,):
        raise DimensionMismatch(
            f"matching is {matching.row_to_col.shape[0]}x{matching.col_usage.shape[0]}, "
            f"problem is {m}x{n}"
        )


def is_perfect(matching: PseudoMatching, problem: SemiAssignProblem) -> bool:
    _check_dims(matching, problem.m, problem.n)
    if np.any(matching.row_to_col < 0):
        return False
    return bool(np.array_equal(matching.col_usage, problem.caps))


def matching_cost(matching: PseudoMatching, problem: SemiAssignProblem) -> float:
    if not is_perfect(matching, problem):
        raise NotPerfect("matching is not a perfect pseudo-matching")
    rows = np.arange(problem.m)
    return float(problem.cost[rows, matching.row_to_col].sum())


def verify_certificate(
    labeling: Labeling, matching: PseudoMatching, weights: WeightMatrix, caps
) -> CertificateReport:
    """Check the primal-dual optimality certificate of a perfect pseudo-matching.

    The dual value ``sum(row_labels) + sum(caps * col_labels)`` bounds the weight
    of every perfect pseudo-matching from above; equality (up to ``m * eps``)
    proves optimality.
    """
    w = weights.w
    caps = np.asarray(caps, dtype=np.int64)
    m, n = w.shape
    _check_dims(matching, m, n)
    r2c = matching.row_to_col
    if np.any(r2c < 0) or not np.array_equal(
        np.bincount(r2c, minlength=n), caps
    ):
        raise NotPerfect("certificate requires a perfect pseudo-matching")
    eps = labeling.tight_eps
    red = labeling.reduced(w)
    feasible = bool(red.min() >= -eps)
    matched = red[np.arange(m), r2c]
    slack_ok = bool(np.abs(matched).max() <= eps)
    dual_value = labeling.row_labels.sum() + float(caps @ labeling.col_labels)
    primal = w[np.arange(m), r2c].sum()
    return CertificateReport(feasible, slack_ok, float(abs(dual_value - primal)))
