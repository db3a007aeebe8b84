"""Exact semi-assignment solver: Hungarian search on pseudo-matchings.

Alternating trees are rooted at free *columns*, the side with the capacities,
so each outer loop costs O(mn) and the whole solve O(m^2 n).  A column is
free while its usage is below its capacity; when a column joins the tree all
rows currently matched to it join the row side of the tree at once.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _backend, _pykernels
from .core import (
    Labeling,
    PseudoMatching,
    SemiAssignProblem,
    SolveReport,
    WeightMatrix,
    default_tight_eps,
    is_perfect,
    to_max_weight,
)
from .errors import InvalidOptions, NotPerfect


@dataclass
class SearchState:
    """Snapshot of the alternating tree after a search step."""

    S: list[int] = field(default_factory=list)
    T: list[int] = field(default_factory=list)
    slack: list[float] = field(default_factory=list)
    slack_arg: list[int] = field(default_factory=list)
    prev_col: list[int] = field(default_factory=list)
    prev_row: list[int] = field(default_factory=list)


@dataclass
class AugmentOutcome:
    root: int
    path: list[tuple[int, int, int]]
    label_updates: int
    op_count: int
    state: SearchState

    @property
    def added_edges(self) -> list[tuple[int, int]]:
        return [(r, new) for r, new, _ in self.path]

    @property
    def removed_edges(self) -> list[tuple[int, int]]:
        return [(r, old) for r, _, old in self.path if old >= 0]


def init_labeling(weights: WeightMatrix, tight_eps: Optional[float] = None) -> Labeling:
    w = weights.w
    eps = default_tight_eps(w) if tight_eps is None else float(tight_eps)
    return Labeling(w.max(axis=1).astype(np.float64), np.zeros(w.shape[1]), eps)


def _greedy(weights, labeling, caps, matching, kernels):
    return kernels.greedy_match(
        weights.w,
        labeling.row_labels,
        labeling.col_labels,
        np.asarray(caps, dtype=np.int64),
        labeling.tight_eps,
        matching.row_to_col,
        matching.col_usage,
    )


def greedy_init_matching(weights: WeightMatrix, labeling: Labeling, caps) -> PseudoMatching:
    m, n = weights.w.shape
    matching = PseudoMatching.empty(m, n)
    _greedy(weights, labeling, caps, matching, _backend.get())
    return matching


def grow_and_augment(
    problem: SemiAssignProblem,
    weights: WeightMatrix,
    labeling: Labeling,
    matching: PseudoMatching,
    state: Optional[SearchState] = None,
    on_update: Optional[Callable[[Labeling, PseudoMatching, float], None]] = None,
) -> AugmentOutcome:
    """Run one outer loop of the search and grow ``matching`` by one edge.

    ``labeling`` and ``matching`` are updated in place.  ``on_update`` is
    called after every dual step with copies of the current labels and
    matching, which is how the tests check invariants mid-search.  This is the
    step-by-step reference path; :func:`solve` uses the fast kernels.
    """
    if is_perfect(matching, problem):
        raise NotPerfect("matching is already perfect; nothing to augment")
    search = _pykernels.ModifiedSearch(
        weights.w,
        problem.caps,
        labeling.row_labels,
        labeling.col_labels,
        matching.row_to_col,
        matching.col_usage,
        labeling.tight_eps,
    )
    hook = None
    if on_update is not None:

        def hook(s, alpha):
            lab = Labeling(np.array(s.rl), np.array(s.cl), labeling.tight_eps)
            pm = PseudoMatching(
                np.array(s.r2c, dtype=np.int64), np.array(s.usage, dtype=np.int64)
            )
            on_update(lab, pm, alpha)

    ops, path, n_alpha = search.step(hook)
    search.write_back(
        labeling.row_labels, labeling.col_labels, matching.row_to_col, matching.col_usage
    )
    snap = SearchState(
        list(search.S),
        list(search.T),
        list(search.slack),
        list(search.slack_arg),
        list(search.prev_col),
        list(search.prev_row),
    )
    if state is not None:
        state.__dict__.update(snap.__dict__)
    return AugmentOutcome(search.root, path, n_alpha, ops, snap)


def solve(
    problem: SemiAssignProblem,
    tight_eps: Optional[float] = None,
    count_ops: bool = True,
    init: str = "greedy",
    backend: Optional[str] = None,
) -> SolveReport:
    """Minimum-cost perfect pseudo-matching with its dual certificate.

    ``init`` is ``"greedy"`` (tight-edge pass before the search) or
    ``"empty"``.  ``backend`` picks ``"cython"`` or ``"python"`` kernels; the
    default is whichever was selected at import.
    """
    if tight_eps is not None and not tight_eps >= 0:
        raise InvalidOptions(f"tight_eps must be nonnegative, got {tight_eps}")
    if init not in ("greedy", "empty"):
        raise InvalidOptions(f"unknown init {init!r}")
    kernels = _backend.get(backend)
    t0 = time.perf_counter_ns()
    weights = to_max_weight(problem)
    m, n = weights.w.shape
    labeling = init_labeling(weights, tight_eps)
    ops = m * n  # row maxima
    matching = PseudoMatching.empty(m, n)
    if init == "greedy":
        ops += _greedy(weights, labeling, problem.caps, matching, kernels)
    initial = matching.size
    k_ops, n_aug, n_alpha = kernels.modified_augment_all(
        weights.w,
        problem.caps,
        labeling.row_labels,
        labeling.col_labels,
        matching.row_to_col,
        matching.col_usage,
        labeling.tight_eps,
    )
    ops += k_ops
    elapsed = time.perf_counter_ns() - t0
    assert n_aug == m - initial
    objective = float(problem.cost[np.arange(m), matching.row_to_col].sum())
    return SolveReport(
        matching=matching,
        objective=objective,
        scaled_objective=objective / m,
        dual=labeling,
        op_count=int(ops) if count_ops else 0,
        elapsed_ns=elapsed,
        solver="modified",
        augmentations=int(n_aug),
        label_updates=int(n_alpha),
        extra={"backend": kernels.BACKEND, "initial_matched": initial, "weights": weights},
    )
