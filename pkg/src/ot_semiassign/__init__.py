"""Exact solver for the semi-assignment / special optimal-transport problem."""

from ._backend import DEFAULT as BACKEND
from .baselines import (
    ApproxReport,
    SquareAssignInstance,
    brute_force_solve,
    duplicate_columns,
    hungarian_solve,
    sinkhorn_solve,
)
from .builders import (
    GeneralOTSpec,
    PadInfo,
    RowDupMap,
    SampleSet,
    TransportPlan,
    build_general_ot,
    build_independence_problem,
    build_many_to_many,
    build_one_to_many,
    extract_plan,
    general_ot_spec,
    sample_set,
    solve_many_to_many,
    solve_one_to_many,
    wasserstein_independence_statistic,
)
from .core import (
    CertificateReport,
    Labeling,
    PseudoMatching,
    SemiAssignProblem,
    SolveReport,
    WeightMatrix,
    is_perfect,
    matching_cost,
    new_problem,
    to_max_weight,
    verify_certificate,
)
from .modified import grow_and_augment, greedy_init_matching, init_labeling, solve

__version__ = "0.1.0"
