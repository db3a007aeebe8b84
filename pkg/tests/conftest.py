import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from ot_semiassign import _backend
from ot_semiassign.core import new_problem

BACKENDS = _backend.available()

FIXTURE_COST = [[1, 2], [3, 0], [2, 2], [0, 5]]
FIXTURE_CAPS = [2, 2]


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def fixture_problem():
    return new_problem(FIXTURE_COST, FIXTURE_CAPS)


def random_caps(rng, m, n):
    cuts = np.sort(rng.choice(np.arange(1, m), size=n - 1, replace=False)) if n > 1 else []
    bounds = np.concatenate([[0], cuts, [m]])
    return np.diff(bounds).astype(int)


def random_problem(rng, m, n, low=-1.0, high=1.0):
    return new_problem(rng.uniform(low, high, size=(m, n)), random_caps(rng, m, n))


def enumerate_assignments(caps):
    """Every row->column map with column j used exactly caps[j] times."""
    m = int(sum(caps))
    n = len(caps)
    for combo in itertools.product(range(n), repeat=m):
        if all(combo.count(j) == caps[j] for j in range(n)):
            yield combo


def oracle_min_cost(cost, caps):
    cost = np.asarray(cost, dtype=float)
    rows = np.arange(cost.shape[0])
    return min(cost[rows, list(a)].sum() for a in enumerate_assignments(list(caps)))


@st.composite
def problems(draw, max_m=8, max_n=3, low=-1.0, high=1.0):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, min(max_n, m)))
    cuts = sorted(draw(st.sets(st.integers(1, m - 1), min_size=n - 1, max_size=n - 1))) if n > 1 else []
    caps = np.diff([0, *cuts, m])
    cost = draw(
        st.lists(
            st.lists(st.floats(low, high, allow_nan=False, allow_infinity=False), min_size=n, max_size=n),
            min_size=m,
            max_size=m,
        )
    )
    return new_problem(cost, caps)


def integer_plans(row_mass, col_mass):
    """All nonnegative integer matrices with the given margins."""
    m, n = len(row_mass), len(col_mass)

    def rows(i, remaining):
        if i == m:
            if not any(remaining):
                yield []
            return
        for parts in itertools.product(*(range(min(r, row_mass[i]) + 1) for r in remaining)):
            if sum(parts) == row_mass[i]:
                rest = [r - q for r, q in zip(remaining, parts)]
                for tail in rows(i + 1, rest):
                    yield [list(parts)] + tail

    yield from rows(0, list(col_mass))


def best_selection(payoff, roles):
    payoff = np.asarray(payoff, dtype=float)
    slots = [j for j, r in enumerate(roles) for _ in range(r)]
    best = -np.inf
    for players in itertools.permutations(range(payoff.shape[0]), len(slots)):
        best = max(best, sum(payoff[i, j] for i, j in zip(players, slots)))
    return best


def best_many_to_many(payoff, needs, caps, distinct=True):
    payoff = np.asarray(payoff, dtype=float)
    n_tasks, n_agents = payoff.shape
    top = 1 if distinct else max(needs)
    best = None
    for cells in itertools.product(range(top + 1), repeat=n_tasks * n_agents):
        a = np.array(cells).reshape(n_tasks, n_agents)
        if (a.sum(axis=1) == needs).all() and (a.sum(axis=0) <= caps).all():
            val = float((a * payoff).sum())
            best = val if best is None else max(best, val)
    return best


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
