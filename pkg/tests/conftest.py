import numpy as np
import pytest
from hypothesis import strategies as st

from monge_domp.core import TpInstance
from monge_domp.domp import DompInstance

WORKED_COST = [[1, 4, 5], [4, 2, 6], [5, 6, 3]]

_acceptance_lines = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.module.__name__.endswith("test_acceptance"):
        title = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _acceptance_lines.append(f"[{'PASS' if report.passed else 'FAIL'}] {title}")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20260101))


@st.composite
def balanced_vectors(draw, max_dim=6, max_qty=6):
    p = draw(st.integers(1, max_dim))
    q = draw(st.integers(1, max_dim))
    s = draw(st.lists(st.integers(0, max_qty), min_size=p, max_size=p))
    d = draw(st.lists(st.integers(0, max_qty), min_size=q - 1, max_size=q - 1))
    # last demand absorbs the difference; rebalance supplies if it would go negative
    gap = sum(s) - sum(d)
    if gap < 0:
        s[-1] += -gap
        gap = 0
    return s, d + [gap]


@st.composite
def monge_matrices(draw, p, q, max_step=4):
    inc = draw(st.lists(st.lists(st.integers(0, max_step), min_size=q, max_size=q), min_size=p, max_size=p))
    rows = draw(st.lists(st.integers(-20, 20), min_size=p, max_size=p))
    cols = draw(st.lists(st.integers(-20, 20), min_size=q, max_size=q))
    return [
        [
            rows[i] + cols[j] + sum(inc[k][l] for k in range(i + 1) for l in range(j, q))
            for j in range(q)
        ]
        for i in range(p)
    ]


@st.composite
def monge_tps(draw, max_dim=6, max_qty=6):
    s, d = draw(balanced_vectors(max_dim, max_qty))
    return TpInstance(s, d, draw(monge_matrices(len(s), len(d))))


@st.composite
def any_tps(draw, max_dim=5, max_qty=5):
    s, d = draw(balanced_vectors(max_dim, max_qty))
    cost = draw(st.lists(st.lists(st.integers(-30, 30), min_size=len(d), max_size=len(d)),
                         min_size=len(s), max_size=len(s)))
    return TpInstance(s, d, cost)


@st.composite
def domp_instances(draw, max_n=6, max_cost=50):
    n = draw(st.integers(1, max_n))
    cost = draw(st.lists(st.lists(st.integers(1, max_cost), min_size=n, max_size=n), min_size=n, max_size=n))
    lam = sorted(draw(st.lists(st.integers(-n, n), min_size=n, max_size=n)), reverse=True)
    p = draw(st.integers(1, n))
    return DompInstance(p, cost, lam)
