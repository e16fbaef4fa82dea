"""Randomised and exhaustive consistency suites behind ``monge-domp verify``."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, Iterator, List, Tuple

import numpy as np

from .benders import (
    Orientation,
    count_encodings,
    cutsets_equal,
    enumerate_encodings,
)
from .core import TpInstance, is_monge
from .domp import (
    CostLadder,
    DompInstance,
    closest_assignment,
    ordered_median_value,
    subproblem_tp,
    xbar_histogram,
)
from .monge_tp import (
    column_exit_rows,
    dual_backward,
    dual_forward,
    duals_formula_col,
    duals_formula_row,
    northwest_corner,
    row_entry_columns,
    staircase_membership,
)
from .oracles import tp_optimal_value
from .harness import random_monge_tp


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    detail: str = ""


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def micro_grid(max_dim: int = 3, max_total: int = 6) -> Iterator[TpInstance]:
    for p, q in product(range(1, max_dim + 1), repeat=2):
        zero = [[0] * q for _ in range(p)]
        for total in range(max_total + 1):
            for s in compositions(total, p):
                for d in compositions(total, q):
                    yield TpInstance(s, d, zero)


def traversal_indices(path, p: int, q: int):
    first_col = [q] * p
    last_row = [-1] * q
    for i, j in path.cells:
        first_col[i] = min(first_col[i], j)
        last_row[j] = max(last_row[j], i)
    return tuple(first_col), tuple(last_row)


def check_staircase(inst: TpInstance) -> str:
    """Return an empty string if the path agrees with every closed form."""
    path = northwest_corner(inst)
    cells = set(path.cells)
    member = {
        (i, j) for i in range(inst.p) for j in range(inst.q) if staircase_membership(inst, (i, j))
    }
    if cells != member:
        return f"membership {sorted(member)} != path {sorted(cells)}"
    first_col, last_row = traversal_indices(path, inst.p, inst.q)
    if row_entry_columns(inst) != first_col:
        return f"row entry columns {row_entry_columns(inst)} != {first_col}"
    if column_exit_rows(inst) != last_row:
        return f"column exit rows {column_exit_rows(inst)} != {last_row}"
    rows = [0] * inst.p
    cols = [0] * inst.q
    for (i, j), x in zip(path.cells, path.shipments):
        if x < 0:
            return "negative shipment"
        rows[i] += x
        cols[j] += x
    if tuple(rows) != inst.supply or tuple(cols) != inst.demand:
        return "shipments do not reproduce supplies and demands"
    return ""


def check_duals(inst: TpInstance) -> str:
    path = northwest_corner(inst)
    primal = path.objective(inst)
    backward = dual_backward(inst, path)
    forward = dual_forward(inst, path)
    row = duals_formula_row(inst)
    col = duals_formula_col(inst)
    if forward != row:
        return f"forward {forward} != row formula {row}"
    if backward.shifted(-backward.u[0]) != forward:
        return "forward is not the backward duals shifted by -u1"
    if col != row.shifted(inst.cost[0][0]):
        return "column formula is not the row formula shifted by c11"
    if not is_monge(inst.cost):
        return ""
    for name, dual in (("backward", backward), ("forward", forward), ("row", row), ("col", col)):
        if dual.objective(inst) != primal:
            return f"{name} dual objective {dual.objective(inst)} != primal {primal}"
        if not dual.is_feasible(inst):
            return f"{name} duals infeasible"
        for (i, j), x in zip(path.cells, path.shipments):
            if x > 0 and dual.u[i] + dual.v[j] != inst.cost[i][j]:
                return f"{name} duals violate complementary slackness at {(i, j)}"
    return ""


def _run(name: str, cases, check: Callable[..., str]) -> SuiteResult:
    count = 0
    for case in cases:
        count += 1
        problem = check(case)
        if problem:
            return SuiteResult(name, False, count, problem)
    return SuiteResult(name, True, count)


def suite_staircase(rng: np.random.Generator, samples: int = 1000, max_dim: int = 15) -> SuiteResult:
    def cases():
        yield from micro_grid()
        for _ in range(samples):
            yield random_monge_tp(rng, max_dim)

    return _run("staircase", cases(), check_staircase)


def suite_duals(rng: np.random.Generator, samples: int = 1000, max_dim: int = 12) -> SuiteResult:
    return _run("duals", (random_monge_tp(rng, max_dim) for _ in range(samples)), check_duals)


def suite_oracle(rng: np.random.Generator, samples: int = 300, max_dim: int = 8) -> SuiteResult:
    def check(inst):
        greedy = northwest_corner(inst).objective(inst)
        best = tp_optimal_value(inst)
        if greedy != best:
            return f"greedy {greedy} != min-cost flow {best}"
        return ""

    return _run("oracle", (random_monge_tp(rng, max_dim) for _ in range(samples)), check)


def random_domp(rng: np.random.Generator, n: int, levels: int = 0) -> DompInstance:
    """Random instance; ``levels > 0`` restricts costs to {1..levels} (short ladders)."""
    high = levels if levels else 1000
    cost = rng.integers(1, high + 1, size=(n, n)).tolist()
    lam = sorted((int(x) for x in rng.integers(-n, n + 1, size=n)), reverse=True)
    p = int(rng.integers(1, n + 1))
    return DompInstance(p, cost, lam)


def suite_subproblem(rng: np.random.Generator, samples: int = 200, max_n: int = 12) -> SuiteResult:
    def check(inst):
        facilities = sorted(rng.choice(inst.n, size=inst.p, replace=False).tolist())
        ladder = CostLadder.from_instance(inst)
        hist = xbar_histogram(inst, closest_assignment(inst, facilities), ladder)
        tp = subproblem_tp(inst, hist, ladder)
        if not is_monge(tp.cost):
            return "subproblem cost matrix is not Monge"
        if tp_optimal_value(tp) != ordered_median_value(inst, facilities):
            return "subproblem optimum differs from the ordered median value"
        return ""

    cases = (random_domp(rng, int(rng.integers(1, max_n + 1))) for _ in range(samples))
    return _run("subproblem", cases, check)


def suite_lemma8(max_n: int = 5, max_g: int = 5) -> SuiteResult:
    def check(ng):
        n, g = ng
        for orientation in Orientation:
            encodings = enumerate_encodings(n, g, orientation)
            if len(encodings) != count_encodings(n, g) or len(set(encodings)) != len(encodings):
                return f"n={n}, g={g}, {orientation.value}: {len(encodings)} encodings"
        return ""

    return _run("lemma8", product(range(1, max_n + 1), range(0, max_g + 1)), check)


def suite_lemma9(rng: np.random.Generator, samples: int = 20, max_n: int = 4, max_g: int = 4) -> SuiteResult:
    def cases():
        for _ in range(samples):
            yield random_domp(rng, int(rng.integers(1, max_n + 1)), int(rng.integers(1, max_g + 1)))

    def check(inst):
        if not cutsets_equal(inst, CostLadder.from_instance(inst)):
            return f"cut sets differ for {inst}"
        return ""

    return _run("lemma9", cases(), check)


SUITES = ("staircase", "duals", "oracle", "subproblem", "lemma8", "lemma9")


def run_suites(names, seed: int = 0, max_n: int = 4, max_g: int = 4, samples: int = 1000) -> List[SuiteResult]:
    rng = np.random.Generator(np.random.PCG64(seed))
    runners: Dict[str, Callable[[], SuiteResult]] = {
        "staircase": lambda: suite_staircase(rng, samples),
        "duals": lambda: suite_duals(rng, samples),
        "oracle": lambda: suite_oracle(rng, max(1, samples // 4)),
        "subproblem": lambda: suite_subproblem(rng, max(1, samples // 5)),
        "lemma8": lambda: suite_lemma8(max_n, max_g),
        "lemma9": lambda: suite_lemma9(rng, 20, max_n, max_g),
    }
    return [runners[name]() for name in names]
