"""Discrete ordered median problem: instances, objective and subproblem data."""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple

from .core import TpInstance, _as_matrix, check_money


@dataclass(frozen=True)
class DompInstance:
    """n sites that are both clients and candidate facilities.

    ``cost[i][j]`` serves client i from facility j (scaled money, > 0).
    ``lam`` must be non-increasing.
    """

    n: int
    p: int
    cost: Tuple[Tuple[int, ...], ...]
    lam: Tuple[int, ...]

    def __init__(self, p: int, cost: Sequence[Sequence[int]], lam: Sequence[int]):
        matrix = _as_matrix(cost)
        n = len(matrix)
        if len(matrix[0]) != n:
            raise ValueError("cost matrix must be square")
        if not 1 <= p <= n:
            raise ValueError(f"p={p} must lie in [1, {n}]")
        if any(x <= 0 for row in matrix for x in row):
            raise ValueError("allocation costs must be strictly positive")
        lam = tuple(int(w) for w in lam)
        if len(lam) != n:
            raise ValueError(f"lambda has length {len(lam)}, expected {n}")
        if any(a < b for a, b in zip(lam, lam[1:])):
            raise ValueError("lambda must be non-increasing")
        for w in lam:
            check_money(w)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", int(p))
        object.__setattr__(self, "cost", matrix)
        object.__setattr__(self, "lam", lam)


@dataclass(frozen=True)
class CostLadder:
    """Zero followed by the distinct positive costs, strictly increasing."""

    values: Tuple[int, ...]

    @classmethod
    def from_instance(cls, inst: DompInstance) -> "CostLadder":
        return cls((0,) + tuple(sorted({x for row in inst.cost for x in row})))

    @property
    def g(self) -> int:
        return len(self.values) - 1

    @property
    def rank(self) -> Dict[int, int]:
        return {value: h for h, value in enumerate(self.values)}

    def rank_of(self, value: int) -> int:
        h = bisect_left(self.values, value)
        if h == len(self.values) or self.values[h] != value:
            raise KeyError(f"cost {value} is not on the ladder")
        return h


@dataclass(frozen=True)
class Assignment:
    open: Tuple[int, ...]
    assign: Tuple[int, ...]
    alloc_costs: Tuple[int, ...]


def _facility_set(inst: DompInstance, facilities: Iterable[int]) -> Tuple[int, ...]:
    chosen = tuple(sorted(set(facilities)))
    if not chosen:
        raise ValueError("facility set is empty")
    if chosen[0] < 0 or chosen[-1] >= inst.n:
        raise IndexError(f"facility index out of range in {chosen}")
    return chosen


def closest_assignment(inst: DompInstance, facilities: Iterable[int]) -> Assignment:
    """Serve each client from its cheapest open facility, lowest index on ties."""
    chosen = _facility_set(inst, facilities)
    assign, costs = [], []
    for row in inst.cost:
        best = min(chosen, key=lambda j: (row[j], j))
        assign.append(best)
        costs.append(row[best])
    return Assignment(chosen, tuple(assign), tuple(costs))


def ordered_median(lam: Sequence[int], values: Iterable[int]) -> int:
    return check_money(sum(w * x for w, x in zip(lam, sorted(values))))


def ordered_median_value(inst: DompInstance, facilities: Iterable[int]) -> int:
    chosen = _facility_set(inst, facilities)
    if len(chosen) != inst.p:
        raise ValueError(f"expected {inst.p} open facilities, got {len(chosen)}")
    return ordered_median(inst.lam, (min(row[j] for j in chosen) for row in inst.cost))


def assignment_matrices(inst: DompInstance, a: Assignment):
    """Expand an assignment into 0/1 (x, y) as nested lists."""
    x = [[0] * inst.n for _ in range(inst.n)]
    for i, j in enumerate(a.assign):
        x[i][j] = 1
    y = [1 if j in a.open else 0 for j in range(inst.n)]
    return x, y


def in_p_median_polytope(inst: DompInstance, x, y) -> bool:
    """Check the integer p-median constraints, including closest assignment."""
    n = inst.n
    if any(v not in (0, 1) for v in y) or any(v not in (0, 1) for row in x for v in row):
        return False
    if sum(y) != inst.p:
        return False
    for i in range(n):
        if sum(x[i]) != 1:
            return False
        if any(x[i][j] > y[j] for j in range(n)):
            return False
        for m in range(n):
            farther = sum(x[i][j] for j in range(n) if inst.cost[i][j] > inst.cost[i][m])
            if farther + y[m] > 1:
                return False
    return True


def xbar_histogram(inst: DompInstance, a: Assignment, ladder: CostLadder) -> Tuple[int, ...]:
    """Number of clients whose allocation cost sits on each ladder rung."""
    hist = [0] * len(ladder.values)
    for i, j in enumerate(a.assign):
        if inst.cost[i][j] != a.alloc_costs[i]:
            raise ValueError(f"assignment of client {i} disagrees with the cost matrix")
        hist[ladder.rank_of(a.alloc_costs[i])] += 1
    return tuple(hist)


def subproblem_tp(inst: DompInstance, hist: Sequence[int], ladder: CostLadder) -> TpInstance:
    """Positions x rungs transportation problem with costs lam[l] * ladder[h]."""
    if len(hist) != len(ladder.values):
        raise ValueError("histogram length does not match the ladder")
    if sum(hist) != inst.n:
        raise ValueError(f"histogram sums to {sum(hist)}, expected {inst.n}")
    cost = [[w * c for c in ladder.values] for w in inst.lam]
    return TpInstance([1] * inst.n, hist, cost)


def theta_lower_bound(inst: DompInstance) -> int:
    """Model-independent lower bound on the ordered median objective."""
    row_min = sorted(min(row) for row in inst.cost)
    row_max = sorted(max(row) for row in inst.cost)
    return check_money(
        sum(w * (row_min[i] if w >= 0 else row_max[i]) for i, w in enumerate(inst.lam))
    )
