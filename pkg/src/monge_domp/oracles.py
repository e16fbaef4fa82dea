"""Ground-truth solvers that share no code path with the Monge machinery."""
from __future__ import annotations

import heapq
import os
from itertools import combinations
from typing import List, Optional, Tuple

from .core import TpInstance, check_money

DEFAULT_ENUM_CAP = 16
ENUM_CAP_ENV = "MONGE_DOMP_ENUM_CAP"


class EnumerationCapError(RuntimeError):
    """Instance too large for exhaustive enumeration."""


def enum_cap(cap: Optional[int] = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(ENUM_CAP_ENV)
    return int(env) if env else DEFAULT_ENUM_CAP


class _FlowGraph:
    def __init__(self, size: int):
        self.adj: List[List[int]] = [[] for _ in range(size)]
        # parallel edge arrays: head, residual capacity, cost
        self.head: List[int] = []
        self.cap: List[int] = []
        self.cost: List[int] = []

    def add_edge(self, a: int, b: int, cap: int, cost: int) -> None:
        self.adj[a].append(len(self.head))
        self.head.append(b)
        self.cap.append(cap)
        self.cost.append(cost)
        self.adj[b].append(len(self.head))
        self.head.append(a)
        self.cap.append(0)
        self.cost.append(-cost)


def tp_min_cost_flow(inst: TpInstance) -> Tuple[int, List[List[int]]]:
    """Solve the transportation LP by successive shortest paths.

    Returns the optimal cost and an integral optimal shipment matrix.
    Dijkstra runs on reduced costs; the initial potentials come from the
    acyclic source -> rows -> columns -> sink layering, so negative costs
    are fine.
    """
    inst.require_balanced()
    p, q = inst.p, inst.q
    source, sink = p + q, p + q + 1
    g = _FlowGraph(p + q + 2)
    total = sum(inst.supply)
    for i, s in enumerate(inst.supply):
        g.add_edge(source, i, s, 0)
    arc = [[0] * q for _ in range(p)]
    for i in range(p):
        for j in range(q):
            arc[i][j] = len(g.head)
            g.add_edge(i, p + j, total, inst.cost[i][j])
    for j, d in enumerate(inst.demand):
        g.add_edge(p + j, sink, d, 0)

    potential = [0] * (p + q + 2)
    for j in range(q):
        potential[p + j] = min(inst.cost[i][j] for i in range(p))
    potential[sink] = min(potential[p:p + q])

    flow = cost = 0
    inf = float("inf")
    while flow < total:
        dist = [inf] * len(potential)
        parent = [-1] * len(potential)
        dist[source] = 0
        heap = [(0, source)]
        while heap:
            d, a = heapq.heappop(heap)
            if d > dist[a]:
                continue
            for e in g.adj[a]:
                if g.cap[e] <= 0:
                    continue
                b = g.head[e]
                nd = d + g.cost[e] + potential[a] - potential[b]
                if nd < dist[b]:
                    dist[b] = nd
                    parent[b] = e
                    heapq.heappush(heap, (nd, b))
        if dist[sink] == inf:
            raise RuntimeError("no augmenting path in a balanced instance")
        for a in range(len(potential)):
            if dist[a] < inf:
                potential[a] += dist[a]
        push = total - flow
        b = sink
        while b != source:
            e = parent[b]
            push = min(push, g.cap[e])
            b = g.head[e ^ 1]
        b = sink
        while b != source:
            e = parent[b]
            g.cap[e] -= push
            g.cap[e ^ 1] += push
            cost += push * g.cost[e]
            b = g.head[e ^ 1]
        flow += push

    shipments = [[g.cap[arc[i][j] ^ 1] for j in range(q)] for i in range(p)]
    return check_money(cost), shipments


def tp_optimal_value(inst: TpInstance) -> int:
    return tp_min_cost_flow(inst)[0]


def domp_enumerate(inst, cap: Optional[int] = None) -> Tuple[int, Tuple[int, ...]]:
    """Exact DOMP optimum by trying every p-subset.

    Ties go to the lexicographically smallest facility set (0-based indices).
    """
    limit = enum_cap(cap)
    if inst.n > limit:
        raise EnumerationCapError(f"n={inst.n} exceeds the enumeration cap {limit}")
    lam = inst.lam
    best_value, best_set = None, None
    for subset in combinations(range(inst.n), inst.p):
        costs = sorted(min(row[j] for j in subset) for row in inst.cost)
        value = sum(w * x for w, x in zip(lam, costs))
        if best_value is None or value < best_value:
            best_value, best_set = value, subset
    return check_money(best_value), best_set
