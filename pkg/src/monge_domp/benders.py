"""Benders optimality cuts for the DOMP with non-increasing weights.

The transportation subproblem over (positions x cost rungs) has a Monge cost
matrix, so its optimal duals are known in closed form. A cut is fixed by a
monotone staircase encoding ``f`` in one of two orientations:

* ``B1``: ``f[l]`` is the first rung used at position ``l`` (``f[0] == 0``).
* ``B2``: ``f[h]`` is the last position (0-based) that still uses rung ``h``,
  for ``h < g``.

Both orientations describe the same family of cuts.
"""
from __future__ import annotations

import enum
import math
import time
from bisect import bisect_left
from dataclasses import dataclass, field
from itertools import accumulate, combinations, combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import INT64_MAX, check_money
from .domp import (
    Assignment,
    CostLadder,
    DompInstance,
    closest_assignment,
    ordered_median_value,
    theta_lower_bound,
    xbar_histogram,
)
from .oracles import EnumerationCapError, enum_cap

DEFAULT_ENCODING_CAP = 10 ** 6


class Orientation(enum.Enum):
    B1 = "B1"
    B2 = "B2"


class InvalidEncodingError(ValueError):
    pass


@dataclass(frozen=True)
class StaircaseEncoding:
    orientation: Orientation
    f: Tuple[int, ...]

    def validate(self, n: int, g: int) -> None:
        f = self.f
        if any(a > b for a, b in zip(f, f[1:])):
            raise InvalidEncodingError(f"{self.orientation.value} encoding {f} is not monotone")
        if self.orientation is Orientation.B1:
            if len(f) != n or f[0] != 0 or f[-1] > g:
                raise InvalidEncodingError(f"invalid B1 encoding {f} for n={n}, g={g}")
        else:
            if len(f) != g or (f and (f[0] < 0 or f[-1] > n - 1)):
                raise InvalidEncodingError(f"invalid B2 encoding {f} for n={n}, g={g}")


@dataclass(frozen=True)
class BendersCut:
    """theta >= constant + sum_h rung_coeff[h] * (clients served at cost rung h).

    The coefficient of x_ij is ``rung_coeff[rank(c_ij)]``.
    """

    constant: int
    rung_coeff: Tuple[int, ...]
    encoding: StaircaseEncoding

    @property
    def key(self) -> Tuple[int, Tuple[int, ...]]:
        return self.constant, self.rung_coeff

    def rhs(self, hist: Sequence[int]) -> int:
        return check_money(self.constant + sum(v * x for v, x in zip(self.rung_coeff, hist)))

    def rhs_at(self, inst: DompInstance, ladder: CostLadder, x) -> int:
        """Evaluate the cut at an arbitrary n x n shipment matrix."""
        rank = ladder.rank
        total = self.constant
        for i, row in enumerate(x):
            for j, xij in enumerate(row):
                if xij:
                    total += self.rung_coeff[rank[inst.cost[i][j]]] * xij
        return check_money(total)

    def coefficient_map(self, inst: DompInstance, ladder: CostLadder) -> Dict[Tuple[int, int], int]:
        rank = ladder.rank
        return {
            (i, j): self.rung_coeff[rank[c]]
            for i, row in enumerate(inst.cost)
            for j, c in enumerate(row)
            if self.rung_coeff[rank[c]]
        }


def _weight_steps(lam: Sequence[int]) -> List[int]:
    return [lam[0]] + [lam[k] - lam[k - 1] for k in range(1, len(lam))]


def duals_b1(inst: DompInstance, ladder: CostLadder, f: Sequence[int]):
    StaircaseEncoding(Orientation.B1, tuple(f)).validate(inst.n, ladder.g)
    c = ladder.values
    step = _weight_steps(inst.lam)
    u = [0] + list(accumulate(step[k] * c[f[k]] for k in range(1, inst.n)))
    v = [
        sum(step[k] * (c[h] - c[f[k]]) for k in range(inst.n) if f[k] < h)
        for h in range(ladder.g + 1)
    ]
    return tuple(map(check_money, u)), tuple(map(check_money, v))


def duals_b2(inst: DompInstance, ladder: CostLadder, f: Sequence[int]):
    StaircaseEncoding(Orientation.B2, tuple(f)).validate(inst.n, ladder.g)
    c, lam = ladder.values, inst.lam
    rise = [c[k + 1] - c[k] for k in range(ladder.g)]
    u = [
        sum((lam[l] - lam[f[k]]) * rise[k] for k in range(ladder.g) if f[k] < l)
        for l in range(inst.n)
    ]
    v = [0] + list(accumulate(lam[f[k]] * rise[k] for k in range(ladder.g)))
    return tuple(map(check_money, u)), tuple(map(check_money, v))


def cut_from_encoding(inst: DompInstance, ladder: CostLadder, enc: StaircaseEncoding) -> BendersCut:
    duals = duals_b1 if enc.orientation is Orientation.B1 else duals_b2
    u, v = duals(inst, ladder, enc.f)
    return BendersCut(check_money(sum(u)), v, enc)


def closed_form_rhs_b1(inst: DompInstance, ladder: CostLadder, f: Sequence[int], x) -> int:
    """Aggregated right-hand side written with weight steps."""
    c = ladder.values
    n = inst.n
    total = 0
    for k, step in enumerate(_weight_steps(inst.lam)):
        base = c[f[k]]
        excess = sum(
            (cij - base) * x[i][j]
            for i, row in enumerate(inst.cost)
            for j, cij in enumerate(row)
            if cij > base
        )
        total += step * ((n - k) * base + excess)
    return check_money(total)


def closed_form_rhs_b2(inst: DompInstance, ladder: CostLadder, f: Sequence[int], x) -> int:
    """Aggregated right-hand side written with rung steps."""
    c, lam, n = ladder.values, inst.lam, inst.n
    total = 0
    for k in range(ladder.g):
        w = lam[f[k]]
        tail = sum(lam[l] - w for l in range(f[k] + 1, n))
        above = sum(
            x[i][j] for i, row in enumerate(inst.cost) for j, cij in enumerate(row) if cij > c[k]
        )
        total += (c[k + 1] - c[k]) * (tail + w * above)
    return check_money(total)


def encoding_from_histogram(hist: Sequence[int], n: int, orientation: Orientation) -> StaircaseEncoding:
    """Read the northwest-corner staircase of the subproblem off its demands."""
    if sum(hist) != n:
        raise ValueError(f"histogram sums to {sum(hist)}, expected {n}")
    cum = list(accumulate(hist))
    if orientation is Orientation.B1:
        f = (0,) + tuple(bisect_left(cum, l) for l in range(1, n))
    else:
        f = tuple(min(cum[h], n - 1) for h in range(len(hist) - 1))
    return StaircaseEncoding(orientation, f)


def separate(
    inst: DompInstance,
    ladder: CostLadder,
    a: Assignment,
    theta_bar: int,
    orientation: Orientation,
    epsilon: int = 0,
) -> Optional[BendersCut]:
    """Return the optimality cut at ``a`` if it is violated by more than epsilon."""
    hist = xbar_histogram(inst, a, ladder)
    cut = cut_from_encoding(inst, ladder, encoding_from_histogram(hist, inst.n, orientation))
    if theta_bar < cut.rhs(hist) - epsilon:
        return cut
    return None


def b1_to_b2(f1: Sequence[int], n: int, g: int) -> Tuple[int, ...]:
    return tuple(max(l for l in range(n) if f1[l] <= h) for h in range(g))


def b2_to_b1(f2: Sequence[int], n: int, g: int) -> Tuple[int, ...]:
    last = tuple(f2) + (n - 1,)
    return (0,) + tuple(min(h for h in range(g + 1) if last[h] >= l) for l in range(1, n))


def count_encodings(n: int, g: int) -> int:
    return math.comb(n + g - 1, n - 1)


def enumerate_encodings(
    n: int, g: int, orientation: Orientation, cap: int = DEFAULT_ENCODING_CAP
) -> List[StaircaseEncoding]:
    total = count_encodings(n, g)
    if total > cap:
        raise EnumerationCapError(f"{total} encodings exceed the cap {cap}")
    if orientation is Orientation.B1:
        tails = combinations_with_replacement(range(g + 1), n - 1)
        return [StaircaseEncoding(orientation, (0,) + t) for t in tails]
    return [
        StaircaseEncoding(orientation, t) for t in combinations_with_replacement(range(n), g)
    ]


def cutsets_equal(inst: DompInstance, ladder: CostLadder, cap: int = DEFAULT_ENCODING_CAP) -> bool:
    keys = {}
    for orientation in Orientation:
        keys[orientation] = {
            cut_from_encoding(inst, ladder, enc).key
            for enc in enumerate_encodings(inst.n, ladder.g, orientation, cap)
        }
    return keys[Orientation.B1] == keys[Orientation.B2]


def relative_gap(incumbent: int, bound: int) -> float:
    if incumbent == bound:
        return 0.0
    if incumbent == 0:
        return math.inf
    return (incumbent - bound) / abs(incumbent)


@dataclass
class BendersLog:
    iterations: int = 0
    cuts: List[BendersCut] = field(default_factory=list)
    generators: List[Tuple[int, ...]] = field(default_factory=list)
    visited: List[Tuple[int, ...]] = field(default_factory=list)
    incumbent: Optional[int] = None
    bound: Optional[int] = None
    wall_time_ms: float = 0.0
    separation_time_ms: float = 0.0

    @property
    def gap(self) -> float:
        return relative_gap(self.incumbent, self.bound)


@dataclass
class BendersResult:
    value: int
    facilities: Tuple[int, ...]
    status: str
    log: BendersLog


class SubsetTable:
    """All p-subsets with their cost-rung histograms, for the enumeration master."""

    def __init__(self, inst: DompInstance, ladder: CostLadder):
        self.subsets = list(combinations(range(inst.n), inst.p))
        cost = np.asarray(inst.cost, dtype=np.int64)
        index = np.asarray(self.subsets, dtype=np.intp)
        alloc = cost[:, index].min(axis=2)
        ranks = np.searchsorted(np.asarray(ladder.values, dtype=np.int64), alloc)
        hist = np.zeros((len(self.subsets), ladder.g + 1), dtype=np.int64)
        rows = np.broadcast_to(np.arange(len(self.subsets)), ranks.shape)
        np.add.at(hist, (rows, ranks), 1)
        self.hist = hist
        self.n = inst.n
        self._assignments: Dict[int, Assignment] = {}
        self._inst = inst

    def assignment(self, idx: int) -> Assignment:
        if idx not in self._assignments:
            self._assignments[idx] = closest_assignment(self._inst, self.subsets[idx])
        return self._assignments[idx]

    def cut_values(self, cut: BendersCut) -> np.ndarray:
        coeff = np.asarray(cut.rung_coeff, dtype=np.int64)
        # every histogram row sums to n
        if max(map(abs, cut.rung_coeff), default=0) * self.n + abs(cut.constant) > INT64_MAX:
            raise OverflowError("cut coefficients too large for exact int64 evaluation")
        return cut.constant + self.hist @ coeff


def solve_benders(
    inst: DompInstance,
    orientation: Orientation = Orientation.B1,
    epsilon: int = 0,
    max_iterations: Optional[int] = None,
    time_limit_ms: Optional[float] = None,
    cap: Optional[int] = None,
) -> BendersResult:
    """Cutting-plane loop with an exact enumeration master.

    The master minimises ``max(theta lower bound, cuts)`` over all p-subsets;
    its minimiser is separated at its closest assignment until no cut is
    violated by more than ``epsilon`` (scaled units).
    """
    limit = enum_cap(cap)
    if inst.n > limit:
        raise EnumerationCapError(f"n={inst.n} exceeds the enumeration cap {limit}")
    start = time.perf_counter()
    ladder = CostLadder.from_instance(inst)
    table = SubsetTable(inst, ladder)
    master = np.full(len(table.subsets), theta_lower_bound(inst), dtype=np.int64)
    log = BendersLog()
    best_set: Tuple[int, ...] = ()
    status = "limit"
    while True:
        idx = int(np.argmin(master))
        theta_bar = int(master[idx])
        log.iterations += 1
        log.bound = theta_bar
        facilities = table.subsets[idx]
        log.visited.append(facilities)
        value = ordered_median_value(inst, facilities)
        if log.incumbent is None or value < log.incumbent:
            log.incumbent, best_set = value, facilities
        tick = time.perf_counter()
        cut = separate(inst, ladder, table.assignment(idx), theta_bar, orientation, epsilon)
        log.separation_time_ms += (time.perf_counter() - tick) * 1000.0
        if cut is None:
            status = "optimal"
            break
        log.cuts.append(cut)
        log.generators.append(facilities)
        master = np.maximum(master, table.cut_values(cut))
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        if (max_iterations is not None and log.iterations >= max_iterations) or (
            time_limit_ms is not None and elapsed_ms >= time_limit_ms
        ):
            log.bound = min(int(master.min()), log.incumbent)
            break
    log.wall_time_ms = (time.perf_counter() - start) * 1000.0
    return BendersResult(log.incumbent, best_set, status, log)
