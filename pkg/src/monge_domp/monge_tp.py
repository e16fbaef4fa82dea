"""Greedy primal and closed-form duals for balanced Monge transportation problems.

Indices are 0-based throughout: row ``i`` here is row ``i + 1`` in the usual
mathematical notation.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from itertools import accumulate
from typing import Optional, Tuple

from .core import Cell, DualSolution, Move, StaircasePath, TpInstance, check_money


def northwest_corner(inst: TpInstance) -> StaircasePath:
    """Fill cells greedily from the top-left corner.

    Moves down when the current row's supply is exhausted (unless already in
    the last row), right otherwise. Zero shipments on the path are kept.
    """
    inst.require_balanced()
    p, q = inst.p, inst.q
    supply_left = list(inst.supply)
    demand_left = list(inst.demand)
    cells, moves, shipments = [], [], []
    i = j = 0
    while j < q:
        x = min(supply_left[i], demand_left[j])
        cells.append((i, j))
        shipments.append(x)
        supply_left[i] -= x
        demand_left[j] -= x
        if supply_left[i] == 0 and i < p - 1:
            moves.append(Move.DOWN)
            i += 1
        else:
            moves.append(Move.RIGHT)
            j += 1
    # the final step leaves the grid and is not part of the path
    moves.pop()
    return StaircasePath(tuple(cells), tuple(moves), tuple(shipments))


def _prefix_sums(inst: TpInstance):
    """Return (supply before row i, demand through column j) as lists."""
    supply_before = [0] + list(accumulate(inst.supply))[:-1]
    demand_through = list(accumulate(inst.demand))
    return supply_before, demand_through


def staircase_membership(inst: TpInstance, cell: Cell) -> bool:
    """Closed-form test for whether the northwest-corner path visits ``cell``."""
    inst.require_balanced()
    i, j = cell
    if not (0 <= i < inst.p and 0 <= j < inst.q):
        raise IndexError(f"cell {cell} outside the {inst.p}x{inst.q} grid")
    supply_before = sum(inst.supply[:i])
    supply_through = supply_before + inst.supply[i]
    demand_before = sum(inst.demand[:j])
    demand_through = demand_before + inst.demand[j]
    first = supply_before <= demand_through or i == 0
    second = supply_through > demand_before or i == inst.p - 1 or j == 0
    return first and second


def row_entry_columns(inst: TpInstance) -> Tuple[int, ...]:
    """First column visited in each row, from prefix sums alone.

    Entry 0 is always 0 since the path starts in the corner.
    """
    inst.require_balanced()
    supply_before, demand_through = _prefix_sums(inst)
    return (0,) + tuple(
        bisect_left(demand_through, supply_before[i]) for i in range(1, inst.p)
    )


def column_exit_rows(inst: TpInstance) -> Tuple[int, ...]:
    """Last row visited in each column, from prefix sums alone.

    The last entry is always ``p - 1`` since the path ends in the corner.
    """
    inst.require_balanced()
    supply_before, demand_through = _prefix_sums(inst)
    return tuple(
        bisect_right(supply_before, demand_through[j]) - 1 for j in range(inst.q - 1)
    ) + (inst.p - 1,)


def _check_path(inst: TpInstance, path: StaircasePath) -> None:
    if path.length != inst.p + inst.q - 1 or len(path.moves) != path.length - 1:
        raise ValueError(
            f"path of length {path.length} with {len(path.moves)} moves does not fit "
            f"a {inst.p}x{inst.q} instance"
        )


def dual_backward(inst: TpInstance, path: StaircasePath) -> DualSolution:
    """Backtrack the path, pinning the last column dual to zero."""
    _check_path(inst, path)
    c = inst.cost
    u = [0] * inst.p
    v = [0] * inst.q
    moves = path.moves + (Move.DOWN,)
    for (i, j), move in zip(reversed(path.cells), reversed(moves)):
        if move is Move.DOWN:
            u[i] = c[i][j] - v[j]
        else:
            v[j] = c[i][j] - u[i]
    return DualSolution(u, v)


def dual_forward(
    inst: TpInstance,
    path: StaircasePath,
    u1: Optional[int] = None,
    v1: Optional[int] = None,
) -> DualSolution:
    """Walk the path forward from a pinned first-row or first-column dual.

    With neither argument given this pins ``u[0] = 0``.
    """
    _check_path(inst, path)
    if u1 is not None and v1 is not None:
        raise ValueError("initialize either u1 or v1, not both")
    c = inst.cost
    u = [0] * inst.p
    v = [0] * inst.q
    if v1 is None:
        u[0] = 0 if u1 is None else u1
        previous = Move.RIGHT
    else:
        v[0] = v1
        previous = Move.DOWN
    moves = (previous,) + path.moves
    for (i, j), move in zip(path.cells, moves):
        if move is Move.DOWN:
            u[i] = c[i][j] - v[j]
        else:
            v[j] = c[i][j] - u[i]
    return DualSolution(u, v)


def duals_formula_row(inst: TpInstance) -> DualSolution:
    """Closed-form duals encoded by the row-entry columns; ``u[0] == 0``."""
    c = inst.cost
    entry = row_entry_columns(inst)
    u = [0] * inst.p
    for k in range(1, inst.p):
        jk = entry[k]
        u[k] = u[k - 1] + c[k][jk] - c[k - 1][jk]
    v = []
    for j in range(inst.q):
        total = c[0][j]
        for k in range(1, inst.p):
            jk = entry[k]
            if jk > j:
                break
            total += c[k][j] - c[k - 1][j] - c[k][jk] + c[k - 1][jk]
        v.append(check_money(total))
    return DualSolution(u, v)


def duals_formula_col(inst: TpInstance) -> DualSolution:
    """Closed-form duals encoded by the column-exit rows; ``v[0] == 0``."""
    c = inst.cost
    exit_row = column_exit_rows(inst)
    v = [0] * inst.q
    for k in range(1, inst.q):
        ik = exit_row[k - 1]
        v[k] = v[k - 1] + c[ik][k] - c[ik][k - 1]
    u = []
    for i in range(inst.p):
        total = c[i][0]
        for k in range(1, inst.q):
            ik = exit_row[k - 1]
            if ik > i:
                break
            total += c[i][k] - c[i][k - 1] - c[ik][k] + c[ik][k - 1]
        u.append(check_money(total))
    return DualSolution(u, v)
