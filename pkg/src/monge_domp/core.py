"""Exact-arithmetic value types shared by every layer.

All costs are integers in hundredths of the original cost unit ("scaled"
money). Python ints never wrap, so the 64-bit contract is enforced by
explicit range checks at construction time and on computed results.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Sequence, Tuple

Money = int

INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1

Cell = Tuple[int, int]


class UnbalancedError(ValueError):
    """Total supply differs from total demand."""


def check_money(value: int) -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise OverflowError(f"value {value} exceeds the signed 64-bit range")
    return value


def format_money(value: int) -> str:
    """Render scaled money in original units with two decimals."""
    sign = "-" if value < 0 else ""
    whole, cents = divmod(abs(value), 100)
    return f"{sign}{whole}.{cents:02d}"


def parse_money(text: str) -> int:
    """Parse an original-unit decimal string into scaled money, exactly."""
    try:
        scaled = Decimal(text) * 100
    except InvalidOperation as exc:
        raise ValueError(f"not a decimal amount: {text!r}") from exc
    if scaled != scaled.to_integral_value():
        raise ValueError(f"{text!r} has more than two decimal places")
    return check_money(int(scaled))


def _as_matrix(rows: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    matrix = tuple(tuple(int(x) for x in row) for row in rows)
    if not matrix or not matrix[0]:
        raise ValueError("cost matrix must be nonempty")
    width = len(matrix[0])
    if any(len(row) != width for row in matrix):
        raise ValueError("cost matrix is ragged")
    for row in matrix:
        for x in row:
            check_money(x)
    return matrix


class Move(enum.IntEnum):
    """Step taken by the northwest-corner rule after filling a cell."""

    DOWN = 1
    RIGHT = 2


@dataclass(frozen=True)
class TpInstance:
    """Transportation problem data; rows are supply nodes, columns demand nodes.

    Balance is not enforced here so that :func:`balanced_check` can report it;
    solvers raise :class:`UnbalancedError` instead.
    """

    supply: Tuple[int, ...]
    demand: Tuple[int, ...]
    cost: Tuple[Tuple[int, ...], ...]

    def __init__(self, supply, demand, cost):
        object.__setattr__(self, "supply", tuple(int(s) for s in supply))
        object.__setattr__(self, "demand", tuple(int(d) for d in demand))
        object.__setattr__(self, "cost", _as_matrix(cost))
        if len(self.cost) != len(self.supply) or len(self.cost[0]) != len(self.demand):
            raise ValueError(
                f"cost shape {len(self.cost)}x{len(self.cost[0])} does not match "
                f"{len(self.supply)} supplies and {len(self.demand)} demands"
            )
        if any(s < 0 for s in self.supply) or any(d < 0 for d in self.demand):
            raise ValueError("supplies and demands must be nonnegative")

    @property
    def p(self) -> int:
        return len(self.supply)

    @property
    def q(self) -> int:
        return len(self.demand)

    def require_balanced(self) -> None:
        if not balanced_check(self):
            raise UnbalancedError(
                f"total supply {sum(self.supply)} != total demand {sum(self.demand)}"
            )


@dataclass(frozen=True)
class StaircasePath:
    """Cells a^1..a^T visited by the northwest-corner rule (0-based).

    ``moves[t]`` is the step from ``cells[t]`` to ``cells[t + 1]``.
    """

    cells: Tuple[Cell, ...]
    moves: Tuple[Move, ...]
    shipments: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.cells)

    def objective(self, inst: TpInstance) -> int:
        return check_money(sum(inst.cost[i][j] * x for (i, j), x in zip(self.cells, self.shipments)))


@dataclass(frozen=True)
class DualSolution:
    u: Tuple[int, ...]
    v: Tuple[int, ...]

    def __init__(self, u, v):
        object.__setattr__(self, "u", tuple(check_money(int(x)) for x in u))
        object.__setattr__(self, "v", tuple(check_money(int(x)) for x in v))

    def objective(self, inst: TpInstance) -> int:
        return check_money(
            sum(s * u for s, u in zip(inst.supply, self.u))
            + sum(d * v for d, v in zip(inst.demand, self.v))
        )

    def is_feasible(self, inst: TpInstance) -> bool:
        return all(
            self.u[i] + self.v[j] <= inst.cost[i][j]
            for i in range(inst.p)
            for j in range(inst.q)
        )

    def shifted(self, b: int) -> "DualSolution":
        """Return (u + b, v - b), which keeps the dual objective on balanced data."""
        return DualSolution([x + b for x in self.u], [x - b for x in self.v])


def is_monge(cost: Sequence[Sequence[int]]) -> bool:
    """Adjacent 2x2 test; equivalent to the all-quadruples definition."""
    c = _as_matrix(cost)
    for i in range(len(c) - 1):
        row, below = c[i], c[i + 1]
        for j in range(len(row) - 1):
            if row[j] + below[j + 1] > row[j + 1] + below[j]:
                return False
    return True


def balanced_check(inst: TpInstance) -> bool:
    return sum(inst.supply) == sum(inst.demand)
