"""Greedy primal and closed-form duals for Monge transportation problems,
used as a Benders cut engine for the discrete ordered median problem."""

from .core import DualSolution, Move, StaircasePath, TpInstance, balanced_check, is_monge
from .domp import CostLadder, DompInstance, ordered_median_value, theta_lower_bound
from .benders import Orientation, solve_benders

__all__ = [
    "CostLadder",
    "DompInstance",
    "DualSolution",
    "Move",
    "Orientation",
    "StaircasePath",
    "TpInstance",
    "balanced_check",
    "is_monge",
    "ordered_median_value",
    "solve_benders",
    "theta_lower_bound",
]
