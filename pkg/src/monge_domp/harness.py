"""Instance generation, batch runs and result files.

Random streams use numpy's PCG64 seeded through ``SeedSequence`` with an
entropy tuple of ``(seed, n, stream)``; stream 0 draws costs, stream 1 draws
the random weight vector. Costs therefore depend only on ``(n, seed)`` and are
shared across p and weight families, as in the published grid.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .benders import Orientation, solve_benders
from .core import TpInstance, format_money
from .domp import DompInstance
from .oracles import domp_enumerate

COST_LOW, COST_HIGH = 10_000, 100_000

FAMILIES = (
    "median",
    "center",
    "kcentrum",
    "kmin",
    "krange",
    "range",
    "reverse",
    "negreverse",
    "random",
)

METHODS = ("benders-b1", "benders-b2", "enum-oracle")

CSV_HEADER = (
    "instance_id", "n", "p", "lambda_tag", "seed", "method", "status", "objective",
    "bound", "gap", "time_ms", "iterations", "cuts_added", "separation_time_ms",
)

_COST_STREAM, _LAMBDA_STREAM = 0, 1


def _rng(seed: int, n: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, n, stream])))


def lambda_vector(family: str, n: int, seed: int = 0) -> List[int]:
    """Weight vector of a named family; always non-increasing."""
    k = n // 2
    if family == "median":
        return [-1] * n
    if family == "center":
        return [0] * (n - 1) + [-1]
    if family == "kcentrum":
        return [0] * (n - k) + [-1] * k
    if family == "kmin":
        return [1] * k + [0] * (n - k)
    if family == "krange":
        return [1] * k + [-1] * (n - k)
    if family == "range":
        if n < 2:
            raise ValueError("the range family needs n >= 2")
        return [1] + [0] * (n - 2) + [-1]
    if family == "reverse":
        return list(range(n, 0, -1))
    if family == "negreverse":
        return [-(l + 1) for l in range(n)]
    if family == "random":
        draws = _rng(seed, n, _LAMBDA_STREAM).integers(-n, n + 1, size=n)
        return sorted((int(x) for x in draws), reverse=True)
    raise ValueError(f"unknown lambda family {family!r}")


def generate_costs(n: int, seed: int) -> List[List[int]]:
    draws = _rng(seed, n, _COST_STREAM).integers(COST_LOW, COST_HIGH + 1, size=(n, n))
    return draws.tolist()


def generate_instance(n: int, p: int, seed: int, family: str) -> DompInstance:
    if not 1 <= p <= n:
        raise ValueError(f"need 1 <= p <= n, got n={n}, p={p}")
    return DompInstance(p, generate_costs(n, seed), lambda_vector(family, n, seed))


def random_monge_matrix(rng: np.random.Generator, p: int, q: int, max_step: int = 5) -> List[List[int]]:
    """Nonnegative Monge matrix: row and column offsets plus a cumulative
    sum of nonnegative increments over the block {k <= i, l >= j}."""
    inc = rng.integers(0, max_step + 1, size=(p, q))
    block = np.flip(np.cumsum(np.flip(np.cumsum(inc, axis=0), axis=1), axis=1), axis=1)
    rows = rng.integers(0, 10 * max_step + 1, size=(p, 1))
    cols = rng.integers(0, 10 * max_step + 1, size=(1, q))
    return (block + rows + cols).tolist()


def random_balanced_vectors(rng: np.random.Generator, p: int, q: int, max_qty: int = 20):
    """Supplies and demands in [0, max_qty] with equal totals."""
    s = rng.integers(0, max_qty + 1, size=p)
    d = rng.integers(0, max_qty + 1, size=q)
    while s.sum() != d.sum():
        short, other = (s, d) if s.sum() < d.sum() else (d, s)
        room = np.flatnonzero(short < max_qty)
        if room.size:
            short[rng.choice(room)] += 1
        else:
            other[rng.choice(np.flatnonzero(other > 0))] -= 1
    return s.tolist(), d.tolist()


def random_monge_tp(rng: np.random.Generator, max_dim: int = 12, max_qty: int = 20) -> TpInstance:
    p = int(rng.integers(1, max_dim + 1))
    q = int(rng.integers(1, max_dim + 1))
    s, d = random_balanced_vectors(rng, p, q, max_qty)
    return TpInstance(s, d, random_monge_matrix(rng, p, q))


def instance_to_json(inst: DompInstance, seed: Optional[int] = None, family: Optional[str] = None) -> Dict:
    return {
        "n": inst.n,
        "p": inst.p,
        "cost_scaled": [x for row in inst.cost for x in row],
        "lambda": list(inst.lam),
        "meta": {"seed": seed, "family": family},
    }


def instance_from_json(doc: Dict) -> DompInstance:
    n = int(doc["n"])
    flat = doc["cost_scaled"]
    if flat and isinstance(flat[0], list):
        rows = flat
    else:
        if len(flat) != n * n:
            raise ValueError(f"cost_scaled has {len(flat)} entries, expected {n * n}")
        rows = [flat[i * n:(i + 1) * n] for i in range(n)]
    return DompInstance(int(doc["p"]), rows, doc["lambda"])


@dataclass
class Grid:
    n_values: Sequence[int] = (6, 8, 10, 12)
    p_divisors: Sequence[int] = (4, 3, 2)
    families: Sequence[str] = FAMILIES
    seeds: Sequence[int] = (1, 2, 3, 4, 5)

    def instances(self):
        """Yield (instance_id, n, p, family, seed) in a fixed order."""
        for n in self.n_values:
            for div in self.p_divisors:
                p = max(1, n // div)
                for family in self.families:
                    for seed in self.seeds:
                        yield f"n{n:03d}-p{p:03d}d{div}-{family}-s{seed}", n, p, family, seed


LARGE_GRID = Grid(n_values=(20, 30, 50, 100, 150, 200))


@dataclass
class ResultRow:
    instance_id: str
    n: int
    p: int
    lambda_tag: str
    seed: int
    method: str
    status: str
    objective: Optional[int] = None
    bound: Optional[int] = None
    time_ms: float = 0.0
    iterations: int = 0
    cuts_added: int = 0
    separation_time_ms: float = 0.0
    facilities: tuple = field(default=(), repr=False)

    @property
    def gap(self) -> Optional[float]:
        if self.status == "error" or self.objective is None:
            return None
        if self.objective == self.bound:
            return 0.0
        if self.objective == 0:
            return math.inf
        return (self.objective - self.bound) / abs(self.objective)

    def csv_fields(self, record_times: bool) -> List[str]:
        def money(x):
            return "" if x is None else format_money(x)

        gap = self.gap
        return [
            self.instance_id, str(self.n), str(self.p), self.lambda_tag, str(self.seed),
            self.method, self.status, money(self.objective), money(self.bound),
            "" if gap is None else f"{gap:.6f}",
            f"{self.time_ms:.3f}" if record_times else "0",
            str(self.iterations), str(self.cuts_added),
            f"{self.separation_time_ms:.3f}" if record_times else "0",
        ]


def run_method(inst: DompInstance, method: str, epsilon: int = 0,
               max_iterations: Optional[int] = None, time_limit_ms: Optional[float] = None):
    """Solve one instance; return (status, objective, bound, facilities, stats)."""
    if method == "enum-oracle":
        tick = time.perf_counter()
        value, facilities = domp_enumerate(inst)
        elapsed = (time.perf_counter() - tick) * 1000.0
        return "optimal", value, value, facilities, (elapsed, 0, 0, 0.0)
    orientation = {"benders-b1": Orientation.B1, "benders-b2": Orientation.B2}[method]
    res = solve_benders(inst, orientation, epsilon, max_iterations, time_limit_ms)
    log = res.log
    stats = (log.wall_time_ms, log.iterations, len(log.cuts), log.separation_time_ms)
    return res.status, res.value, log.bound, res.facilities, stats


def run_suite(grid: Grid, methods: Iterable[str] = METHODS, epsilon: int = 0,
              max_iterations: Optional[int] = None, time_limit_ms: Optional[float] = None) -> List[ResultRow]:
    methods = list(methods)
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    rows = []
    for instance_id, n, p, family, seed in grid.instances():
        try:
            inst = generate_instance(n, p, seed, family)
        except Exception:
            rows.extend(ResultRow(instance_id, n, p, family, seed, m, "error") for m in methods)
            continue
        for method in methods:
            try:
                status, objective, bound, facilities, (t, it, cuts, sep) = run_method(
                    inst, method, epsilon, max_iterations, time_limit_ms
                )
            except Exception:
                rows.append(ResultRow(instance_id, n, p, family, seed, method, "error"))
                continue
            rows.append(ResultRow(instance_id, n, p, family, seed, method, status,
                                  objective, bound, t, it, cuts, sep, tuple(facilities)))
    rows.sort(key=lambda r: (r.instance_id, r.method))
    return rows


def rows_to_csv(rows: Iterable[ResultRow], record_times: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_fields(record_times))
    return buf.getvalue()


def dump_instance(inst: DompInstance, seed=None, family=None) -> str:
    return json.dumps(instance_to_json(inst, seed, family), indent=None)
