"""Command-line entry point: ``monge-domp {solve-tp,solve-domp,gen,bench,verify}``.

Exit codes: 0 ok, 2 bad input, 3 unbalanced transportation problem,
4 failed check, 5 enumeration cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .benders import Orientation, solve_benders
from .core import TpInstance, UnbalancedError, format_money, is_monge, parse_money
from .harness import (
    FAMILIES,
    METHODS,
    LARGE_GRID,
    Grid,
    dump_instance,
    generate_instance,
    instance_from_json,
    lambda_vector,
    rows_to_csv,
    run_suite,
)
from .domp import DompInstance
from .monge_tp import (
    dual_backward,
    dual_forward,
    duals_formula_col,
    duals_formula_row,
    northwest_corner,
)
from .oracles import EnumerationCapError, domp_enumerate
from .verify import SUITES, check_duals, check_staircase, run_suites

EXIT_OK, EXIT_PARSE, EXIT_UNBALANCED, EXIT_CHECK, EXIT_CAP = 0, 2, 3, 4, 5

DUAL_ROUTES = {
    "backward": lambda inst, path: dual_backward(inst, path),
    "forward": lambda inst, path: dual_forward(inst, path),
    "formula-row": lambda inst, path: duals_formula_row(inst),
    "formula-col": lambda inst, path: duals_formula_col(inst),
}


def _money_tuple(values) -> str:
    return "(" + ",".join(format_money(x) for x in values) + ")"


def _int_list(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _str_list(text: str) -> List[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _load_tp(path: str) -> TpInstance:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    p, q = int(doc["p"]), int(doc["q"])
    flat = doc["cost_scaled"]
    if flat and isinstance(flat[0], list):
        rows = flat
    else:
        if len(flat) != p * q:
            raise ValueError(f"cost_scaled has {len(flat)} entries, expected {p * q}")
        rows = [flat[i * q:(i + 1) * q] for i in range(p)]
    return TpInstance(doc["s"], doc["d"], rows)


def cmd_solve_tp(args) -> int:
    try:
        inst = _load_tp(args.input)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot read transportation problem: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        path = northwest_corner(inst)
    except UnbalancedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNBALANCED
    print("path: " + " ".join(f"({i + 1},{j + 1})" for i, j in path.cells))
    print("moves: " + " ".join(m.name.lower() for m in path.moves))
    print("shipments: " + " ".join(str(x) for x in path.shipments))
    print(f"objective {format_money(path.objective(inst))}")
    if args.duals:
        dual = DUAL_ROUTES[args.duals](inst, path)
        print(f"u={_money_tuple(dual.u)} v={_money_tuple(dual.v)}")
        print(f"dual objective {format_money(dual.objective(inst))}")
    if args.check:
        problem = check_staircase(inst)
        if not problem:
            if is_monge(inst.cost):
                problem = check_duals(inst)
            else:
                print("warning: cost matrix is not Monge; optimality checks skipped", file=sys.stderr)
        if problem:
            print(f"check failed: {problem}", file=sys.stderr)
            return EXIT_CHECK
        print("check passed")
    return EXIT_OK


def _domp_from_args(args) -> DompInstance:
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            inst = instance_from_json(json.load(fh))
        if args.family:
            inst = DompInstance(inst.p, inst.cost, lambda_vector(args.family, inst.n, args.seed))
        if args.p is not None:
            inst = DompInstance(args.p, inst.cost, inst.lam)
        return inst
    if args.n is None:
        raise ValueError("give --input or --n")
    p = args.p if args.p is not None else max(1, args.n // 4)
    return generate_instance(args.n, p, args.seed, args.family or "median")


def cmd_solve_domp(args) -> int:
    try:
        inst = _domp_from_args(args)
        epsilon = parse_money(args.epsilon)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.method == "enum":
            value, facilities = domp_enumerate(inst)
            iterations, cuts, gap, status = 0, 0, 0.0, "optimal"
        else:
            orientation = Orientation.B1 if args.method == "benders-b1" else Orientation.B2
            res = solve_benders(inst, orientation, epsilon, args.max_iterations, args.time_limit_ms)
            value, facilities, status = res.value, res.facilities, res.status
            iterations, cuts, gap = res.log.iterations, len(res.log.cuts), res.log.gap
        print(f"method {args.method}")
        print(f"value {format_money(value)}")
        print("Y {" + ",".join(str(j + 1) for j in facilities) + "}")
        print(f"iterations {iterations}")
        print(f"cuts {cuts}")
        print(f"gap {gap:.6f}")
        print(f"status {status}")
        if args.verify:
            reference, _ = domp_enumerate(inst)
            if abs(value - reference) > epsilon:
                print(f"verify failed: enumeration optimum {format_money(reference)}", file=sys.stderr)
                return EXIT_CHECK
            print("verify passed")
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    return EXIT_OK


def cmd_gen(args) -> int:
    p = args.p if args.p is not None else max(1, args.n // 4)
    try:
        inst = generate_instance(args.n, p, args.seed, args.family)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    text = dump_instance(inst, args.seed, args.family)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        base = LARGE_GRID if args.large_grid else Grid()
        grid = Grid(
            n_values=_int_list(args.n) if args.n is not None else base.n_values,
            p_divisors=_int_list(args.p_divisors),
            families=_str_list(args.families),
            seeds=_int_list(args.seeds),
        )
        methods = _str_list(args.methods)
        epsilon = parse_money(args.epsilon)
        for family in grid.families:
            if family not in FAMILIES:
                raise ValueError(f"unknown family {family!r}")
        for m in methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    rows = run_suite(grid, methods, epsilon, args.max_iterations, args.time_limit_ms)
    text = rows_to_csv(rows, record_times=args.record_times)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    results = run_suites(names, args.seed, args.max_n, args.max_g, args.samples)
    print(f"{'suite':<12} {'result':<6} {'cases':>7}  detail")
    for r in results:
        print(f"{r.name:<12} {'pass' if r.passed else 'FAIL':<6} {r.checked:>7}  {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monge-domp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    tp = sub.add_parser("solve-tp", help="northwest-corner primal and closed-form duals")
    tp.add_argument("input", help="JSON with p, q, s, d, cost_scaled")
    tp.add_argument("--duals", choices=sorted(DUAL_ROUTES))
    tp.add_argument("--check", action="store_true",
                    help="verify feasibility, and duality if the costs are Monge")
    tp.set_defaults(func=cmd_solve_tp)

    def instance_flags(p):
        p.add_argument("--n", type=int)
        p.add_argument("--p", type=int)
        p.add_argument("--seed", type=int, default=1)

    domp = sub.add_parser("solve-domp", help="solve one ordered median instance")
    domp.add_argument("--input", help="instance JSON (as written by gen)")
    instance_flags(domp)
    domp.add_argument("--family", choices=FAMILIES)
    domp.add_argument("--method", choices=("benders-b1", "benders-b2", "enum"), default="benders-b1")
    domp.add_argument("--epsilon", default="0.01", help="cut violation tolerance, original units")
    domp.add_argument("--time-limit-ms", type=float)
    domp.add_argument("--max-iterations", type=int)
    domp.add_argument("--verify", action="store_true", help="cross-check against enumeration")
    domp.set_defaults(func=cmd_solve_domp)

    gen = sub.add_parser("gen", help="write a generated instance as JSON")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--p", type=int)
    gen.add_argument("--seed", type=int, default=1)
    gen.add_argument("--family", choices=FAMILIES, default="median")
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_gen)

    bench = sub.add_parser("bench", help="run a grid of instances and write CSV")
    bench.add_argument("--n", help="comma-separated sizes (default 6,8,10,12)")
    bench.add_argument("--large-grid", action="store_true", help="default sizes 20..200")
    bench.add_argument("--p-divisors", default="4,3,2", help="p = max(1, n // divisor)")
    bench.add_argument("--families", default=",".join(FAMILIES))
    bench.add_argument("--seeds", default="1,2,3,4,5")
    bench.add_argument("--methods", default=",".join(METHODS))
    bench.add_argument("--epsilon", default="0.01")
    bench.add_argument("--time-limit-ms", type=float)
    bench.add_argument("--max-iterations", type=int)
    bench.add_argument("--record-times", action="store_true",
                       help="write wall-clock columns (output is then not reproducible)")
    bench.add_argument("--out")
    bench.set_defaults(func=cmd_bench)

    ver = sub.add_parser("verify", help="run the consistency suites")
    ver.add_argument("--suite", choices=SUITES + ("all",), default="all")
    ver.add_argument("--max-n", type=int, default=4)
    ver.add_argument("--max-g", type=int, default=4)
    ver.add_argument("--samples", type=int, default=1000)
    ver.add_argument("--seed", type=int, default=0)
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
