"""``lotcycle`` command line.

Exit status: 0 on success, 1 for domain failures (infeasible instance,
invalid schedule, unsupported case), 2 for unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import random
import sys
from decimal import Decimal

from . import formats
from .errors import FormatError, LotSizingError, NoIdleTime
from .evaluator import evaluate, stock_trajectory
from .model import Variant, check_feasibility, construct_feasible, validate_schedule
from .oracles import brute_force_f1, held_karp, search_budget, ternary_search_c2
from .reductions import tsp_to_lsp_continuous, tsp_to_lsp_discrete, verify_correspondence
from .solvers import C2Solution, F1Solution, solve
from .transforms import (
    average_to_simple_cycle,
    canonicalize_all,
    canonicalize_production_period,
    improve_idle,
    improve_idle_fixpoint,
)


def _load_instance(path):
    return formats.instance_from_dict(formats.read_json(path))


def _load_pair(args):
    inst = _load_instance(args.instance)
    sched = formats.schedule_from_dict(formats.read_json(args.schedule), inst)
    return inst, sched


def _emit(doc, out):
    out.write(formats.dumps(doc))


def cmd_feasible(args, out):
    inst = _load_instance(args.instance)
    ok, load = check_feasibility(inst)
    _emit({"feasible": ok, "load": formats.fstr(load)}, out)
    return 0 if ok else 1


def cmd_construct(args, out):
    inst = _load_instance(args.instance)
    _emit(formats.schedule_to_dict(construct_feasible(inst), inst), out)
    return 0


def cmd_solve(args, out):
    inst = _load_instance(args.instance)
    kwargs = {}
    if args.initial_stock is not None:
        kwargs["initial_stock"] = args.initial_stock
    sol = solve(inst, **kwargs)
    doc = {"instance": formats.instance_to_dict(inst)}
    if isinstance(sol, C2Solution):
        t = formats.parse_fraction(args.t, "--t") if args.t is not None else sol.default_t()
        sched = sol.schedule_at(t)
        doc["t"] = formats.fstr(t)
        doc["c2"] = sol.to_dict()
        doc["schedule"] = formats.schedule_to_dict(sched, inst)
        doc["report"] = evaluate(inst, sched).to_dict()
    elif isinstance(sol, F1Solution):
        doc["cycle_length"] = sol.cycle_length
        doc["unit_cost"] = formats.fstr(sol.unit_cost)
        doc["total_cost"] = formats.fstr(sol.total_cost)
        doc["gcd"] = sol.gcd
        doc["leading_idle"] = sol.leading_idle
        doc["schedule"] = formats.schedule_to_dict(sol.schedule, inst)
        doc["report"] = evaluate(inst, sol.schedule).to_dict()
    else:
        doc["schedule"] = formats.schedule_to_dict(sol.schedule, inst)
        doc["report"] = sol.report.to_dict()
    _emit(doc, out)
    return 0


def cmd_eval(args, out):
    inst, sched = _load_pair(args)
    _emit(evaluate(inst, sched).to_dict(), out)
    return 0


def cmd_validate(args, out):
    inst, sched = _load_pair(args)
    violations = validate_schedule(inst, sched)
    _emit({"valid": not violations, "violations": [formats.violation_to_dict(v) for v in violations]}, out)
    return 0 if not violations else 1


def cmd_improve(args, out):
    inst, sched = _load_pair(args)
    if args.transform == "canonicalize":
        if args.fixpoint:
            result = canonicalize_all(inst, sched)
        else:
            result = canonicalize_production_period(inst, sched, args.period)
    elif args.transform == "average":
        result = average_to_simple_cycle(inst, sched)
    else:
        try:
            result = improve_idle_fixpoint(inst, sched) if args.fixpoint else improve_idle(inst, sched)
        except NoIdleTime:
            print("warning: schedule has no idle time; returned unchanged", file=sys.stderr)
            result = sched
    _emit(formats.schedule_to_dict(result, inst), out)
    return 0


def cmd_trace(args, out):
    inst, sched = _load_pair(args)
    traj = stock_trajectory(inst, sched)
    if args.csv == "-":
        traj.write_csv(out)
    else:
        try:
            traj.write_csv(args.csv)
        except OSError as exc:
            raise FormatError(f"cannot write {args.csv}: {exc}") from exc
        _emit({"rows": sum(len(r) for r in traj.levels), "csv": args.csv}, out)
    return 0


def cmd_gen(args, out):
    rng = random.Random(args.seed)
    n, m = args.n, args.max_value
    while True:
        products = []
        for _ in range(n):
            p = rng.randint(1, m)
            products.append({"d": rng.randint(1, p), "p": p, "h": rng.randint(1, m)})
        load = sum(formats.parse_fraction(f"{x['d']}/{x['p']}") for x in products)
        if load <= 1 or not args.feasible:
            break
    switch = [[0 if i == j else rng.randint(0, m) for j in range(n)] for i in range(n)]
    _emit({"variant": args.variant, "products": products, "switch": switch}, out)
    return 0


def cmd_oracle(args, out):
    if args.oracle == "brute-f1":
        res = brute_force_f1(args.p, args.d, args.h, args.max_length, budget=args.budget or search_budget())
        inst_doc = {"variant": "fixed", "products": [{"d": args.d, "p": args.p, "h": args.h}], "switch": [[0]]}
        inst = formats.instance_from_dict(inst_doc)
        _emit({
            "best_average_cost": formats.fstr(res.best_average_cost),
            "best_length": res.best_length,
            "best_schedule": formats.schedule_to_dict(res.best_schedule, inst),
            "search_space_size": res.search_space_size,
        }, out)
    elif args.oracle == "ternary":
        A = formats.parse_fraction(args.A, "A")
        B = formats.parse_fraction(args.B, "B")
        t = ternary_search_c2(A, B, Decimal(args.tol))
        _emit({"t": str(t)}, out)
    else:
        tsp = formats.tsp_from_dict(formats.read_json(args.tsp))
        tour = held_karp(tsp)
        _emit({"tour": list(tour.order), "cost": tour.cost}, out)
    return 0


def cmd_reduce_tsp(args, out):
    tsp = formats.tsp_from_dict(formats.read_json(args.tsp))
    if args.variant == "continuous":
        inst = tsp_to_lsp_continuous(tsp)
    else:
        inst = tsp_to_lsp_discrete(tsp, args.variant)
    _emit(formats.instance_to_dict(inst), out)
    return 0


def cmd_verify_reduction(args, out):
    tsp = formats.tsp_from_dict(formats.read_json(args.tsp))
    rep = verify_correspondence(tsp, args.variant)
    _emit(rep.to_dict(), out)
    return 0 if rep.confirmed else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="lotcycle", description="Cyclic lot sizing with switching costs.")
    sub = ap.add_subparsers(dest="command", required=True)
    variants = [v.value for v in Variant]

    p = sub.add_parser("feasible", help="check the load criterion")
    p.add_argument("instance")
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("construct", help="build a feasible cycle of length prod(p)")
    p.add_argument("instance")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("solve", help="optimal schedule for the supported cases")
    p.add_argument("instance")
    p.add_argument("--t", help="first run length for two-product schedules (rational)")
    p.add_argument("--initial-stock", type=int, help="start stock for a one-product fixed instance")
    p.set_defaults(func=cmd_solve)

    for name, func, helptext in (("eval", cmd_eval, "cost report"), ("validate", cmd_validate, "list violations")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("instance")
        p.add_argument("schedule")
        p.set_defaults(func=func)

    p = sub.add_parser("improve", help="apply a cost-non-increasing transform")
    p.add_argument("instance")
    p.add_argument("schedule")
    p.add_argument("--transform", choices=["canonicalize", "average", "deidle"], required=True)
    p.add_argument("--period", type=int, default=0, help="production period for canonicalize")
    p.add_argument("--fixpoint", action="store_true", help="repeat until nothing changes")
    p.set_defaults(func=cmd_improve)

    p = sub.add_parser("trace", help="stock levels at every breakpoint as CSV")
    p.add_argument("instance")
    p.add_argument("schedule")
    p.add_argument("--csv", required=True, help="output file, or - for stdout")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("gen", help="random instance")
    p.add_argument("--variant", choices=variants, default="continuous")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--max-value", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--feasible", action="store_true", help="redraw until the load is at most 1")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="reference computations")
    osub = p.add_subparsers(dest="oracle", required=True)
    o = osub.add_parser("brute-f1")
    for flag in ("--p", "--d"):
        o.add_argument(flag, type=int, required=True)
    o.add_argument("--h", type=int, default=1)
    o.add_argument("--max-length", type=int, required=True)
    o.add_argument("--budget", type=int)
    o = osub.add_parser("ternary")
    o.add_argument("--A", required=True)
    o.add_argument("--B", required=True)
    o.add_argument("--tol", default="1e-12")
    o = osub.add_parser("held-karp")
    o.add_argument("tsp")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reduce-tsp", help="lot-sizing instance from a TSP instance")
    p.add_argument("tsp")
    p.add_argument("--variant", choices=variants, default="discrete")
    p.set_defaults(func=cmd_reduce_tsp)

    p = sub.add_parser("verify-reduction", help="replay the TSP cost correspondence")
    p.add_argument("tsp")
    p.add_argument("--variant", choices=variants, default="discrete")
    p.set_defaults(func=cmd_verify_reduction)
    return ap


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args, out)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LotSizingError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
