"""Command-line entry point: ``selcol <verb> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .clique import max_clique
from .coloring import brute_force_selcol, chromatic_number
from .errors import SelColError
from .experiment import ExperimentConfig, ResultRow, run_experiment, write_csv
from .graph import edge_density
from .instance import SelColInstance
from .io import read_instance, save_instance, write_instance
from .perfect import find_odd_hole
from .perfectgen import GenConfig, build_base_library, generate_partition, generate_perfect
from .solver import DEFAULT_TIME_LIMIT, METHODS, SUBPROBLEMS, solve
from .theta import DEFAULT_TOL, lovasz_theta


def _one_based(vertices):
    return " ".join(str(int(v) + 1) for v in sorted(vertices))


def cmd_solve(args):
    inst = read_instance(args.instance)
    rep = solve(inst, args.method, args.subproblem, args.time_limit, args.driver)
    print(f"status {rep.status}")
    print(f"chi_sel {rep.ub:g}  lower bound {rep.lb:g}  gap {rep.gap_percent:.4g}%")
    if rep.selection is not None:
        print(f"selection {_one_based(rep.selection)}")
    if rep.coloring:
        print("coloring " + " ".join(f"{v + 1}:{c}" for v, c in sorted(rep.coloring.items())))
    print(f"seconds {rep.seconds:.3f}  nodes {rep.nodes}  cuts clique {rep.cuts_clique} "
          f"coloring {rep.cuts_coloring}  subproblem {rep.subproblem_time_fraction:.1f}%")
    if args.report:
        write_csv([_row_from_report(inst, rep, args)], args.report)
    return 0 if rep.status == "optimal" else 3


def _row_from_report(inst, rep, args):
    g = inst.graph
    return ResultRow(
        instance_id=inst.name, n=g.n, m=g.m, density=edge_density(g) if g.n > 1 else 0.0,
        P=inst.P, method=args.method, subproblem="" if args.method == "ip" else rep.subproblem,
        status=rep.status, UB=rep.ub, LB=rep.lb, gap_percent=rep.gap_percent,
        seconds=rep.seconds if rep.status == "optimal" else args.time_limit,
        cuts_clique=rep.cuts_clique, cuts_coloring=rep.cuts_coloring,
        subproblem_time_fraction=0.0 if args.method == "ip" else rep.subproblem_time_fraction)


def cmd_gen(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    library = build_base_library(args.base_n)
    seeds = np.random.SeedSequence(args.seed).generate_state(args.count, dtype=np.uint64)
    for k, s in enumerate(seeds):
        g = generate_perfect(GenConfig(args.n, args.density, args.epsilon, int(s)), library)
        rng = np.random.default_rng(int(s))
        if args.min is not None:
            clusters = generate_partition(g.n, args.min, args.max or args.min, rng)
        else:
            clusters = [(v,) for v in range(g.n)]
        name = f"perfect_n{args.n}_d{args.density:g}_{k + 1}"
        inst = SelColInstance(g, tuple(clusters), name)
        path = out / f"{name}.selcol"
        save_instance(inst, path, comment=f"seed {int(s)} density {edge_density(g):.4f}")
        print(path)
    return 0


def cmd_partition(args):
    inst = read_instance(args.instance)
    rng = np.random.default_rng(args.seed)
    clusters = generate_partition(inst.n, args.min, args.max, rng)
    text = write_instance(SelColInstance(inst.graph, tuple(clusters), inst.name))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_clique(args):
    g = read_instance(args.instance).graph
    res = max_clique(g, time_limit=args.time_limit)
    print(f"omega {res.size}{'' if res.complete else ' (incomplete)'}")
    print(f"clique {_one_based(res.clique)}")
    return 0 if res.complete else 3


def cmd_color(args):
    g = read_instance(args.instance).graph
    res = chromatic_number(g, time_limit=args.time_limit)
    print(f"chi {res.num_colors}{'' if res.complete else f' (lower bound {res.lower_bound})'}")
    print("coloring " + " ".join(f"{v + 1}:{c}" for v, c in enumerate(res.coloring.color_of)))
    return 0 if res.complete else 3


def cmd_theta(args):
    g = read_instance(args.instance).graph
    res = lovasz_theta(g, tol=args.tol)
    print(f"theta {res.theta:.9f}  upper {res.upper_bound:.9f}  iterations {res.iterations}")
    return 0


def cmd_check(args):
    g = read_instance(args.instance).graph
    hole = find_odd_hole(g)
    if hole is not None:
        print(f"not perfect: odd hole {' '.join(str(v + 1) for v in hole)}")
        return 1
    anti = find_odd_hole(g.complement())
    if anti is not None:
        print(f"not perfect: odd antihole {' '.join(str(v + 1) for v in anti)}")
        return 1
    print("perfect")
    return 0


def cmd_oracle(args):
    inst = read_instance(args.instance)
    value, selection = brute_force_selcol(inst, budget=args.budget)
    print(f"chi_sel {value}")
    print(f"selection {_one_based(selection)}")
    return 0


def cmd_bench(args):
    cfg = ExperimentConfig(
        instances=args.instances or (), n_values=args.n or (), densities=args.density or (),
        replicates=args.replicates, cluster_min=args.min, cluster_max=args.max,
        methods=args.methods, subproblem=args.subproblem, time_limit=args.time_limit,
        seed=args.seed, output=args.out, workers=args.workers)
    run_experiment(cfg, echo=True)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="selcol", description="Selective graph coloring workbench")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("solve", help="solve an instance exactly")
    s.add_argument("--instance", required=True)
    s.add_argument("--method", choices=METHODS, default="cutplane-perfect")
    s.add_argument("--subproblem", choices=SUBPROBLEMS, default="mcs")
    s.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
    s.add_argument("--seed", type=int, default=0, help="accepted for reproducible scripts")
    s.add_argument("--report", help="write a one-row CSV here")
    s.add_argument("--driver", choices=("callback", "outer"), default="callback")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("gen", help="generate random perfect graphs")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--density", type=float, required=True)
    s.add_argument("--epsilon", type=float, default=0.025)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--out", required=True)
    s.add_argument("--min", type=int, help="partition into clusters of this minimum size")
    s.add_argument("--max", type=int)
    s.add_argument("--base-n", type=int, default=6)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("partition", help="re-partition an instance at random")
    s.add_argument("--instance", required=True)
    s.add_argument("--min", type=int, required=True)
    s.add_argument("--max", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_partition)

    for verb, fn, helptext in (("clique", cmd_clique, "maximum clique of the graph"),
                               ("color", cmd_color, "chromatic number of the graph")):
        s = sub.add_parser(verb, help=helptext)
        s.add_argument("--instance", required=True)
        s.add_argument("--time-limit", type=float, default=float("inf"))
        s.set_defaults(func=fn)

    s = sub.add_parser("theta", help="Lovasz theta of the graph")
    s.add_argument("--instance", required=True)
    s.add_argument("--tol", type=float, default=DEFAULT_TOL)
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("check", help="test graph properties")
    s.add_argument("--instance", required=True)
    s.add_argument("--perfect", action="store_true", required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("oracle", help="brute-force selective chromatic number")
    s.add_argument("--instance", required=True)
    s.add_argument("--budget", type=int, default=10**6)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("bench", help="run an experiment grid and write a CSV")
    s.add_argument("--instances", nargs="*")
    s.add_argument("--n", type=int, nargs="*")
    s.add_argument("--density", type=float, nargs="*")
    s.add_argument("--replicates", type=int, default=5)
    s.add_argument("--min", type=int, default=2)
    s.add_argument("--max", type=int, default=5)
    s.add_argument("--methods", nargs="+", choices=METHODS, default=["cutplane-perfect"])
    s.add_argument("--subproblem", choices=SUBPROBLEMS, default="mcs")
    s.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SelColError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
