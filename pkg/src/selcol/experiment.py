"""Batch runs over instance files or a generated grid, with one CSV row per
(instance, method) and a per-cell summary."""

from __future__ import annotations

import csv
import dataclasses
import math
import os
import sys
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import InputError, SelColError
from .graph import edge_density
from .instance import SelColInstance
from .io import read_instance
from .lp import gap_percent
from .perfectgen import GenConfig, build_base_library, generate_partition, generate_perfect
from .solver import DEFAULT_TIME_LIMIT, METHODS, SUBPROBLEMS, solve


@dataclass
class ExperimentConfig:
    instances: Sequence[str] = ()
    n_values: Sequence[int] = ()
    densities: Sequence[float] = ()
    replicates: int = 5
    cluster_min: int = 2
    cluster_max: int = 5
    epsilon: float = 0.025
    methods: Sequence[str] = ("cutplane-perfect",)
    subproblem: str = "mcs"
    time_limit: float = DEFAULT_TIME_LIMIT
    seed: int = 0
    output: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.replicates < 1:
            raise InputError("replicates must be at least 1")
        if not self.time_limit > 0:
            raise InputError("time limit must be positive")
        for m in self.methods:
            if m not in METHODS:
                raise InputError(f"unknown method {m!r}")
        if self.subproblem not in SUBPROBLEMS:
            raise InputError(f"unknown subproblem {self.subproblem!r}")
        if not self.instances and not (self.n_values and self.densities):
            raise InputError("give instance files or an n/density grid")


@dataclass
class ResultRow:
    instance_id: str
    n: int
    m: int
    density: float
    P: int
    method: str
    subproblem: str
    status: str
    UB: float
    LB: float
    gap_percent: float
    seconds: float
    cuts_clique: int = 0
    cuts_coloring: int = 0
    subproblem_time_fraction: float = 0.0


CSV_HEADER = [f.name for f in dataclasses.fields(ResultRow)]


@dataclass
class _Task:
    instance_id: str
    instance: SelColInstance
    cell: tuple = field(default=())


def worker_count(default: int = 1) -> int:
    env = os.environ.get("SELCOL_THREADS", "").strip()
    if env:
        try:
            value = int(env)
        except ValueError:
            raise InputError(f"SELCOL_THREADS must be an integer, got {env!r}") from None
        if value < 1:
            raise InputError("SELCOL_THREADS must be at least 1")
        return value
    return max(1, default)


def _tasks(cfg: ExperimentConfig) -> list[_Task]:
    tasks = []
    for path in cfg.instances:
        inst = read_instance(path)
        tasks.append(_Task(inst.name, inst, (inst.n, round(edge_density(inst.graph), 2))))
    if cfg.n_values:
        library = build_base_library()
        index = 0
        for n in cfg.n_values:
            for rho in cfg.densities:
                for rep in range(cfg.replicates):
                    rng = np.random.default_rng([cfg.seed, index])
                    g = generate_perfect(
                        GenConfig(n, rho, cfg.epsilon, seed=int(rng.integers(2**63))), library)
                    clusters = generate_partition(n, cfg.cluster_min, cfg.cluster_max, rng)
                    iid = f"n{n}_d{rho:g}_r{rep + 1}"
                    tasks.append(_Task(iid, SelColInstance(g, tuple(clusters), iid), (n, rho)))
                    index += 1
    return tasks


def run_one(instance_id: str, inst: SelColInstance, method: str, subproblem: str,
            time_limit: float) -> ResultRow:
    g = inst.graph
    sub = "" if method == "ip" else ("mcs" if method == "cutplane-general" else subproblem)
    base = dict(instance_id=instance_id, n=g.n, m=g.m,
                density=edge_density(g) if g.n > 1 else 0.0, P=inst.P,
                method=method, subproblem=sub)
    try:
        rep = solve(inst, method, subproblem, time_limit)
    except SelColError as exc:
        print(f"{instance_id} {method}: {exc}", file=sys.stderr)
        return ResultRow(status="error", UB=math.inf, LB=0.0, gap_percent=math.nan,
                         seconds=time_limit, **base)
    seconds = time_limit if rep.status != "optimal" else min(rep.seconds, time_limit)
    return ResultRow(
        status=rep.status, UB=rep.ub, LB=rep.lb, gap_percent=gap_percent(rep.ub, rep.lb),
        seconds=seconds, cuts_clique=rep.cuts_clique, cuts_coloring=rep.cuts_coloring,
        subproblem_time_fraction=0.0 if method == "ip" else rep.subproblem_time_fraction,
        **base)


def write_csv(rows: Sequence[ResultRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([getattr(row, name) for name in CSV_HEADER])


def summarize(rows: Sequence[ResultRow], cells: Sequence[tuple]) -> str:
    groups = defaultdict(list)
    for row, cell in zip(rows, cells):
        groups[(*cell, row.method)].append(row)
    lines = [f"{'n':>4} {'density':>8} {'method':>18} {'#opt':>5} {'gap%':>8} "
             f"{'time':>9} {'subpr%':>7}"]
    for (n, rho, method), rs in sorted(groups.items()):
        gaps = [r.gap_percent for r in rs if math.isfinite(r.gap_percent)]
        lines.append(
            f"{n:>4} {rho:>8g} {method:>18} "
            f"{sum(r.status == 'optimal' for r in rs):>2}/{len(rs):<2} "
            f"{np.mean(gaps) if gaps else math.nan:>8.2f} "
            f"{np.mean([r.seconds for r in rs]):>9.3f} "
            f"{np.mean([r.subproblem_time_fraction for r in rs]):>7.1f}")
    return "\n".join(lines)


def run_experiment(cfg: ExperimentConfig, echo: bool = False) -> list[ResultRow]:
    tasks = _tasks(cfg)
    jobs = [(t, m) for t in tasks for m in cfg.methods]

    def go(job):
        task, method = job
        return run_one(task.instance_id, task.instance, method, cfg.subproblem, cfg.time_limit)

    workers = worker_count(cfg.workers)
    if workers == 1:
        rows = [go(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(go, jobs))
    if cfg.output:
        Path(cfg.output).parent.mkdir(parents=True, exist_ok=True)
        write_csv(rows, cfg.output)
    if echo:
        print(summarize(rows, [t.cell for t, _ in jobs]))
    return rows
