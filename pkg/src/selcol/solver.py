"""Exact selective coloring: the direct assignment IP and the cutting-plane
decomposition whose master selects one vertex per cluster and whose
subproblem bounds the colors the selection needs."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import lp
from .clique import max_clique
from .coloring import chromatic_number, color_selection_with_clique
from .errors import InputError, SolverFailure
from .graph import induced_subgraph
from .instance import SelColInstance
from .lp import GE, EQ, LE, LpModel, Row, SolveTimeout
from .theta import max_clique_sdp

DEFAULT_TIME_LIMIT = 1200.0
CUT_TOL = 1e-6

METHODS = ("ip", "cutplane-perfect", "cutplane-general")
SUBPROBLEMS = ("mcs", "sdp")


@dataclass
class Cut:
    """Lower bound ``t >= sum(coeffs[i] * x_i) + constant``."""

    kind: str
    coeffs: dict[int, float]
    constant: float
    iteration: int = 0
    source: tuple[int, ...] = ()

    def bound_at(self, x) -> float:
        return sum(c * x[i] for i, c in self.coeffs.items()) + self.constant

    def is_violated(self, t: float, x, tol: float = CUT_TOL) -> bool:
        return t < self.bound_at(x) - tol

    def as_row(self, t_index: int) -> Row:
        coeffs = {i: -c for i, c in self.coeffs.items()}
        coeffs[t_index] = 1.0
        return Row(coeffs, GE, self.constant)


def clique_cut(clique: Sequence[int], iteration: int = 0) -> Cut:
    clique = tuple(sorted(int(v) for v in clique))
    if not clique:
        raise InputError("a clique cut needs a nonempty clique")
    return Cut("clique", {v: 1.0 for v in clique}, 0.0, iteration, clique)


def coloring_cut(selection: Sequence[int], chi: int, iteration: int = 0) -> Cut:
    """``t >= chi - sum_{i in selection} (1 - x_i)``."""
    if chi < 1:
        raise InputError(f"chromatic number must be positive, got {chi}")
    sel = tuple(sorted(int(v) for v in selection))
    return Cut("coloring", {v: 1.0 for v in sel}, float(chi - len(sel)), iteration, sel)


@dataclass
class SolveReport:
    status: str
    ub: float
    lb: float
    gap_percent: float
    selection: list[int] | None
    coloring: dict[int, int] | None
    method: str
    subproblem: str = ""
    iterations: int = 0
    cuts_clique: int = 0
    cuts_coloring: int = 0
    nodes: int = 0
    seconds: float = 0.0
    subproblem_seconds: float = 0.0
    cut_log: list[dict] = field(default_factory=list)
    lb_trace: list[float] = field(default_factory=list)
    flagged: bool = False
    message: str = ""

    @property
    def subproblem_time_fraction(self) -> float:
        if self.seconds <= 0:
            return 0.0
        return min(100.0, 100.0 * self.subproblem_seconds / self.seconds)

    @property
    def value(self) -> int | None:
        return int(round(self.ub)) if self.status == "optimal" else None


# -- Model 1 ---------------------------------------------------------------

@dataclass
class Model1:
    model: LpModel
    y: list[int]
    w: dict[tuple[int, int], int]

    @property
    def binaries(self) -> list[int]:
        return list(range(self.model.num_vars))


def build_model1(inst: SelColInstance) -> Model1:
    """Color-assignment IP with ``P`` colors and ordered color use."""
    P, n = inst.P, inst.n
    model = LpModel()
    y = [model.add_var(0, 1, 1.0, f"y{k + 1}") for k in range(P)]
    w = {}
    for i in range(n):
        for k in range(P):
            w[i, k] = model.add_var(0, 1, 0.0, f"w{i + 1}_{k + 1}")
    for i, j in inst.graph.edges():
        for k in range(P):
            model.add_constraint({w[i, k]: 1, w[j, k]: 1, y[k]: -1}, LE, 0)
    # edge rows cannot charge an isolated vertex for its color
    for i in np.flatnonzero(inst.graph.degrees() == 0):
        for k in range(P):
            model.add_constraint({w[int(i), k]: 1, y[k]: -1}, LE, 0)
    for cluster in inst.clusters:
        model.add_constraint({w[i, k]: 1 for i in cluster for k in range(P)}, EQ, 1)
    for k in range(1, P):
        model.add_constraint({y[k]: 1, y[k - 1]: -1}, GE, 0)
    return Model1(model, y, w)


def _report(res: lp.IlpResult, method, subproblem, start, time_limit) -> dict:
    seconds = time.perf_counter() - start
    status = res.status
    if status == "feasible-timeout":
        seconds = time_limit
    lb = res.bound if math.isfinite(res.bound) else 0.0
    lb = max(lb, 0.0)
    return dict(status=status, ub=res.objective, lb=lb,
                gap_percent=lp.gap_percent(res.objective, lb),
                method=method, subproblem=subproblem, nodes=res.nodes,
                seconds=seconds, lb_trace=res.lb_trace)


def solve_ip(inst: SelColInstance, time_limit: float = DEFAULT_TIME_LIMIT) -> SolveReport:
    start = time.perf_counter()
    m1 = build_model1(inst)
    res = lp.solve_ilp(m1.model, m1.binaries, time_limit=time_limit, integral_objective=True)
    fields = _report(res, "ip", "", start, time_limit)
    selection = coloring = None
    if res.values is not None:
        x = res.values
        coloring = {}
        for (i, k), j in m1.w.items():
            if x[j] > 0.5:
                coloring[i] = k + 1
        selection = sorted(coloring)
        # compact the used colors to 1..c
        used = sorted(set(coloring.values()))
        relabel = {c: r + 1 for r, c in enumerate(used)}
        coloring = {v: relabel[c] for v, c in coloring.items()}
    return SolveReport(selection=selection, coloring=coloring, **fields)


# -- cutting plane -----------------------------------------------------------

def build_master(inst: SelColInstance) -> tuple[LpModel, int]:
    """Selection variables ``x_i`` plus the color estimate ``t`` in [0, P]."""
    model = LpModel()
    for i in range(inst.n):
        model.add_var(0, 1, 0.0, f"x{i + 1}")
    t = model.add_var(0, inst.P, 1.0, "t")
    for cluster in inst.clusters:
        model.add_constraint({i: 1 for i in cluster}, EQ, 1)
    return model, t


class _Separator:
    """Separation routine shared by the callback and the outer-loop driver."""

    def __init__(self, inst, mode, subproblem, deadline):
        self.inst = inst
        self.mode = mode
        self.subproblem = subproblem
        self.deadline = deadline
        self.t_index = inst.n
        self.invocations = 0
        self.sub_seconds = 0.0
        self.cuts: list[Cut] = []
        self.log: list[dict] = []
        self.flagged = False

    def _remaining(self):
        left = self.deadline - time.perf_counter()
        if left <= 0:
            raise SolveTimeout
        return left

    def separate(self, x, t, lower_bound=math.nan) -> list[Cut]:
        self.invocations += 1
        j = self.invocations
        sel = [int(i) for i in np.flatnonzero(x[: self.inst.n] > 0.5)]
        sub, idx = induced_subgraph(self.inst.graph, sel)
        entry = dict(invocation=j, selection=sel, t=float(t), lower_bound=lower_bound,
                     clique_checked=False, clique_violated=False,
                     coloring_checked=False, coloring_violated=False, cuts=[])
        self.log.append(entry)
        t0 = time.perf_counter()
        try:
            cut = self._clique_step(sub, idx, x, t, j, entry)
            if cut is None and self.mode == "general":
                cut = self._coloring_step(sub, sel, x, t, j, entry)
        finally:
            self.sub_seconds += time.perf_counter() - t0
        if cut is None:
            return []
        self.cuts.append(cut)
        entry["cuts"].append(cut.kind)
        return [cut]

    def _clique_step(self, sub, idx, x, t, j, entry):
        entry["clique_checked"] = True
        floor_t = int(math.floor(t + CUT_TOL))
        if self.subproblem == "sdp":
            clique = max_clique_sdp(sub)
        else:
            res = max_clique(sub, time_limit=self._remaining(), initial_lb=floor_t)
            if not res.complete:
                if time.perf_counter() >= self.deadline:
                    raise SolveTimeout
                raise SolverFailure("maximum clique subproblem did not complete")
            clique = res.clique if res.improved else []
        entry["clique_size"] = len(clique)
        if not clique:
            return None
        cut = clique_cut([int(idx[v]) for v in clique], j)
        if cut.is_violated(t, x):
            entry["clique_violated"] = True
            return cut
        return None

    def _coloring_step(self, sub, sel, x, t, j, entry):
        entry["coloring_checked"] = True
        res = chromatic_number(sub, time_limit=self._remaining())
        if not res.complete:
            self.flagged = True
            raise SolveTimeout
        entry["chi"] = res.num_colors
        cut = coloring_cut(sel, res.num_colors, j)
        if cut.is_violated(t, x):
            entry["coloring_violated"] = True
            return cut
        return None

    def __call__(self, x, obj, ctx):
        cuts = self.separate(x, x[self.t_index], ctx.lower_bound)
        return [c.as_row(self.t_index) for c in cuts]


def _final_coloring(inst, selection, mode):
    sub, idx = induced_subgraph(inst.graph, selection)
    if mode == "perfect":
        clique = max_clique(sub).clique
        col = color_selection_with_clique(sub, clique)
    else:
        col = chromatic_number(sub).coloring
    return {int(idx[v]): c for v, c in enumerate(col.color_of)}


def _solve_cutplane(inst, mode, subproblem, time_limit, driver):
    if subproblem not in SUBPROBLEMS:
        raise InputError(f"unknown subproblem {subproblem!r}")
    if driver not in ("callback", "outer"):
        raise InputError(f"unknown driver {driver!r}")
    start = time.perf_counter()
    deadline = start + time_limit
    master, t_index = build_master(inst)
    binaries = list(range(inst.n))
    sep = _Separator(inst, mode, subproblem, deadline)
    method = f"cutplane-{mode}"
    if driver == "callback":
        res = lp.solve_ilp(master, binaries, cut_callback=sep, time_limit=time_limit,
                           integral_objective=True)
    else:
        res = _outer_loop(master, binaries, sep, deadline)
    fields = _report(res, method, subproblem, start, time_limit)
    selection = coloring = None
    if res.values is not None:
        selection = [int(i) for i in np.flatnonzero(res.values[: inst.n] > 0.5)]
        if res.status == "optimal":
            coloring = _final_coloring(inst, selection, mode)
    counts = {"clique": 0, "coloring": 0}
    for c in sep.cuts:
        counts[c.kind] += 1
    report = SolveReport(selection=selection, coloring=coloring, iterations=sep.invocations,
                         cuts_clique=counts["clique"], cuts_coloring=counts["coloring"],
                         subproblem_seconds=sep.sub_seconds, cut_log=sep.log,
                         flagged=sep.flagged, **fields)
    return report


def _outer_loop(master, binaries, sep, deadline):
    """Literal master/subproblem alternation: re-solve the master from
    scratch after every added cut."""
    model = master.copy()
    t_index = sep.t_index
    nodes = 0
    lb_trace = []
    start = time.perf_counter()
    while True:
        left = deadline - time.perf_counter()
        res = lp.solve_ilp(model, binaries, time_limit=max(left, 0.0), integral_objective=True)
        nodes += res.nodes
        if res.status != "optimal":
            res.nodes = nodes
            res.lb_trace = lb_trace
            res.values = None
            res.objective = math.inf
            return res
        lb_trace.append(res.objective)
        try:
            cuts = sep.separate(res.values, res.values[t_index], res.objective)
        except SolveTimeout:
            return lp.IlpResult("feasible-timeout", None, math.inf, res.objective, nodes,
                                len(sep.cuts), time.perf_counter() - start, lb_trace)
        if not cuts:
            res.nodes = nodes
            res.cuts_added = len(sep.cuts)
            res.lb_trace = lb_trace
            return res
        for c in cuts:
            model.rows.append(c.as_row(t_index))


def solve_cutplane_perfect(inst: SelColInstance, subproblem: str = "mcs",
                           time_limit: float = DEFAULT_TIME_LIMIT,
                           driver: str = "callback") -> SolveReport:
    """Cutting plane with maximum-clique cuts only; exact when the graph
    is perfect."""
    return _solve_cutplane(inst, "perfect", subproblem, time_limit, driver)


def solve_cutplane_general(inst: SelColInstance, time_limit: float = DEFAULT_TIME_LIMIT,
                           driver: str = "callback") -> SolveReport:
    """Cutting plane for arbitrary graphs: at each integral master solution
    a violated clique cut is added if one exists, otherwise a coloring cut
    from the exact chromatic number of the selection."""
    return _solve_cutplane(inst, "general", "mcs", time_limit, driver)


def solve(inst: SelColInstance, method: str = "cutplane-perfect", subproblem: str = "mcs",
          time_limit: float = DEFAULT_TIME_LIMIT, driver: str = "callback") -> SolveReport:
    if method == "ip":
        return solve_ip(inst, time_limit)
    if method == "cutplane-perfect":
        return solve_cutplane_perfect(inst, subproblem, time_limit, driver)
    if method == "cutplane-general":
        return solve_cutplane_general(inst, time_limit, driver)
    raise InputError(f"unknown method {method!r}")
