"""Exact vertex coloring (DSATUR branch and bound) and the brute-force
selective coloring oracle."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._accel import clock, kernel
from .clique import degree_order, greedy_number, max_clique
from .errors import CapabilityError, InputError, PerfectnessViolation
from .graph import Graph, induced_subgraph
from .instance import SelColInstance


@dataclass
class Coloring:
    color_of: list[int]

    @property
    def num_colors(self) -> int:
        return max(self.color_of, default=0)

    def is_proper(self, g: Graph) -> bool:
        if len(self.color_of) != g.n:
            return False
        if any(c < 1 for c in self.color_of):
            return False
        if set(self.color_of) != set(range(1, self.num_colors + 1)):
            return False
        return all(self.color_of[u] != self.color_of[v] for u, v in g.edges())


@dataclass
class ChromaticResult:
    num_colors: int
    coloring: Coloring
    lower_bound: int
    complete: bool
    nodes: int = 0


@kernel
def _dsatur_kernel(adj, fixed, best_k, lb, deadline, first_only):
    """Search proper colorings with fewer than ``best_k`` colors.

    ``fixed`` holds preassigned colors (0 = free). Returns the best number
    of colors found (``best_k`` if nothing better), its coloring, the node
    count and whether the search ran to completion.
    """
    n = adj.shape[0]
    color = fixed.copy()
    best = np.zeros(n, np.int64)
    satc = np.zeros((n, n + 2), np.int64)
    sat = np.zeros(n, np.int64)
    deg = np.zeros(n, np.int64)
    for v in range(n):
        for u in range(n):
            if adj[v, u]:
                deg[v] += 1
    ncolored = 0
    base_max = 0
    for v in range(n):
        c = color[v]
        if c > 0:
            ncolored += 1
            if c > base_max:
                base_max = c
            for u in range(n):
                if adj[v, u]:
                    if satc[u, c] == 0:
                        sat[u] += 1
                    satc[u, c] += 1
    found = best_k
    nodes = 0
    complete = True
    if ncolored == n:
        if base_max < best_k:
            found = base_max
            best[:] = color
        return found, best, nodes, complete

    vert = np.zeros(n + 1, np.int64)
    nextc = np.zeros(n + 1, np.int64)
    maxused = np.zeros(n + 2, np.int64)
    depth = 0
    maxused[0] = base_max
    # select first branching vertex
    sel = -1
    for v in range(n):
        if color[v] == 0 and (sel < 0 or sat[v] > sat[sel] or (sat[v] == sat[sel] and deg[v] > deg[sel])):
            sel = v
    vert[0] = sel
    nextc[0] = 1
    while depth >= 0:
        v = vert[depth]
        c_old = color[v]
        if c_old > 0:
            color[v] = 0
            ncolored -= 1
            for u in range(n):
                if adj[v, u]:
                    satc[u, c_old] -= 1
                    if satc[u, c_old] == 0:
                        sat[u] -= 1
        limit = maxused[depth] + 1
        if limit > found - 1:
            limit = found - 1
        c = nextc[depth]
        while c <= limit and satc[v, c] > 0:
            c += 1
        if c > limit:
            depth -= 1
            continue
        nodes += 1
        if (nodes & 16383) == 0 and clock() > deadline:
            complete = False
            break
        nextc[depth] = c + 1
        color[v] = c
        ncolored += 1
        for u in range(n):
            if adj[v, u]:
                if satc[u, c] == 0:
                    sat[u] += 1
                satc[u, c] += 1
        mu = maxused[depth]
        if c > mu:
            mu = c
        if ncolored == n:
            found = mu
            best[:] = color
            if first_only or found <= lb:
                break
            continue
        depth += 1
        maxused[depth] = mu
        sel = -1
        for w in range(n):
            if color[w] == 0 and (sel < 0 or sat[w] > sat[sel] or (sat[w] == sat[sel] and deg[w] > deg[sel])):
                sel = w
        vert[depth] = sel
        nextc[depth] = 1
    return found, best, nodes, complete


def _run(g: Graph, fixed, best_k, lb, time_limit, first_only):
    adj = np.ascontiguousarray(g.adjacency).view(np.uint8)
    deadline = clock() + time_limit if math.isfinite(time_limit) else np.inf
    return _dsatur_kernel(adj, np.asarray(fixed, dtype=np.int64), int(best_k), int(lb),
                          float(deadline), bool(first_only))


def greedy_coloring(g: Graph) -> Coloring:
    """Smallest-label greedy coloring in non-increasing degree order."""
    labels = greedy_number(g, [int(v) for v in degree_order(g)])
    return Coloring([labels[v] for v in range(g.n)])


def chromatic_number(g: Graph, time_limit: float = math.inf) -> ChromaticResult:
    """Exact chromatic number with a certifying coloring.

    The vertices of a maximum clique are precolored ``1..omega``, which
    both seeds the lower bound and removes color-permutation symmetry.
    On timeout the best coloring found and the clique bound are returned
    with ``complete=False``.
    """
    if g.n == 0:
        return ChromaticResult(0, Coloring([]), 0, True)
    start = clock()
    cl = max_clique(g, time_limit=max(min(time_limit, 1.0), 1e-3))
    lb = cl.size if cl.complete else 1
    fixed = np.zeros(g.n, dtype=np.int64)
    for i, v in enumerate(cl.clique):
        fixed[v] = i + 1
    greedy = greedy_coloring(g)
    remaining = time_limit - (clock() - start) if math.isfinite(time_limit) else math.inf
    if greedy.num_colors <= cl.size:
        return ChromaticResult(int(greedy.num_colors), greedy, int(greedy.num_colors), True)
    k, colors, nodes, complete = _run(g, fixed, greedy.num_colors, cl.size,
                                      max(remaining, 0.0), False)
    if k >= greedy.num_colors:
        coloring = greedy
        k = greedy.num_colors
    else:
        coloring = Coloring([int(c) for c in colors])
    if complete:
        lb = k
    return ChromaticResult(int(k), coloring, int(lb), bool(complete), int(nodes))


def color_selection_with_clique(g_sel: Graph, clique: Sequence[int]) -> Coloring:
    """A proper ``|clique|``-coloring with the clique holding colors 1..k."""
    k = len(clique)
    if g_sel.n == 0:
        return Coloring([])
    if k == 0:
        raise InputError("clique must be nonempty for a nonempty graph")
    if not g_sel.is_clique(clique):
        raise InputError(f"{list(clique)} is not a clique")
    fixed = np.zeros(g_sel.n, dtype=np.int64)
    for i, v in enumerate(clique):
        fixed[v] = i + 1
    found, colors, _, _ = _run(g_sel, fixed, k + 1, k, math.inf, True)
    if found > k:
        raise PerfectnessViolation(f"no {k}-coloring extends the clique; graph is not perfect")
    return Coloring(colors.tolist())


def brute_force_selcol(inst: SelColInstance, budget: int = 10**6) -> tuple[int, list[int]]:
    """Selective chromatic number by enumerating every selection."""
    total = inst.num_selections()
    if total > budget:
        raise CapabilityError(f"{total} selections exceed the budget of {budget}")
    best, best_sel = math.inf, None
    for sel in itertools.product(*inst.clusters):
        sub, _ = induced_subgraph(inst.graph, sel)
        if sub.m == 0:
            return 1, list(sel)
        k = chromatic_number(sub).num_colors
        if k < best:
            best, best_sel = k, list(sel)
    return int(best), best_sel
