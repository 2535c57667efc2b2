"""Maximum clique by branch and bound with greedy numbering and recoloring.

The search follows the MCS scheme: candidates are greedily numbered
(colored), the number of a candidate bounds the clique that can still be
grown through it, and vertices whose number exceeds the pruning level are
moved to a lower class when a single-conflict exchange allows it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._accel import clock, kernel
from .graph import Graph

POLL_MASK = (1 << 14) - 1


@dataclass
class MaxCliqueResult:
    clique: list[int]
    size: int
    nodes_explored: int
    elapsed: float
    complete: bool = True
    # False when an initial lower bound was given and nothing larger exists;
    # ``clique`` is then a heuristic clique, not necessarily maximum.
    improved: bool = True


@kernel
def _number_sort(adj, cand, ncand, kmin, out_v, out_c, cls, cnt):
    """Number ``cand[:ncand]`` greedily with recoloring above ``kmin``.

    Writes the candidates sorted by number into ``out_v``/``out_c``.
    ``cls``/``cnt`` are scratch buffers of shape (n + 1, n) and (n + 1,).
    """
    maxno = 0
    for i in range(ncand):
        p = cand[i]
        k = 1
        while k <= maxno:
            hit = False
            for j in range(cnt[k]):
                if adj[p, cls[k, j]]:
                    hit = True
                    break
            if not hit:
                break
            k += 1
        if k > maxno:
            maxno = k
            cnt[k] = 0
        cls[k, cnt[k]] = p
        cnt[k] += 1
        if k > kmin and k == maxno and kmin >= 2:
            moved = False
            for k1 in range(1, kmin):
                nconf = 0
                q = -1
                qpos = -1
                for j in range(cnt[k1]):
                    if adj[p, cls[k1, j]]:
                        nconf += 1
                        q = cls[k1, j]
                        qpos = j
                        if nconf > 1:
                            break
                if nconf != 1:
                    continue
                for k2 in range(k1 + 1, kmin + 1):
                    free = True
                    for j in range(cnt[k2]):
                        if adj[q, cls[k2, j]]:
                            free = False
                            break
                    if free:
                        cnt[k] -= 1
                        cls[k1, qpos] = p
                        cls[k2, cnt[k2]] = q
                        cnt[k2] += 1
                        moved = True
                        break
                if moved:
                    break
            if moved and cnt[maxno] == 0:
                maxno -= 1
    pos = 0
    for k in range(1, maxno + 1):
        for j in range(cnt[k]):
            out_v[pos] = cls[k, j]
            out_c[pos] = k
            pos += 1
    return pos


@kernel
def _mcs_kernel(adj, lb, deadline):
    n = adj.shape[0]
    rv = np.zeros((n + 1, n), np.int64)
    rc = np.zeros((n + 1, n), np.int64)
    rpos = np.zeros(n + 1, np.int64)
    q = np.zeros(n + 1, np.int64)
    best = np.zeros(n, np.int64)
    best_size = lb
    found = 0
    cls = np.zeros((n + 1, n), np.int64)
    cnt = np.zeros(n + 1, np.int64)
    cand = np.zeros(n, np.int64)
    for i in range(n):
        cand[i] = i
    nodes = 0
    complete = True
    top = _number_sort(adj, cand, n, best_size, rv[0], rc[0], cls, cnt)
    rpos[0] = top - 1
    d = 0
    while d >= 0:
        i = rpos[d]
        if i < 0 or d + rc[d, i] <= best_size:
            d -= 1
            continue
        nodes += 1
        if (nodes & 16383) == 0 and clock() > deadline:
            complete = False
            break
        p = rv[d, i]
        rpos[d] = i - 1
        q[d] = p
        # remaining candidates at this level, back in initial (id) order
        ncand = 0
        for j in range(i):
            u = rv[d, j]
            if adj[p, u]:
                cand[ncand] = u
                ncand += 1
        if ncand == 0:
            if d + 1 > best_size:
                best_size = d + 1
                found = d + 1
                for j in range(d + 1):
                    best[j] = q[j]
            continue
        cand[:ncand].sort()
        kmin = best_size - (d + 1)
        top = _number_sort(adj, cand, ncand, kmin, rv[d + 1], rc[d + 1], cls, cnt)
        rpos[d + 1] = top - 1
        d += 1
    return found, best[:found].copy(), nodes, complete


def degree_order(g: Graph) -> np.ndarray:
    """Vertices by non-increasing degree, ties by smaller id."""
    deg = g.degrees()
    return np.lexsort((np.arange(g.n), -deg))


def greedy_clique(g: Graph) -> list[int]:
    if g.n == 0:
        return []
    adj = g.adjacency
    order = degree_order(g)
    clique = [int(order[0])]
    cand = adj[order[0]].copy()
    for v in order[1:]:
        if cand[v]:
            clique.append(int(v))
            cand &= adj[v]
    return clique


def max_clique(g: Graph, time_limit: float = math.inf, initial_lb: int = 0) -> MaxCliqueResult:
    """Find a maximum clique of ``g``.

    With ``initial_lb`` the search only looks for cliques larger than it;
    when none exists the result carries ``improved=False`` and a greedy
    clique.
    """
    start = time.perf_counter()
    if g.n == 0:
        return MaxCliqueResult([], 0, 0, 0.0, True, initial_lb == 0)
    order = degree_order(g)
    adj = np.ascontiguousarray(g.adjacency[np.ix_(order, order)]).view(np.uint8)
    deadline = clock() + time_limit if math.isfinite(time_limit) else np.inf
    size, members, nodes, complete = _mcs_kernel(adj, int(initial_lb), float(deadline))
    elapsed = time.perf_counter() - start
    if size > 0:
        clique = sorted(int(order[v]) for v in members)
        return MaxCliqueResult(clique, len(clique), int(nodes), elapsed, bool(complete), True)
    clique = [int(v) for v in greedy_clique(g)]
    return MaxCliqueResult(sorted(clique), len(clique), int(nodes), elapsed, bool(complete), False)


def clique_number(g: Graph) -> int:
    return max_clique(g).size


def greedy_number(g: Graph, order: Sequence[int]) -> dict[int, int]:
    """Smallest-label greedy numbering of ``order``; labels start at 1."""
    adj = g.adjacency
    labels: dict[int, int] = {}
    for v in order:
        used = {labels[u] for u in labels if adj[v, u]}
        k = 1
        while k in used:
            k += 1
        labels[v] = k
    return labels


def re_number(g: Graph, labels: dict[int, int], threshold: int) -> dict[int, int]:
    """Try to move every vertex labeled above ``threshold`` into a class at
    or below it by a single-conflict exchange.

    A vertex ``p`` moves to class ``k1 < threshold`` when exactly one
    neighbor ``q`` of ``p`` sits there and ``q`` can itself move to some
    class ``k2`` with ``k1 < k2 <= threshold`` that contains none of its
    neighbors.
    """
    adj = g.adjacency
    out = dict(labels)
    high = sorted((v for v in out if out[v] > threshold), key=lambda v: (-out[v], v))
    for p in high:
        done = False
        for k1 in range(1, threshold):
            conflicts = [u for u in out if out[u] == k1 and adj[p, u]]
            if len(conflicts) != 1:
                continue
            q = conflicts[0]
            for k2 in range(k1 + 1, threshold + 1):
                if not any(adj[q, u] for u in out if out[u] == k2 and u != q):
                    out[p], out[q] = k1, k2
                    done = True
                    break
            if done:
                break
    return out
