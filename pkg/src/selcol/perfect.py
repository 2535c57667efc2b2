"""Brute-force perfection test through odd holes and odd antiholes."""

from __future__ import annotations

import numpy as np

from ._accel import kernel
from .errors import CapabilityError
from .graph import Graph, complement

DEFAULT_GUARD = 32


@kernel
def _odd_hole_kernel(adj):
    n = adj.shape[0]
    path = np.empty(n + 1, np.int64)
    nxt = np.empty(n + 1, np.int64)
    onpath = np.zeros(n, np.bool_)
    for s in range(n):
        path[0] = s
        onpath[s] = True
        nxt[0] = s + 1
        depth = 1
        while depth > 0:
            k = depth - 1
            last = path[k]
            v = nxt[k]
            while v < n:
                if adj[last, v] and not onpath[v]:
                    ok = True
                    for j in range(1, k):
                        if adj[path[j], v]:
                            ok = False
                            break
                    if ok:
                        break
                v += 1
            if v >= n:
                if k > 0:
                    onpath[last] = False
                depth -= 1
                continue
            nxt[k] = v + 1
            if k >= 1 and adj[path[0], v]:
                # v closes a chordless cycle of length k + 2
                length = k + 2
                if length >= 5 and length % 2 == 1:
                    out = np.empty(length, np.int64)
                    for j in range(k + 1):
                        out[j] = path[j]
                    out[k + 1] = v
                    return out
                continue
            path[depth] = v
            onpath[v] = True
            nxt[depth] = s + 1
            depth += 1
        onpath[s] = False
    return np.empty(0, np.int64)


def _check_guard(g: Graph, guard):
    limit = DEFAULT_GUARD if guard is None else guard
    if g.n > limit:
        raise CapabilityError(f"odd-hole search limited to n <= {limit}, got n={g.n}")


def is_chordless_cycle(g: Graph, cycle) -> bool:
    k = len(cycle)
    if k < 3 or len(set(cycle)) != k:
        return False
    for i in range(k):
        for j in range(i + 1, k):
            consecutive = j == i + 1 or (i == 0 and j == k - 1)
            if g.has_edge(cycle[i], cycle[j]) != consecutive:
                return False
    return True


def find_odd_hole(g: Graph, guard: int | None = None) -> list[int] | None:
    """Return an induced odd cycle of length at least five, or ``None``."""
    _check_guard(g, guard)
    cyc = _odd_hole_kernel(g.adjacency.view(np.uint8))
    if cyc.size == 0:
        return None
    cycle = cyc.tolist()
    assert is_chordless_cycle(g, cycle)
    return cycle


def is_perfect(g: Graph, guard: int | None = None) -> bool:
    _check_guard(g, guard)
    if find_odd_hole(g, guard) is not None:
        return False
    return find_odd_hole(complement(g), guard) is None
