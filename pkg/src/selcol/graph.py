"""Dense, immutable simple undirected graphs."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InputError, UndefinedDensityError


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    The adjacency matrix is a read-only ``bool`` array; graphs are never
    mutated after construction.
    """

    __slots__ = ("_adj", "_m")

    def __init__(self, adjacency):
        adj = np.array(adjacency, dtype=bool, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InputError("adjacency must be a square matrix")
        if adj.shape[0] and adj.diagonal().any():
            raise InputError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise InputError("adjacency must be symmetric")
        adj.setflags(write=False)
        self._adj = adj
        self._m = int(adj.sum()) // 2

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            adj[u, v] = adj[v, u] = True
        return cls(adj)

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def m(self) -> int:
        return self._m

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u, v])

    def neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self._adj[v])

    def degrees(self) -> np.ndarray:
        return self._adj.sum(axis=1)

    def edges(self) -> Iterator[tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self._adj, 1))
        for u, v in zip(us.tolist(), vs.tolist()):
            yield u, v

    def is_clique(self, vertices: Sequence[int]) -> bool:
        idx = np.asarray(list(vertices), dtype=np.intp)
        sub = self._adj[np.ix_(idx, idx)]
        return bool(sub.sum() == len(idx) * (len(idx) - 1))

    def is_stable(self, vertices: Sequence[int]) -> bool:
        idx = np.asarray(list(vertices), dtype=np.intp)
        return not self._adj[np.ix_(idx, idx)].any()

    def complement(self) -> Graph:
        return complement(self)

    def induced_subgraph(self, vertices: Sequence[int]) -> tuple[Graph, np.ndarray]:
        return induced_subgraph(self, vertices)

    def is_connected(self) -> bool:
        n = self.n
        if n <= 1:
            return True
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        frontier = seen.copy()
        while frontier.any():
            frontier = self._adj[frontier].any(axis=0) & ~seen
            seen |= frontier
        return bool(seen.all())

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self._adj, other._adj)

    def __hash__(self):
        return hash((self.n, np.packbits(self._adj).tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def complement(g: Graph) -> Graph:
    adj = ~g.adjacency
    np.fill_diagonal(adj, False)
    return Graph(adj)


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> tuple[Graph, np.ndarray]:
    """Return ``G[vertices]`` and the map from new ids back to ids in ``g``."""
    idx = np.asarray(list(vertices), dtype=np.intp)
    if idx.size and (idx.min() < 0 or idx.max() >= g.n):
        raise InputError(f"vertex set {idx.tolist()} out of range for n={g.n}")
    if np.unique(idx).size != idx.size:
        raise InputError("vertex set contains duplicates")
    return Graph(g.adjacency[np.ix_(idx, idx)]), idx


def density_fraction(g: Graph) -> Fraction:
    if g.n < 2:
        raise UndefinedDensityError(f"edge density undefined for n={g.n}")
    return Fraction(g.m, g.n * (g.n - 1) // 2)


def edge_density(g: Graph) -> float:
    return float(density_fraction(g))


# Small named graphs used across tests, examples and the generator.

def empty_graph(n: int) -> Graph:
    return Graph(np.zeros((n, n), dtype=bool))


def complete_graph(n: int) -> Graph:
    adj = np.ones((n, n), dtype=bool)
    np.fill_diagonal(adj, False)
    return Graph(adj)


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Erdos-Renyi G(n, p)."""
    upper = np.triu(rng.random((n, n)) < p, 1)
    return Graph(upper | upper.T)
