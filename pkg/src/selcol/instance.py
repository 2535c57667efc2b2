from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InputError
from .graph import Graph


@dataclass(frozen=True)
class SelColInstance:
    """A graph with its vertex set partitioned into clusters."""

    graph: Graph
    clusters: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        clusters = tuple(tuple(int(v) for v in c) for c in self.clusters)
        object.__setattr__(self, "clusters", clusters)
        n = self.graph.n
        owner = [-1] * n
        for p, cluster in enumerate(clusters):
            if not cluster:
                raise InputError(f"cluster {p + 1} is empty")
            for v in cluster:
                if not 0 <= v < n:
                    raise InputError(f"vertex {v + 1} out of range in cluster {p + 1}")
                if owner[v] != -1:
                    raise InputError(f"vertex {v + 1} in clusters {owner[v] + 1} and {p + 1}")
                owner[v] = p
        for v in range(n):
            if owner[v] == -1:
                raise InputError(f"vertex {v + 1} unassigned")

    @property
    def P(self) -> int:
        return len(self.clusters)

    @property
    def n(self) -> int:
        return self.graph.n

    def cluster_of(self) -> np.ndarray:
        owner = np.empty(self.n, dtype=np.int64)
        for p, cluster in enumerate(self.clusters):
            owner[list(cluster)] = p
        return owner

    def num_selections(self) -> int:
        total = 1
        for c in self.clusters:
            total *= len(c)
        return total

    def is_selection(self, chosen: Sequence[int]) -> bool:
        chosen = set(int(v) for v in chosen)
        return len(chosen) == self.P and all(len(chosen & set(c)) == 1 for c in self.clusters)

    @classmethod
    def singletons(cls, graph: Graph) -> SelColInstance:
        return cls(graph, tuple((v,) for v in range(graph.n)))


def selection_from_vector(inst: SelColInstance, x, tol: float = 0.5) -> list[int]:
    """Vertices with ``x_i > tol``, checked to be a selection."""
    chosen = [int(i) for i in np.flatnonzero(np.asarray(x[: inst.n]) > tol)]
    if not inst.is_selection(chosen):
        raise InputError(f"{chosen} is not a selection")
    return chosen


def cube_instance() -> SelColInstance:
    """Cube graph with four two-vertex clusters, each pairing an outer corner
    with an inner corner. Outer square 1-2-3-4, inner square 5-6-7-8 with
    spokes i -- i+4; 1-based labels map to 0..7."""
    edges = [(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (5, 6), (6, 2), (6, 7),
             (7, 3), (7, 8), (8, 4), (5, 8)]
    g = Graph.from_edges(8, [(u - 1, v - 1) for u, v in edges])
    clusters = ((0, 4), (1, 5), (3, 7), (2, 6))
    return SelColInstance(g, clusters, name="cube")


def edgeless_pair_instance() -> SelColInstance:
    """Edgeless graph on four vertices with clusters {1,2}, {3}, {4}."""
    return SelColInstance(Graph.from_edges(4, []), ((0, 1), (2,), (3,)), name="edgeless_pair")
