"""Random perfect graphs grown from a library of small perfect graphs using
operations that preserve perfection, and random vertex partitions."""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass

import numpy as np

from ._accel import kernel
from .errors import CapabilityError, GenerationFailure, InputError
from .graph import Graph
from .perfect import is_perfect

LIBRARY_GUARD = 7
DEFAULT_BASE_N = 6
DEFAULT_RESTARTS = 10_000
DEFAULT_EPSILON = 0.025
COMPLEMENT_PROB = 1 / 7
_DRAW_ATTEMPTS = 64


class PerfectOp(enum.Enum):
    CLIQUE_IDENTIFICATION = "clique_identification"
    SUBSTITUTION = "substitution"
    COMPOSITION = "composition"
    DISJOINT_UNION = "disjoint_union"
    JOIN = "join"
    COMPLEMENT = "complement"


GROWING_OPS = tuple(op for op in PerfectOp if op is not PerfectOp.COMPLEMENT)


@dataclass(frozen=True)
class GenConfig:
    n: int
    rho: float
    epsilon: float = DEFAULT_EPSILON
    seed: int = 0
    max_restarts: int = DEFAULT_RESTARTS

    def __post_init__(self):
        if self.n < 2:
            raise InputError(f"n must be at least 2, got {self.n}")
        if not 0 < self.rho < 1:
            raise InputError(f"density must lie in (0, 1), got {self.rho}")
        if self.epsilon <= 0:
            raise InputError(f"epsilon must be positive, got {self.epsilon}")


# -- base library --------------------------------------------------------------

@kernel
def _canonical_code(adj, perms):
    """Smallest upper-triangle bitmask over all relabelings."""
    n = adj.shape[0]
    best = -1
    for p in range(perms.shape[0]):
        code = 0
        bit = 0
        for i in range(n):
            pi = perms[p, i]
            for j in range(i + 1, n):
                if adj[pi, perms[p, j]]:
                    code |= 1 << bit
                bit += 1
        if best < 0 or code < best:
            best = code
    return best


def _decode(code: int, n: int) -> np.ndarray:
    adj = np.zeros((n, n), dtype=np.bool_)
    bit = 0
    for i in range(n):
        for j in range(i + 1, n):
            if code >> bit & 1:
                adj[i, j] = adj[j, i] = True
            bit += 1
    return adj


def _all_graphs_up_to_iso(k: int, smaller: list[np.ndarray]) -> list[np.ndarray]:
    """Every k-vertex graph, one per isomorphism class, by appending a vertex
    with every possible neighborhood to each (k-1)-vertex class."""
    perms = np.array(list(itertools.permutations(range(k))), dtype=np.int64)
    codes = set()
    for base in smaller:
        adj = np.zeros((k, k), dtype=np.bool_)
        adj[: k - 1, : k - 1] = base
        for mask in range(1 << (k - 1)):
            nb = np.array([(mask >> i) & 1 for i in range(k - 1)], dtype=np.bool_)
            adj[k - 1, : k - 1] = nb
            adj[: k - 1, k - 1] = nb
            codes.add(int(_canonical_code(adj, perms)))
    return [_decode(c, k) for c in sorted(codes)]


@dataclass(frozen=True)
class BaseLibrary:
    graphs: dict[int, tuple[Graph, ...]]

    @property
    def max_n(self) -> int:
        return max(self.graphs)

    def all(self) -> list[Graph]:
        return [g for k in sorted(self.graphs) for g in self.graphs[k]]

    def up_to(self, size: int) -> list[Graph]:
        return [g for k in sorted(self.graphs) if k <= size for g in self.graphs[k]]

    def __len__(self):
        return sum(len(v) for v in self.graphs.values())


@functools.lru_cache(maxsize=None)
def build_base_library(max_base_n: int = DEFAULT_BASE_N) -> BaseLibrary:
    """Connected perfect graphs on 1..max_base_n vertices up to isomorphism."""
    if max_base_n > LIBRARY_GUARD:
        raise CapabilityError(f"base library limited to {LIBRARY_GUARD} vertices")
    if max_base_n < 1:
        raise InputError("base library needs at least one vertex")
    layer = [np.zeros((1, 1), dtype=np.bool_)]
    graphs = {1: (Graph(layer[0]),)}
    for k in range(2, max_base_n + 1):
        layer = _all_graphs_up_to_iso(k, layer)
        keep = []
        for adj in layer:
            g = Graph(adj)
            if g.is_connected() and is_perfect(g):
                keep.append(g)
        graphs[k] = tuple(keep)
    return BaseLibrary(graphs)


# -- operations --------------------------------------------------------------

def _block(a: np.ndarray, b: np.ndarray, link: bool) -> np.ndarray:
    n1, n2 = len(a), len(b)
    out = np.zeros((n1 + n2, n1 + n2), dtype=np.bool_)
    out[:n1, :n1] = a
    out[n1:, n1:] = b
    if link:
        out[:n1, n1:] = True
        out[n1:, :n1] = True
    return out


def op_disjoint_union(g: Graph, g2: Graph) -> Graph:
    return Graph(_block(g.adjacency, g2.adjacency, False))


def op_join(g: Graph, g2: Graph) -> Graph:
    return Graph(_block(g.adjacency, g2.adjacency, True))


def op_complement(g: Graph) -> Graph:
    return g.complement()


def op_substitution(g: Graph, v: int, g2: Graph) -> Graph:
    """Replace ``v`` by a copy of ``g2`` joined to the old neighbors of ``v``."""
    if not 0 <= v < g.n:
        raise InputError(f"vertex {v} not in graph of order {g.n}")
    adj = _block(g.adjacency, g2.adjacency, False)
    adj[g.n:, : g.n] = g.adjacency[v]
    adj[: g.n, g.n:] = g.adjacency[v][:, None]
    keep = np.array([i for i in range(len(adj)) if i != v])
    return Graph(adj[np.ix_(keep, keep)])


def op_composition(g: Graph, v: int, g2: Graph, v2: int) -> Graph:
    """Delete ``v`` and ``v2`` and join their former neighborhoods."""
    if g.n < 3 or g2.n < 3:
        raise InputError("composition needs two graphs with at least three vertices")
    if not (0 <= v < g.n and 0 <= v2 < g2.n):
        raise InputError("composition vertex out of range")
    adj = _block(g.adjacency, g2.adjacency, False)
    n1 = g.n
    a = np.flatnonzero(g.adjacency[v])
    b = np.flatnonzero(g2.adjacency[v2]) + n1
    adj[np.ix_(a, b)] = True
    adj[np.ix_(b, a)] = True
    keep = np.array([i for i in range(len(adj)) if i not in (v, n1 + v2)])
    return Graph(adj[np.ix_(keep, keep)])


def _random_maximal_clique(adj: np.ndarray, start: int, rng) -> list[int]:
    clique = [start]
    cand = adj[start].copy()
    while cand.any():
        u = int(rng.choice(np.flatnonzero(cand)))
        clique.append(u)
        cand &= adj[u]
    return clique


def op_clique_identification(g: Graph, g2: Graph, rng, cliques=None) -> Graph:
    """Glue ``g`` and ``g2`` along cliques: the smaller of two random maximal
    cliques is identified with a random subset of the larger one.

    ``cliques=(k1, k2)`` fixes the two cliques instead of drawing them.
    """
    if cliques is None:
        k1 = _random_maximal_clique(g.adjacency, int(rng.integers(g.n)), rng)
        k2 = _random_maximal_clique(g2.adjacency, int(rng.integers(g2.n)), rng)
    else:
        k1, k2 = (list(k) for k in cliques)
        if not (k1 and k2 and g.is_clique(k1) and g2.is_clique(k2)):
            raise InputError("clique identification needs two nonempty cliques")
    s = min(len(k1), len(k2))
    big1 = len(k1) >= len(k2)
    # map each vertex of g2 to its index in the result
    mapping = np.full(g2.n, -1, dtype=np.int64)
    if big1:
        targets = rng.permutation(k1)[:s]
        for a, b in zip(rng.permutation(k2), targets):
            mapping[a] = b
    else:
        targets = rng.permutation(k2)[:s]
        for a, b in zip(rng.permutation(k1), targets):
            mapping[b] = a
    nxt = g.n
    for u in range(g2.n):
        if mapping[u] < 0:
            mapping[u] = nxt
            nxt += 1
    adj = np.zeros((nxt, nxt), dtype=np.bool_)
    adj[: g.n, : g.n] = g.adjacency
    for u, w in g2.edges():
        adj[mapping[u], mapping[w]] = adj[mapping[w], mapping[u]] = True
    return Graph(adj)


def apply_op(op: PerfectOp, g: Graph, g2: Graph | None, rng) -> Graph:
    if op is PerfectOp.COMPLEMENT:
        return op_complement(g)
    if op is PerfectOp.DISJOINT_UNION:
        return op_disjoint_union(g, g2)
    if op is PerfectOp.JOIN:
        return op_join(g, g2)
    if op is PerfectOp.SUBSTITUTION:
        return op_substitution(g, int(rng.integers(g.n)), g2)
    if op is PerfectOp.COMPOSITION:
        return op_composition(g, int(rng.integers(g.n)), g2, int(rng.integers(g2.n)))
    return op_clique_identification(g, g2, rng)


def _max_growth(op: PerfectOp, g2: Graph) -> int:
    if op is PerfectOp.SUBSTITUTION:
        return g2.n - 1
    if op is PerfectOp.COMPOSITION:
        return g2.n - 2
    if op is PerfectOp.CLIQUE_IDENTIFICATION:
        return g2.n - 1
    return g2.n


def _grow(g: Graph, budget: int, pool: list[Graph], rng) -> Graph | None:
    """One growth step with net vertex gain in [1, budget], or None."""
    for _ in range(_DRAW_ATTEMPTS):
        op = GROWING_OPS[int(rng.integers(len(GROWING_OPS)))]
        g2 = pool[int(rng.integers(len(pool)))]
        if op is PerfectOp.COMPOSITION and (g.n < 3 or g2.n < 3):
            continue
        if _max_growth(op, g2) < 1:
            continue
        if op is not PerfectOp.CLIQUE_IDENTIFICATION and _max_growth(op, g2) > budget:
            continue
        out = apply_op(op, g, g2, rng)
        if 1 <= out.n - g.n <= budget:
            return out
    return None


def _density(g: Graph) -> float:
    return 2.0 * g.m / (g.n * (g.n - 1))


def generate_perfect(cfg: GenConfig, library: BaseLibrary | None = None) -> Graph:
    """Grow a random perfect graph on exactly ``cfg.n`` vertices whose edge
    density (or that of its complement, taken instead) is within
    ``cfg.epsilon`` of ``cfg.rho``."""
    library = library or build_base_library()
    rng = np.random.default_rng(cfg.seed)
    starts = library.up_to(cfg.n)
    if not starts:
        raise InputError("base library has no graph small enough")
    closest = None
    for _ in range(cfg.max_restarts):
        g = starts[int(rng.integers(len(starts)))]
        flipped_last = False
        flips = 0
        while g is not None and g.n < cfg.n:
            if not flipped_last and flips < 2 * cfg.n and rng.random() < COMPLEMENT_PROB:
                g = op_complement(g)
                flipped_last = True
                flips += 1
                continue
            flipped_last = False
            g = _grow(g, cfg.n - g.n, library.up_to(cfg.n - g.n + 2), rng)
        if g is None:
            continue
        d = _density(g)
        if abs(d - cfg.rho) < cfg.epsilon:
            return g
        if abs(1 - d - cfg.rho) < cfg.epsilon:
            return op_complement(g)
        for cand in (d, 1 - d):
            if closest is None or abs(cand - cfg.rho) < abs(closest - cfg.rho):
                closest = cand
    raise GenerationFailure(
        f"no graph with density within {cfg.epsilon} of {cfg.rho} after "
        f"{cfg.max_restarts} restarts (closest {closest})",
        closest_density=closest,
    )


def generate_partition(n: int, lo: int, hi: int, rng) -> list[tuple[int, ...]]:
    """Cut a random vertex order into consecutive blocks of random size in
    [lo, hi]; a tail shorter than ``lo`` joins the last block."""
    if not 1 <= lo <= hi <= n:
        raise InputError(f"invalid cluster size bounds [{lo}, {hi}] for n={n}")
    order = rng.permutation(n)
    clusters: list[list[int]] = []
    pos = 0
    while pos < n:
        r = int(rng.integers(lo, hi + 1))
        chunk = [int(v) for v in order[pos: pos + r]]
        pos += r
        if len(chunk) < lo and clusters:
            clusters[-1].extend(chunk)
        else:
            clusters.append(chunk)
    return [tuple(sorted(c)) for c in clusters]
