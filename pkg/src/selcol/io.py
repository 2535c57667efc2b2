"""Text format for Sel-Col instances.

::

    c optional comment
    p selcol <n> <m> <P>
    e <u> <v>              one per edge, 1-based
    k <p> <v1> ... <vr>    one per cluster, p = 1..P
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import InstanceFormatError, InputError
from .graph import Graph
from .instance import SelColInstance


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InstanceFormatError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def parse_instance(text: str, name: str = "") -> SelColInstance:
    header = None
    edges: list[tuple[int, int]] = []
    seen_edges: set[tuple[int, int]] = set()
    clusters: dict[int, tuple[int, ...]] = {}
    owner: dict[int, int] = {}
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        tag, rest = tokens[0], tokens[1:]
        if tag == "p":
            if header is not None:
                raise InstanceFormatError("duplicate problem line", lineno)
            if len(rest) != 4 or rest[0] != "selcol":
                raise InstanceFormatError("problem line must read 'p selcol <n> <m> <P>'", lineno)
            header = _ints(rest[1:], lineno)
            n = header[0]
            if n < 1 or header[1] < 0 or header[2] < 1:
                raise InstanceFormatError("invalid counts on problem line", lineno)
            continue
        if header is None:
            raise InstanceFormatError("data before the problem line", lineno)
        if tag == "e":
            if len(rest) != 2:
                raise InstanceFormatError("edge line needs two endpoints", lineno)
            u, v = _ints(rest, lineno)
            for w in (u, v):
                if not 1 <= w <= n:
                    raise InstanceFormatError(f"vertex {w} out of range 1..{n}", lineno)
            if u == v:
                raise InstanceFormatError(f"self-loop on vertex {u}", lineno)
            key = (min(u, v), max(u, v))
            if key in seen_edges:
                raise InstanceFormatError(f"duplicate edge {key[0]} {key[1]}", lineno)
            seen_edges.add(key)
            edges.append((key[0] - 1, key[1] - 1))
        elif tag == "k":
            vals = _ints(rest, lineno)
            if len(vals) < 2:
                raise InstanceFormatError("cluster line needs an index and a vertex", lineno)
            p, members = vals[0], vals[1:]
            if not 1 <= p <= header[2]:
                raise InstanceFormatError(f"cluster index {p} out of range 1..{header[2]}", lineno)
            if p in clusters:
                raise InstanceFormatError(f"cluster {p} defined twice", lineno)
            for v in members:
                if not 1 <= v <= n:
                    raise InstanceFormatError(f"vertex {v} out of range 1..{n}", lineno)
                if v in owner:
                    raise InstanceFormatError(
                        f"vertex {v} in clusters {owner[v]} and {p}", lineno)
                owner[v] = p
            clusters[p] = tuple(v - 1 for v in members)
        else:
            raise InstanceFormatError(f"unknown line type {tag!r}", lineno)
    if header is None:
        raise InstanceFormatError("missing problem line", last_line or None)
    n, m, P = header
    if len(edges) != m:
        raise InstanceFormatError(f"header declares {m} edges, found {len(edges)}", last_line)
    if len(clusters) != P:
        raise InstanceFormatError(f"header declares {P} clusters, found {len(clusters)}", last_line)
    for v in range(1, n + 1):
        if v not in owner:
            raise InstanceFormatError(f"vertex {v} unassigned", last_line)
    adj = np.zeros((n, n), dtype=np.bool_)
    for u, v in edges:
        adj[u, v] = adj[v, u] = True
    try:
        return SelColInstance(Graph(adj), tuple(clusters[p] for p in range(1, P + 1)), name)
    except InputError as exc:
        raise InstanceFormatError(str(exc), last_line) from exc


def write_instance(inst: SelColInstance, comment: str = "") -> str:
    g = inst.graph
    lines = [f"c {c}" for c in comment.splitlines() if c]
    lines.append(f"p selcol {g.n} {g.m} {inst.P}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    for p, cluster in enumerate(inst.clusters, start=1):
        lines.append(f"k {p} " + " ".join(str(v + 1) for v in cluster))
    return "\n".join(lines) + "\n"


def read_instance(path) -> SelColInstance:
    path = Path(path)
    return parse_instance(path.read_text(encoding="utf-8"), name=path.stem)


def save_instance(inst: SelColInstance, path, comment: str = "") -> None:
    Path(path).write_text(write_instance(inst, comment), encoding="utf-8", newline="\n")
