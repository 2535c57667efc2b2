"""Lovasz theta by a first-order SDP method, and maximum stable set /
clique extraction for perfect graphs by repeated theta evaluations."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, SolverFailure
from .graph import Graph, complement, induced_subgraph

DEFAULT_TOL = 1e-6
MAX_ITER = 50_000
ROUND_BAND = 0.25


@dataclass
class ThetaResult:
    theta: float
    upper_bound: float
    X: np.ndarray
    trace_gap: float
    edge_violation: float
    min_eigenvalue: float
    iterations: int


def _project_affine(V, edge_mask):
    X = 0.5 * (V + V.T)
    X[edge_mask] = 0.0
    n = X.shape[0]
    X[np.diag_indices(n)] += (1.0 - np.trace(X)) / n
    return X


def _project_psd(W):
    w, Q = np.linalg.eigh(W)
    w = np.maximum(w, 0.0)
    return (Q * w) @ Q.T


def _certify(X, U, rho, edge_mask):
    """Feasible lower bound from ``X`` and dual upper bound from ``U``."""
    n = X.shape[0]
    shift = max(0.0, -float(np.linalg.eigvalsh(X)[0]))
    Xf = (X + shift * np.eye(n)) / (1.0 + n * shift)
    lower = float(Xf.sum())
    M = np.ones((n, n))
    M[edge_mask] = rho * U[edge_mask]
    M = 0.5 * (M + M.T)
    upper = float(np.linalg.eigvalsh(M)[-1])
    return Xf, lower, upper


def lovasz_theta(g: Graph, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER) -> ThetaResult:
    """Theta of ``g``: max sum(X) over PSD X with unit trace and zero
    entries on edges.

    Solved by ADMM between the affine constraint set and the PSD cone.
    Every few iterations a feasible X (shifted toward the identity) gives
    a lower bound and the multiplier on edge entries gives a dual upper
    bound; iteration stops when they agree within ``tol``.
    """
    n = g.n
    if n == 0:
        raise SolverFailure("theta of the empty graph is undefined")
    edge_mask = g.adjacency.copy()
    if n == 1:
        return ThetaResult(1.0, 1.0, np.ones((1, 1)), 0.0, 0.0, 1.0, 0)
    J = np.ones((n, n))
    rho = 1.0 / n
    Z = np.eye(n) / n
    U = np.zeros((n, n))
    lower, upper = -math.inf, math.inf
    Xf = Z
    it = 0
    for it in range(1, max_iter + 1):
        X = _project_affine(Z - U + J / rho, edge_mask)
        Z_old = Z
        Z = _project_psd(X + U)
        U += X - Z
        if it % 10 == 0 or it == max_iter:
            Xf, lower, upper = _certify(X, U, rho, edge_mask)
            if upper - lower <= tol:
                break
            r = np.linalg.norm(X - Z)
            s = rho * np.linalg.norm(Z - Z_old)
            if r > 10.0 * s:
                rho *= 2.0
                U /= 2.0
            elif s > 10.0 * r:
                rho /= 2.0
                U *= 2.0
    else:
        raise SolverFailure(f"theta did not converge: bounds [{lower}, {upper}] after {it} iterations")
    eig_min = float(np.linalg.eigvalsh(Xf)[0])
    return ThetaResult(
        theta=lower,
        upper_bound=upper,
        X=Xf,
        trace_gap=abs(float(np.trace(Xf)) - 1.0),
        edge_violation=float(np.abs(Xf[edge_mask]).max(initial=0.0)),
        min_eigenvalue=eig_min,
        iterations=it,
    )


def _rounded(g, tol):
    res = lovasz_theta(g, tol=tol)
    k = round(res.theta)
    if abs(res.theta - k) > 0.1 and tol > 1e-7:
        res = lovasz_theta(g, tol=1e-7)
        k = round(res.theta)
    if abs(res.theta - k) > ROUND_BAND:
        raise AccuracyError(f"theta={res.theta:.6f} is not within {ROUND_BAND} of an integer",
                            theta=res.theta)
    return int(k), res


@dataclass
class ExtractionStats:
    theta_calls: int = 0


def max_stable_set_sdp(g: Graph, tol: float = 1e-4, stats: ExtractionStats | None = None) -> list[int]:
    """Maximum stable set of a perfect graph by vertex deletion.

    Vertices are tried in increasing id; a vertex stays deleted when the
    stability number of the remaining graph is unchanged, otherwise it is
    labeled. The loop stops once the labeled vertices, or all remaining
    ones, number the stability number.
    """
    n = g.n
    if n == 0:
        return []
    if g.m == 0:
        return list(range(n))
    stats = stats if stats is not None else ExtractionStats()
    alpha, res = _theta_int(g, tol)
    stats.theta_calls += 1
    current = list(range(n))
    labeled: list[int] = []
    for v in range(n):
        if len(labeled) == alpha or len(current) == alpha:
            break
        cand = [u for u in current if u != v]
        sub, _ = induced_subgraph(g, cand)
        a2, _ = _theta_int(sub, tol)
        stats.theta_calls += 1
        if a2 == alpha:
            current = cand
        else:
            labeled.append(v)
    result = labeled if len(labeled) == alpha else current
    if len(result) != alpha or not g.is_stable(result):
        raise AccuracyError(f"extraction produced {result}, expected a stable set of size {alpha}; "
                            "input is probably not perfect")
    return sorted(result)


def _theta_int(g: Graph, tol: float):
    if g.m == 0:
        return g.n, None
    return _rounded(g, tol)


def max_clique_sdp(g: Graph, tol: float = 1e-4, stats: ExtractionStats | None = None) -> list[int]:
    return max_stable_set_sdp(complement(g), tol=tol, stats=stats)
