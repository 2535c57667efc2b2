"""Bounded-variable simplex on dense matrices and 0/1 branch and bound
with lazy cuts.

Every constraint row gets a slack column whose bounds encode the relation,
so the constraint system is ``[A | I] z = b`` with box bounds on ``z``.
Because the basis of a solved node stays dual feasible under any change of
the (finite) variable bounds, branch and bound switches nodes by resetting
bounds and running the dual simplex from the previous basis.
"""

from __future__ import annotations

import heapq
import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse

from .errors import InputError, SolverFailure

FEAS_TOL = 1e-9
INT_TOL = 1e-6
PIVOT_TOL = 1e-9
DEGENERATE_SWITCH = 1000
MAX_PIVOTS = 200_000
REFACTOR_EVERY = 100

LE, GE, EQ = "<=", ">=", "="

AT_LOWER, AT_UPPER, AT_ZERO, BASIC = 0, 1, 2, 3


@dataclass
class Row:
    coeffs: dict[int, float]
    sense: str
    rhs: float

    def activity(self, x) -> float:
        return sum(c * x[j] for j, c in self.coeffs.items())

    def violation(self, x) -> float:
        a = self.activity(x)
        if self.sense == LE:
            return max(0.0, a - self.rhs)
        if self.sense == GE:
            return max(0.0, self.rhs - a)
        return abs(a - self.rhs)


class LpModel:
    """``min c.x`` subject to linear rows and variable bounds."""

    def __init__(self):
        self.lower: list[float] = []
        self.upper: list[float] = []
        self.objective: list[float] = []
        self.names: list[str] = []
        self.rows: list[Row] = []

    @property
    def num_vars(self) -> int:
        return len(self.lower)

    def add_var(self, lower=0.0, upper=math.inf, obj=0.0, name="") -> int:
        if lower > upper:
            raise InputError(f"variable {name!r} has empty bounds [{lower}, {upper}]")
        self.lower.append(float(lower))
        self.upper.append(float(upper))
        self.objective.append(float(obj))
        self.names.append(name or f"v{len(self.names)}")
        return len(self.lower) - 1

    def add_constraint(self, coeffs, sense: str, rhs: float) -> int:
        if sense not in (LE, GE, EQ):
            raise InputError(f"unknown relation {sense!r}")
        if not isinstance(coeffs, Mapping):
            if len(coeffs) != self.num_vars:
                raise InputError("coefficient list does not match the variable count")
            coeffs = {j: c for j, c in enumerate(coeffs) if c != 0}
        coeffs = {int(j): float(c) for j, c in coeffs.items() if c != 0}
        for j in coeffs:
            if not 0 <= j < self.num_vars:
                raise InputError(f"unknown variable index {j}")
        self.rows.append(Row(coeffs, sense, float(rhs)))
        return len(self.rows) - 1

    def copy(self) -> LpModel:
        out = LpModel()
        out.lower, out.upper = list(self.lower), list(self.upper)
        out.objective, out.names = list(self.objective), list(self.names)
        out.rows = [Row(dict(r.coeffs), r.sense, r.rhs) for r in self.rows]
        return out

    def max_violation(self, x) -> float:
        v = max((r.violation(x) for r in self.rows), default=0.0)
        for j in range(self.num_vars):
            v = max(v, self.lower[j] - x[j], x[j] - self.upper[j])
        return v


@dataclass
class LpSolution:
    status: str
    values: np.ndarray | None
    objective: float
    pivots: int = 0


@dataclass
class IlpResult:
    status: str
    values: np.ndarray | None
    objective: float
    bound: float
    nodes: int
    cuts_added: int
    seconds: float
    lb_trace: list[float] = field(default_factory=list)

    @property
    def gap_percent(self) -> float:
        return gap_percent(self.objective, self.bound)


def gap_percent(ub: float, lb: float) -> float:
    if not math.isfinite(ub):
        return math.nan
    if ub == 0:
        return 0.0 if lb >= 0 else math.nan
    return (ub - lb) / ub * 100.0


class SolveTimeout(Exception):
    """Raised inside a solve (also by cut callbacks) when time runs out."""


class _Infeasible(Exception):
    pass


class _Unbounded(Exception):
    pass


def _slack_bounds(sense):
    if sense == LE:
        return 0.0, math.inf
    if sense == GE:
        return -math.inf, 0.0
    return 0.0, 0.0


class SimplexEngine:
    """Revised bounded-variable simplex over the rows of an :class:`LpModel`.

    Columns ``0..nv-1`` are the model variables; column ``nv + i`` is the
    slack of row ``i``, so the system reads ``[A | I] z = b``. At most ``nv``
    basic columns are structural, and a basis with structural columns ``S``
    and nonbasic slacks on rows ``R`` is invertible iff ``A[R, S]`` is. Only
    that square block is inverted, so a pivot costs about ``m * nv`` plus a
    ``k x k`` inverse, however many rows the model has.
    """

    def __init__(self, model: LpModel, deadline: float = math.inf):
        self.model = model
        self.nv = nv = model.num_vars
        self.deadline = deadline
        self.pivots = 0
        self.rows: list[Row] = list(model.rows)
        m = len(self.rows)
        self.A = np.zeros((m, nv))
        self.b = np.zeros(m)
        slo, shi = np.zeros(m), np.zeros(m)
        for i, row in enumerate(self.rows):
            for j, c in row.coeffs.items():
                self.A[i, j] = c
            self.b[i] = row.rhs
            slo[i], shi[i] = _slack_bounds(row.sense)
        self.lo = np.concatenate([np.asarray(model.lower, dtype=float), slo])
        self.hi = np.concatenate([np.asarray(model.upper, dtype=float), shi])
        self.cost = np.concatenate([np.asarray(model.objective, dtype=float), np.zeros(m)])
        self.basis = np.arange(nv, nv + m)
        self.status = np.full(nv + m, AT_LOWER, dtype=np.int8)
        self.status[self.basis] = BASIC
        self.x = np.zeros(nv + m)
        self.d = self.cost.copy()
        self._sparsify()
        self._place_nonbasic()
        self._refactor()
        self._update_primal()

    # -- basis algebra -----------------------------------------------------

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def ncols(self):
        return self.nv + self.m

    def _refactor(self):
        """Invert ``A[R, S]`` from scratch."""
        nv, basis = self.nv, self.basis
        self.pos = np.full(self.ncols, -1, dtype=np.int64)
        self.pos[basis] = np.arange(self.m)
        self.s_cols = basis[basis < nv].copy()
        slack_basic = np.zeros(self.m, dtype=bool)
        slack_basic[basis[basis >= nv] - nv] = True
        self.r_rows = np.flatnonzero(~slack_basic)
        if self.s_cols.size != self.r_rows.size:
            raise SolverFailure("basis has the wrong number of columns")
        if self.s_cols.size:
            try:
                self.Minv = np.linalg.inv(self.A[np.ix_(self.r_rows, self.s_cols)])
            except np.linalg.LinAlgError as exc:
                raise SolverFailure("singular basis") from exc
        else:
            self.Minv = np.zeros((0, 0))
        self.updates = 0
        self._derive()

    def _derive(self):
        basis = self.basis
        slack = basis >= self.nv
        self.l_pos = np.flatnonzero(slack)
        self.l_rows = basis[self.l_pos] - self.nv
        self.s_pos = self.pos[self.s_cols]
        self.s_index = np.full(self.m, -1, dtype=np.int64)
        self.s_index[self.s_pos] = np.arange(self.s_cols.size)
        self.r_index = np.full(self.m, -1, dtype=np.int64)
        self.r_index[self.r_rows] = np.arange(self.r_rows.size)

    def _update(self, r: int, q: int):
        """Replace the column at basis position ``r`` by ``q``, updating the
        inverse of ``A[R, S]`` in O(k^2)."""
        nv, A, Minv = self.nv, self.A, self.Minv
        old = int(self.basis[r])
        self.basis[r] = q
        self.pos[old] = -1
        self.pos[q] = r
        if self.updates >= REFACTOR_EVERY:
            self._refactor()
            return
        S, R = self.s_cols, self.r_rows
        if old >= nv and q < nv:
            # the slack row joins R, the column joins S: border the block
            i = old - nv
            mc = Minv @ A[R, q]
            rm = A[i, S] @ Minv
            s = A[i, q] - A[i, S] @ mc
            if abs(s) < 1e-11:
                return self._refactor()
            self.Minv = np.block([[Minv + np.outer(mc, rm) / s, -mc[:, None] / s],
                                  [-rm[None, :] / s, np.array([[1.0 / s]])]])
            self.s_cols = np.append(S, q)
            self.r_rows = np.append(R, i)
        elif old < nv and q < nv:
            c = int(np.flatnonzero(S == old)[0])
            w = Minv @ A[R, q]
            if abs(w[c]) < 1e-11:
                return self._refactor()
            w[c] -= 1.0
            Minv -= np.outer(w, Minv[c] / (w[c] + 1.0))
            S[c] = q
        elif old >= nv and q >= nv:
            rho = int(self.r_index[q - nv])
            w = A[old - nv, S] @ Minv
            if abs(w[rho]) < 1e-11:
                return self._refactor()
            w[rho] -= 1.0
            Minv -= np.outer(Minv[:, rho] / (w[rho] + 1.0), w)
            R[rho] = old - nv
        else:
            # a structural column leaves and a slack enters: shrink the block
            c = int(np.flatnonzero(S == old)[0])
            rho = int(self.r_index[q - nv])
            p = Minv[c, rho]
            if abs(p) < 1e-11:
                return self._refactor()
            N = Minv - np.outer(Minv[:, rho], Minv[c] / p)
            self.Minv = np.delete(np.delete(N, c, axis=0), rho, axis=1)
            self.s_cols = np.delete(S, c)
            self.r_rows = np.delete(R, rho)
        self.updates += 1
        self._derive()

    def _sparsify(self):
        # products go through sparse copies; A itself serves element access
        self.As = sparse.csr_matrix(self.A)
        self.At = self.As.T.tocsr()

    def _times_basic(self, zs: np.ndarray) -> np.ndarray:
        v = np.zeros(self.nv)
        v[self.s_cols] = zs
        return self.As @ v

    def _ftran(self, v: np.ndarray) -> np.ndarray:
        """``B^-1 v`` indexed by basis position."""
        z = np.empty(self.m)
        zs = self.Minv @ v[self.r_rows]
        z[self.s_pos] = zs
        z[self.l_pos] = v[self.l_rows] - self._times_basic(zs)[self.l_rows]
        return z

    def _column(self, q: int) -> np.ndarray:
        if q < self.nv:
            return self._ftran(self.A[:, q])
        z = np.empty(self.m)
        zs = self.Minv[:, self.r_index[q - self.nv]]
        z[self.s_pos] = zs
        z[self.l_pos] = -self._times_basic(zs)[self.l_rows]
        return z

    def _btran(self, u: np.ndarray) -> np.ndarray:
        """``y`` with ``y^T B = u^T`` for ``u`` indexed by basis position."""
        y = np.zeros(self.m)
        y[self.l_rows] = u[self.l_pos]
        y[self.r_rows] = self.Minv.T @ (u[self.s_pos] - (self.At @ y)[self.s_cols])
        return y

    def _row_weights(self, positions: np.ndarray) -> np.ndarray:
        """Squared norms of the rows of ``B^-1`` at basis positions."""
        w = np.empty(positions.size)
        cols = self.basis[positions]
        struct = cols < self.nv
        if struct.any():
            w[struct] = np.sum(self.Minv[self.s_index[positions[struct]]] ** 2, axis=1)
        if (~struct).any():
            rows = cols[~struct] - self.nv
            spread = np.zeros((self.nv, self.s_cols.size))
            spread[self.s_cols] = self.Minv
            t = self.As[rows] @ spread
            w[~struct] = 1.0 + np.sum(t * t, axis=1)
        return w

    def _row(self, r: int) -> np.ndarray:
        """Row ``r`` of ``B^-1 [A | I]``."""
        e = np.zeros(self.m)
        e[r] = 1.0
        rho = self._btran(e)
        return np.concatenate([self.At @ rho, rho])

    def _update_primal(self):
        x = self.x
        nb = self.status != BASIC
        xs = np.where(nb[: self.nv], x[: self.nv], 0.0)
        sl = np.where(nb[self.nv:], x[self.nv:], 0.0)
        x[self.basis] = self._ftran(self.b - self.As @ xs - sl)

    def _duals(self, cb: np.ndarray, cost: np.ndarray) -> np.ndarray:
        y = self._btran(cb)
        d = cost - np.concatenate([self.At @ y, y])
        d[self.basis] = 0.0
        return d

    def _update_duals(self):
        self.d = self._duals(self.cost[self.basis], self.cost)

    def _place_nonbasic(self):
        """Put every nonbasic column at a finite bound consistent with
        the sign of its reduced cost."""
        nb = self.status != BASIC
        dj = self.d
        lo_ok = np.isfinite(self.lo)
        hi_ok = np.isfinite(self.hi)
        # columns with zero reduced cost stay where they are
        keep_hi = nb & hi_ok & (self.status == AT_UPPER) & (dj <= 0)
        at_lo = nb & ~keep_hi & lo_ok & ((dj >= 0) | ~hi_ok)
        at_hi = nb & ~at_lo & hi_ok
        at_zero = nb & ~at_lo & ~at_hi
        self.status[at_lo] = AT_LOWER
        self.x[at_lo] = self.lo[at_lo]
        self.status[at_hi] = AT_UPPER
        self.x[at_hi] = self.hi[at_hi]
        self.status[at_zero] = AT_ZERO
        self.x[at_zero] = 0.0

    def _pivot(self, r: int, q: int, leaving_status: int):
        leaving = int(self.basis[r])
        self.status[q] = BASIC
        self.status[leaving] = leaving_status
        self.x[leaving] = self.lo[leaving] if leaving_status == AT_LOWER else self.hi[leaving]
        self._update(r, q)
        self.pivots += 1
        if self.pivots > MAX_PIVOTS:
            raise SolverFailure("simplex iteration cap exceeded")
        if (self.pivots & 15) == 0 and time.perf_counter() > self.deadline:
            raise SolveTimeout
        self._update_primal()
        return leaving

    def values(self) -> np.ndarray:
        return self.x[: self.nv].copy()

    def objective(self) -> float:
        return float(self.cost[: self.nv] @ self.x[: self.nv])

    def max_row_residual(self) -> float:
        r = self.As @ self.x[: self.nv] + self.x[self.nv:] - self.b
        return float(np.max(np.abs(r), initial=0.0))

    # -- primal simplex ----------------------------------------------------

    def _infeasibility(self):
        beta = self.x[self.basis]
        blo, bhi = self.lo[self.basis], self.hi[self.basis]
        below = beta < blo - FEAS_TOL
        above = beta > bhi + FEAS_TOL
        return beta, blo, bhi, below, above

    def _primal(self, phase_one: bool = False):
        """Bounded primal simplex. In phase one the objective is the total
        bound violation of the basic columns, and a violating column may
        only travel up to the bound it violates."""
        degenerate = 0
        while True:
            beta, blo, bhi, below, above = self._infeasibility()
            if phase_one:
                if not (below.any() or above.any()):
                    return
                cb = below * -1.0 + above * 1.0
                d = self._duals(cb, np.zeros(self.ncols))
            else:
                self._update_duals()
                d = self.d
            lo, hi, st = self.lo, self.hi, self.status
            movable = (st != BASIC) & (hi > lo)
            inc = movable & (st != AT_UPPER) & (d < -FEAS_TOL)
            dec = movable & (st != AT_LOWER) & (d > FEAS_TOL)
            cand = np.flatnonzero(inc | dec)
            if cand.size == 0:
                if phase_one:
                    raise _Infeasible
                return
            bland = degenerate > DEGENERATE_SWITCH
            q = int(cand[0]) if bland else int(cand[np.argmax(np.abs(d[cand]))])
            delta = 1.0 if inc[q] else -1.0
            g = -delta * self._column(q)  # rate of change of each basic column
            lim = np.full(self.m, np.inf)
            goes_low = np.zeros(self.m, dtype=bool)
            ok = ~below & ~above
            dn = g < -PIVOT_TOL
            up = g > PIVOT_TOL
            with np.errstate(invalid="ignore", divide="ignore"):
                sel = ok & dn
                lim[sel] = np.maximum(beta[sel] - blo[sel], 0.0) / -g[sel]
                goes_low[sel] = True
                sel = ok & up
                lim[sel] = np.maximum(bhi[sel] - beta[sel], 0.0) / g[sel]
                sel = below & up
                lim[sel] = (blo[sel] - beta[sel]) / g[sel]
                goes_low[sel] = True
                sel = above & dn
                lim[sel] = (beta[sel] - bhi[sel]) / -g[sel]
            theta = hi[q] - lo[q]
            r = -1
            tmin = lim.min(initial=np.inf)
            if tmin < theta:
                theta = tmin
                ties = np.flatnonzero(lim <= tmin + 1e-12)
                if bland:
                    r = int(ties[np.argmin(self.basis[ties])])
                else:
                    r = int(ties[np.argmax(np.abs(g[ties]))])
            if not math.isfinite(theta):
                raise _Unbounded
            degenerate = degenerate + 1 if theta < 1e-12 else 0
            if r < 0:
                st[q] = AT_UPPER if delta > 0 else AT_LOWER
                self.x[q] = hi[q] if delta > 0 else lo[q]
                self._update_primal()
                continue
            self.x[q] += delta * theta
            self._pivot(r, q, AT_LOWER if goes_low[r] else AT_UPPER)

    # -- dual simplex ------------------------------------------------------

    def dual_simplex(self):
        """Restore primal feasibility from a dual feasible basis."""
        self._update_duals()
        while self.m:
            beta, blo, bhi, _, _ = self._infeasibility()
            below = blo - beta
            above = beta - bhi
            infeas = np.maximum(below, above)
            bad = np.flatnonzero(infeas > FEAS_TOL)
            if bad.size == 0:
                return
            # dual steepest edge: scale by the norm of the row of B^-1
            r = int(bad[np.argmax(infeas[bad] ** 2 / self._row_weights(bad))])
            go_up = below[r] > above[r]
            row = self._row(r)
            st, d = self.status, self.d
            movable = (st != BASIC) & (self.hi > self.lo)
            if go_up:
                ok = movable & (((st == AT_LOWER) & (row < -PIVOT_TOL)) |
                                ((st == AT_UPPER) & (row > PIVOT_TOL)) |
                                ((st == AT_ZERO) & (np.abs(row) > PIVOT_TOL)))
            else:
                ok = movable & (((st == AT_LOWER) & (row > PIVOT_TOL)) |
                                ((st == AT_UPPER) & (row < -PIVOT_TOL)) |
                                ((st == AT_ZERO) & (np.abs(row) > PIVOT_TOL)))
            cand = np.flatnonzero(ok)
            if cand.size == 0:
                raise _Infeasible
            ratios = np.abs(d[cand]) / np.abs(row[cand])
            tmin = ratios.min()
            ties = cand[ratios <= tmin + 1e-12]
            q = int(ties[np.argmax(np.abs(row[ties]))])
            self._pivot(r, q, AT_LOWER if go_up else AT_UPPER)
            self._update_duals()

    # -- drivers -------------------------------------------------------------

    def solve_from_scratch(self):
        """Composite two-phase primal simplex from the slack basis."""
        self._primal(phase_one=True)
        self._primal()

    def reoptimize(self):
        """Dual simplex, then a primal pass to mop up any dual infeasibility."""
        self.dual_simplex()
        self._primal()

    def set_bounds(self, lo: np.ndarray, hi: np.ndarray, idx: np.ndarray):
        self.lo[idx] = lo
        self.hi[idx] = hi
        self._place_nonbasic()
        self._update_primal()

    def add_row(self, row: Row):
        """Append a row with a basic slack; dual feasibility is kept."""
        nv = self.nv
        a = np.zeros(nv)
        for j, c in row.coeffs.items():
            a[j] = c
        slo, shi = _slack_bounds(row.sense)
        self.A = np.vstack([self.A, a])
        self.b = np.append(self.b, row.rhs)
        self.lo = np.append(self.lo, slo)
        self.hi = np.append(self.hi, shi)
        self.cost = np.append(self.cost, 0.0)
        self.d = np.append(self.d, 0.0)
        self.status = np.append(self.status, np.int8(BASIC))
        self.x = np.append(self.x, 0.0)
        self.basis = np.append(self.basis, self.ncols - 1)
        self.pos = np.append(self.pos, self.m - 1)
        self._sparsify()
        self.rows.append(row)
        self._derive()
        self._update_primal()

    def ensure_accuracy(self):
        if self.max_row_residual() > FEAS_TOL * 10:
            self._refactor()
            self._update_primal()
            if self.max_row_residual() > FEAS_TOL * 10:
                raise SolverFailure("basis solution lost accuracy")


def solve_lp(model: LpModel) -> LpSolution:
    engine = SimplexEngine(model)
    try:
        engine.solve_from_scratch()
        engine.ensure_accuracy()
    except _Infeasible:
        return LpSolution("infeasible", None, math.nan, engine.pivots)
    except _Unbounded:
        return LpSolution("unbounded", None, -math.inf, engine.pivots)
    return LpSolution("optimal", engine.values(), engine.objective(), engine.pivots)


@dataclass
class CallbackContext:
    lower_bound: float
    incumbent: float
    nodes: int
    engine: SimplexEngine


CutCallback = Callable[[np.ndarray, float, CallbackContext], Iterable[Row]]


@dataclass(order=True)
class _Node:
    key: tuple
    bound: float = field(compare=False)
    lo: np.ndarray = field(compare=False)
    hi: np.ndarray = field(compare=False)
    depth: int = field(compare=False, default=0)


def solve_ilp(model: LpModel, binaries: Sequence[int], cut_callback: CutCallback | None = None,
              time_limit: float = math.inf, integral_objective: bool = False,
              node_limit: int | None = None) -> IlpResult:
    """Best-first branch and bound over 0/1 variables.

    Nodes with equal bound (after rounding up when ``integral_objective``)
    are taken deepest first, newest first, which keeps consecutive LPs close.

    ``cut_callback`` is invoked at every node whose LP solution is integral
    in ``binaries``; rows it returns are added globally and the node is
    re-solved. An incumbent is only accepted once the callback returns no
    row violated by it.
    """
    start = time.perf_counter()
    deadline = start + time_limit
    binaries = np.asarray(sorted(set(int(j) for j in binaries)), dtype=np.int64)
    for j in binaries:
        if model.lower[j] < 0 or model.upper[j] > 1:
            raise InputError(f"binary variable {j} must have bounds within [0, 1]")
    engine = SimplexEngine(model, deadline)
    ub, best_x = math.inf, None
    nodes = cuts = 0
    lb_trace: list[float] = []
    seq = itertools.count()

    def tighten(v):
        return math.ceil(v - INT_TOL) if integral_objective and math.isfinite(v) else v

    def make_node(bound, lo, hi, depth):
        return _Node((tighten(bound), -depth, -next(seq)), bound, lo, hi, depth)

    def result(status, bound):
        bound = min(bound, ub) if math.isfinite(ub) else bound
        return IlpResult(status, best_x, ub, bound, nodes, cuts,
                         time.perf_counter() - start, lb_trace)

    try:
        engine.solve_from_scratch()
    except _Infeasible:
        return result("infeasible", math.inf)
    except _Unbounded as exc:
        raise SolverFailure("LP relaxation is unbounded") from exc
    except SolveTimeout:
        return result("feasible-timeout", -math.inf)

    root_lo = np.asarray(model.lower, dtype=float)[binaries]
    root_hi = np.asarray(model.upper, dtype=float)[binaries]
    heap = [make_node(-math.inf, root_lo, root_hi, 0)]
    timed_out = False
    current_bound = -math.inf
    while heap:
        if time.perf_counter() > deadline or (node_limit is not None and nodes >= node_limit):
            timed_out = True
            break
        node = heapq.heappop(heap)
        if tighten(node.bound) >= ub - FEAS_TOL:
            continue
        current_bound = node.bound
        nodes += 1
        try:
            engine.set_bounds(node.lo, node.hi, binaries)
            while True:
                engine.reoptimize()
                obj = engine.objective()
                if tighten(obj) >= ub - FEAS_TOL:
                    break
                x = engine.values()
                frac = np.abs(x[binaries] - np.round(x[binaries]))
                if frac.max(initial=0.0) > INT_TOL:
                    i = int(np.argmax(frac))
                    down_hi = node.hi.copy()
                    down_hi[i] = 0.0
                    up_lo = node.lo.copy()
                    up_lo[i] = 1.0
                    heapq.heappush(heap, make_node(obj, node.lo.copy(), down_hi, node.depth + 1))
                    heapq.heappush(heap, make_node(obj, up_lo, node.hi.copy(), node.depth + 1))
                    break
                if cut_callback is not None:
                    glb = min([obj] + [h.bound for h in heap])
                    lb_trace.append(tighten(glb))
                    ctx = CallbackContext(tighten(glb), ub, nodes, engine)
                    rows = list(cut_callback(x, obj, ctx) or [])
                    violated = [r for r in rows if r.violation(x) > FEAS_TOL]
                    for r in rows:
                        engine.add_row(r)
                    cuts += len(rows)
                    if violated:
                        continue
                engine.ensure_accuracy()
                ub, best_x = obj, engine.values()
                if integral_objective:
                    ub = float(round(ub))
                break
        except _Infeasible:
            continue
        except SolveTimeout:
            heapq.heappush(heap, make_node(current_bound, node.lo, node.hi, node.depth))
            timed_out = True
            break

    if timed_out:
        bound = min([h.bound for h in heap], default=ub)
        return result("feasible-timeout", tighten(bound) if math.isfinite(bound) else bound)
    if best_x is None:
        return result("infeasible", math.inf)
    return result("optimal", ub)
