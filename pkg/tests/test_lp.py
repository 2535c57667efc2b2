import itertools
import math

import numpy as np
import pytest
from scipy.optimize import linprog

from selcol.errors import InputError
from selcol.lp import EQ, GE, LE, LpModel, Row, gap_percent, solve_ilp, solve_lp


def edgeless_pair_relaxation(with_clique_cut=False):
    m = LpModel()
    x = [m.add_var(0, 1) for _ in range(4)]
    t = m.add_var(0, 3, obj=1)
    m.add_constraint({x[0]: 1, x[1]: 1}, EQ, 1)
    m.add_constraint({x[2]: 1}, EQ, 1)
    m.add_constraint({x[3]: 1}, EQ, 1)
    # both coloring cuts, each with chi = 1 on a 3-vertex selection
    m.add_constraint({t: 1, x[0]: -1, x[2]: -1, x[3]: -1}, GE, -2)
    m.add_constraint({t: 1, x[1]: -1, x[2]: -1, x[3]: -1}, GE, -2)
    if with_clique_cut:
        m.add_constraint({t: 1, x[2]: -1}, GE, 0)
    return m, x, t


def test_trivial_lp():
    m = LpModel()
    m.add_var(0, math.inf, obj=1)
    sol = solve_lp(m)
    assert sol.status == "optimal" and sol.objective == 0


def test_coloring_cuts_alone_allow_half():
    m, x, t = edgeless_pair_relaxation()
    sol = solve_lp(m)
    assert sol.objective == pytest.approx(0.5, abs=1e-6)
    assert sol.values[x[0]] == pytest.approx(0.5, abs=1e-6)
    # the fractional point with t = 0.5 is feasible and violates only the clique cut
    point = np.array([0.5, 0.5, 1, 1, 0.5])
    assert m.max_violation(point) <= 1e-12
    assert Row({t: 1, x[2]: -1}, GE, 0).violation(point) == pytest.approx(0.5)


def test_clique_cut_raises_bound():
    m, _, _ = edgeless_pair_relaxation(with_clique_cut=True)
    assert solve_lp(m).objective == pytest.approx(1.0, abs=1e-9)


def test_infeasible_and_unbounded():
    m = LpModel()
    a = m.add_var(0, 1)
    m.add_constraint({a: 1}, GE, 2)
    assert solve_lp(m).status == "infeasible"
    m = LpModel()
    a = m.add_var(-math.inf, math.inf, obj=1)
    assert solve_lp(m).status == "unbounded"


def test_model_validation():
    m = LpModel()
    with pytest.raises(InputError):
        m.add_var(2, 1)
    m.add_var()
    with pytest.raises(InputError):
        m.add_constraint([1, 2], LE, 0)
    with pytest.raises(InputError):
        m.add_constraint({0: 1}, "<", 0)
    with pytest.raises(InputError):
        m.add_constraint({3: 1}, LE, 0)


def random_lp(rng, n, k):
    m = LpModel()
    lo = rng.integers(-3, 1, size=n).astype(float)
    hi = lo + rng.integers(1, 6, size=n)
    c = rng.normal(size=n)
    for j in range(n):
        m.add_var(lo[j], hi[j], obj=c[j])
    x0 = lo + rng.random(n) * (hi - lo)  # rows are built to hold at x0
    A, senses, b = [], [], []
    for _ in range(k):
        a = np.where(rng.random(n) < 0.6, rng.normal(size=n), 0.0)
        sense = rng.choice([LE, GE, EQ], p=[0.45, 0.45, 0.1])
        rhs = float(a @ x0)
        if sense == LE:
            rhs += rng.random()
        elif sense == GE:
            rhs -= rng.random()
        m.add_constraint(list(a), sense, rhs)
        A.append(a)
        senses.append(sense)
        b.append(rhs)
    return m, c, lo, hi, np.array(A), senses, np.array(b)


def test_random_lps_match_highs(rng):
    for _ in range(60):
        n, k = int(rng.integers(2, 9)), int(rng.integers(1, 8))
        m, c, lo, hi, A, senses, b = random_lp(rng, n, k)
        sol = solve_lp(m)
        ub_rows = [A[i] if s == LE else -A[i] for i, s in enumerate(senses) if s != EQ]
        ub_rhs = [b[i] if s == LE else -b[i] for i, s in enumerate(senses) if s != EQ]
        eq = [i for i, s in enumerate(senses) if s == EQ]
        ref = linprog(c, A_ub=np.array(ub_rows) if ub_rows else None,
                      b_ub=ub_rhs or None, A_eq=A[eq] if eq else None,
                      b_eq=b[eq] if eq else None, bounds=list(zip(lo, hi)), method="highs")
        assert sol.status == "optimal" and ref.status == 0
        assert sol.objective == pytest.approx(ref.fun, abs=1e-7)
        assert m.max_violation(sol.values) <= 1e-9
        assert float(np.dot(c, sol.values)) == pytest.approx(sol.objective, abs=1e-9)


def test_deterministic(rng):
    m = random_lp(rng, 6, 5)[0]
    a, b = solve_lp(m), solve_lp(m)
    assert np.array_equal(a.values, b.values) and a.objective == b.objective


def enumerate_ilp(m, nbin):
    bits = np.array(list(itertools.product((0.0, 1.0), repeat=nbin)))
    ok = np.ones(len(bits), dtype=bool)
    for r in m.rows:
        a = np.zeros(nbin)
        for j, c in r.coeffs.items():
            a[j] = c
        act = bits @ a
        ok &= act <= r.rhs + 1e-9 if r.sense == LE else act >= r.rhs - 1e-9
    if not ok.any():
        return math.inf
    return float((bits[ok] @ np.asarray(m.objective)).min())


def test_random_ilps_match_enumeration(rng):
    for _ in range(200):
        nbin = int(rng.integers(2, 19))
        m = LpModel()
        for _ in range(nbin):
            m.add_var(0, 1, obj=float(rng.integers(-5, 6)))
        for _ in range(int(rng.integers(1, 6))):
            a = rng.integers(-3, 4, size=nbin).astype(float)
            m.add_constraint(list(a), rng.choice([LE, GE]), float(rng.integers(-3, 4)))
        res = solve_ilp(m, range(nbin))
        want = enumerate_ilp(m, nbin)
        if math.isinf(want):
            assert res.status == "infeasible"
        else:
            assert res.status == "optimal"
            assert res.objective == pytest.approx(want, abs=1e-6)
            x = res.values
            assert np.all(np.abs(x - np.round(x)) <= 1e-6)
            assert res.bound <= res.objective + 1e-9
            if want != 0:
                assert gap_percent(res.objective, res.bound) <= 1e-4


def test_no_binaries_equals_lp(rng):
    m = random_lp(rng, 5, 4)[0]
    assert solve_ilp(m, []).objective == pytest.approx(solve_lp(m).objective, abs=1e-9)


def test_callback_is_only_called_on_integral_points():
    # edgeless pair master: the callback supplies coloring cuts on demand
    m = LpModel()
    x = [m.add_var(0, 1) for _ in range(4)]
    t = m.add_var(0, 3, obj=1)
    m.add_constraint({x[0]: 1, x[1]: 1}, EQ, 1)
    m.add_constraint({x[2]: 1}, EQ, 1)
    m.add_constraint({x[3]: 1}, EQ, 1)
    seen = []

    def callback(vals, obj, ctx):
        assert np.all(np.abs(vals[:4] - np.round(vals[:4])) <= 1e-6)
        sel = [i for i in range(4) if vals[i] > 0.5]
        seen.append(tuple(sel))
        row = Row({t: 1, **{i: -1.0 for i in sel}}, GE, 1 - len(sel))
        return [row] if row.violation(vals) > 1e-9 else []

    res = solve_ilp(m, range(4), callback)
    assert res.status == "optimal" and res.objective == pytest.approx(1.0)
    assert res.cuts_added >= 1 and seen
    assert res.values[t] >= 1 - 1e-9


def test_node_limit_reports_bounds():
    m = LpModel()
    for j in range(12):
        m.add_var(0, 1, obj=1.0)
    m.add_constraint([2.0] * 12, GE, 11)
    res = solve_ilp(m, range(12), node_limit=1)
    assert res.status == "feasible-timeout"
    assert res.bound <= 6 + 1e-9


def test_gap_identity():
    assert gap_percent(4, 3) == 25.0
    assert gap_percent(2, 2) == 0.0
    assert math.isnan(gap_percent(math.inf, 1))
