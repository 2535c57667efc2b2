import itertools

import numpy as np
import pytest

from selcol.clique import max_clique
from selcol.coloring import brute_force_selcol, chromatic_number
from selcol.errors import InputError, PerfectnessViolation
from selcol.graph import complete_graph, cycle_graph, empty_graph
from selcol.instance import SelColInstance, cube_instance, edgeless_pair_instance
from selcol.lp import EQ, GE, LE
from selcol.perfect import is_perfect
from selcol.perfectgen import GenConfig, generate_partition, generate_perfect
from selcol.solver import (build_master, build_model1, clique_cut, coloring_cut, solve,
                           solve_cutplane_general, solve_cutplane_perfect, solve_ip)

from conftest import random_instance

PATHS = [("ip", "mcs"), ("cutplane-perfect", "mcs"), ("cutplane-perfect", "sdp"),
         ("cutplane-general", "mcs")]


def test_model1_counts_on_cube():
    m1 = build_model1(cube_instance())
    senses = [r.sense for r in m1.model.rows]
    assert len(m1.y) == 4 and len(m1.w) == 32 and m1.model.num_vars == 36
    assert senses.count(LE) == 48
    assert senses.count(EQ) == 4
    assert senses.count(GE) == 3


def test_model1_small_cases():
    single = SelColInstance(empty_graph(1), ((0,),))
    assert solve_ip(single).ub == 1
    assert solve_ip(SelColInstance.singletons(complete_graph(3))).ub == 3
    assert solve_ip(edgeless_pair_instance()).ub == 1
    assert solve_ip(SelColInstance(empty_graph(5), ((0, 1), (2, 3, 4)))).ub == 1


def test_ip_coloring_is_proper_and_compact():
    rep = solve_ip(cube_instance())
    assert rep.status == "optimal" and rep.ub == 1
    g = cube_instance().graph
    assert cube_instance().is_selection(rep.selection)
    assert set(rep.coloring.values()) == {1}
    assert g.is_stable(rep.selection)


def test_clique_cut_examples():
    cut = clique_cut([2])
    assert cut.kind == "clique" and cut.coeffs == {2: 1.0} and cut.constant == 0
    assert clique_cut([1, 0]).coeffs == {0: 1.0, 1: 1.0}
    with pytest.raises(InputError):
        clique_cut([])
    x = np.array([0.5, 0.5, 1.0])
    assert cut.is_violated(0.5, x) and not cut.is_violated(1.0, x)


def test_coloring_cut_examples():
    cut = coloring_cut([0, 2, 3], 1)
    # t >= 1 - (3 - (x1 + x3 + x4))
    assert cut.kind == "coloring" and cut.constant == -2
    assert cut.coeffs == {0: 1.0, 2: 1.0, 3: 1.0}
    cube = coloring_cut([0, 1, 2, 3], 2)
    assert cube.constant == -2 and cube.bound_at(np.ones(8)) == 2
    single = coloring_cut([4], 1)
    assert single.coeffs == clique_cut([4]).coeffs and single.constant == 0
    with pytest.raises(InputError):
        coloring_cut([0], 0)


def test_cut_row_form():
    row = coloring_cut([0, 2, 3], 1).as_row(4)
    assert row.sense == GE and row.rhs == -2
    assert row.coeffs == {0: -1.0, 2: -1.0, 3: -1.0, 4: 1.0}


def test_fractional_point_separates_cut_families():
    # (x1, x2, x3, x4) = (0.5, 0.5, 1, 1) with t = 0.5
    x = np.array([0.5, 0.5, 1.0, 1.0])
    t = 0.5
    assert not coloring_cut([0, 2, 3], 1).is_violated(t, x)
    assert not coloring_cut([1, 2, 3], 1).is_violated(t, x)
    assert clique_cut([2]).is_violated(t, x)


def reachable(n, rho, eps=0.025):
    pairs = n * (n - 1) // 2
    return any(abs(m / pairs - rho) < eps for m in range(pairs + 1))


def perfect_instance(rng, n):
    rhos = [r for r in (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8) if reachable(n, r)]
    g = generate_perfect(GenConfig(n, float(rng.choice(rhos)), seed=int(rng.integers(2**31))))
    return SelColInstance(g, tuple(generate_partition(n, 1, 3, rng)))


def test_clique_cuts_dominate_coloring_cuts(rng):
    for _ in range(6):
        inst = perfect_instance(rng, int(rng.integers(6, 11)))
        assert is_perfect(inst.graph)
        for sel in itertools.islice(itertools.product(*inst.clusters), 12):
            sub, idx = inst.graph.induced_subgraph(list(sel))
            k = [int(idx[v]) for v in max_clique(sub).clique]
            chi = chromatic_number(sub).num_colors
            for _ in range(20):
                x = np.zeros(inst.n)
                for c in inst.clusters:
                    x[list(c)] = rng.dirichlet(np.ones(len(c)))
                assert clique_cut(k).bound_at(x) >= coloring_cut(sel, chi).bound_at(x) - 1e-12


def test_master_shape():
    model, t = build_master(cube_instance())
    assert t == 8 and model.num_vars == 9
    assert model.upper[t] == 4 and model.objective[t] == 1
    assert [r.sense for r in model.rows] == [EQ] * 4


@pytest.mark.parametrize("method,sub", PATHS)
@pytest.mark.parametrize("driver", ["callback", "outer"])
def test_cube_every_path(method, sub, driver):
    rep = solve(cube_instance(), method, sub, time_limit=60, driver=driver)
    assert rep.status == "optimal" and rep.ub == 1 and rep.lb == 1
    assert rep.gap_percent == 0
    assert cube_instance().is_selection(rep.selection)


@pytest.mark.parametrize("method,sub", PATHS)
def test_small_cases_every_path(method, sub):
    assert solve(edgeless_pair_instance(), method, sub).ub == 1
    assert solve(SelColInstance.singletons(complete_graph(3)), method, sub).ub == 3


def test_general_mode_on_c5():
    rep = solve_cutplane_general(SelColInstance.singletons(cycle_graph(5)))
    assert rep.ub == 3 and rep.cuts_coloring >= 1 and rep.cuts_clique >= 1
    # clique cuts alone stop at the clique number, and no 2-coloring exists
    with pytest.raises(PerfectnessViolation):
        solve_cutplane_perfect(SelColInstance.singletons(cycle_graph(5)))


def check_clique_first(rep):
    for entry in rep.cut_log:
        assert entry["clique_checked"]
        if entry["coloring_checked"]:
            assert not entry["clique_violated"]
        assert len(entry["cuts"]) <= 1


def test_general_mode_matches_oracle(rng):
    for _ in range(25):
        inst = random_instance(rng, int(rng.integers(4, 13)), float(rng.uniform(0.2, 0.8)))
        want = brute_force_selcol(inst)[0]
        for driver in ("callback", "outer"):
            rep = solve_cutplane_general(inst, driver=driver)
            assert rep.status == "optimal" and rep.ub == want
            check_clique_first(rep)
        assert solve_ip(inst).ub == want


def test_perfect_paths_match_oracle(rng):
    for _ in range(10):
        inst = perfect_instance(rng, int(rng.integers(6, 13)))
        want = brute_force_selcol(inst)[0]
        for sub in ("mcs", "sdp"):
            rep = solve_cutplane_perfect(inst, sub)
            assert rep.ub == want
            assert rep.cuts_coloring == 0
            assert all(not e["coloring_checked"] for e in rep.cut_log)


def test_termination_and_monotone_bound(rng):
    for _ in range(10):
        inst = random_instance(rng, 10, 0.5)
        rep = solve_cutplane_general(inst)
        assert rep.cuts_clique + rep.cuts_coloring <= inst.num_selections()
        assert all(a <= b + 1e-9 for a, b in zip(rep.lb_trace, rep.lb_trace[1:]))
        selections = [tuple(e["selection"]) for e in rep.cut_log if e["cuts"]]
        # a selection that received a cut may come back, but never with the same cut
        pairs = [(tuple(e["selection"]), e["cuts"][0]) for e in rep.cut_log if e["cuts"]]
        assert len(pairs) == len(set(pairs)) and len(selections) == len(pairs)


def test_final_coloring_certifies_value(rng):
    for _ in range(5):
        inst = perfect_instance(rng, 10)
        rep = solve_cutplane_perfect(inst)
        sub, idx = inst.graph.induced_subgraph(rep.selection)
        colors = rep.coloring
        assert max(colors.values()) == rep.ub
        assert all(colors[int(idx[u])] != colors[int(idx[v])] for u, v in sub.edges())


def test_timeout_report():
    rng = np.random.default_rng(9)
    inst = random_instance(rng, 40, 0.5, 2, 4)
    rep = solve_ip(inst, time_limit=0.05)
    assert rep.status == "feasible-timeout"
    assert rep.seconds == 0.05
    assert rep.lb <= rep.ub


def test_unknown_method_and_subproblem():
    with pytest.raises(InputError):
        solve(cube_instance(), "bogus")
    with pytest.raises(InputError):
        solve(cube_instance(), "cutplane-perfect", "lp")


def test_report_fraction_bounds():
    rep = solve_cutplane_perfect(cube_instance())
    assert 0 <= rep.subproblem_time_fraction <= 100
    assert rep.value == 1
    assert solve_ip(cube_instance()).subproblem_time_fraction == 0
