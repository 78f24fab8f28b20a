"""Exact enumeration, counting, spectral and structural verification tools."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degmc import oracle
from degmc.chains import DegreeIntervalKernel, SwitchKernel, make_rng
from degmc.graphs import DegreeInterval, Graph, is_graphical
from degmc.oracle import (
    AlternatingPath,
    Mismatch,
    NotFound,
    NotStochastic,
    TooLarge,
    canonical_decomposition,
    census,
    congestion_check,
    count_realizations,
    degree_class_counts,
    enumerate_graphs,
    find_alternating_path,
    graph_of,
    mask_of,
    short_cycle_transform,
    spectral_gap,
    state_graph_components,
    stationary_distribution,
    strongly_stable_condition,
    tv_curve,
    verify_log_concave,
    verify_martin_randall,
)


class TestMasks:
    def test_roundtrip(self):
        g = Graph.from_edges(5, [(0, 4), (1, 2), (2, 3)])
        assert graph_of(mask_of(g), 5) == g

    @given(st.integers(0, (1 << 15) - 1))
    @settings(max_examples=100, deadline=None)
    def test_mask_bijection_n6(self, m):
        assert mask_of(graph_of(m, 6)) == m

    def test_census_degrees(self):
        masks, deg = census(4)
        assert len(masks) == 64
        # spot check the complete graph
        full = int(masks[-1])
        assert tuple(deg[full]) == (3, 3, 3, 3)
        assert tuple(deg[0]) == (0, 0, 0, 0)

    def test_census_cap(self):
        with pytest.raises(TooLarge):
            census(8)


class TestEnumeration:
    def test_fixed_degree(self):
        sp = enumerate_graphs(4, d=(1, 1, 1, 1))
        assert len(sp) == 3  # perfect matchings of K4
        sp = enumerate_graphs(5, d=(2, 2, 2, 2, 2))
        assert len(sp) == 12  # 5-cycles: 4!/2

    def test_interval_and_m(self):
        iv = DegreeInterval((0,) * 3, (2,) * 3)
        assert len(enumerate_graphs(3, interval=iv)) == 8
        assert len(enumerate_graphs(3, interval=iv, m=2)) == 3

    def test_bad_args(self):
        with pytest.raises(ValueError):
            enumerate_graphs(4)
        with pytest.raises(TooLarge):
            enumerate_graphs(9, d=(0,) * 9)

    def test_index_membership(self):
        sp = enumerate_graphs(4, d=(1, 1, 1, 1))
        g = sp.graph(1)
        assert sp.index_of(g) == 1
        assert g in sp
        assert Graph.empty(4) not in sp


class TestCounting:
    def test_known_counts(self):
        assert count_realizations((0, 0, 0)) == 1
        assert count_realizations((1, 1)) == 1
        assert count_realizations((2, 2, 2, 2)) == 3  # 4-cycles
        assert count_realizations((2,) * 5 ) == 12
        assert count_realizations((2,) * 6) == 70
        assert count_realizations((3,) * 6) == 70  # complement symmetry
        assert count_realizations((1, 1, 1)) == 0  # odd sum
        assert count_realizations((3, 1, 1, 1)) == 1  # star

    def test_matches_census_exhaustively_n5(self):
        for d, c in degree_class_counts(5).items():
            assert count_realizations(d) == c, d

    def test_matches_census_sampled_n6(self):
        items = sorted(degree_class_counts(6).items())
        for d, c in items[::37]:
            assert count_realizations(d) == c, d

    def test_nongraphical_zero(self):
        for d in itertools.product(range(4), repeat=4):
            assert (count_realizations(d) > 0) == is_graphical(d)

    def test_cap(self):
        with pytest.raises(TooLarge):
            count_realizations((1,) * 13)


class TestMatrices:
    def test_mismatch(self):
        sp = enumerate_graphs(4, d=(1, 1, 1, 1))
        with pytest.raises(Mismatch):
            oracle.build_matrix(SwitchKernel(d=(2, 2, 2, 2)), sp)

    def test_not_stochastic(self):
        with pytest.raises(NotStochastic):
            oracle.check_stochastic(np.array([[0.5, 0.4], [0.5, 0.5]]))
        with pytest.raises(NotStochastic):
            oracle.check_stochastic(np.array([[1.2, -0.2], [0.0, 1.0]]))

    def test_two_state_gap(self):
        P = np.array([[0.75, 0.25], [0.25, 0.75]])
        assert spectral_gap(P) == pytest.approx(0.5)
        assert stationary_distribution(P) == pytest.approx([0.5, 0.5])

    def test_tv_curve_decreases(self):
        P = np.array([[0.75, 0.25], [0.25, 0.75]])
        curve = tv_curve(P, 0, 10)
        assert curve[0] == pytest.approx(0.5)
        assert all(a >= b - 1e-12 for a, b in zip(curve, curve[1:]))
        # exact geometric decay at rate lambda_2 = 1/2
        assert curve[5] == pytest.approx(0.5 * 0.5**5)

    def test_interval_chain_symmetric_uniform(self):
        iv = DegreeInterval((1,) * 5, (2,) * 5)
        sp = enumerate_graphs(5, interval=iv)
        P = oracle.build_matrix(DegreeIntervalKernel(iv), sp)
        assert np.allclose(P, P.T)
        pi = np.full(len(sp), 1 / len(sp))
        assert np.abs(pi @ P - pi).max() < 1e-14

    def test_mixing_bound_consistent(self):
        iv = DegreeInterval((1,) * 4, (2,) * 4)
        sp = enumerate_graphs(4, interval=iv)
        P = oracle.build_matrix(DegreeIntervalKernel(iv), sp)
        gap = spectral_gap(P)
        t = int(oracle.mixing_time_bound(1 / len(sp), 1 - gap, 0.01)) + 1
        assert max(tv_curve(P, 0, t)[-1:]) <= 0.01


class TestCongestion:
    def test_birth_death_bound(self):
        w = [1.0, 4.0, 6.0, 4.0, 1.0]
        from degmc.projection import edge_count_matrix

        P = edge_count_matrix(w)
        pi = np.array(w) / sum(w)
        rep = congestion_check(P, pi)
        assert rep["holds"]
        assert rep["gap"] >= 1.0 / rep["bound"]

    def test_rejects_non_birth_death(self):
        P = np.full((3, 3), 1 / 3)
        with pytest.raises(ValueError):
            congestion_check(P)


class TestComponents:
    def test_switch_components_regular(self):
        for n, r in [(5, 2), (6, 2), (6, 3)]:
            sp = enumerate_graphs(n, d=(r,) * n)
            ncomp, _ = state_graph_components(sp, moves=("switch",))
            assert ncomp == 1

    def test_interval_chain_connected(self):
        iv = DegreeInterval((1,) * 6, (2,) * 6)
        sp = enumerate_graphs(6, interval=iv)
        ncomp, _ = state_graph_components(sp)
        assert ncomp == 1

    def test_detects_disconnection(self):
        # only add/delete moves between two perfect matchings: no path
        sp = enumerate_graphs(4, d=(1, 1, 1, 1))
        ncomp, _ = state_graph_components(sp, moves=("add_delete",))
        assert ncomp == 3


class TestAlternatingPaths:
    def test_direct_path(self):
        g = Graph.from_edges(3, [(0, 1)])
        p = find_alternating_path(g, 0, 2, 10)
        assert p is not None and p.length == 2
        assert p.is_valid(g)
        g2 = p.flip(g)
        # flip moves the degree unit from node 0 to node 2
        assert g2.degree_sequence() == (0, 1, 1)

    def test_no_path_in_complete_graph(self):
        # every pair is an edge, so no step can end with a non-edge
        g = Graph.complete(4)
        assert find_alternating_path(g, 0, 1, 10) is None

    def test_path_respects_bound(self):
        rng = make_rng(3)
        for _ in range(20):
            edges = [e for e in itertools.combinations(range(6), 2) if rng.random() < 0.5]
            g = Graph.from_edges(6, edges)
            for u, v in [(0, 1), (2, 5)]:
                p = find_alternating_path(g, u, v, 6)
                if p is not None:
                    assert p.length <= 6 and p.is_valid(g)

    def test_stability_condition(self):
        assert strongly_stable_condition((2, 2, 2, 2, 2, 2))
        assert not strongly_stable_condition((5, 1, 1, 1, 1, 1))


class TestShortCycleTransform:
    def test_remove_edge(self):
        d = (2,) * 5
        g = oracle.enumerate_graphs(5, d=d).graph(0)
        e = sorted(g.edges)[0]
        g2 = short_cycle_transform(g, d, ("remove_edge",) + e)
        assert g2.degree_sequence() == d
        assert not g2.has_edge(*e)
        assert len(g.edges ^ g2.edges) <= 12

    def test_add_edge_and_keep_remove(self):
        d = (2,) * 6
        sp = oracle.enumerate_graphs(6, d=d)
        g = sp.graph(7)
        non_edge = next(
            (i, j) for i, j in itertools.combinations(range(6), 2) if not g.has_edge(i, j)
        )
        g2 = short_cycle_transform(g, d, ("add_edge",) + non_edge)
        assert g2.has_edge(*non_edge) and g2.degree_sequence() == d
        (u, w) = sorted(g.edges)[0]
        v = next(x for x in range(6) if x not in (u, w) and g.has_edge(u, x))
        g3 = short_cycle_transform(g, d, ("keep_remove", u, w, v))
        assert g3.has_edge(u, w) and not g3.has_edge(u, v)

    def test_satisfied_goal_returns_input(self):
        d = (1, 1, 1, 1)
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        assert short_cycle_transform(g, d, ("remove_edge", 0, 2)) is g

    def test_not_found(self):
        d = (1, 1)
        g = Graph.from_edges(2, [(0, 1)])
        with pytest.raises(NotFound):
            short_cycle_transform(g, d, ("remove_edge", 0, 1))


class TestCanonicalDecomposition:
    def test_pure_cycle(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        g2 = Graph.from_edges(4, [(0, 2), (1, 3)])
        dec = canonical_decomposition(g, g2)
        assert len(dec["cycles"]) == 1
        assert not dec["even_paths"] and not dec["g_paths"] and not dec["g2_paths"]
        assert len(dec["cycles"][0]) == 4

    def test_single_edge_is_g_path(self):
        g = Graph.from_edges(3, [(0, 1)])
        g2 = Graph.empty(3)
        dec = canonical_decomposition(g, g2)
        assert dec["g_paths"] == [[(0, 1)]]

    def test_component_edge_partition(self):
        rng = make_rng(9)
        for _ in range(30):
            e1 = [e for e in itertools.combinations(range(6), 2) if rng.random() < 0.5]
            e2 = [e for e in itertools.combinations(range(6), 2) if rng.random() < 0.5]
            g, g2 = Graph.from_edges(6, e1), Graph.from_edges(6, e2)
            dec = canonical_decomposition(g, g2)
            comps = dec["cycles"] + dec["even_paths"] + dec["g_paths"] + dec["g2_paths"]
            flat = [e for c in comps for e in c]
            assert sorted(flat) == sorted(g.edges ^ g2.edges)

    def test_two_extra_edges_two_g_paths(self):
        """|E(G)| = |E(G2)| + 2 forces two more surplus paths than deficit."""
        rng = make_rng(17)
        tries = 0
        while tries < 50:
            e2 = [e for e in itertools.combinations(range(6), 2) if rng.random() < 0.4]
            g2 = Graph.from_edges(6, e2)
            spare = [e for e in itertools.combinations(range(6), 2) if not g2.has_edge(*e)]
            if len(spare) < 2:
                continue
            pick = rng.choice(len(spare), size=2, replace=False)
            g = g2.with_edges(add=[spare[int(pick[0])], spare[int(pick[1])]])
            dec = canonical_decomposition(g, g2)
            assert len(dec["g_paths"]) == len(dec["g2_paths"]) + 2
            tries += 1


class TestLogConcavity:
    def test_verify(self):
        assert verify_log_concave([1, 4, 6, 4, 1]) == (True, None)
        ok, where = verify_log_concave([1, 1, 4, 1])
        assert not ok and where == 1
        with pytest.raises(ValueError):
            verify_log_concave([1, -1, 1])


class TestMartinRandall:
    def test_interval_chain_by_edge_count(self):
        iv = DegreeInterval((1,) * 5, (2,) * 5)
        sp = enumerate_graphs(5, interval=iv)
        P = oracle._as_dense(oracle.build_matrix(DegreeIntervalKernel(iv), sp))
        masses = oracle._popcount(sp.masks).astype(int)
        partition = [
            list(np.nonzero(masses == m)[0]) for m in sorted(set(masses.tolist()))
        ]
        rep = verify_martin_randall(P, partition)
        assert rep["holds"]
        assert rep["gap"] >= rep["rhs"] > 0
        assert not rep["disconnected_blocks"]

    def test_single_block(self):
        P = np.array([[0.75, 0.25], [0.25, 0.75]])
        rep = verify_martin_randall(P, [[0, 1]])
        assert rep["holds"] and rep["gap_projection"] == 1.0


class TestReports:
    def test_report_line(self):
        import json

        line = oracle.report_line("n=4", "gap", 0.1, 0.2, True)
        rec = json.loads(line)
        assert rec == {
            "instance": "n=4",
            "quantity": "gap",
            "bound": 0.1,
            "measured": 0.2,
            "pass": True,
        }
