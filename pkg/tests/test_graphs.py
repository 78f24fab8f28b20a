"""Core graph types, graphicality, realization and file formats."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degmc.graphs import (
    BoundExceeded,
    DegreeInterval,
    Graph,
    Infeasible,
    NearRegularParams,
    NotGraphical,
    ParseError,
    _feasible_sequence,
    intervals_from_observation,
    is_graphical,
    read_edge_list,
    read_intervals,
    realize,
    realize_in_interval,
    write_edge_list,
    write_intervals,
)


def brute_force_graphical(d):
    """Independent oracle: scan all graphs on len(d) nodes."""
    n = len(d)
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        deg = [0] * n
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                deg[i] += 1
                deg[j] += 1
        if tuple(deg) == tuple(d):
            return True
    return False


class TestGraph:
    def test_normalizes_and_validates(self):
        g = Graph(3, frozenset({(2, 0), (1, 2)}))
        assert g.edges == {(0, 2), (1, 2)}
        assert g.has_edge(2, 0) and not g.has_edge(0, 1)
        with pytest.raises(ValueError):
            Graph(3, frozenset({(1, 1)}))
        with pytest.raises(ValueError):
            Graph(3, frozenset({(0, 3)}))

    def test_degree_sequence_and_edits(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        assert g.degree_sequence() == (1, 2, 2, 1)
        g2 = g.with_edges(add=[(0, 3)], remove=[(1, 2)])
        assert g2.degree_sequence() == (2, 1, 1, 2)
        assert g.degree_sequence() == (1, 2, 2, 1)  # immutable

    def test_complete_empty(self):
        assert Graph.complete(5).num_edges == 10
        assert Graph.empty(5).num_edges == 0

    def test_hashable(self):
        assert Graph.from_edges(3, [(0, 1)]) == Graph.from_edges(3, [(1, 0)])
        assert len({Graph.empty(3), Graph(3)}) == 1


class TestGraphical:
    @pytest.mark.parametrize(
        "d,expect",
        [
            ((), True),
            ((0,), True),
            ((1,), False),
            ((1, 1), True),
            ((2, 2, 2), True),
            ((3, 1, 1, 1), True),
            ((3, 3, 1, 1), False),
            ((3, 3, 3, 1), False),
            ((2, 2, 2, 2), True),
            ((4, 4, 4, 4, 4), True),
        ],
    )
    def test_known_values(self, d, expect):
        assert is_graphical(d) is expect

    def test_odd_sum_and_range(self):
        assert not is_graphical((1, 1, 1))
        assert not is_graphical((5, 0, 0, 0, 0))
        assert not is_graphical((-1, 1))

    def test_matches_brute_force_n5(self):
        for d in itertools.product(range(5), repeat=5):
            assert is_graphical(d) == brute_force_graphical(d), d

    @given(st.lists(st.integers(0, 5), min_size=2, max_size=6))
    @settings(max_examples=200, deadline=None)
    def test_realize_consistent(self, d):
        if is_graphical(d):
            assert realize(d).degree_sequence() == tuple(d)
        else:
            with pytest.raises(NotGraphical):
                realize(d)

    def test_realize_deterministic(self):
        assert realize((2, 2, 1, 1)) == realize((2, 2, 1, 1))


class TestDegreeInterval:
    def test_validation(self):
        with pytest.raises(ValueError):
            DegreeInterval((2,) * 3, (1,) * 3)
        with pytest.raises(BoundExceeded):
            DegreeInterval((0,) * 3, (3,) * 3)

    def test_contains(self):
        iv = DegreeInterval((1, 1, 1), (2, 2, 2))
        assert iv.contains((1, 2, 1))
        assert not iv.contains((0, 2, 1))
        assert iv.contains_graph(Graph.complete(3))
        assert iv.width() == 1
        assert DegreeInterval.constant((2, 2, 2)).width() == 0

    def test_realize_in_interval(self):
        iv = DegreeInterval((1,) * 5, (3,) * 5)
        for m in (3, 5, 7):
            g = realize_in_interval(iv, m)
            assert g.num_edges == m
            assert iv.contains_graph(g)
        with pytest.raises(Infeasible):
            realize_in_interval(iv, 1)

    def test_feasible_sequence_none(self):
        iv = DegreeInterval((0, 0, 0), (1, 1, 1))
        assert _feasible_sequence(iv, 3) is None


class TestNearRegular:
    def test_validation(self):
        with pytest.raises(ValueError):
            NearRegularParams(r=2, alpha=0.6, rho=0.5, n=10)
        with pytest.raises(ValueError):
            NearRegularParams(r=9, alpha=0.2, rho=0.5, n=10)

    def test_degree_range_and_threshold(self):
        p = NearRegularParams(r=2, alpha=0.2, rho=0.7, n=7)
        assert p.degree_range() == (1, 3)
        assert NearRegularParams.min_n(0.2, 0.7) == 6
        assert p.admits(DegreeInterval((1,) * 7, (3,) * 7))
        assert not p.admits(DegreeInterval((0,) * 7, (3,) * 7))


class TestObservation:
    def test_triangle_fully_observed(self):
        g = Graph.complete(3)
        iv = intervals_from_observation(g, [0, 0, 0])
        assert iv.lower == iv.upper == (2, 2, 2)

    def test_missing_raises_bounds(self):
        g = Graph.complete(3)
        with pytest.raises(BoundExceeded):
            intervals_from_observation(g, [1, 0, 0])

    def test_partial(self):
        g = Graph.from_edges(4, [(0, 1)])
        iv = intervals_from_observation(g, [2, 0, 1, 0])
        assert iv.lower == (1, 1, 0, 0)
        assert iv.upper == (3, 1, 1, 0)


class TestFiles:
    def test_edge_list_roundtrip(self, tmp_path):
        g = Graph.from_edges(5, [(0, 1), (2, 4), (1, 3)])
        path = tmp_path / "g.edges"
        write_edge_list(path, g)
        assert read_edge_list(path) == g

    def test_edge_list_comments_and_errors(self, tmp_path):
        p = tmp_path / "a.edges"
        p.write_text("# header\n0 1\n\n1 2  # trailing\n")
        assert read_edge_list(p).edges == {(0, 1), (1, 2)}
        p.write_text("0 1\nbad line here\n")
        with pytest.raises(ParseError) as ei:
            read_edge_list(p)
        assert ei.value.line_number == 2
        p.write_text("0 0\n")
        with pytest.raises(ParseError):
            read_edge_list(p)

    def test_interval_roundtrip(self, tmp_path):
        iv = DegreeInterval((1, 0, 2), (2, 1, 2))
        path = tmp_path / "iv.txt"
        write_intervals(path, iv)
        assert read_intervals(path) == iv

    def test_interval_errors(self, tmp_path):
        p = tmp_path / "iv.txt"
        p.write_text("0 1 2\n0 1 2\n")
        with pytest.raises(ParseError):
            read_intervals(p)
        p.write_text("0 1 2\n2 1 2\n")
        with pytest.raises(ParseError):
            read_intervals(p)
