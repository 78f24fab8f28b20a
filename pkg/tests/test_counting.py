"""Telescoping count estimation and near-uniform interval sampling."""

import math
from collections import Counter

import numpy as np
import pytest

from degmc import oracle
from degmc.chains import make_rng
from degmc.counting import (
    OddResidue,
    ZeroHits,
    build_ladder,
    estimate_count,
    estimate_count_m,
    estimate_ratio,
    exact_interval_count,
    ratio_sample_size,
    sample_interval,
    sample_realization,
)
from degmc.graphs import DegreeInterval, Infeasible
from degmc.projection import feasible_edge_counts

IV5 = DegreeInterval((1,) * 5, (3,) * 5)
UNIT5 = DegreeInterval((1,) * 5, (2,) * 5)


class TestExactCounts:
    def test_unconstrained_n3(self):
        iv = DegreeInterval((0,) * 3, (2,) * 3)
        assert exact_interval_count(iv) == 8

    def test_matches_enumeration(self):
        for iv in (IV5, UNIT5):
            sp = oracle.enumerate_graphs(5, interval=iv)
            assert exact_interval_count(iv) == len(sp)
            for m in feasible_edge_counts(iv):
                spm = oracle.enumerate_graphs(5, interval=iv, m=m)
                assert exact_interval_count(iv, m) == len(spm)


class TestLadder:
    def test_structure_even_residue(self):
        iv = DegreeInterval((2,) * 5, (4,) * 5)  # sum(l)=10 even
        ladder = build_ladder(iv, 7)
        assert ladder.rungs[0] == iv.lower
        assert sum(ladder.final_sequence) == 14
        # consecutive sums differ by exactly 2; parity is invariant
        for a, b in zip(ladder.rungs, ladder.rungs[1:]):
            assert sum(b) - sum(a) == 2
            assert all(x <= y for x, y in zip(a, b))

    def test_structure_odd_residue(self):
        ladder = build_ladder(IV5, 5)  # sum(l)=5 odd vs 2m=10
        deltas = [sum(b) - sum(a) for a, b in zip(ladder.rungs, ladder.rungs[1:])]
        assert deltas.count(1) == 1  # exactly one single-coordinate rung
        assert set(deltas) <= {1, 2}
        assert sum(ladder.final_sequence) == 10

    def test_odd_residue_single_step(self):
        iv = DegreeInterval((1, 1, 1, 1, 1), (3, 3, 3, 3, 3))
        ladder = build_ladder(iv, 3)  # 2m - sum(l) = 1
        deltas = [sum(b) - sum(a) for a, b in zip(ladder.rungs, ladder.rungs[1:])]
        assert sorted(deltas)[:1] in ([], [1])
        assert sum(deltas) == 6 - 5

    def test_subset_chain(self):
        """Tightening the lower bound only shrinks the class."""
        ladder = build_ladder(IV5, 6)
        prev = None
        for a in ladder.rungs:
            size = len(
                oracle.enumerate_graphs(5, interval=DegreeInterval(a, IV5.upper), m=6)
            )
            if prev is not None:
                assert size <= prev
            prev = size
        assert prev == oracle.count_realizations(ladder.final_sequence)

    def test_infeasible(self):
        with pytest.raises(Infeasible):
            build_ladder(IV5, 1)


class TestRatioEstimation:
    def test_unbiased_on_known_mask(self):
        rng = make_rng(0)
        mask = np.zeros(1000, dtype=bool)
        mask[:250] = True
        r, used = estimate_ratio(mask, 20000, rng)
        assert r == pytest.approx(0.25, abs=0.02)
        assert used == 20000

    def test_zero_hits(self):
        rng = make_rng(0)
        mask = np.zeros(100, dtype=bool)
        with pytest.raises(ZeroHits):
            estimate_ratio(mask, 10, rng, max_retries=2)

    def test_retry_doubles(self):
        rng = make_rng(12)
        mask = np.zeros(10000, dtype=bool)
        mask[0] = True
        r, used = estimate_ratio(mask, 1, rng, max_retries=20)
        assert r > 0 and used > 1

    def test_sample_size_scaling(self):
        base = ratio_sample_size(2, 0.1, 0.05, 4.0)
        assert ratio_sample_size(4, 0.1, 0.05, 4.0) > 2 * base
        assert ratio_sample_size(2, 0.05, 0.05, 4.0) > 3 * base


class TestEstimates:
    def test_exact_when_sum_matches(self):
        iv = DegreeInterval((2,) * 4, (3,) * 4)
        est = estimate_count_m(iv, 4, 0.1, 0.05, seed=0)
        assert est.method == "exact"
        assert est.value == pytest.approx(oracle.count_realizations((2, 2, 2, 2)))

    def test_infeasible_estimate(self):
        est = estimate_count_m(IV5, 1, 0.1, 0.05, seed=0)
        assert est.method == "infeasible" and est.value == 0.0

    def test_per_m_accuracy(self):
        for m in feasible_edge_counts(IV5):
            exact = exact_interval_count(IV5, m)
            est = estimate_count_m(IV5, m, 0.1, 0.05, seed=3)
            assert abs(est.value - exact) <= 0.1 * exact

    def test_total_accuracy_and_schema(self):
        exact = exact_interval_count(UNIT5)
        est = estimate_count(UNIT5, 0.1, 0.05, seed=7)
        assert abs(est.value - exact) <= 0.1 * exact
        d = est.to_dict()
        assert set(d) == {
            "log_value",
            "value_if_small",
            "eps",
            "delta",
            "method",
            "samples_used",
            "ladder_length",
            "per_rung_ratios",
        }
        import json

        assert json.loads(est.to_json()) == d

    def test_deterministic_given_seed(self):
        a = estimate_count(UNIT5, 0.1, 0.05, seed=5)
        b = estimate_count(UNIT5, 0.1, 0.05, seed=5)
        assert a.log_value == b.log_value


class TestSampling:
    def test_singleton_class(self):
        iv = DegreeInterval((2, 2, 2), (2, 2, 2))
        g = sample_interval(iv, seed=0)
        assert g.degree_sequence() == (2, 2, 2)

    def test_realization_uniform_small(self):
        d = (2,) * 5
        space = oracle.enumerate_graphs(5, d=d)
        rng = make_rng(2)
        c = Counter(space.index_of(sample_realization(d, rng)) for _ in range(12000))
        p = 1 / len(space)
        for i in range(len(space)):
            assert c[i] / 12000 == pytest.approx(p, abs=4 * math.sqrt(p / 12000))

    def test_interval_sampler_stays_inside(self):
        rng = make_rng(3)
        for _ in range(200):
            g = sample_interval(IV5, rng=rng)
            assert IV5.contains_graph(g)

    def test_interval_sampler_tv(self):
        space = oracle.enumerate_graphs(5, interval=UNIT5)
        rng = make_rng(11)
        N = 30000
        c = Counter(space.index_of(sample_interval(UNIT5, rng=rng)) for _ in range(N))
        emp = np.array([c[i] for i in range(len(space))]) / N
        tv = 0.5 * np.abs(emp - 1 / len(space)).sum()
        assert tv <= 0.05

    def test_infeasible_interval(self):
        iv = DegreeInterval((0, 0, 2), (0, 0, 2))
        with pytest.raises(Infeasible):
            sample_interval(iv, seed=0)
