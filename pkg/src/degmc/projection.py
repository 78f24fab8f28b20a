"""Projected chains on degree sequences and on edge counts.

The graph chains project onto two coarser state spaces:

* degree sequences with a fixed sum (one slice per edge count m), walked
  either by a Metropolis-Hastings single-unit exchange or by a heat-bath
  load-exchange step, both stationary for pi(d) proportional to a chosen
  weight model; and
* edge counts themselves, walked by a lazy birth-death chain whose
  mixing is controlled by log-concavity of the per-count weights.

Explicit transition matrices for all three are built here at desk scale
so their stationarity and spectral gaps can be checked exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .graphs import DegreeInterval, Infeasible, _norm_edge  # noqa: F401
from .weights import WeightModel


class MixedSums(ValueError):
    """Raised when points meant to share a coordinate sum do not."""


class NotPositive(ValueError):
    """Raised when a weight that must be positive is zero or negative."""


def enumerate_degree_vectors(iv, m):
    """All integer points of the interval box with coordinate sum 2m."""
    target = 2 * m
    n = iv.n
    lo, hi = iv.lower, iv.upper
    suffix_lo = [0] * (n + 1)
    suffix_hi = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_lo[i] = suffix_lo[i + 1] + lo[i]
        suffix_hi[i] = suffix_hi[i + 1] + hi[i]
    out = []

    def rec(i, prefix, total):
        if i == n:
            if total == target:
                out.append(tuple(prefix))
            return
        rem = target - total
        a = max(lo[i], rem - suffix_hi[i + 1])
        b = min(hi[i], rem - suffix_lo[i + 1])
        for v in range(a, b + 1):
            prefix.append(v)
            rec(i + 1, prefix, total + v)
            prefix.pop()

    rec(0, [], 0)
    return out


def feasible_edge_counts(iv):
    """Edge counts m for which some graphical sequence fits the interval."""
    from .graphs import _feasible_sequence

    lo_m = (sum(iv.lower) + 1) // 2
    hi_m = sum(iv.upper) // 2
    return [m for m in range(lo_m, hi_m + 1) if _feasible_sequence(iv, m) is not None]


@dataclass(frozen=True)
class DegreeSpace:
    """Degree sequences in an interval box with a fixed sum and positive weight."""

    interval: DegreeInterval
    m: int
    model: WeightModel = field(default_factory=WeightModel)

    @property
    def n(self):
        return self.interval.n

    def elements(self):
        if not hasattr(self, "_elements"):
            pts = enumerate_degree_vectors(self.interval, self.m)
            kept, logs = [], []
            for d in pts:
                lw = self.model.log_weight(d)
                if lw > -math.inf:
                    kept.append(d)
                    logs.append(lw)
            object.__setattr__(self, "_elements", kept)
            object.__setattr__(self, "_log_weights", np.array(logs))
        return self._elements

    def log_weights(self):
        self.elements()
        return self._log_weights

    def index(self):
        if not hasattr(self, "_index"):
            object.__setattr__(
                self, "_index", {d: i for i, d in enumerate(self.elements())}
            )
        return self._index

    def __len__(self):
        return len(self.elements())

    def __contains__(self, d):
        return tuple(d) in self.index()

    def stationary(self):
        lw = self.log_weights()
        p = np.exp(lw - lw.max())
        return p / p.sum()


# --- Metropolis-Hastings single-unit exchange chain --------------------------


def hinge_projection_step(d, space, rng):
    """One lazy MH step: hold 1/2, else move a degree unit from i to j.

    The ordered pair (i, j) is uniform over n^2; the proposal d - e_i + e_j
    is accepted with probability min(1, w(d')/w(d)).
    """
    if rng.random() < 0.5:
        return d
    n = space.n
    i, j = rng.integers(0, n, size=2)
    i, j = int(i), int(j)
    if i == j:
        return d
    prop = list(d)
    prop[i] -= 1
    prop[j] += 1
    prop = tuple(prop)
    if prop not in space:
        return d
    idx = space.index()
    lw = space.log_weights()
    ratio = math.exp(min(0.0, lw[idx[prop]] - lw[idx[tuple(d)]]))
    if rng.random() < ratio:
        return prop
    return d


def hinge_projection_matrix(space):
    """Explicit transition matrix of the lazy single-unit exchange MH chain."""
    elems = space.elements()
    idx = space.index()
    lw = space.log_weights()
    n = space.n
    size = len(elems)
    P = np.zeros((size, size))
    for a, d in enumerate(elems):
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                prop = list(d)
                prop[i] -= 1
                prop[j] += 1
                prop = tuple(prop)
                b = idx.get(prop)
                if b is None:
                    continue
                P[a, b] += math.exp(min(0.0, lw[b] - lw[a])) / (2.0 * n**2)
        P[a, a] = 1.0 - P[a].sum() + P[a, a]
    return P


# --- heat-bath load-exchange chain -------------------------------------------


def _exchange_candidates(d, space):
    """For each coordinate i: states >= d - e_i, i.e. d and d - e_i + e_j."""
    idx = space.index()
    n = space.n
    per_i = []
    for i in range(n):
        cand = [idx[tuple(d)]]
        for j in range(n):
            if i == j:
                continue
            prop = list(d)
            prop[i] -= 1
            prop[j] += 1
            b = idx.get(tuple(prop))
            if b is not None:
                cand.append(b)
        per_i.append(cand)
    return per_i


def load_exchange_step(d, space, rng):
    """One heat-bath step: pick a coordinate i uniformly, then resample the
    state among all members dominating d - e_i, proportionally to weight."""
    n = space.n
    i = int(rng.integers(0, n))
    cand = _exchange_candidates(d, space)[i]
    lw = space.log_weights()[cand]
    p = np.exp(lw - lw.max())
    p /= p.sum()
    choice = cand[int(rng.choice(len(cand), p=p))]
    return space.elements()[choice]


def load_exchange_matrix(space):
    """Explicit transition matrix of the load-exchange chain."""
    elems = space.elements()
    lw = space.log_weights()
    n = space.n
    size = len(elems)
    P = np.zeros((size, size))
    for a, d in enumerate(elems):
        for cand in _exchange_candidates(d, space):
            sub = lw[cand]
            p = np.exp(sub - sub.max())
            p /= p.sum()
            for b, pb in zip(cand, p):
                P[a, b] += pb / n
    return P


# --- edge-count birth-death chain --------------------------------------------


def edge_count_step(m_index, weights, rng):
    """One lazy birth-death step over edge-count indices.

    Proposes an adjacent index with probability 1/4 each and accepts with
    the weight ratio, so P(i, j) = (1/4) min(1, w_j / w_i) for |i-j| = 1.
    """
    size = len(weights)
    u = rng.random()
    if u < 0.5:
        return m_index
    j = m_index + (1 if u < 0.75 else -1)
    if j < 0 or j >= size:
        return m_index
    if weights[j] <= 0:
        return m_index
    if rng.random() < min(1.0, weights[j] / weights[m_index]):
        return j
    return m_index


def edge_count_matrix(weights):
    """Explicit matrix of the lazy birth-death chain on edge counts."""
    w = np.asarray(weights, dtype=float)
    if np.any(w <= 0):
        raise NotPositive("edge-count weights must be positive")
    size = len(w)
    P = np.zeros((size, size))
    for i in range(size):
        for j in (i - 1, i + 1):
            if 0 <= j < size:
                P[i, j] = 0.25 * min(1.0, w[j] / w[i])
        P[i, i] = 1.0 - P[i].sum()
    return P


def logconcave_gap_bound(weights):
    """Spectral-gap lower bound for the birth-death chain on a log-concave
    weight vector: gap >= 1 / (4 |Omega|^3 R), with R the largest weight
    ratio between adjacent counts."""
    w = list(weights)
    if any(x <= 0 for x in w):
        raise NotPositive("weights must be positive")
    size = len(w)
    if size == 1:
        return 1.0
    R = max(max(w[i] / w[i + 1], w[i + 1] / w[i]) for i in range(size - 1))
    return 1.0 / (4.0 * size**3 * R)


# --- M-convexity -------------------------------------------------------------


def check_m_convex(points):
    """Exchange-property check for a finite set of equal-sum integer vectors.

    For every alpha, beta in the set and every i with alpha_i > beta_i,
    some j with alpha_j < beta_j must make both alpha - e_i + e_j and
    beta + e_i - e_j members.  Returns (True, None) or (False, witness)
    with witness = (alpha, beta, i).
    """
    pts = [tuple(int(x) for x in p) for p in points]
    if not pts:
        return True, None
    sums = {sum(p) for p in pts}
    if len(sums) > 1:
        raise MixedSums(f"points have differing sums {sorted(sums)}")
    member = set(pts)
    for alpha, beta in itertools.permutations(pts, 2):
        for i in range(len(alpha)):
            if alpha[i] <= beta[i]:
                continue
            ok = False
            for j in range(len(alpha)):
                if alpha[j] >= beta[j]:
                    continue
                a2 = list(alpha)
                a2[i] -= 1
                a2[j] += 1
                b2 = list(beta)
                b2[i] += 1
                b2[j] -= 1
                if tuple(a2) in member and tuple(b2) in member:
                    ok = True
                    break
            if not ok:
                return False, (alpha, beta, i)
    return True, None
