"""Approximate counting and near-uniform sampling for degree intervals.

Counting telescopes over a ladder of tightening lower bounds: the target
class is written as an exactly countable single-sequence class times a
product of membership ratios, each ratio estimated by uniform sampling
from the enclosing class.  Sampling recurses on the first non-pinned
coordinate, choosing its degree proportionally to exact sub-class counts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .graphs import DegreeInterval, Graph, Infeasible, is_graphical, realize, _feasible_sequence
from .chains import SwitchKernel, make_rng, run_with_rng
from . import oracle

EXACT_SAMPLE_CAP = 7  # exact uniform draws from G(d) by enumeration up to this n
RATIO_CONSTANT = 1.0  # multiplier on the per-rung sample size


class OddResidue(ValueError):
    """Raised when a ladder cannot close the parity gap to the edge count."""


class ZeroHits(RuntimeError):
    """Raised when ratio estimation sees no member of the subclass."""


# --- exact desk-scale counts -------------------------------------------------


@lru_cache(maxsize=None)
def _exact_interval_count_cached(lower, upper, m):
    iv = DegreeInterval(lower, upper)
    from .projection import enumerate_degree_vectors

    if m is not None:
        pts = enumerate_degree_vectors(iv, m)
    else:
        pts = []
        lo_m = (sum(lower) + 1) // 2
        hi_m = sum(upper) // 2
        for mm in range(lo_m, hi_m + 1):
            pts.extend(enumerate_degree_vectors(iv, mm))
    return sum(oracle.count_realizations(d) for d in pts)


def exact_interval_count(iv, m=None):
    """Exact |G(l,u)| (or |G_m(l,u)|) by summing per-sequence counts."""
    return _exact_interval_count_cached(iv.lower, iv.upper, m)


# --- ladders -----------------------------------------------------------------


@dataclass(frozen=True)
class Ladder:
    """Tightening lower bounds l = a^0 <= a^1 <= ... <= a^p, sum(a^p) = 2m.

    The final rung pins the degree sequence: every graph in the class with
    lower bound a^p and edge count m realizes exactly a^p, so its size is
    an exactly countable single-sequence class.
    """

    interval: DegreeInterval
    m: int
    rungs: tuple  # tuple of degree-bound tuples, rungs[0] == interval.lower

    @property
    def final_sequence(self):
        return self.rungs[-1]

    @property
    def num_ratios(self):
        return len(self.rungs) - 1


def build_ladder(iv, m):
    """Ladder from the interval's lower bounds up to a graphical sequence
    with edge count m, raising the two lowest-indexed liftable coordinates
    per rung (one coordinate on the final rung if the parity gap is odd)."""
    target = _feasible_sequence(iv, m)
    if target is None:
        raise Infeasible(f"no graphical sequence in the interval with {m} edges")
    a = list(iv.lower)
    rungs = [tuple(a)]
    while sum(a) < 2 * m:
        liftable = [i for i in range(iv.n) if a[i] < target[i]]
        residue = 2 * m - sum(a)
        if not liftable:
            raise OddResidue(f"cannot close residue {residue} toward {target}")
        if residue >= 2 and len(liftable) >= 2:
            a[liftable[0]] += 1
            a[liftable[1]] += 1
        else:
            a[liftable[0]] += 1
        rungs.append(tuple(a))
    return Ladder(interval=iv, m=m, rungs=tuple(rungs))


# --- ratio estimation --------------------------------------------------------


def ratio_sample_size(num_ratios, eps, delta, q_hat):
    """Per-rung sample count for an (eps, delta) product of ratio estimates."""
    p = max(1, num_ratios)
    return int(
        math.ceil(
            RATIO_CONSTANT * p * p * q_hat * math.log(2.0 * p / delta) / (eps * eps)
        )
    )


def estimate_ratio(member_mask, n_samples, rng, max_retries=3):
    """Fraction of uniform draws landing in the subclass.

    Draws uniform indices into the enclosing class and evaluates the
    membership mask at each.  Doubles the sample size on an all-miss
    outcome, raising ZeroHits after max_retries."""
    size = len(member_mask)
    n = n_samples
    for _ in range(max_retries + 1):
        idx = rng.integers(0, size, size=n)
        hits = int(np.count_nonzero(member_mask[idx]))
        if hits > 0:
            return hits / n, n
        n *= 2
    raise ZeroHits(f"no subclass members in {n // 2} draws")


# --- count estimates ---------------------------------------------------------


@dataclass(frozen=True)
class CountEstimate:
    log_value: float
    eps: float
    delta: float
    method: str
    samples_used: int = 0
    ladder_length: int = 0
    per_rung_ratios: tuple = ()

    @property
    def value(self):
        return math.exp(self.log_value) if self.log_value > -math.inf else 0.0

    def to_dict(self):
        return {
            "log_value": self.log_value,
            "value_if_small": self.value if self.log_value < 700 else None,
            "eps": self.eps,
            "delta": self.delta,
            "method": self.method,
            "samples_used": self.samples_used,
            "ladder_length": self.ladder_length,
            "per_rung_ratios": list(self.per_rung_ratios),
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def _log_final_count(d):
    """log |G(d)| for the pinned final rung: exact at desk scale, the
    asymptotic estimate beyond the recursion cap."""
    if len(d) <= 12:
        c = oracle.count_realizations(d)
        return (math.log(c) if c > 0 else -math.inf), "exact"
    from .weights import lw_log_weight

    return lw_log_weight(d), "asymptotic"


def estimate_count_m(iv, m, eps, delta, rng=None, seed=None):
    """(eps, delta)-estimate of |G_m(l,u)| by telescoping membership ratios."""
    if rng is None:
        rng = make_rng(0 if seed is None else seed)
    try:
        ladder = build_ladder(iv, m)
    except Infeasible:
        return CountEstimate(-math.inf, eps, delta, method="infeasible")
    log_final, final_method = _log_final_count(ladder.final_sequence)
    if ladder.num_ratios == 0:
        return CountEstimate(log_final, eps, delta, method=final_method)

    # enumerate each enclosing class once; degrees reused across rungs
    spaces = []
    for a in ladder.rungs[:-1]:
        sp = oracle.enumerate_graphs(iv.n, interval=DegreeInterval(a, iv.upper), m=m)
        spaces.append(sp)
    final_iv = DegreeInterval(ladder.final_sequence, iv.upper)
    final_sp = oracle.enumerate_graphs(iv.n, interval=final_iv, m=m)
    all_spaces = spaces + [final_sp]

    # worst exact inverse ratio calibrates the sample size
    sizes = [len(s) for s in all_spaces]
    if sizes[-1] == 0:
        return CountEstimate(-math.inf, eps, delta, method="infeasible")
    q_hat = max(sizes[k] / sizes[k + 1] for k in range(len(sizes) - 1))
    n_per = ratio_sample_size(ladder.num_ratios, eps, delta, q_hat)

    log_est = log_final
    ratios = []
    used = 0
    for k in range(ladder.num_ratios):
        outer = spaces[k]
        next_lower = np.asarray(ladder.rungs[k + 1], dtype=np.int64)
        deg = outer.degrees()
        member = np.all(deg >= next_lower, axis=1)
        r, n_used = estimate_ratio(member, n_per, rng)
        ratios.append(r)
        used += n_used
        log_est -= math.log(r)
    return CountEstimate(
        log_value=log_est,
        eps=eps,
        delta=delta,
        method=f"ladder+{final_method}",
        samples_used=used,
        ladder_length=ladder.num_ratios,
        per_rung_ratios=tuple(ratios),
    )


def estimate_count(iv, eps, delta, seed=None):
    """(eps, delta)-estimate of |G(l,u)| as a sum over feasible edge counts.

    The failure budget is split as delta / n^2 across the per-count
    estimates, which dominates the number of feasible edge counts."""
    from .projection import feasible_edge_counts

    rng = make_rng(0 if seed is None else seed)
    counts = feasible_edge_counts(iv)
    if not counts:
        return CountEstimate(-math.inf, eps, delta, method="infeasible")
    delta_prime = delta / (iv.n**2)
    total = 0.0
    used = 0
    rungs = 0
    parts = []
    for m in counts:
        est = estimate_count_m(iv, m, eps, delta_prime, rng=rng)
        used += est.samples_used
        rungs += est.ladder_length
        parts.append(est)
        total += est.value
    return CountEstimate(
        log_value=math.log(total) if total > 0 else -math.inf,
        eps=eps,
        delta=delta,
        method="ladder-sum",
        samples_used=used,
        ladder_length=rungs,
    )


# --- near-uniform sampling ---------------------------------------------------


@lru_cache(maxsize=None)
def _descent_counts(lower, upper):
    """Branch counts for the first non-pinned coordinate of the interval."""
    n = len(lower)
    i = next((k for k in range(n) if lower[k] < upper[k]), None)
    if i is None:
        return None, None, None
    branch = []
    for v in range(lower[i], upper[i] + 1):
        lo = lower[:i] + (v,) + lower[i + 1 :]
        hi = upper[:i] + (v,) + upper[i + 1 :]
        branch.append(_exact_interval_count_cached(lo, hi, None))
    return i, tuple(branch), None


def _sample_degree_sequence(iv, rng):
    """A degree sequence drawn with probability |G(d)| / |G(l,u)|."""
    lower, upper = iv.lower, iv.upper
    while True:
        i, branch, _ = _descent_counts(lower, upper)
        if i is None:
            return lower
        total = sum(branch)
        if total == 0:
            raise Infeasible("interval contains no graph")
        pick = int(rng.integers(0, total))
        acc = 0
        for off, c in enumerate(branch):
            acc += c
            if pick < acc:
                v = lower[i] + off
                break
        lower = lower[:i] + (v,) + lower[i + 1 :]
        upper = upper[:i] + (v,) + upper[i + 1 :]


def sample_realization(d, rng, chain_steps=None):
    """Uniform (small n) or near-uniform (switch chain) draw from G(d)."""
    d = tuple(int(x) for x in d)
    n = len(d)
    if n <= EXACT_SAMPLE_CAP:
        space = oracle.enumerate_graphs(n, d=d)
        if len(space) == 0:
            raise Infeasible(f"{d} is not graphical")
        return space.graph(int(rng.integers(0, len(space))))
    g0 = realize(d)
    steps = chain_steps if chain_steps is not None else 20 * n * n * sum(d)
    return run_with_rng(SwitchKernel(d=d), g0, steps, rng)


def sample_interval(iv, rng=None, seed=None, chain_steps=None):
    """A draw from G(l,u): exactly uniform whenever n is at most the exact
    sampling cap, near-uniform beyond it.

    Degree sequences are drawn with probability proportional to their exact
    realization counts (memoized across draws), then a realization is drawn
    within the chosen class."""
    if rng is None:
        rng = make_rng(0 if seed is None else seed)
    d = _sample_degree_sequence(iv, rng)
    return sample_realization(d, rng, chain_steps=chain_steps)
