"""Local-move Markov chains on degree-constrained graph spaces.

Three kernels are provided, each a seeded single-step function:

* ``SwitchKernel`` -- lazy switch chain on the realizations of a fixed
  degree sequence (hold 1 - 1/q, switch attempt 1/q).
* ``SwitchHingeFlipKernel`` -- chain on graphs with degrees in an interval
  and a fixed edge count (hold 2/3, switch 1/6, hinge flip 1/6).
* ``DegreeIntervalKernel`` -- chain on all graphs with degrees in an
  interval (hold 1/2, then 1/6 each for switch / hinge flip /
  addition-deletion).

Move attempts draw ordered node tuples uniformly, repeats allowed; a
degenerate tuple simply fails the edge tests, which keeps the transition
rows exactly enumerable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import DegreeInterval, Graph, _norm_edge


@dataclass(frozen=True)
class RunConfig:
    steps: int
    seed: int

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError("steps must be non-negative")


def make_rng(seed):
    """Counter-based generator; spawn_rngs() splits reproducible substreams."""
    return np.random.Generator(np.random.Philox(seed))


def spawn_rngs(seed, k):
    seqs = np.random.SeedSequence(seed).spawn(k)
    return [np.random.Generator(np.random.Philox(s)) for s in seqs]


# --- pure move functions -----------------------------------------------------


def switch_move(g, quad):
    """Apply the switch for ordered tuple (v, w, x, y), or return g unchanged.

    Requires {w,v},{x,y} in E and {y,v},{x,w} not in E; the degree sequence
    is preserved whenever the move fires.
    """
    v, w, x, y = quad
    if not (g.has_edge(w, v) and g.has_edge(x, y)):
        return g
    if y == v or x == w or g.has_edge(y, v) or g.has_edge(x, w):
        return g
    return g.with_edges(add=[(y, v), (x, w)], remove=[(w, v), (x, y)])


def hinge_flip_move(g, triple, interval=None):
    """Apply the hinge flip for ordered (v, w, x), or return g unchanged.

    Moves one endpoint of the edge {w,v} from v to x; v loses a degree, x
    gains one.  If an interval is given the result must respect it.
    """
    v, w, x = triple
    if not g.has_edge(w, v):
        return g
    if x == w or x == v or g.has_edge(w, x):
        return g
    if interval is not None:
        deg = g.degree_sequence()
        if deg[v] - 1 < interval.lower[v] or deg[x] + 1 > interval.upper[x]:
            return g
    return g.with_edges(add=[(w, x)], remove=[(w, v)])


def add_delete_move(g, pair, interval):
    """Toggle the edge {v,w} if the result stays inside the interval."""
    v, w = pair
    if v == w:
        return g
    deg = g.degree_sequence()
    if g.has_edge(v, w):
        if deg[v] - 1 < interval.lower[v] or deg[w] - 1 < interval.lower[w]:
            return g
        return g.with_edges(remove=[(v, w)])
    if deg[v] + 1 > interval.upper[v] or deg[w] + 1 > interval.upper[w]:
        return g
    return g.with_edges(add=[(v, w)])


# --- kernels -----------------------------------------------------------------


@dataclass(frozen=True)
class SwitchKernel:
    """Lazy switch chain on G(d)."""

    d: tuple
    q: int = 6  # holding parameter; hold probability is 1 - 1/q

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if self.q < 2:
            raise ValueError("q must be >= 2")

    @property
    def n(self):
        return len(self.d)

    def contains(self, g):
        return g.n == self.n and g.degree_sequence() == self.d

    def move_probabilities(self):
        return {"switch": 1.0 / self.q}

    def step(self, g, rng):
        if rng.random() < 1.0 - 1.0 / self.q:
            return g
        quad = tuple(rng.integers(0, self.n, size=4))
        return switch_move(g, quad)


@dataclass(frozen=True)
class SwitchHingeFlipKernel:
    """Switch-hinge-flip chain on the graphs in an interval with fixed edge count."""

    interval: DegreeInterval
    m: int

    @property
    def n(self):
        return self.interval.n

    def contains(self, g):
        return (
            g.n == self.n
            and g.num_edges == self.m
            and self.interval.contains_graph(g)
        )

    def move_probabilities(self):
        return {"switch": 1.0 / 6.0, "hinge": 1.0 / 6.0}

    def step(self, g, rng):
        u = rng.random()
        if u < 2.0 / 3.0:
            return g
        if u < 5.0 / 6.0:
            quad = tuple(rng.integers(0, self.n, size=4))
            return switch_move(g, quad)
        triple = tuple(rng.integers(0, self.n, size=3))
        return hinge_flip_move(g, triple, self.interval)


@dataclass(frozen=True)
class DegreeIntervalKernel:
    """Chain on all graphs with degrees in an interval (edge count varies)."""

    interval: DegreeInterval

    @property
    def n(self):
        return self.interval.n

    def contains(self, g):
        return g.n == self.n and self.interval.contains_graph(g)

    def move_probabilities(self):
        return {"switch": 1.0 / 6.0, "hinge": 1.0 / 6.0, "add_delete": 1.0 / 6.0}

    def step(self, g, rng):
        u = rng.random()
        if u < 0.5:
            return g
        if u < 0.5 + 1.0 / 6.0:
            quad = tuple(rng.integers(0, self.n, size=4))
            return switch_move(g, quad)
        if u < 0.5 + 2.0 / 6.0:
            triple = tuple(rng.integers(0, self.n, size=3))
            return hinge_flip_move(g, triple, self.interval)
        pair = tuple(rng.integers(0, self.n, size=2))
        return add_delete_move(g, pair, self.interval)


def run(kernel, g0, cfg):
    """Apply cfg.steps kernel steps from g0; deterministic given cfg.seed."""
    if not kernel.contains(g0):
        raise ValueError("initial state is outside the kernel's state space")
    rng = make_rng(cfg.seed)
    return run_with_rng(kernel, g0, cfg.steps, rng)


def run_with_rng(kernel, g0, steps, rng):
    """Run loop on a mutable edge set; only builds a Graph at the end."""
    n = kernel.n
    edges = set(g0.edges)
    deg = list(g0.degree_sequence())
    kind = type(kernel).__name__

    if kind == "SwitchKernel":
        p_hold = 1.0 - 1.0 / kernel.q
        for _ in range(steps):
            if rng.random() < p_hold:
                continue
            v, w, x, y = rng.integers(0, n, size=4)
            _try_switch(edges, int(v), int(w), int(x), int(y))
        return Graph(n, frozenset(edges))

    iv = kernel.interval
    if kind == "SwitchHingeFlipKernel":
        for _ in range(steps):
            u = rng.random()
            if u < 2.0 / 3.0:
                continue
            if u < 5.0 / 6.0:
                v, w, x, y = rng.integers(0, n, size=4)
                _try_switch(edges, int(v), int(w), int(x), int(y))
            else:
                v, w, x = rng.integers(0, n, size=3)
                _try_hinge(edges, deg, iv, int(v), int(w), int(x))
        return Graph(n, frozenset(edges))

    for _ in range(steps):
        u = rng.random()
        if u < 0.5:
            continue
        if u < 0.5 + 1.0 / 6.0:
            v, w, x, y = rng.integers(0, n, size=4)
            _try_switch(edges, int(v), int(w), int(x), int(y))
        elif u < 0.5 + 2.0 / 6.0:
            v, w, x = rng.integers(0, n, size=3)
            _try_hinge(edges, deg, iv, int(v), int(w), int(x))
        else:
            v, w = rng.integers(0, n, size=2)
            _try_toggle(edges, deg, iv, int(v), int(w))
    return Graph(n, frozenset(edges))


def _try_switch(edges, v, w, x, y):
    if w == v or x == y:
        return
    e_wv, e_xy = _norm_edge(w, v), _norm_edge(x, y)
    if e_wv not in edges or e_xy not in edges:
        return
    if y == v or x == w:
        return
    e_yv, e_xw = _norm_edge(y, v), _norm_edge(x, w)
    if e_yv in edges or e_xw in edges:
        return
    edges.remove(e_wv)
    edges.remove(e_xy)
    edges.add(e_yv)
    edges.add(e_xw)


def _try_hinge(edges, deg, iv, v, w, x):
    if v == w or _norm_edge(w, v) not in edges:
        return
    if x == w or x == v or _norm_edge(w, x) in edges:
        return
    if deg[v] - 1 < iv.lower[v] or deg[x] + 1 > iv.upper[x]:
        return
    edges.remove(_norm_edge(w, v))
    edges.add(_norm_edge(w, x))
    deg[v] -= 1
    deg[x] += 1


def _try_toggle(edges, deg, iv, v, w):
    if v == w:
        return
    e = _norm_edge(v, w)
    if e in edges:
        if deg[v] - 1 < iv.lower[v] or deg[w] - 1 < iv.lower[w]:
            return
        edges.remove(e)
        deg[v] -= 1
        deg[w] -= 1
    else:
        if deg[v] + 1 > iv.upper[v] or deg[w] + 1 > iv.upper[w]:
            return
        edges.add(e)
        deg[v] += 1
        deg[w] += 1
