"""Core graph, degree-sequence and degree-interval types.

Graphs are labeled, simple and undirected, with nodes 0..n-1.  Edges are
stored as frozensets of sorted pairs so Graph values are hashable and safe
to share; code that mutates graphs (the chain run loops) works on private
edge sets and only builds a Graph at the end.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


class NotGraphical(ValueError):
    """Raised when a degree sequence admits no simple-graph realization."""


class Infeasible(ValueError):
    """Raised when no graph satisfies the requested interval/edge-count constraints."""


class BoundExceeded(ValueError):
    """Raised when a derived degree upper bound exceeds n - 1."""


class ParseError(ValueError):
    """Raised on malformed input files; carries the offending line number."""

    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number


def _norm_edge(i, j):
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Labeled simple undirected graph on nodes 0..n-1."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        edges = frozenset(_norm_edge(i, j) for (i, j) in self.edges)
        object.__setattr__(self, "edges", edges)
        for (i, j) in edges:
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i},{j}) out of range for n={self.n}")

    @property
    def num_edges(self):
        return len(self.edges)

    def has_edge(self, i, j):
        return i != j and _norm_edge(i, j) in self.edges

    def degree_sequence(self):
        deg = [0] * self.n
        for (i, j) in self.edges:
            deg[i] += 1
            deg[j] += 1
        return tuple(deg)

    def adjacency(self):
        """Per-node neighbor sets (rebuilt on each call; cache locally if hot)."""
        adj = [set() for _ in range(self.n)]
        for (i, j) in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def with_edges(self, add=(), remove=()):
        edges = set(self.edges)
        for e in remove:
            edges.discard(_norm_edge(*e))
        for e in add:
            edges.add(_norm_edge(*e))
        return Graph(self.n, frozenset(edges))

    @classmethod
    def from_edges(cls, n, pairs):
        return cls(n, frozenset(_norm_edge(i, j) for (i, j) in pairs))

    @classmethod
    def complete(cls, n):
        return cls(n, frozenset(itertools.combinations(range(n), 2)))

    @classmethod
    def empty(cls, n):
        return cls(n, frozenset())


@dataclass(frozen=True)
class DegreeInterval:
    """Per-node degree bounds [lower_i, upper_i]."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        lower = tuple(int(x) for x in self.lower)
        upper = tuple(int(x) for x in self.upper)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if len(lower) != len(upper):
            raise ValueError("lower and upper must have the same length")
        n = len(lower)
        for i, (lo, hi) in enumerate(zip(lower, upper)):
            if lo < 0 or lo > hi:
                raise ValueError(f"invalid interval [{lo},{hi}] at node {i}")
            if hi > n - 1:
                raise BoundExceeded(f"upper bound {hi} at node {i} exceeds n-1={n - 1}")

    @property
    def n(self):
        return len(self.lower)

    def contains(self, d):
        return all(lo <= x <= hi for lo, x, hi in zip(self.lower, d, self.upper))

    def contains_graph(self, g):
        return self.contains(g.degree_sequence())

    def width(self):
        return max(hi - lo for lo, hi in zip(self.lower, self.upper))

    @classmethod
    def constant(cls, d):
        d = tuple(d)
        return cls(d, d)


@dataclass(frozen=True)
class NearRegularParams:
    """Parameters of the near-regular regime: degrees confined to r +/- r**alpha."""

    r: int
    alpha: float
    rho: float
    n: int

    def __post_init__(self):
        if not (0 < self.alpha < 0.5):
            raise ValueError("alpha must lie in (0, 1/2)")
        if not (0 < self.rho < 1):
            raise ValueError("rho must lie in (0, 1)")
        if not (2 <= self.r <= (1 - self.rho) * self.n):
            raise ValueError("need 2 <= r <= (1 - rho) * n")

    def degree_range(self):
        """Integer degrees admissible under the r +/- r**alpha window."""
        import math

        half = self.r ** self.alpha
        lo = max(0, math.ceil(self.r - half))
        hi = min(self.n - 1, math.floor(self.r + half))
        return lo, hi

    def admits(self, iv):
        lo, hi = self.degree_range()
        return all(lo <= a and b <= hi for a, b in zip(iv.lower, iv.upper))

    @staticmethod
    def min_n(alpha, rho):
        """Smallest n at which the near-regular estimates of this regime kick in."""
        import math

        return math.ceil((2.0 / rho) ** (1.0 / (1.0 - 2.0 * alpha)))


def is_graphical(d):
    """Erdos-Gallai test: True iff some simple graph realizes degree sequence d."""
    d = [int(x) for x in d]
    n = len(d)
    if any(x < 0 for x in d):
        return False
    if n == 0:
        return True
    if sum(d) % 2 != 0:
        return False
    if max(d) > n - 1:
        return False
    s = sorted(d, reverse=True)
    prefix = 0
    for k in range(1, n + 1):
        prefix += s[k - 1]
        tail = sum(min(x, k) for x in s[k:])
        if prefix > k * (k - 1) + tail:
            return False
    return True


def realize(d):
    """Havel-Hakimi construction of a graph with degree sequence d.

    Ties broken by (residual degree desc, index asc), so the output is
    deterministic.
    """
    d = [int(x) for x in d]
    if not is_graphical(d):
        raise NotGraphical(f"degree sequence {tuple(d)} is not graphical")
    n = len(d)
    residual = list(d)
    edges = set()
    while True:
        order = sorted(range(n), key=lambda i: (-residual[i], i))
        v = order[0]
        k = residual[v]
        if k == 0:
            break
        residual[v] = 0
        targets = [u for u in order[1:] if residual[u] > 0][:k]
        if len(targets) < k:
            raise NotGraphical(f"degree sequence {tuple(d)} is not graphical")
        for u in targets:
            edges.add(_norm_edge(v, u))
            residual[u] -= 1
    return Graph(n, frozenset(edges))


def _feasible_sequence(iv, m):
    """A graphical d with iv.lower <= d <= iv.upper and sum(d) = 2m, or None.

    Greedy water-filling from the lower bounds, then a bounded local search;
    falls back to exhaustive box scanning for small boxes.
    """
    n = iv.n
    target = 2 * m
    lo, hi = list(iv.lower), list(iv.upper)
    if sum(lo) > target or sum(hi) < target:
        return None
    # Water-fill: raise coordinates round-robin from the lower bounds.
    d = list(lo)
    excess = target - sum(d)
    while excess > 0:
        progressed = False
        for i in range(n):
            if excess == 0:
                break
            if d[i] < hi[i]:
                d[i] += 1
                excess -= 1
                progressed = True
        if not progressed:
            return None
    if is_graphical(d):
        return tuple(d)
    # Exhaustive scan of the box restricted to the right sum.
    box = 1
    for a, b in zip(lo, hi):
        box *= b - a + 1
        if box > 4_000_000:
            return None
    for cand in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        if sum(cand) == target and is_graphical(cand):
            return cand
    return None


def realize_in_interval(iv, m):
    """A graph with degrees in the interval and exactly m edges."""
    d = _feasible_sequence(iv, m)
    if d is None:
        raise Infeasible(f"no graphical sequence in {iv} with {m} edges")
    return realize(d)


def intervals_from_observation(observed, missing):
    """Degree intervals from a partially observed graph.

    lower_i is the observed degree, upper_i adds the per-node count of
    missing observations.
    """
    missing = [int(x) for x in missing]
    if len(missing) != observed.n:
        raise ValueError("missing-count vector length must equal n")
    if any(x < 0 for x in missing):
        raise ValueError("missing counts must be non-negative")
    lower = observed.degree_sequence()
    upper = tuple(lo + delta for lo, delta in zip(lower, missing))
    return DegreeInterval(lower, upper)  # raises BoundExceeded if some u_i > n-1


# --- file formats ------------------------------------------------------------
#
# Edge list: one "u v" pair per line, 0-based, '#' comments and blanks ignored.
# Interval file: lines "i ell_i u_i".


def read_edge_list(path, n=None):
    pairs = []
    max_node = -1
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'u v', got {raw!r}", lineno)
            try:
                i, j = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-integer node id in {raw!r}", lineno)
            if i == j or i < 0 or j < 0:
                raise ParseError(f"{path}:{lineno}: invalid edge ({i},{j})", lineno)
            pairs.append((i, j))
            max_node = max(max_node, i, j)
    if n is None:
        n = max_node + 1
    return Graph.from_edges(n, pairs)


def write_edge_list(path, g):
    with open(path, "w") as fh:
        fh.write(f"# n={g.n}\n")
        for (i, j) in sorted(g.edges):
            fh.write(f"{i} {j}\n")


def read_intervals(path):
    rows = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(f"{path}:{lineno}: expected 'i ell_i u_i', got {raw!r}", lineno)
            try:
                i, lo, hi = (int(x) for x in parts)
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-integer field in {raw!r}", lineno)
            if i in rows:
                raise ParseError(f"{path}:{lineno}: duplicate node {i}", lineno)
            rows[i] = (lo, hi)
    n = len(rows)
    if sorted(rows) != list(range(n)):
        raise ParseError(f"{path}: node ids must be exactly 0..{n - 1}")
    lower = tuple(rows[i][0] for i in range(n))
    upper = tuple(rows[i][1] for i in range(n))
    return DegreeInterval(lower, upper)


def write_intervals(path, iv):
    with open(path, "w") as fh:
        for i, (lo, hi) in enumerate(zip(iv.lower, iv.upper)):
            fh.write(f"{i} {lo} {hi}\n")
