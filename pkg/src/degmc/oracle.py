"""Exact desk-scale ground truth for the chains and counting machinery.

Everything here is exhaustive or exact: state spaces are enumerated as edge
bitmasks, transition matrices are built row by row from the move
definitions, and counts come from an independent memoized recursion.  All
of it is meant for small n (enumeration is capped at n = 8) and is used to
verify the provable properties of the samplers.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph

from .graphs import Graph
from .chains import DegreeIntervalKernel, SwitchHingeFlipKernel, SwitchKernel

DENSE_LIMIT = 4096
ENUMERATION_CAP = 8


class TooLarge(ValueError):
    """Raised when an exhaustive computation exceeds its size cap."""


class Mismatch(ValueError):
    """Raised when a state space does not match a kernel's constraints."""


class NotStochastic(ValueError):
    """Raised when a matrix fails row-stochasticity checks."""


class NotFound(RuntimeError):
    """Raised when a bounded constructive search finds no witness."""


# --- edge bitmask utilities --------------------------------------------------


@lru_cache(maxsize=None)
def pairs(n):
    """Node pairs in lexicographic order; the bit layout for graph masks."""
    return tuple(itertools.combinations(range(n), 2))


@lru_cache(maxsize=None)
def pair_bit(n):
    return {p: 1 << k for k, p in enumerate(pairs(n))}


def mask_of(g):
    bit = pair_bit(g.n)
    m = 0
    for e in g.edges:
        m |= bit[e]
    return m


def graph_of(mask, n):
    ps = pairs(n)
    return Graph(n, frozenset(p for k, p in enumerate(ps) if (int(mask) >> k) & 1))


def _popcount(arr):
    arr = np.asarray(arr)
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(arr)
    # byte-wise fallback
    v = arr.astype(np.uint64)
    total = np.zeros(arr.shape, dtype=np.uint8)
    for shift in range(0, 64, 8):
        total = total + _BYTE_POP[(v >> np.uint64(shift)) & np.uint64(0xFF)]
    return total


_BYTE_POP = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


@lru_cache(maxsize=None)
def node_bit_masks(n):
    """node_bit_masks(n)[v] has a 1 on every pair-bit incident to node v."""
    bit = pair_bit(n)
    out = []
    for v in range(n):
        m = 0
        for p, b in bit.items():
            if v in p:
                m |= b
        out.append(m)
    return tuple(out)


@lru_cache(maxsize=None)
def census(n):
    """All 2^C(n,2) graphs on n nodes: (masks, degrees) arrays.

    degrees has shape (2^E, n), dtype uint8.  Cached for n <= 7.
    """
    if n > 7:
        raise TooLarge(f"census is cached only up to n=7, got n={n}")
    e = n * (n - 1) // 2
    masks = np.arange(1 << e, dtype=np.int64)
    deg = np.empty((1 << e, n), dtype=np.uint8)
    for v, nm in enumerate(node_bit_masks(n)):
        deg[:, v] = _popcount(masks & np.int64(nm))
    return masks, deg


@lru_cache(maxsize=None)
def degree_class_counts(n):
    """Exact |G(d)| for every degree sequence d on n nodes, as a dict."""
    masks, deg = census(n)
    uniq, counts = np.unique(deg, axis=0, return_counts=True)
    return {tuple(int(x) for x in row): int(c) for row, c in zip(uniq, counts)}


# --- state spaces ------------------------------------------------------------


@dataclass(frozen=True)
class StateSpace:
    """Explicit, canonically ordered enumeration of a set of graphs."""

    n: int
    masks: np.ndarray  # sorted ascending, int64
    description: str = ""

    def __len__(self):
        return len(self.masks)

    def index_of(self, g_or_mask):
        m = g_or_mask if isinstance(g_or_mask, (int, np.integer)) else mask_of(g_or_mask)
        i = int(np.searchsorted(self.masks, m))
        if i >= len(self.masks) or int(self.masks[i]) != int(m):
            raise KeyError(f"state not in space: {m}")
        return i

    def __contains__(self, g_or_mask):
        try:
            self.index_of(g_or_mask)
            return True
        except KeyError:
            return False

    def graph(self, i):
        return graph_of(int(self.masks[i]), self.n)

    def graphs(self):
        return [self.graph(i) for i in range(len(self))]

    def degrees(self):
        nm = node_bit_masks(self.n)
        deg = np.empty((len(self.masks), self.n), dtype=np.uint8)
        for v in range(self.n):
            deg[:, v] = _popcount(self.masks & np.int64(nm[v]))
        return deg


def enumerate_graphs(n, d=None, interval=None, m=None):
    """State space for G(d), G(l,u) or G_m(l,u) by exhaustive enumeration.

    Exactly one of d / interval must be given (m optionally restricts the
    edge count, with or without an interval).
    """
    if n > ENUMERATION_CAP:
        raise TooLarge(f"enumeration capped at n={ENUMERATION_CAP}, got n={n}")
    if (d is None) == (interval is None):
        raise ValueError("give exactly one of d= or interval=")
    if d is not None:
        d = tuple(int(x) for x in d)
        lo = hi = np.asarray(d, dtype=np.int64)
        desc = f"G{d}"
    else:
        lo = np.asarray(interval.lower, dtype=np.int64)
        hi = np.asarray(interval.upper, dtype=np.int64)
        desc = f"G({interval.lower},{interval.upper})"
    if m is not None:
        desc += f", m={m}"

    if n <= 7:
        masks, deg = census(n)
        sel = np.all((deg >= lo) & (deg <= hi), axis=1)
        if m is not None:
            sel &= _popcount(masks).astype(np.int64) == m
        return StateSpace(n, masks[sel], desc)

    # n == 8: chunked scan, never materializing the full census
    e = n * (n - 1) // 2
    nm = node_bit_masks(n)
    out = []
    chunk = 1 << 22
    for start in range(0, 1 << e, chunk):
        masks = np.arange(start, min(start + chunk, 1 << e), dtype=np.int64)
        sel = np.ones(len(masks), dtype=bool)
        for v in range(n):
            dv = _popcount(masks & np.int64(nm[v])).astype(np.int64)
            sel &= (dv >= lo[v]) & (dv <= hi[v])
        if m is not None:
            sel &= _popcount(masks).astype(np.int64) == m
        out.append(masks[sel])
    return StateSpace(n, np.concatenate(out), desc)


# --- independent counting oracle ---------------------------------------------


def count_realizations(d):
    """Exact |G(d)| via the memoized node-elimination recursion.

    Independent of the enumeration path: the highest-degree node is joined
    to a multiset of partner degree classes, summing binomial choice counts
    over the residual sorted sequences.
    """
    d = tuple(int(x) for x in d)
    if len(d) > 12:
        raise TooLarge("counting recursion supported for n <= 12")
    if any(x < 0 for x in d) or (d and max(d) > len(d) - 1):
        return 0
    if sum(d) % 2 != 0:
        return 0
    return _count_sorted(tuple(sorted(d, reverse=True)))


@lru_cache(maxsize=None)
def _count_sorted(d):
    if not d or d[0] == 0:
        return 1
    k, rest = d[0], d[1:]
    # group the remaining degrees by value
    values, counts = [], []
    for v in rest:
        if values and values[-1] == v:
            counts[-1] += 1
        else:
            values.append(v)
            counts.append(1)
    total = 0
    # choose how many partners come from each positive degree class
    positive = [(i, values[i], counts[i]) for i in range(len(values)) if values[i] > 0]
    if sum(c for _, _, c in positive) < k:
        return 0
    for pick in _compositions(k, [c for _, _, c in positive]):
        ways = 1
        residual = list(rest)
        # rebuild the residual multiset
        new_vals = []
        for (idx, v, c), kv in zip(positive, pick):
            ways *= _binom(c, kv)
            new_vals.extend([v - 1] * kv + [v] * (c - kv))
        for i, v in enumerate(values):
            if v == 0:
                new_vals.extend([0] * counts[i])
        sub = tuple(sorted(new_vals, reverse=True))
        total += ways * _count_sorted(sub)
    return total


def _compositions(k, caps):
    """All ways to split k over bins with the given caps."""
    if not caps:
        if k == 0:
            yield ()
        return
    head = caps[0]
    for take in range(min(k, head) + 1):
        for tail in _compositions(k - take, caps[1:]):
            yield (take,) + tail


@lru_cache(maxsize=None)
def _binom(a, b):
    import math

    return math.comb(a, b)


# --- transition matrices -----------------------------------------------------


def _move_targets(g, kernel):
    """All (target_graph, probability) pairs for one step from g, aggregated.

    Probabilities reflect the exact counts of ordered tuples that trigger
    each move: 4/n^4 orderings per switch, 1/n^3 per hinge flip, 2/n^2 per
    toggle, scaled by the kernel's per-move attempt probabilities.
    """
    n = kernel.n
    probs = kernel.move_probabilities()
    adj = g.adjacency()
    deg = g.degree_sequence()
    edges = sorted(g.edges)
    out = {}

    def add(target, p):
        out[target] = out.get(target, 0.0) + p

    if "switch" in probs:
        p_unit = probs["switch"] * 4.0 / n**4
        for (a, b), (c, dd) in itertools.combinations(edges, 2):
            if len({a, b, c, dd}) < 4:
                continue
            # two rewirings of the disjoint edge pair
            for (p1, p2) in (((a, c), (b, dd)), ((a, dd), (b, c))):
                if p1[1] in adj[p1[0]] or p2[1] in adj[p2[0]]:
                    continue
                add(g.with_edges(add=[p1, p2], remove=[(a, b), (c, dd)]), p_unit)

    if "hinge" in probs:
        iv = kernel.interval
        p_unit = probs["hinge"] / n**3
        for (a, b) in edges:
            for v, w in ((a, b), (b, a)):  # v loses the edge, w is the pivot
                if deg[v] - 1 < iv.lower[v]:
                    continue
                for x in range(n):
                    if x == w or x == v or x in adj[w]:
                        continue
                    if deg[x] + 1 > iv.upper[x]:
                        continue
                    add(g.with_edges(add=[(w, x)], remove=[(w, v)]), p_unit)

    if "add_delete" in probs:
        iv = kernel.interval
        p_unit = probs["add_delete"] * 2.0 / n**2
        for v, w in itertools.combinations(range(n), 2):
            if w in adj[v]:
                if deg[v] - 1 >= iv.lower[v] and deg[w] - 1 >= iv.lower[w]:
                    add(g.with_edges(remove=[(v, w)]), p_unit)
            else:
                if deg[v] + 1 <= iv.upper[v] and deg[w] + 1 <= iv.upper[w]:
                    add(g.with_edges(add=[(v, w)]), p_unit)

    return out


def transition_row_reference(kernel, g):
    """One transition row by brute-force enumeration of every ordered tuple.

    Slow; exists as an independent cross-check of _move_targets.
    """
    from . import chains

    n = kernel.n
    probs = kernel.move_probabilities()
    row = {}

    def add(target, p):
        row[target] = row.get(target, 0.0) + p

    hold = 1.0 - sum(probs.values())
    add(g, hold)
    if "switch" in probs:
        p = probs["switch"] / n**4
        for quad in itertools.product(range(n), repeat=4):
            add(chains.switch_move(g, quad), p)
    if "hinge" in probs:
        p = probs["hinge"] / n**3
        for triple in itertools.product(range(n), repeat=3):
            add(chains.hinge_flip_move(g, triple, kernel.interval), p)
    if "add_delete" in probs:
        p = probs["add_delete"] / n**2
        for pair in itertools.product(range(n), repeat=2):
            add(chains.add_delete_move(g, pair, kernel.interval), p)
    return row


def build_matrix(kernel, space, dense_limit=DENSE_LIMIT):
    """Exact single-step transition matrix of the kernel over the space.

    Dense up to dense_limit states, sparse CSR beyond.  Raises Mismatch if
    a state violates the kernel's constraints.
    """
    size = len(space)
    rows, cols, vals = [], [], []
    diag = np.ones(size)
    for i in range(size):
        g = space.graph(i)
        if not kernel.contains(g):
            raise Mismatch(f"state {i} violates the kernel constraints")
        for target, p in _move_targets(g, kernel).items():
            j = space.index_of(target)
            if j == i:
                continue
            rows.append(i)
            cols.append(j)
            vals.append(p)
            diag[i] -= p
    rows.extend(range(size))
    cols.extend(range(size))
    vals.extend(diag)
    mat = sp.coo_matrix((vals, (rows, cols)), shape=(size, size)).tocsr()
    if size <= dense_limit:
        return mat.toarray()
    return mat


def _as_dense(P):
    if sp.issparse(P):
        if P.shape[0] > DENSE_LIMIT:
            raise TooLarge("matrix too large to densify")
        return P.toarray()
    return np.asarray(P, dtype=float)


def check_stochastic(P, tol=1e-12):
    P = _as_dense(P)
    if np.any(P < -tol):
        raise NotStochastic("negative entries")
    if np.max(np.abs(P.sum(axis=1) - 1.0)) > max(tol, 1e-12) * 10:
        raise NotStochastic("rows do not sum to 1")
    return P


def stationary_distribution(P, tol=1e-12):
    """Left fixed point of P (dense), by eigen-decomposition."""
    P = _as_dense(P)
    w, v = np.linalg.eig(P.T)
    i = int(np.argmin(np.abs(w - 1.0)))
    pi = np.real(v[:, i])
    pi = np.abs(pi)
    return pi / pi.sum()


def spectral_gap(P, pi=None):
    """1 - second largest eigenvalue, via the reversibility symmetrization."""
    P = check_stochastic(P, tol=1e-9)
    size = P.shape[0]
    if size == 1:
        return 1.0
    if pi is None:
        pi = np.full(size, 1.0 / size)
    pi = np.asarray(pi, dtype=float)
    root = np.sqrt(pi)
    S = (root[:, None] / root[None, :]) * P
    S = 0.5 * (S + S.T)  # clean symmetric roundoff
    lam = np.linalg.eigvalsh(S)
    return float(1.0 - lam[-2])


def tv_curve(P, x0, t_max, pi=None):
    """Total-variation distance from stationarity at t = 0..t_max from state x0."""
    P = _as_dense(P)
    size = P.shape[0]
    if pi is None:
        pi = np.full(size, 1.0 / size)
    dist = np.zeros(size)
    dist[x0] = 1.0
    out = []
    for _ in range(t_max + 1):
        out.append(0.5 * float(np.abs(dist - pi).sum()))
        dist = dist @ P
    return out


def mixing_time_bound(pi_x, lambda1, eps):
    """Spectral upper bound on the eps-mixing time from a state of mass pi_x."""
    return 0.5 / (1.0 - lambda1) * (np.log(1.0 / pi_x) + 2.0 * np.log(0.5 / eps))


def congestion_check(P, pi=None):
    """Canonical-path congestion bound for a birth-death chain.

    Routes pi(i)pi(j) along the monotone path i -> i+1 -> ... -> j and
    checks gap >= 1 / (sigma * ell).
    """
    P = check_stochastic(P, tol=1e-9)
    size = P.shape[0]
    if pi is None:
        pi = stationary_distribution(P)
    for i in range(size):
        for j in range(size):
            if abs(i - j) > 1 and P[i, j] != 0:
                raise ValueError("congestion_check expects a birth-death chain")
    if size == 1:
        return {"sigma": 0.0, "ell": 0, "bound": np.inf, "gap": 1.0, "holds": True}
    sigma = 0.0
    for z in range(size - 1):
        flow = float(pi[: z + 1].sum() * pi[z + 1 :].sum())
        for (a, b) in ((z, z + 1), (z + 1, z)):
            q = float(pi[a] * P[a, b])
            if q <= 0:
                raise ValueError("flow crosses a zero-probability transition")
            sigma = max(sigma, flow / q)
    ell = size - 1
    gap = spectral_gap(P, pi)
    bound = sigma * ell
    return {"sigma": sigma, "ell": ell, "bound": bound, "gap": gap, "holds": gap >= 1.0 / bound - 1e-12}


# --- state-graph connectivity ------------------------------------------------


def _toggle_patterns(n, moves):
    """(toggle_mask, (valid_submask_a, valid_submask_b)) for each local move."""
    bit = pair_bit(n)
    pats = []
    if "add_delete" in moves:
        for p, b in bit.items():
            pats.append((b, (0, b)))
    if "hinge" in moves:
        for w in range(n):
            others = [v for v in range(n) if v != w]
            for v, x in itertools.combinations(others, 2):
                b1 = bit[tuple(sorted((w, v)))]
                b2 = bit[tuple(sorted((w, x)))]
                pats.append((b1 | b2, (b1, b2)))
    if "switch" in moves:
        for quad in itertools.combinations(range(n), 4):
            a, b, c, d = quad
            m1 = bit[(a, b)] | bit[(c, d)]
            m2 = bit[(a, c)] | bit[(b, d)]
            m3 = bit[(a, d)] | bit[(b, c)]
            for x, y in ((m1, m2), (m1, m3), (m2, m3)):
                pats.append((x | y, (x, y)))
    return pats


def state_graph_components(space, moves=("switch", "hinge", "add_delete")):
    """Connected components of the chain state graph restricted to the space.

    A move is legal iff its structural edge conditions hold and the result
    is again in the space, so membership of both endpoints is the full
    legality test.  Vectorized over toggle patterns.
    """
    masks = space.masks
    size = len(masks)
    if size == 0:
        return 0, np.array([], dtype=int)
    rows, cols = [], []
    for t, (va, vb) in _toggle_patterns(space.n, moves):
        t64 = np.int64(t)
        anded = masks & t64
        sel = (anded == va) | (anded == vb)
        if not sel.any():
            continue
        src = np.nonzero(sel)[0]
        partner = masks[src] ^ t64
        pos = np.searchsorted(masks, partner)
        ok = (pos < size) & (masks[np.minimum(pos, size - 1)] == partner)
        rows.append(src[ok])
        cols.append(pos[ok])
    if rows:
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        data = np.ones(len(rows), dtype=np.int8)
        adj = sp.coo_matrix((data, (rows, cols)), shape=(size, size))
    else:
        adj = sp.coo_matrix((size, size), dtype=np.int8)
    ncomp, labels = csgraph.connected_components(adj, directed=False)
    return ncomp, labels


# --- alternating paths and short transforms ----------------------------------


@dataclass(frozen=True)
class AlternatingPath:
    """Edge-disjoint path alternating edge / non-edge, starting with an edge."""

    nodes: tuple  # x_0, ..., x_k; step i uses pair {x_i, x_{i+1}}

    @property
    def length(self):
        return len(self.nodes) - 1

    def steps(self):
        return [
            (tuple(sorted((self.nodes[i], self.nodes[i + 1]))), i % 2 == 0)
            for i in range(self.length)
        ]

    def is_valid(self, g):
        seen = set()
        for (pair, want_edge) in self.steps():
            if pair[0] == pair[1] or pair in seen:
                return False
            seen.add(pair)
            if g.has_edge(*pair) != want_edge:
                return False
        # must start with an edge and end with a non-edge (even length)
        return self.length >= 2 and self.length % 2 == 0

    def flip(self, g):
        add = [p for p, is_edge in self.steps() if not is_edge]
        remove = [p for p, is_edge in self.steps() if is_edge]
        return g.with_edges(add=add, remove=remove)


def _alt_bfs_dist(g, u):
    """BFS distances over (node, parity) states ignoring edge-disjointness.

    parity 0: the next step must traverse an edge; parity 1: a non-edge.
    Lower bounds the alternating-path length from u.
    """
    n = g.n
    adj = g.adjacency()
    INF = float("inf")
    dist = [[INF, INF] for _ in range(n)]
    dist[u][0] = 0
    frontier = [(u, 0)]
    while frontier:
        nxt = []
        for (x, par) in frontier:
            dd = dist[x][par]
            if par == 0:
                targets = adj[x]
            else:
                targets = (y for y in range(n) if y != x and y not in adj[x])
            for y in targets:
                if dist[y][1 - par] == INF:
                    dist[y][1 - par] = dd + 1
                    nxt.append((y, 1 - par))
        frontier = nxt
    return dist


def find_alternating_path(g, u, v, k_max):
    """An alternating (u,v)-path of length <= k_max, or None.

    Depth-first search with BFS lower-bound pruning; the edge-disjointness
    constraint is enforced exactly.
    """
    if u == v:
        raise ValueError("u and v must differ")
    dist = _alt_bfs_dist(g, u)
    # the path ends arriving at v via a non-edge, i.e. leaves state parity 1
    best_possible = dist[v][0]  # length when the walk stops at v expecting parity 0 next
    if best_possible == float("inf") or best_possible > k_max:
        return None
    adj = g.adjacency()
    n = g.n

    for limit in range(int(best_possible), k_max + 1, 2):
        used = set()
        path = [u]

        def dfs(x, par, depth):
            if x == v and par == 0 and depth > 0:
                return True
            if depth >= limit:
                return False
            targets = adj[x] if par == 0 else [y for y in range(n) if y != x and y not in adj[x]]
            for y in sorted(targets):
                pair = (x, y) if x < y else (y, x)
                if pair in used:
                    continue
                used.add(pair)
                path.append(y)
                if dfs(y, 1 - par, depth + 1):
                    return True
                path.pop()
                used.discard(pair)
            return False

        if dfs(u, 0, 0):
            p = AlternatingPath(tuple(path))
            if p.is_valid(g):
                return p
    return None


def strongly_stable_condition(d, n=None):
    """Sufficient inequality for strong stability with k = 10."""
    d = tuple(int(x) for x in d)
    if n is None:
        n = len(d)
    dmin, dmax = min(d), max(d)
    return (dmax - dmin + 1) ** 2 <= 4 * dmin * (n - dmax - 1)


def short_cycle_transform(g, d, goal, budget=12):
    """A graph with the same degree sequence meeting the goal, symmetric
    difference at most `budget` edges.

    goal is one of ("remove_edge", u, v), ("add_edge", u, v) or
    ("keep_remove", u, w, v) which keeps {u,w} while removing {u,v}.
    Implemented as an exact minimum-symmetric-difference search over the
    enumerated realization class.
    """
    d = tuple(int(x) for x in d)
    if g.degree_sequence() != d:
        raise ValueError("graph does not realize d")
    if _goal_satisfied(g, goal):
        return g
    space = enumerate_graphs(g.n, d=d)
    masks = space.masks
    bit = pair_bit(g.n)
    kind = goal[0]
    if kind == "remove_edge":
        b = np.int64(bit[tuple(sorted(goal[1:3]))])
        sel = (masks & b) == 0
    elif kind == "add_edge":
        b = np.int64(bit[tuple(sorted(goal[1:3]))])
        sel = (masks & b) != 0
    elif kind == "keep_remove":
        u, w, v = goal[1:4]
        bk = np.int64(bit[tuple(sorted((u, w)))])
        br = np.int64(bit[tuple(sorted((u, v)))])
        sel = ((masks & bk) != 0) & ((masks & br) == 0)
    else:
        raise ValueError(f"unknown goal {goal!r}")
    cand = masks[sel]
    if len(cand) == 0:
        raise NotFound(f"no realization of {d} satisfies {goal}")
    diff = _popcount(cand ^ np.int64(mask_of(g))).astype(np.int64)
    i = int(np.argmin(diff))
    if diff[i] > budget:
        raise NotFound(f"best transform for {goal} needs {int(diff[i])} > {budget} edge changes")
    return graph_of(int(cand[i]), g.n)


def _goal_satisfied(g, goal):
    kind = goal[0]
    if kind == "remove_edge":
        return not g.has_edge(goal[1], goal[2])
    if kind == "add_edge":
        return g.has_edge(goal[1], goal[2])
    if kind == "keep_remove":
        u, w, v = goal[1:4]
        return g.has_edge(u, w) and not g.has_edge(u, v)
    raise ValueError(f"unknown goal {goal!r}")


# --- canonical symmetric-difference decomposition ----------------------------


def canonical_decomposition(g, g2, edge_order=None):
    """Split E(g) xor E(g2) into alternating cycles and paths.

    Around each node (in increasing label order), the lowest-ordered
    unpaired edge of g is repeatedly paired with the lowest-ordered
    unpaired edge of g2.  The pairings link the symmetric-difference edges
    into alternating components; odd paths are classified by which graph
    contributes the extra edge.

    Returns a dict with keys "cycles", "even_paths", "g_paths", "g2_paths",
    each a list of edge lists.
    """
    if g.n != g2.n:
        raise ValueError("graphs must share the node set")
    if edge_order is None:
        edge_order = lambda e: e  # lexicographic on (min, max)
    red = sorted(g.edges - g2.edges, key=edge_order)  # in g only
    blue = sorted(g2.edges - g.edges, key=edge_order)  # in g2 only
    sym = red + blue
    is_red = {e: True for e in red}
    is_red.update({e: False for e in blue})
    # slot bookkeeping: each edge can be paired once at each endpoint
    free = {e: {e[0]: True, e[1]: True} for e in sym}
    links = {e: [] for e in sym}
    incident = {v: [] for v in range(g.n)}
    for e in sym:
        incident[e[0]].append(e)
        incident[e[1]].append(e)
    for v in range(g.n):
        while True:
            reds = [e for e in incident[v] if is_red[e] and free[e][v]]
            blues = [e for e in incident[v] if not is_red[e] and free[e][v]]
            if not reds or not blues:
                break
            er = min(reds, key=edge_order)
            eb = min(blues, key=edge_order)
            free[er][v] = False
            free[eb][v] = False
            links[er].append(eb)
            links[eb].append(er)
    # walk components
    seen = set()
    out = {"cycles": [], "even_paths": [], "g_paths": [], "g2_paths": []}
    for start in sym:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        # extend in both directions
        for direction in (0, 1):
            prev = start
            nbrs = links[start]
            if len(nbrs) <= direction:
                continue
            cur = nbrs[direction]
            while cur is not None and cur not in seen:
                if direction == 0:
                    comp.append(cur)
                else:
                    comp.insert(0, cur)
                seen.add(cur)
                nxt = [e for e in links[cur] if e != prev]
                prev, cur = cur, (nxt[0] if nxt else None)
        n_red = sum(1 for e in comp if is_red[e])
        n_blue = len(comp) - n_red
        closed = len(comp) > 1 and all(len(links[e]) == 2 for e in comp)
        if closed:
            out["cycles"].append(comp)
        elif n_red == n_blue:
            out["even_paths"].append(comp)
        elif n_red == n_blue + 1:
            out["g_paths"].append(comp)
        elif n_blue == n_red + 1:
            out["g2_paths"].append(comp)
        else:
            raise AssertionError("pairing produced a non-alternating component")
    return out


# --- verification of the decomposition machinery -----------------------------


def verify_log_concave(w):
    """Check w[m-1] * w[m+1] <= w[m]^2 for all interior m."""
    w = list(w)
    if any(x < 0 for x in w):
        raise ValueError("weights must be non-negative")
    for m in range(1, len(w) - 1):
        if w[m - 1] * w[m + 1] > w[m] * w[m]:
            return False, m
    return True, None


def verify_martin_randall(P, partition, pi=None):
    """Exact check of the decomposition gap inequality.

    gap(P) >= beta * gamma * gap(P_MH) * min_i gap(P_restricted_i)

    with beta the smallest positive off-diagonal transition probability,
    gamma the worst boundary-mass ratio between adjacent blocks, and P_MH
    the Metropolis-Hastings projection chain (proposal 1/(2*Delta), Delta
    the maximum out-degree of the projection state graph).
    """
    P = check_stochastic(P, tol=1e-9)
    size = P.shape[0]
    if pi is None:
        pi = np.full(size, 1.0 / size)
    pi = np.asarray(pi, dtype=float)
    q = len(partition)
    block_of = np.empty(size, dtype=int)
    for b, idxs in enumerate(partition):
        block_of[np.asarray(idxs, dtype=int)] = b

    off = P.copy()
    np.fill_diagonal(off, 0.0)
    positive = off > 0
    beta = float(off[positive].min()) if positive.any() else 1.0

    block_pi = np.array([pi[np.asarray(idxs, dtype=int)].sum() for idxs in partition])

    # adjacency and boundary masses between blocks
    adj_blocks = set()
    gamma = 1.0
    disconnected = []
    for i in range(q):
        idx_i = np.asarray(partition[i], dtype=int)
        for j in range(q):
            if i == j:
                continue
            idx_j = np.asarray(partition[j], dtype=int)
            reach = positive[np.ix_(idx_i, idx_j)].any(axis=0)
            if reach.any():
                adj_blocks.add((i, j))
                boundary_mass = float(pi[idx_j[reach]].sum())
                gamma = min(gamma, boundary_mass / block_pi[j])

    # restriction chains
    restriction_gaps = []
    for i in range(q):
        idx = np.asarray(partition[i], dtype=int)
        sub = P[np.ix_(idx, idx)].copy()
        np.fill_diagonal(sub, 0.0)
        diag = 1.0 - sub.sum(axis=1)
        sub[np.diag_indices_from(sub)] = diag
        sub_pi = pi[idx] / pi[idx].sum()
        ncomp, _ = csgraph.connected_components(sp.coo_matrix(sub > 0), directed=False)
        if ncomp > 1:
            disconnected.append(i)
        restriction_gaps.append(spectral_gap(sub, sub_pi) if len(idx) > 1 else 1.0)

    # Metropolis-Hastings projection chain
    if q == 1:
        gap_mh = 1.0
    else:
        out_deg = np.zeros(q, dtype=int)
        for (i, j) in adj_blocks:
            out_deg[i] += 1
        delta = int(out_deg.max()) if out_deg.max() > 0 else 1
        P_mh = np.zeros((q, q))
        for (i, j) in adj_blocks:
            P_mh[i, j] = min(1.0, block_pi[j] / block_pi[i]) / (2.0 * delta)
        np.fill_diagonal(P_mh, 1.0 - P_mh.sum(axis=1))
        gap_mh = spectral_gap(P_mh, block_pi / block_pi.sum())

    gap_p = spectral_gap(P, pi)
    rhs = beta * gamma * gap_mh * min(restriction_gaps)
    return {
        "beta": beta,
        "gamma": gamma,
        "gap": gap_p,
        "gap_projection": gap_mh,
        "min_restriction_gap": float(min(restriction_gaps)),
        "rhs": float(rhs),
        "holds": bool(gap_p >= rhs - 1e-12),
        "disconnected_blocks": disconnected,
        "num_blocks": q,
    }


# --- structured reports ------------------------------------------------------


def report_line(instance, quantity, bound, measured, passed):
    """One structured JSON verification record."""
    return json.dumps(
        {
            "instance": instance,
            "quantity": quantity,
            "bound": bound,
            "measured": measured,
            "pass": bool(passed),
        }
    )
