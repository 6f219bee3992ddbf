"""Exact solvers and structural checks, sized for small instances.

Vertex sets are handled internally as Python ``int`` bitmasks. Every search
counts expanded nodes and raises :class:`BudgetError` past ``budget``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import mpmath

from udgdom.core import BudgetError, Graph, InputError, ball, check_ids, is_dominating

DEFAULT_BUDGET = int(os.environ.get("UDGDOM_ORACLE_BUDGET", 5_000_000))
MAX_EXACT_MIS = 64


def _closed_masks(g: Graph) -> list[int]:
    masks = []
    for v in range(g.n):
        m = 1 << v
        for u in g.adj[v]:
            m |= 1 << u
        masks.append(m)
    return masks


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class _Search:
    def __init__(self, g: Graph, budget: int | None):
        self.g = g
        self.closed = _closed_masks(g)
        self.budget = DEFAULT_BUDGET if budget is None else budget
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetError(f"exact search exceeded {self.budget} nodes")

    def dominate(self, undom: int, allowed: int, k: int, independent: bool) -> list[int] | None:
        """A set of at most ``k`` vertices from ``allowed`` dominating ``undom``."""
        self.tick()
        if not undom:
            return []
        if k == 0:
            return None
        closed = self.closed
        best_cover = 0
        for v in _bits(allowed):
            c = (closed[v] & undom).bit_count()
            if c > best_cover:
                best_cover = c
        if best_cover == 0 or -(-undom.bit_count() // best_cover) > k:
            return None
        # undominated vertices with pairwise disjoint dominator options each
        # need their own solution vertex
        opts = sorted(((closed[u] & allowed).bit_count(), u) for u in _bits(undom))
        if opts[0][0] == 0:
            return None
        used = packed = 0
        for _, u in opts:
            o = closed[u] & allowed
            if not o & used:
                used |= o
                packed += 1
                if packed > k:
                    return None
        # branch on the undominated vertex with the fewest possible dominators
        options = closed[opts[0][1]] & allowed
        cands = sorted(_bits(options), key=lambda v: -(closed[v] & undom).bit_count())
        for v in cands:
            nxt = allowed & ~closed[v] if independent else allowed
            rest = self.dominate(undom & ~closed[v], nxt, k - 1, independent)
            if rest is not None:
                return [v] + rest
            # every solution of this subtree that uses v has been tried
            allowed &= ~(1 << v)
        return None


def _exact(g: Graph, cap: int, budget: int | None, independent: bool) -> frozenset[int] | None:
    if cap < 1:
        raise InputError("cap must be at least 1")
    if g.n == 0:
        return frozenset()
    s = _Search(g, budget)
    full = (1 << g.n) - 1
    for k in range(1, cap + 1):
        found = s.dominate(full, full, k, independent)
        if found is not None:
            sol = frozenset(found)
            assert is_dominating(g, sol)
            return sol
    return None


def exact_min_dominating_set(
    g: Graph, cap: int, budget: int | None = None
) -> frozenset[int] | None:
    """A minimum dominating set if one of size <= ``cap`` exists, else ``None``.

    Sizes are tried in increasing order; each size is a branch-and-bound over
    the closed neighborhood of the undominated vertex with fewest dominators.
    """
    return _exact(g, cap, budget, independent=False)


def exact_min_independent_dominating_set(
    g: Graph, cap: int, budget: int | None = None
) -> frozenset[int] | None:
    return _exact(g, cap, budget, independent=True)


def brute_force_min_dominating_size(g: Graph) -> int:
    """Smallest dominating set size by checking subsets in order of size."""
    from itertools import combinations

    if g.n == 0:
        return 0
    closed = _closed_masks(g)
    full = (1 << g.n) - 1
    for k in range(1, g.n + 1):
        for combo in combinations(range(g.n), k):
            m = 0
            for v in combo:
                m |= closed[v]
            if m == full:
                return k
    raise AssertionError("unreachable")


def _has_independent(closed: list[int], mask: int, k: int) -> bool:
    if k <= 0:
        return True
    if mask.bit_count() < k:
        return False
    low = mask & -mask
    v = low.bit_length() - 1
    return _has_independent(closed, mask & ~closed[v], k - 1) or _has_independent(
        closed, mask ^ low, k
    )


def has_induced_star(g: Graph, leaves: int) -> bool:
    """True iff some vertex has ``leaves`` pairwise non-adjacent neighbors."""
    if leaves < 1:
        raise InputError("leaves must be at least 1")
    closed = _closed_masks(g)
    for v in range(g.n):
        nbrs = closed[v] & ~(1 << v)
        if _has_independent(closed, nbrs, leaves):
            return True
    return False


def has_induced_k23(g: Graph) -> bool:
    """True iff two non-adjacent vertices share three pairwise non-adjacent neighbors."""
    closed = _closed_masks(g)
    for a in range(g.n):
        for b in range(a + 1, g.n):
            if closed[a] >> b & 1:
                continue
            common = closed[a] & closed[b]
            if common.bit_count() >= 3 and _has_independent(closed, common, 3):
                return True
    return False


def max_independent_within(g: Graph, s: Iterable[int], budget: int | None = None) -> int:
    """Size of a maximum independent set of the subgraph induced by ``s``."""
    s = frozenset(s)
    check_ids(g, s)
    if len(s) > MAX_EXACT_MIS:
        raise BudgetError(f"exact independent set limited to {MAX_EXACT_MIS} vertices")
    closed = _closed_masks(g)
    limit = DEFAULT_BUDGET if budget is None else budget
    nodes = 0
    best = 0

    def go(mask: int, size: int):
        nonlocal nodes, best
        nodes += 1
        if nodes > limit:
            raise BudgetError(f"independent set search exceeded {limit} nodes")
        if size + mask.bit_count() <= best:
            return
        if not mask:
            best = size
            return
        # a vertex with at most one neighbor left is always safe to take
        vs = _bits(mask)
        degs = [((closed[v] & mask).bit_count() - 1, v) for v in vs]
        d, v = min(degs)
        if d <= 1:
            go(mask & ~closed[v], size + 1)
            return
        d, v = max(degs)
        go(mask & ~closed[v], size + 1)
        go(mask & ~(1 << v), size)

    mask = 0
    for v in s:
        mask |= 1 << v
    go(mask, 0)
    return best


def domination_lower_bound(g: Graph, budget: int | None = None) -> int:
    """Most vertices with pairwise disjoint closed neighborhoods.

    Each of them needs its own dominator, so this bounds the optimum from
    below without trusting the branch-and-bound search. It is the independence
    number of the square of ``g``, so it is limited to small graphs.
    """
    edges = [(u, v) for u in range(g.n) for v in ball(g, u, 2) if u < v]
    return max_independent_within(Graph.from_edges(g.n, edges), range(g.n), budget)


@dataclass(frozen=True)
class PendantProfile:
    """Degree-1 vertices at distance exactly 1 (``k``) and 2 (``l``) from ``generator``."""

    generator: int
    k: int
    l: int


def pendant_profile(g: Graph, v: int) -> PendantProfile:
    check_ids(g, (v,))
    first = set(g.adj[v])
    second: set[int] = set()
    for u in first:
        second.update(g.adj[u])
    second -= first
    second.discard(v)
    k = sum(1 for u in first if g.degree(u) == 1)
    l = sum(1 for u in second if g.degree(u) == 1)
    return PendantProfile(v, k, l)


def closed_ball(g: Graph, v: int, r: int) -> set[int]:
    return set(ball(g, v, r))


def greedy_clique(g: Graph, v: int) -> list[int]:
    """Clique grown from ``v`` by adding neighbors in id order."""
    clique = [v]
    adjs = [set(g.adj[v])]
    for u in g.adj[v]:
        if all(u in a for a in adjs):
            clique.append(u)
            adjs.append(set(g.adj[u]))
    return clique


def clique_neighborhood(g: Graph, clique: Iterable[int]) -> set[int]:
    out: set[int] = set()
    for v in clique:
        out.add(v)
        out.update(g.adj[v])
    return out


_MP_DPS = 60


def packing_bound(r: int) -> int:
    """floor(pi (2r+1)^2 / sqrt(12)): independent vertices within r hops of a vertex."""
    if r < 1:
        raise InputError("r must be at least 1")
    with mpmath.workdps(_MP_DPS):
        value = mpmath.pi * (2 * r + 1) ** 2 / mpmath.sqrt(12)
        floor = int(mpmath.floor(value))
        # 60 digits leave a wide margin for r up to 10**6 (values below 10**14)
        if value - floor < mpmath.mpf(10) ** -30:
            raise ArithmeticError(f"packing bound for r={r} too close to an integer")
    return floor


@dataclass(frozen=True)
class LemmaConstants:
    semicircle_area: float
    hull_area: float
    semicircle_disk_count: float
    hull_disk_count: float
    clique_neighborhood_independence: int
    cores_per_reliever: int
    reliever_le3_average: Fraction
    reliever_4_average: Fraction


def lemma_constants() -> LemmaConstants:
    """Area and counting constants behind the 44/9 and 43/9 guarantees.

    The two areas are regions within distance 1.5 of a unit semicircle and of
    the hull of two opposite 60-degree sectors; the disk counts convert them
    into a packing bound for unit-diameter disks at density pi/sqrt(12).
    """
    with mpmath.workdps(30):
        pi = mpmath.pi
        a = 3 + 17 * pi / 4
        a_hull = 7 * mpmath.sqrt(3) / 2 + 43 * pi / 12
        per_area = (pi / mpmath.sqrt(12)) / (pi / 4)
        cores = (packing_bound(4) - 3) // 5
        return LemmaConstants(
            semicircle_area=float(a),
            hull_area=float(a_hull),
            semicircle_disk_count=float(a * per_area),
            hull_disk_count=float(a_hull * per_area),
            clique_neighborhood_independence=12,
            cores_per_reliever=cores,
            reliever_le3_average=Fraction(3 + cores * 5, 1 + cores),
            reliever_4_average=Fraction(4 + 8 * 5, 9),
        )
