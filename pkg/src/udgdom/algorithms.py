"""Maximal independent sets and corona reductions.

Every solver starts from a greedy maximal independent set ``D`` and then
repeatedly trades the five petals of a corona for one of its cores (plus, for
weak reductions, at most three witnesses), choosing in each round a set of
reductions far enough apart that they cannot interfere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from udgdom.core import (
    Corona,
    Graph,
    InvariantError,
    OrderPolicy,
    PointInstance,
    Solution,
    StructureError,
    _sorted_contains,
    ball,
    check_ids,
    is_dominating,
    is_independent,
)
from udgdom.spatial import (
    build_grid,
    disks_common_intersection,
    geometric_mis,
    region_contains,
)

MIN_HOP = 5
# a weak reduction touches vertices two hops from its core, so two of them
# five hops apart can add adjacent witnesses; six keeps them disjoint
WEAK_MIN_HOP = 6


@dataclass(frozen=True)
class ReductionPlan:
    """Replace ``corona.petals`` by ``core`` and ``witnesses``."""

    core: int
    corona: Corona
    witnesses: frozenset[int] = frozenset()

    def apply(self, d: set[int]) -> None:
        d.difference_update(self.corona.petals)
        d.add(self.core)
        d.update(self.witnesses)


def maximal_independent_set(g: Graph, order: OrderPolicy = OrderPolicy()) -> frozenset[int]:
    """Greedy maximal independent set, scanning vertices in policy order."""
    blocked = [False] * g.n
    chosen = []
    adj = g.adj
    for v in order.order(g.n):
        if blocked[v]:
            continue
        chosen.append(v)
        blocked[v] = True
        for u in adj[v]:
            blocked[u] = True
    return frozenset(chosen)


def mis5(g: Graph, order: OrderPolicy = OrderPolicy()) -> Solution:
    d = maximal_independent_set(g, order)
    return Solution(d, "mis5", 0, str(order), (len(d),))


def solution_neighbors(g: Graph, d: Iterable[int]) -> list[list[int]]:
    """``N_D(v)`` for every vertex, each list ascending."""
    nd: list[list[int]] = [[] for _ in range(g.n)]
    adj = g.adj
    for u in sorted(d):
        for v in adj[u]:
            nd[v].append(u)
    return nd


class _LazyNeighbors:
    """``N_D(v)`` computed on request; only the sizes are kept for all vertices.

    The reduction loops touch full neighbor lists only around coronas, so
    this avoids allocating a list per vertex in every round.
    """

    def __init__(self, g: Graph, d: frozenset[int] | set[int]):
        self.adj = g.adj
        self.d = d
        counts = [0] * g.n
        for u in d:
            for v in g.adj[u]:
                counts[v] += 1
        self.counts = counts

    def __getitem__(self, v: int) -> list[int]:
        d = self.d
        return [u for u in self.adj[v] if u in d]


def enumerate_coronas(
    g: Graph, d: Iterable[int], nd: Sequence[Sequence[int]] | None = None
) -> list[Corona]:
    """All coronas of ``d``, in order of their lowest core, cores ascending.

    Raises :class:`StructureError` if a vertex has six or more neighbors in
    ``d``, which exposes an induced K_{1,6}.
    """
    d = frozenset(d)
    check_ids(g, d)
    if nd is None:
        nd = _LazyNeighbors(g, d)
    counts = nd.counts if isinstance(nd, _LazyNeighbors) else [len(x) for x in nd]
    cores: dict[tuple[int, ...], list[int]] = {}
    for v, k in enumerate(counts):
        if k < 5 or v in d:
            continue
        if k > 5:
            raise StructureError(f"vertex {v} has {k} independent neighbors {nd[v]}")
        cores.setdefault(tuple(nd[v]), []).append(v)
    return [Corona(petals, tuple(cs)) for petals, cs in cores.items()]


def _lonely(g: Graph, nd: Sequence[Sequence[int]], petals: Sequence[int]) -> list[int]:
    """Vertices adjacent to a petal and dominated by petals only (ascending)."""
    pset = set(petals)
    s1: set[int] = set()
    for p in petals:
        s1.update(g.adj[p])
    return sorted(w for w in s1 if w not in pset and all(x in pset for x in nd[w]))


def find_reduction_core(
    g: Graph, d: Iterable[int], corona: Corona, nd: Sequence[Sequence[int]] | None = None
) -> int | None:
    """Lowest-id core whose closed neighborhood covers every vertex that only
    the corona dominates, or ``None`` when every core has a witness."""
    if nd is None:
        nd = _LazyNeighbors(g, frozenset(d))
    petals = corona.petals
    s2 = _lonely(g, nd, petals)
    adj = g.adj
    cand = list(adj[petals[0]])
    for v in (*petals[1:], *s2):
        cand = [x for x in cand if x == v or _sorted_contains(adj[v], x)]
        if not cand:
            return None
    return min(cand)


def select_spread_cores(
    g: Graph, plans: Iterable[ReductionPlan], min_hop: int = MIN_HOP
) -> list[ReductionPlan]:
    """Greedy (by core id) maximal sublist whose cores are pairwise at least
    ``min_hop`` hops apart."""
    blocked: set[int] = set()
    picked = []
    for plan in sorted(plans, key=lambda p: p.core):
        if plan.core in blocked:
            continue
        picked.append(plan)
        blocked.update(ball(g, plan.core, min_hop - 1))
    return picked


def find_weak_reduction(
    g: Graph,
    d: Iterable[int],
    corona: Corona,
    nd: Sequence[Sequence[int]] | None = None,
    ranks: Sequence[int] | None = None,
) -> ReductionPlan | None:
    """First core (ascending id) that is not overwhelmed, with its witness set.

    Witnesses of a core are the vertices only the corona dominates that are
    outside the core's closed neighborhood. They are scanned in ``ranks``
    order (default: by id) to build a greedy maximal independent set; four
    members mean the core is overwhelmed.
    """
    if nd is None:
        nd = _LazyNeighbors(g, frozenset(d))
    s2 = _lonely(g, nd, corona.petals)
    if ranks is not None:
        s2.sort(key=ranks.__getitem__)
    adj = g.adj
    for core in corona.cores:
        chosen: list[int] = []
        for w in s2:
            if w == core or _sorted_contains(adj[core], w):
                continue
            if any(_sorted_contains(adj[w], x) for x in chosen):
                continue
            chosen.append(w)
            if len(chosen) > 3:
                break
        if len(chosen) <= 3:
            return ReductionPlan(core, corona, frozenset(chosen))
    return None


def _check_step(g: Graph, d: set[int], where: str) -> None:
    if not is_independent(g, d):
        raise InvariantError(f"{where}: solution lost independence")
    if not is_dominating(g, d):
        raise InvariantError(f"{where}: solution lost domination")


def _reduce_loop(g, d, order, algorithm, plan_for, min_hop, check_steps):
    d = set(d)
    sizes = []
    ranks = order.ranks(g.n) if order.seed is not None else None
    for it in range(1, g.n + 2):
        sizes.append(len(d))
        nd = _LazyNeighbors(g, d)
        plans = []
        for corona in enumerate_coronas(g, d, nd):
            plan = plan_for(corona, d, nd, ranks)
            if plan is not None:
                plans.append(plan)
        chosen = select_spread_cores(g, plans, min_hop)
        if not chosen:
            return Solution(frozenset(d), algorithm, it, str(order), tuple(sizes))
        for plan in chosen:
            plan.apply(d)
        if check_steps:
            _check_step(g, d, f"{algorithm} iteration {it}")
    raise InvariantError(f"{algorithm} exceeded {g.n + 1} iterations")


def reduce44_graph(
    g: Graph,
    order: OrderPolicy = OrderPolicy(),
    initial: Iterable[int] | None = None,
    check_steps: bool = False,
) -> Solution:
    """Independent dominating set with no reducible corona (44/9-approximate)."""
    d = maximal_independent_set(g, order) if initial is None else frozenset(initial)

    def plan_for(corona, d, nd, ranks):
        core = find_reduction_core(g, d, corona, nd)
        return None if core is None else ReductionPlan(core, corona)

    return _reduce_loop(g, d, order, "reduce44", plan_for, MIN_HOP, check_steps)


def weak43(
    g: Graph,
    order: OrderPolicy = OrderPolicy(),
    initial: Iterable[int] | None = None,
    check_steps: bool = False,
) -> Solution:
    """Independent dominating set whose coronas have only overwhelmed cores
    (43/9-approximate)."""
    d = maximal_independent_set(g, order) if initial is None else frozenset(initial)

    def plan_for(corona, d, nd, ranks):
        return find_weak_reduction(g, d, corona, nd, ranks)

    return _reduce_loop(g, d, order, "weak43", plan_for, WEAK_MIN_HOP, check_steps)


def reducible_coronas(g: Graph, d: Iterable[int]) -> list[tuple[Corona, int]]:
    """Coronas of ``d`` that still admit a reduction, with the core found."""
    nd = _LazyNeighbors(g, frozenset(d))
    out = []
    for corona in enumerate_coronas(g, d, nd):
        core = find_reduction_core(g, d, corona, nd)
        if core is not None:
            out.append((corona, core))
    return out


def weakly_reducible_coronas(g: Graph, d: Iterable[int]) -> list[ReductionPlan]:
    """Weak reductions still available in ``d``."""
    nd = _LazyNeighbors(g, frozenset(d))
    out = []
    for corona in enumerate_coronas(g, d, nd):
        plan = find_weak_reduction(g, d, corona, nd)
        if plan is not None:
            out.append(plan)
    return out


# ---------------------------------------------------------------------------
# geometric variant

# cells whose Euclidean distance to the origin cell is at most 4 cell sides
_NEAR_CELLS = tuple(
    (dx, dy)
    for dx in range(-5, 6)
    for dy in range(-5, 6)
    if max(abs(dx) - 1, 0) ** 2 + max(abs(dy) - 1, 0) ** 2 <= 16
)


def reduce44_geometric(
    inst: PointInstance, order: OrderPolicy = OrderPolicy(), check_steps: bool = False
) -> Solution:
    """The 44/9 reduction loop driven by coordinates only, never building edges.

    Neighborhoods come from grid vicinity scans. A corona is reducible iff
    some lonely vertex lies in the intersection of the unit disks around all
    lonely vertices and petals. Simultaneous reductions are kept apart by
    blocking every cell within Euclidean distance 4 of a chosen core's cell.
    """
    grid = build_grid(inst)
    pts = inst.points
    t2 = inst.threshold * inst.threshold
    cell_of = grid.cell_of
    d = set(geometric_mis(inst, grid, order))

    def close(p, q):
        dx = pts[p][0] - pts[q][0]
        dy = pts[p][1] - pts[q][1]
        return dx * dx + dy * dy <= t2

    sizes = []
    for it in range(1, inst.n + 2):
        sizes.append(len(d))
        dcells: dict[tuple[int, int], list[int]] = {}
        for p in d:
            dcells.setdefault(cell_of[p], []).append(p)

        def nd(p):
            cx, cy = cell_of[p]
            found = [
                q
                for ox in (-1, 0, 1)
                for oy in (-1, 0, 1)
                for q in dcells.get((cx + ox, cy + oy), ())
                if close(p, q)
            ]
            found.sort()
            return found

        counts = [0] * inst.n
        for q in d:
            for p in grid.vicinity(cell_of[q]):
                if p not in d and close(p, q):
                    counts[p] += 1

        coronas: dict[tuple[int, ...], list[int]] = {}
        for p, k in enumerate(counts):
            if k == 5:
                coronas.setdefault(tuple(nd(p)), []).append(p)
            elif k > 5:
                raise StructureError(f"point {p} has {k} independent neighbors")

        plans = []
        for petals, cores in coronas.items():
            pset = set(petals)
            s1: set[int] = set()
            for pt in petals:
                for q in grid.vicinity(cell_of[pt]):
                    if q not in d and close(pt, q):
                        s1.add(q)
            s2 = sorted(w for w in s1 if all(x in pset for x in nd(w)))
            region = disks_common_intersection(
                [pts[v] for v in (*petals, *s2)], inst.threshold
            )
            if region.empty:
                continue
            for w in s2:
                if region_contains(region, pts[w]):
                    plans.append(ReductionPlan(w, Corona(petals, tuple(cores))))
                    break

        blocked: set[tuple[int, int]] = set()
        chosen = []
        for plan in sorted(plans, key=lambda p: p.core):
            cell = cell_of[plan.core]
            if cell in blocked:
                continue
            chosen.append(plan)
            cx, cy = cell
            blocked.update((cx + ox, cy + oy) for ox, oy in _NEAR_CELLS)
        if not chosen:
            return Solution(frozenset(d), "geo44", it, str(order), tuple(sizes))
        for plan in chosen:
            plan.apply(d)
        if check_steps:
            from udgdom.spatial import build_adjacency

            _check_step(build_adjacency(inst, grid), d, f"geo44 iteration {it}")
    raise InvariantError(f"geo44 exceeded {inst.n + 1} iterations")
