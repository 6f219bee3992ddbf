import math

import pytest

from conftest import T, path, small_udg, star
from udgdom.algorithms import (
    ReductionPlan,
    enumerate_coronas,
    find_reduction_core,
    find_weak_reduction,
    maximal_independent_set,
    mis5,
    reduce44_geometric,
    reduce44_graph,
    reducible_coronas,
    select_spread_cores,
    solution_neighbors,
    weak43,
    weakly_reducible_coronas,
)
from udgdom.core import (
    Corona,
    Graph,
    InvariantError,
    OrderPolicy,
    PointInstance,
    StructureError,
    is_dominating,
    is_independent,
)
from udgdom.instances import FIG4_CORES, corona_chain, paper_instance
from udgdom.spatial import build_adjacency

LEAVES = frozenset(range(1, 6))


def star_with_pendants(count: int) -> Graph:
    """K_{1,5} (center 0, leaves 1..5) plus ``count`` pendants, each on its own leaf."""
    edges = [(0, i) for i in range(1, 6)]
    edges += [(1 + i, 6 + i) for i in range(count)]
    return Graph.from_edges(6 + count, edges)


def k16_center_last() -> Graph:
    return Graph.from_edges(7, [(6, i) for i in range(6)])


def valid(g, s):
    return is_dominating(g, s.vertices) and is_independent(g, s.vertices)


# maximal independent set


def test_mis_center_first():
    assert maximal_independent_set(star(6)) == frozenset({0})


def test_mis_leaves_first():
    assert maximal_independent_set(k16_center_last()) == frozenset(range(6))


def test_mis_respects_order_policy():
    g = path(4)
    assert maximal_independent_set(g) == frozenset({0, 2})
    outs = {maximal_independent_set(g, OrderPolicy(s)) for s in range(30)}
    assert outs == {frozenset({0, 2}), frozenset({1, 3}), frozenset({0, 3})}


def test_mis5_solution_fields():
    s = mis5(star(5), OrderPolicy(7))
    assert s.algorithm == "mis5" and s.order == "seed:7" and s.iterations == 0
    assert s.sizes == (len(s),)


# coronas


def test_star_corona(k15):
    (c,) = enumerate_coronas(k15, LEAVES)
    assert c.petals == (1, 2, 3, 4, 5)
    assert c.cores == (0,)


def test_path_has_no_corona():
    assert enumerate_coronas(path(3), {0, 2}) == []


def test_six_petals_raise_structure_error():
    with pytest.raises(StructureError):
        enumerate_coronas(star(6), set(range(1, 7)))


def test_coronas_share_petals_collect_cores():
    # two cores over the same five petals give one corona
    edges = [(0, i) for i in range(2, 7)] + [(1, i) for i in range(2, 7)] + [(0, 1)]
    g = Graph.from_edges(7, edges)
    (c,) = enumerate_coronas(g, range(2, 7))
    assert c.cores == (0, 1)


def test_solution_neighbors_sorted(k15):
    nd = solution_neighbors(k15, LEAVES)
    assert nd[0] == [1, 2, 3, 4, 5]
    assert nd[3] == []


def test_fig4_adversarial_solution_has_four_irreducible_coronas():
    g = build_adjacency(paper_instance("fig4"))
    d = reduce44_graph(g, OrderPolicy(1)).vertices
    assert len(d) == 24
    coronas = enumerate_coronas(g, d)
    assert len(coronas) == 4
    assert sorted(c for corona in coronas for c in corona.cores) == list(FIG4_CORES)
    assert all(find_reduction_core(g, d, c) is None for c in coronas)


# reduction core


def test_star_reduction_core(k15):
    (c,) = enumerate_coronas(k15, LEAVES)
    assert find_reduction_core(k15, LEAVES, c) == 0


def test_pendant_blocks_reduction():
    g = star_with_pendants(1)
    (c,) = enumerate_coronas(g, LEAVES)
    assert find_reduction_core(g, LEAVES, c) is None


def test_reduction_core_is_minimum_of_common_neighborhood():
    # adjacent cores 0 and 1 both see all petals and the lonely vertex 7
    edges = [(0, i) for i in range(2, 7)] + [(1, i) for i in range(2, 7)]
    edges += [(0, 1), (7, 2), (7, 0), (7, 1)]
    g = Graph.from_edges(8, edges)
    d = frozenset(range(2, 7))
    (c,) = enumerate_coronas(g, d)
    assert find_reduction_core(g, d, c) == 0


def test_non_adjacent_cores_witness_each_other():
    edges = [(0, i) for i in range(2, 7)] + [(1, i) for i in range(2, 7)]
    g = Graph.from_edges(7, edges)
    d = frozenset(range(2, 7))
    (c,) = enumerate_coronas(g, d)
    assert find_reduction_core(g, d, c) is None


# spreading


def plan(core):
    return ReductionPlan(core, Corona((10, 11, 12, 13, 14), (core,)))


def test_spread_single_plan():
    g = path(3)
    assert select_spread_cores(g, [plan(1)]) == [plan(1)]


def test_spread_drops_close_core():
    g = path(6)
    assert select_spread_cores(g, [plan(4), plan(0)]) == [plan(0)]


def test_spread_keeps_distance_five():
    g = path(6)
    assert select_spread_cores(g, [plan(5), plan(0)]) == [plan(0), plan(5)]


def test_spread_other_component():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert select_spread_cores(g, [plan(0), plan(2)]) == [plan(0), plan(2)]


def test_spread_min_hop_parameter():
    g = path(6)
    assert select_spread_cores(g, [plan(0), plan(5)], min_hop=6) == [plan(0)]


# weak reduction


def test_weak_reduction_without_witnesses(k15):
    (c,) = enumerate_coronas(k15, LEAVES)
    p = find_weak_reduction(k15, LEAVES, c)
    assert p == ReductionPlan(0, c, frozenset())
    d = set(LEAVES)
    p.apply(d)
    assert d == {0}


def test_weak_reduction_with_three_witnesses():
    g = star_with_pendants(3)
    (c,) = enumerate_coronas(g, LEAVES)
    p = find_weak_reduction(g, LEAVES, c)
    assert p.core == 0 and p.witnesses == frozenset({6, 7, 8})
    d = set(LEAVES)
    p.apply(d)
    assert len(d) == 4
    assert is_dominating(g, d) and is_independent(g, d)


def test_overwhelmed_core():
    g = star_with_pendants(4)
    (c,) = enumerate_coronas(g, LEAVES)
    assert find_weak_reduction(g, LEAVES, c) is None
    assert weakly_reducible_coronas(g, LEAVES) == []


def test_adjacent_witnesses_count_once():
    # four pendants, but two of them are adjacent, so three suffice
    edges = [(0, i) for i in range(1, 6)] + [(1, 6), (2, 7), (3, 8), (4, 9), (8, 9)]
    g = Graph.from_edges(10, edges)
    (c,) = enumerate_coronas(g, LEAVES)
    p = find_weak_reduction(g, LEAVES, c)
    assert p is not None and len(p.witnesses) == 3
    d = set(LEAVES)
    p.apply(d)
    assert is_dominating(g, d) and is_independent(g, d)


# solvers


@pytest.mark.parametrize("seed", [None, 0, 1, 2, 3])
def test_star_solvers_reach_one(seed):
    g = star(5)
    order = OrderPolicy(seed)
    assert len(reduce44_graph(g, order)) == 1
    assert len(weak43(g, order)) == 1
    assert len(reduce44_graph(g, order, initial=LEAVES)) == 1
    assert len(weak43(g, order, initial=LEAVES)) == 1


def test_reduce44_from_leaves_records_sizes(k15):
    s = reduce44_graph(k15, initial=LEAVES)
    assert s.sizes == (5, 1)
    assert s.iterations == 2


def test_solvers_reject_k16():
    g = k16_center_last()
    with pytest.raises(StructureError):
        reduce44_graph(g)
    with pytest.raises(StructureError):
        weak43(g)


def test_geo44_clique():
    inst = PointInstance(((0, 0), (100, 0), (0, 100), (100, 100), (50, 50)), T)
    s = reduce44_geometric(inst)
    assert len(s) == 1 and s.algorithm == "geo44"


def test_geo44_flower():
    # five petals around a core, pairwise farther apart than the threshold
    angles = [2 * math.pi * i / 5 for i in range(5)]
    pts = [(round(950 * math.cos(a)), round(950 * math.sin(a))) for a in angles]
    inst = PointInstance(tuple(pts) + ((0, 0),), T)
    assert len(reduce44_geometric(inst)) == 1


@pytest.mark.parametrize("seed", range(6))
def test_fig4_geo_and_graph_agree(seed):
    inst = paper_instance("fig4")
    g = build_adjacency(inst)
    order = OrderPolicy(seed)
    a = reduce44_graph(g, order)
    b = reduce44_geometric(inst, order)
    assert len(a) == len(b)
    assert len(a) <= 24


def test_fig4_reduce44_never_exceeds_24():
    g = build_adjacency(paper_instance("fig4"))
    assert max(len(reduce44_graph(g, OrderPolicy(s))) for s in range(300)) == 24


def test_fig6_weak43_adversarial_seed():
    g = build_adjacency(paper_instance("fig6"))
    s = weak43(g, OrderPolicy(2053))
    assert len(s) == 34
    assert weakly_reducible_coronas(g, s.vertices) == []


@pytest.mark.parametrize("length", [1, 2, 3, 6])
def test_chain_needs_one_iteration_per_flower(length):
    g = build_adjacency(corona_chain(length))
    s = weak43(g, check_steps=True)
    assert s.iterations == length + 1
    assert all(a > b for a, b in zip(s.sizes, s.sizes[1:]))
    assert s.sizes[-1] == len(s)
    assert valid(g, s)


def test_chain_first_solution_has_one_corona():
    g = build_adjacency(corona_chain(4))
    d = maximal_independent_set(g)
    assert len(enumerate_coronas(g, d)) == 1


def test_chain_geo_matches_graph():
    inst = corona_chain(5)
    assert len(reduce44_geometric(inst)) == len(reduce44_graph(build_adjacency(inst)))


def test_chain_rejects_zero():
    with pytest.raises(ValueError):
        corona_chain(0)


@pytest.mark.parametrize("seed", range(25))
def test_random_flowers_postconditions(seed):
    inst = small_udg(seed, 50, flowers=3, density=0.8)
    g = build_adjacency(inst)
    order = OrderPolicy(seed)
    r = reduce44_graph(g, order, check_steps=True)
    w = weak43(g, order, check_steps=True)
    geo = reduce44_geometric(inst, order, check_steps=True)
    m = mis5(g, order)
    for s in (r, w, geo, m):
        assert valid(g, s)
    assert reducible_coronas(g, r.vertices) == []
    assert reducible_coronas(g, geo.vertices) == []
    assert weakly_reducible_coronas(g, w.vertices) == []
    assert len(geo) == len(r)
    assert len(r) <= len(m) and len(w) <= len(m)
    for s in (r, w):
        assert list(s.sizes) == sorted(set(s.sizes), reverse=True)
        assert s.sizes[0] == len(m) and s.sizes[-1] == len(s)


def test_determinism():
    inst = small_udg(11, 60, flowers=4, density=0.8)
    g = build_adjacency(inst)
    for order in (OrderPolicy(), OrderPolicy(5)):
        assert reduce44_graph(g, order) == reduce44_graph(g, order)
        assert weak43(g, order) == weak43(g, order)
        assert reduce44_geometric(inst, order) == reduce44_geometric(inst, order)


def test_check_steps_catches_broken_start():
    # a non-dominating start is rejected after the first reduction
    g = Graph.from_edges(7, [(0, i) for i in range(1, 6)])
    with pytest.raises(InvariantError):
        reduce44_graph(g, initial=LEAVES, check_steps=True)
