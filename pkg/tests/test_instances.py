import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import T
from udgdom.core import Graph, InputError, ParseError, PointInstance
from udgdom.instances import (
    PAPER_THRESHOLD,
    GeneratorConfig,
    format_graph,
    format_points,
    format_solution,
    generate,
    paper_instance,
    parse_graph,
    parse_points,
    parse_solution,
    read_graph,
    read_points,
    read_solution,
    write_graph,
    write_points,
    write_solution,
)
from udgdom.spatial import build_adjacency, geometric_mis


# bundled instances


def test_bundled_point_counts():
    assert paper_instance("fig4").n == 33
    assert paper_instance("fig6").n == 50
    assert paper_instance("fig4").threshold == PAPER_THRESHOLD == 1000001


def test_fig4_first_point_is_origin():
    assert paper_instance("fig4").points[0] == (0, 0)


def test_bundled_instances_mirror_symmetric():
    for name in ("fig4", "fig6"):
        pts = paper_instance(name).points
        assert sorted(pts) == sorted((-x, y) for x, y in pts)


def test_bundled_edge_counts():
    assert build_adjacency(paper_instance("fig4")).m == 38
    assert build_adjacency(paper_instance("fig6")).m == 52


def test_unknown_bundled_instance():
    with pytest.raises(InputError):
        paper_instance("fig5")


# generator


def test_single_point():
    inst = generate(GeneratorConfig(1, T, T, seed=3))
    assert inst.n == 1
    assert build_adjacency(inst).m == 0


def test_generation_deterministic():
    cfg = GeneratorConfig(200, 10 * T, T, seed=99)
    assert generate(cfg) == generate(cfg)
    assert generate(cfg) != generate(GeneratorConfig(200, 10 * T, T, seed=100))


def test_generation_pinned_stream():
    # coordinates come from PCG64 raw output only, so they are fixed everywhere
    inst = generate(GeneratorConfig(3, 10 * T, T, seed=0))
    assert inst.points == ((177, 1136), (6471, 7478), (4739, 5253))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(clusters=4, spread=300),
        dict(flowers=3),
        dict(),
    ],
)
def test_generated_points_in_box(kwargs):
    cfg = GeneratorConfig(100, 5 * T, T, seed=1, **kwargs)
    inst = generate(cfg)
    assert inst.n == 100
    assert all(0 <= c <= cfg.box_side for p in inst.points for c in p)


def test_flowers_plant_coronas():
    from udgdom.algorithms import enumerate_coronas, maximal_independent_set

    inst = generate(GeneratorConfig(60, 30 * T, T, seed=2, flowers=5))
    g = build_adjacency(inst)
    assert len(enumerate_coronas(g, maximal_independent_set(g))) >= 3


def test_dense_instance_mis_smaller_than_n():
    for seed in range(100):
        inst = generate(GeneratorConfig(1000, 10 * T, T, seed=seed))
        assert len(geometric_mis(inst)) < 1000


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=0, box_side=T, threshold=T),
        dict(n=5, box_side=T - 1, threshold=T),
        dict(n=5, box_side=T, threshold=0),
        dict(n=5, box_side=T, threshold=T, seed=-1),
        dict(n=5, box_side=T, threshold=T, seed=2**64),
        dict(n=5, box_side=T, threshold=T, clusters=-1),
        dict(n=12, box_side=T, threshold=T, clusters=1, flowers=1),
        dict(n=11, box_side=T, threshold=T, flowers=2),
        dict(n=5, box_side=2**62, threshold=T),
    ],
)
def test_generator_config_validation(kwargs):
    with pytest.raises(InputError):
        GeneratorConfig(**kwargs)


# formats


def test_points_format_exact():
    inst = PointInstance(((0, 0), (-3, 7)), 5)
    assert format_points(inst) == "udgp 2 5\n0 0\n-3 7\n"
    assert parse_points("udgp 2 5\n0 0\n-3 7\n") == inst


def test_graph_format_exact():
    g = Graph.from_edges(3, [(1, 0), (2, 1)])
    assert format_graph(g) == "udgg 3 2\n0 1\n1 2\n"
    assert parse_graph(format_graph(g)) == g


def test_solution_format_exact():
    assert format_solution({5, 1, 3}) == "sol 3\n1\n3\n5\n"
    assert parse_solution("sol 0\n") == frozenset()


def test_roundtrip_files(tmp_path):
    inst = paper_instance("fig4")
    g = build_adjacency(inst)
    write_points(tmp_path / "a.pts", inst)
    write_graph(tmp_path / "a.udgg", g)
    write_solution(tmp_path / "a.sol", {0, 1, 2, 3, 4})
    assert read_points(tmp_path / "a.pts") == inst
    assert read_graph(tmp_path / "a.udgg") == g
    assert read_solution(tmp_path / "a.sol") == frozenset({0, 1, 2, 3, 4})


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.tuples(st.integers(-(2**63), 2**63 - 1), st.integers(-(2**63), 2**63 - 1)), max_size=20),
    st.integers(1, 2**63 - 1),
)
def test_points_roundtrip_property(points, threshold):
    inst = PointInstance(tuple(points), threshold)
    assert parse_points(format_points(inst)) == inst


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("udgp 1 5", 1),  # no final newline
        ("udgx 1 5\n0 0\n", 1),
        ("udgp 1\n0 0\n", 1),
        ("udgp 1 0\n0 0\n", 1),
        ("udgp 2 5\n0 0\n", 3),
        ("udgp 1 5\n0 0\n1 1\n", 3),  # trailing record
        ("udgp 1 5\n0 0\n\n", 3),  # trailing blank line
        ("udgp 1 5\n0 x\n", 2),
        ("udgp 1 5\n0  0\n", 2),
        ("udgp 1 5\n0 0 0\n", 2),
        ("udgp 1 5\n+1 0\n", 2),
        ("udgp 1 5\n01 0\n", 2),
        ("udgp 1 5\n0 0\r\n", 2),
        ("udgp 1 5\n9223372036854775808 0\n", 2),
    ],
)
def test_points_parse_errors(text, line):
    with pytest.raises(ParseError) as e:
        parse_points(text)
    assert e.value.line == line
    assert str(e.value).startswith(f"line {line}:")


@pytest.mark.parametrize(
    "text,line",
    [
        ("udgg 3 1\n1 0\n", 2),  # reversed edge: not in canonical u < v form
        ("udgg 3 1\n1 1\n", 2),
        ("udgg 3 2\n0 1\n0 1\n", 3),
        ("udgg 3 1\n0 3\n", 2),
        ("udgg 3 1\n-1 2\n", 2),
        ("udgg 3 2\n0 1\n", 3),
        ("udgg 3 1\n0 1\n1 2\n", 3),
        ("udgg -1 0\n", 1),
    ],
)
def test_graph_parse_errors(text, line):
    with pytest.raises(ParseError) as e:
        parse_graph(text)
    assert e.value.line == line


@pytest.mark.parametrize(
    "text,line",
    [
        ("sol 2\n3\n1\n", 3),
        ("sol 2\n1\n1\n", 3),
        ("sol 1\n-1\n", 2),
        ("sol 1\n", 2),
        ("sol 1\n0\n0\n", 3),
        ("sol\n", 1),
    ],
)
def test_solution_parse_errors(text, line):
    with pytest.raises(ParseError) as e:
        parse_solution(text)
    assert e.value.line == line


def test_non_ascii_file(tmp_path):
    p = tmp_path / "bad.pts"
    p.write_bytes("udgp 1 5\n0 é\n".encode("utf-8"))
    with pytest.raises(ParseError) as e:
        read_points(p)
    assert e.value.line == 2
