from collections import deque
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor

import networkx as nx
import pytest
from hypothesis import given, settings

from clocal.errors import GraphFormatError, InputError
from clocal.graph import (
    LabeledGraph,
    ProbeSession,
    collect_ball,
    dump_graph,
    edge_ref,
    generate,
    grid,
    load_graph,
    parse_graph,
    probe,
    random_graph,
    random_regular,
    ring,
    save_graph,
)
from clocal.coloring import color

from .strategies import graphs


def test_probe_single_edge(single_edge):
    s = ProbeSession(single_edge, 1)
    assert probe(single_edge, s, 1, 1) == (2, 1)
    assert probe(single_edge, s, 1, 2) is None
    assert s.probe_count == 2


def test_probe_triangle_reciprocal_port():
    g = ring(3)
    u, j = probe(g, ProbeSession(g), 2, 2)
    assert u == 3
    assert g.neighbor(3, j) == (2, 2)


def test_probe_unknown_vertex_is_an_error_not_null(single_edge):
    s = ProbeSession(single_edge)
    with pytest.raises(InputError):
        probe(single_edge, s, 3, 1)
    with pytest.raises(InputError):
        probe(single_edge, s, 1, 0)


def test_probe_cache_counts_repeats_once():
    g = ring(5)
    cached, strict = ProbeSession(g, 1), ProbeSession(g, 1, cache=False)
    for s in (cached, strict):
        for _ in range(3):
            probe(g, s, 1, 1)
    assert cached.probe_count == 1
    assert strict.probe_count == 3


def test_session_of_other_graph_rejected():
    with pytest.raises(InputError):
        probe(ring(4), ProbeSession(ring(5)), 1, 1)


@pytest.mark.parametrize("n", [3, 10])
def test_ball_radius_zero(n):
    g = ring(n)
    b = collect_ball(g, ProbeSession(g, 2), 2, 0)
    assert b.vertices == {2}
    assert b.edges == set()


def test_ring_ball_is_a_path():
    g = ring(10)
    b = collect_ball(g, ProbeSession(g, 5), 5, 2)
    assert b.vertices == {3, 4, 5, 6, 7}
    assert b.edges == {(3, 4), (4, 5), (5, 6), (6, 7)}


def _bfs(g, c, r):
    dist = {c: 0}
    q = deque([c])
    while q:
        x = q.popleft()
        if dist[x] == r:
            continue
        for y in g.neighbors(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


@pytest.mark.parametrize("seed", range(5))
def test_ball_matches_reference_bfs(seed):
    g = random_graph(40, 3, 55, seed)
    for c in (1, 17, 40):
        s = ProbeSession(g, c)
        b = collect_ball(g, s, c, 2)
        ref = _bfs(g, c, 2)
        assert b.dist == ref
        assert b.edges == {e for e in g.edges() if e[0] in ref and e[1] in ref}
        assert s.radius <= 2


def test_generators():
    g = ring(3)
    assert (g.n, g.num_edges, g.max_degree) == (3, 3, 2)
    assert random_regular(10, 3, seed=1) == random_regular(10, 3, seed=1)
    assert (grid(2, 2).n, grid(2, 2).num_edges) == (4, 4)
    with pytest.raises(InputError):
        random_regular(5, 3)
    assert generate("random", [20, 3, 25], seed=4) == random_graph(20, 3, 25, 4)
    assert generate("ring", {"n": 7}, weighted=True, seed=2).is_weighted


def test_edge_ref_canonical():
    assert edge_ref(5, 2) == edge_ref(2, 5) == (2, 5)


@pytest.mark.parametrize(
    "ports",
    [
        [[2], []],  # not reciprocal
        [[1]],  # self-loop
        [[2, 2], [1, 1]],  # parallel
        [[3], [1]],  # out of range
    ],
)
def test_invalid_port_lists(ports):
    with pytest.raises(InputError):
        LabeledGraph(ports)


def test_text_round_trip(tmp_path):
    g = generate("random", [12, 3, 15], seed=9, weighted=True)
    path = tmp_path / "g.txt"
    save_graph(g, path)
    assert load_graph(path) == g
    assert parse_graph(dump_graph(ring(6))) == ring(6)


def test_file_port_order_is_kept():
    g = parse_graph("3 2\n1: 3 2\n2: 1\n3: 1\n")
    assert g.neighbor(1, 1) == (3, 1)
    assert g.neighbor(1, 2) == (2, 1)


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("3\n", 1),
        ("2 1\n1: 2\nx: 1\n", 3),
        ("2 1\n1: 2\n2: 1\nweights:\n1 2\n", 5),
        ("2 1\n1: 2\n2: 1\nweights:\n1 2 1/0\n", 5),
        ("2 2\n1: 2\n2: 1\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text)
    assert info.value.lineno == line


def test_weights_parsed_exactly():
    g = parse_graph("2 1\n1: 2\n2: 1\nweights:\n1 2 3/7\n")
    assert g.weight(2, 1) == Fraction(3, 7)


@given(graphs())
def test_port_reciprocity(g):
    for v in g.vertices:
        assert g.degree(v) <= g.max_degree
        for i, (u, j) in enumerate(g.ports(v), 1):
            assert g.neighbor(u, j) == (v, i)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=10, max_degree=3))
def test_radius_never_exceeds_probe_count(g):
    for v in g.vertices:
        s = ProbeSession(g, v)
        color(g, s, v)
        assert s.radius <= s.probe_count


def test_concurrent_sessions_do_not_interfere():
    g = random_graph(60, 4, 100, 3)
    serial = {v: color(g, ProbeSession(g, v), v) for v in g.vertices}
    with ThreadPoolExecutor(4) as pool:
        par = dict(zip(g.vertices, pool.map(lambda v: color(g, ProbeSession(g, v), v), g.vertices)))
    assert par == serial


def test_networkx_export():
    h = ring(5).to_networkx()
    assert nx.is_isomorphic(h, nx.cycle_graph(5))
