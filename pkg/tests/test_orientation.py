import networkx as nx
import pytest
from hypothesis import given, settings

from clocal.coloring import color
from clocal.errors import InputError, VerificationError
from clocal.graph import LabeledGraph, ProbeSession, random_regular, ring
from clocal.orientation import assemble, orient_edge, reach_bound, reach_set, verify_bounds

from .strategies import graphs, sweep


def test_single_edge_follows_colors(single_edge):
    c1 = color(single_edge, ProbeSession(single_edge), 1)
    c2 = color(single_edge, ProbeSession(single_edge), 2)
    tail, head = orient_edge(single_edge, ProbeSession(single_edge), (1, 2))
    assert (tail, head) == ((1, 2) if c1 > c2 else (2, 1))


def test_reversed_edge_same_answer():
    g = ring(9)
    assert orient_edge(g, ProbeSession(g), (3, 4)) == orient_edge(g, ProbeSession(g), (4, 3))


def test_non_edge_rejected():
    g = ring(9)
    with pytest.raises(InputError):
        orient_edge(g, ProbeSession(g), (1, 5))


def test_ring_30_acyclic():
    g = ring(30)
    h = nx.DiGraph(list(sweep(g, orient_edge, g.edges()).values()))
    assert h.number_of_edges() == 30
    assert nx.is_directed_acyclic_graph(h)


def test_reach_of_single_edge(single_edge):
    tail, head = orient_edge(single_edge, ProbeSession(single_edge), (1, 2))
    assert reach_set(single_edge, ProbeSession(single_edge), tail) == {1, 2}
    assert reach_set(single_edge, ProbeSession(single_edge), head) == {head}


def test_local_minimum_reaches_itself():
    g = ring(20)
    cols = sweep(g, color, g.vertices)
    v = min(g.vertices, key=cols.get)
    assert reach_set(g, ProbeSession(g), v) == {v}


def test_ring_reach_matches_assembled_digraph():
    g = ring(20)
    h = assemble(g)
    for v in g.vertices:
        assert reach_set(g, ProbeSession(g, v), v) == nx.descendants(h, v) | {v}


def test_verify_single_edge(single_edge):
    st = verify_bounds(single_edge)
    assert (st.rad, st.reach) == (1, 2)
    assert st.reach <= reach_bound(1, 1) == 2


@pytest.mark.parametrize("n", [10, 57, 300])
def test_ring_bounds(n):
    st = verify_bounds(ring(n))
    assert st.reach <= 2 * st.rad + 1 == reach_bound(2, st.rad)
    assert st.reach <= 2 * (st.palette - 1) + 1


def test_cubic_reach_bound():
    st = verify_bounds(random_regular(100, 3, seed=3))
    assert st.reach <= reach_bound(3, st.rad) <= 1 + 6 * 2 ** (st.rad - 1)
    assert st.rad <= st.palette - 1


@pytest.mark.parametrize("delta,rad,expected", [(2, 4, 9), (3, 2, 1 + 3 * (1 + 2)), (4, 3, 1 + 4 * (1 + 3 + 9)), (5, 0, 1)])
def test_reach_bound_closed_form(delta, rad, expected):
    assert reach_bound(delta, rad) == expected


def test_verify_reports_witness(monkeypatch):
    import clocal.orientation as mod

    g = ring(12)
    monkeypatch.setattr(mod, "reach_bound", lambda d, r: 1)
    with pytest.raises(VerificationError) as info:
        verify_bounds(g)
    assert info.value.witness in g.vertices


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=14, max_degree=4))
def test_orientation_acyclic_and_bounded(g):
    st = verify_bounds(g)
    assert st.rad <= st.palette - 1
    assert st.reach <= st.reach_limit
