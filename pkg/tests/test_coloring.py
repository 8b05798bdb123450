import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from clocal.coloring import (
    FINAL_PALETTE_CONSTANT,
    color,
    coloring_schedule,
    combined_color,
    palette_bound,
    part_of_edge,
    reduce_once,
    reduction_palette,
    three_color_part,
)
from clocal.errors import ConstructionError, InputError
from clocal.graph import LabeledGraph, ProbeSession, random_graph, random_regular, ring
from clocal.reduction import Palette, Reduction, _eval, plan

from .strategies import graphs, sweep


def proper(g, colors):
    return all(colors[u] != colors[v] for u, v in g.edges())


def directed_ring(n):
    """Ring whose port 1 always points forward, so the part {1,2} is the whole ring."""
    return LabeledGraph([[v % n + 1, (v - 2) % n + 1] for v in range(1, n + 1)])


# ---- edge partition ---------------------------------------------------------

def test_part_single_edge(single_edge):
    assert part_of_edge(single_edge, ProbeSession(single_edge), (1, 2)) == (1, 1)


def test_part_ring_sorted_ports():
    g = ring(8)
    s = ProbeSession(g)
    # interior vertices list (v-1, v+1): edge v -> v+1 leaves v on port 2, enters v+1 on port 1
    assert part_of_edge(g, s, (3, 4)) == (1, 2)
    assert part_of_edge(g, s, (1, 2)) == (1, 1)
    assert part_of_edge(g, s, (7, 8)) == (2, 2)


def test_part_star_edges_distinct():
    g = LabeledGraph.from_edges(4, [(1, 2), (1, 3), (1, 4)])
    s = ProbeSession(g)
    parts = {part_of_edge(g, s, e) for e in g.edges()}
    assert len(parts) == 3


def test_part_probe_cost_and_non_edge():
    g = ring(10)
    s = ProbeSession(g)
    part_of_edge(g, s, (4, 5))
    assert s.probe_count <= 2 + 1  # ports of one endpoint plus the terminating null probe
    with pytest.raises(InputError):
        part_of_edge(g, s, (1, 5))


@given(graphs(max_degree=4))
def test_each_part_has_degree_at_most_two(g):
    s = ProbeSession(g)
    at = {}
    for e in g.edges():
        p = part_of_edge(g, s, e)
        for x in e:
            at[(p, x)] = at.get((p, x), 0) + 1
    assert all(c <= 2 for c in at.values())
    assert len({part_of_edge(g, s, e) for e in g.edges()}) <= g.max_degree**2


# ---- three-coloring of parts ------------------------------------------------

def test_isolated_in_part_gets_first_color():
    g = LabeledGraph.from_edges(3, [(1, 2)])
    assert three_color_part(g, ProbeSession(g), (1, 1), 3) == 1


def test_single_edge_part_colors_differ(single_edge):
    a = three_color_part(single_edge, ProbeSession(single_edge), (1, 1), 1)
    b = three_color_part(single_edge, ProbeSession(single_edge), (1, 1), 2)
    assert a != b and {a, b} <= {1, 2, 3}


@pytest.mark.parametrize("n", [12, 13, 101])
def test_ring_part_three_colored(n):
    g = directed_ring(n)
    cols = {v: three_color_part(g, ProbeSession(g, v), (1, 2), v) for v in g.vertices}
    assert set(cols.values()) <= {1, 2, 3}
    assert proper(g, cols)


def test_part_exploration_is_confined():
    g = directed_ring(2000)
    s = ProbeSession(g, 1000)
    three_color_part(g, s, (1, 2), 1000)
    assert s.radius <= 10


# ---- combined coloring ------------------------------------------------------

def test_combined_isolated_vertex_all_ones():
    g = LabeledGraph.from_edges(4, [(1, 2), (2, 3)])
    vec = combined_color(g, ProbeSession(g), 4)
    assert vec == (1,) * g.max_degree**2


def test_combined_single_edge(single_edge):
    a = combined_color(single_edge, ProbeSession(single_edge), 1)
    b = combined_color(single_edge, ProbeSession(single_edge), 2)
    assert len(a) == len(b) == 1
    assert a != b


def test_combined_ring_50_proper():
    g = ring(50)
    assert proper(g, sweep(g, combined_color, g.vertices))


# ---- one-round reduction ----------------------------------------------------

def test_reduce_once_ring_from_81():
    g = ring(100)
    vec = sweep(g, combined_color, g.vertices)

    def prior(v):
        return 1 + sum((c - 1) * 3**i for i, c in enumerate(vec[v]))

    assert max(map(prior, g.vertices)) <= 81
    new = {v: reduce_once(g, ProbeSession(g, v), prior, 81, v) for v in g.vertices}
    bound = 5 * 4 * math.ceil(math.log2(81))
    assert reduction_palette(81, 2) <= bound == 140
    assert max(new.values()) <= reduction_palette(81, 2)
    assert proper(g, new)


def test_reduce_once_isolated_and_single_edge():
    g = LabeledGraph.from_edges(3, [(1, 2)])
    out = {v: reduce_once(g, ProbeSession(g, v), lambda x: 10 * x, 30, v) for v in g.vertices}
    assert out[1] != out[2]
    assert out[3] == reduce_once(g, ProbeSession(g, 3), lambda x: 10 * x, 30, 3)


def test_reduce_once_uses_one_probe_layer():
    g = random_graph(50, 4, 90, 2)
    s = ProbeSession(g, 7)
    reduce_once(g, s, lambda v: v, 50, 7)
    assert s.radius <= 1


def test_improper_prior_is_a_construction_error(single_edge):
    with pytest.raises(ConstructionError):
        reduce_once(single_edge, ProbeSession(single_edge), lambda v: 5, 1000, 1)


def test_no_reduction_for_tiny_palette():
    assert plan(Palette.of(4), 2) is None
    with pytest.raises(ConstructionError):
        plan(Palette.of(100), 3, degree=0)


@pytest.mark.parametrize("delta", [2, 3, 4, 5, 6, 8])
@pytest.mark.parametrize("c", [27, 81, 1000, 3**16, 10**9, 2**64])
def test_reduction_palette_within_five_delta_squared_log(delta, c):
    assert reduction_palette(c, delta) <= 5 * delta * delta * math.ceil(math.log2(c))


@settings(max_examples=200)
@given(
    delta=st.integers(1, 6),
    c=st.integers(2, 10**6),
    data=st.data(),
)
def test_reduction_keeps_any_star_proper(delta, c, data):
    r = plan(Palette.of(c), delta)
    if r is None:
        return
    own = data.draw(st.integers(0, c - 1))
    others = data.draw(st.lists(st.integers(0, c - 1).filter(lambda x: x != own), max_size=delta))
    new_own = r.apply(own, others)
    assert 0 <= new_own < r.palette_out
    for o in others:
        # the neighbor's own image avoids new_own's point since polynomials differ there
        a = new_own // r.q
        assert _eval(r._coeffs(o), a, r.q) != new_own % r.q


def test_reduction_rejects_large_color():
    r = Reduction(5, 1, 2)
    with pytest.raises(ConstructionError):
        r.apply(25, [])


# ---- final coloring ---------------------------------------------------------

def test_schedules_known_values():
    assert [int(p) for p in coloring_schedule(10**6, 2).palettes] == [81, 25, 25, 25]
    assert [int(p) for p in coloring_schedule(10**6, 3).palettes] == [19683, 169, 49, 49]
    assert [int(p) for p in coloring_schedule(10**6, 4).palettes] == [5764801, 529, 121, 121]


@pytest.mark.parametrize("delta", [1, 2, 3, 4, 5, 7, 10, 16, 50, 200, 1000])
@pytest.mark.parametrize("ids", [10, 10**6, 10**30])
def test_final_palette_constant(delta, ids):
    assert coloring_schedule(ids, delta).palette <= FINAL_PALETTE_CONSTANT * delta * delta


def test_isolated_vertex_is_deterministic():
    g = LabeledGraph.from_edges(3, [(1, 2)])
    assert color(g, ProbeSession(g), 3) == color(g, ProbeSession(g), 3) == 1


def test_ring_1e5_proper():
    g = ring(10**5)
    cols = sweep(g, color, g.vertices)
    assert proper(g, cols)
    assert max(cols.values()) <= palette_bound(g) <= 4 * FINAL_PALETTE_CONSTANT


def test_random_cubic_500():
    g = random_regular(500, 3, seed=5)
    cols = sweep(g, color, g.vertices)
    assert proper(g, cols)
    assert max(cols.values()) <= palette_bound(g) <= 9 * FINAL_PALETTE_CONSTANT


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=14, max_degree=5))
def test_color_proper_and_bounded(g):
    cols = sweep(g, color, g.vertices)
    assert proper(g, cols)
    assert all(1 <= c <= palette_bound(g) for c in cols.values())
    assert palette_bound(g) <= FINAL_PALETTE_CONSTANT * max(g.max_degree, 1) ** 2


def test_color_order_independent():
    g = random_graph(40, 4, 70, 11)
    a = sweep(g, color, g.vertices)
    order = list(g.vertices)
    random.Random(1).shuffle(order)
    assert sweep(g, color, order) == a


def test_color_rejects_unknown_vertex(single_edge):
    with pytest.raises(InputError):
        color(single_edge, ProbeSession(single_edge), 3)
