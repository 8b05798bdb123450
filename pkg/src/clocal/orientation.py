"""Acyclic orientation induced by the coloring: edges point from high to low color."""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .coloring import color, palette_bound, view_color
from .errors import InputError, VerificationError
from .graph import LabeledGraph, ProbeSession
from .views import View, base_view


def view_out_neighbors(view: View, x, key=view_color) -> list:
    """Out-neighbors of x in port order: neighbors with a strictly smaller key."""
    kx = key(view, x)
    out = []
    for y in view.neighbors(x):
        ky = key(view, y)
        if ky == kx:
            raise AssertionError(f"equal keys across edge {x!r}-{y!r}: coloring is not proper")
        if ky < kx:
            out.append(y)
    return out


def orient_edge(g, session: ProbeSession, e) -> tuple[int, int]:
    """(tail, head) of edge e; the tail has the larger color."""
    if session.graph is not g:
        raise InputError("session belongs to a different graph")
    u, v = g.check_edge(e)
    cu, cv = color(g, session, u), color(g, session, v)
    if cu == cv:
        raise AssertionError(f"equal colors across edge {(u, v)}")
    return (u, v) if cu > cv else (v, u)


def view_reach(view: View, x, key=view_color) -> list:
    """Reach set of x by DFS over out-edges in port order (x first)."""
    seen = {x}
    order = [x]
    stack = [x]
    while stack:
        y = stack.pop()
        for z in view_out_neighbors(view, y, key):
            if z not in seen:
                seen.add(z)
                order.append(z)
                stack.append(z)
    return order


def reach_set(g, session: ProbeSession, v: int) -> set[int]:
    if session.graph is not g:
        raise InputError("session belongs to a different graph")
    g.check_vertex(v)
    return set(view_reach(base_view(session), v))


def reach_bound(delta: int, rad: int) -> int:
    """1 + Δ·Σ_{i=1}^{rad} (Δ−1)^{i−1}; equals 2·rad + 1 when Δ = 2."""
    return 1 + delta * sum((delta - 1) ** (i - 1) for i in range(1, rad + 1))


@dataclass
class ReachStats:
    rad: int
    reach: int
    palette: int
    delta: int
    reach_sizes: dict[int, int] = field(default_factory=dict)

    @property
    def reach_limit(self) -> int:
        return reach_bound(self.delta, self.rad)


def assemble(g: LabeledGraph) -> nx.DiGraph:
    """Full orientation digraph, one fresh session per vertex color query."""
    cols = {}
    for v in g.vertices:
        cols[v] = color(g, ProbeSession(g, v), v)
    h = nx.DiGraph()
    h.add_nodes_from(g.vertices)
    for u, v in g.edges():
        if cols[u] == cols[v]:
            raise VerificationError("coloring not proper", (u, v))
        h.add_edge(*((u, v) if cols[u] > cols[v] else (v, u)))
    h.graph["colors"] = cols
    return h


def verify_bounds(g: LabeledGraph) -> ReachStats:
    """Exact rad and reach of the induced orientation, checked against the closed forms."""
    h = assemble(g)
    if not nx.is_directed_acyclic_graph(h):
        raise VerificationError("orientation has a directed cycle", nx.find_cycle(h))
    rad = nx.dag_longest_path_length(h) if h.number_of_edges() else 0
    sizes = {v: len(nx.descendants(h, v)) + 1 for v in g.vertices}
    stats = ReachStats(rad, max(sizes.values(), default=0), palette_bound(g), g.max_degree, sizes)
    if rad > stats.palette - 1:
        longest = nx.dag_longest_path(h)
        raise VerificationError(f"rad {rad} exceeds palette - 1 = {stats.palette - 1}", longest[0])
    limit = stats.reach_limit
    for v, s in sizes.items():
        if s > limit:
            raise VerificationError(f"reach {s} exceeds bound {limit}", v)
    return stats
