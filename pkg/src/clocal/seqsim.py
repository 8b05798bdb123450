"""Localized sequential greedy algorithms.

A sequential rule decides vertices one at a time; each decision is a
function of the values already given to earlier neighbors. Ordering the
vertices by any linear extension of an acyclic orientation gives the
same result, so a query only needs a DFS over out-edges: the value of a
node is computed at backtrack from the values of its out-neighbors.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import networkx as nx

from .coloring import view_color
from .errors import InputError
from .graph import ProbeSession, edge_ref, probe_ports
from .views import View, base_view


@dataclass(frozen=True)
class SequentialRule:
    """Decision f(values of earlier neighbors); must ignore identities and order."""

    name: str
    decide: Callable[[list], Hashable]


def _mis(values: list) -> bool:
    return True not in values


def _first_fit(values: list) -> int:
    taken = set(values)
    c = 1
    while c in taken:
        c += 1
    return c


MIS = SequentialRule("mis", _mis)
FIRST_FIT = SequentialRule("first-fit", _first_fit)


def view_simulate(view: View, rule: SequentialRule, x, key=view_color):
    """Value of node x under the greedy order given by ``key`` (smaller key decided first)."""
    memo = view.memo.setdefault(("_seq", rule.name, key), {})
    if x in memo:
        return memo[x]
    keys = view.memo.setdefault(("_key", key), {})

    def k(y):
        val = keys.get(y)
        if val is None:
            val = keys[y] = key(view, y)
        return val

    stack = [[x, None]]
    while stack:
        frame = stack[-1]
        y, outs = frame
        if outs is None:
            ky = k(y)
            outs = []
            for z in view.neighbors(y):
                kz = k(z)
                if kz == ky:
                    raise AssertionError(f"equal keys across edge {y!r}-{z!r}")
                if kz < ky:
                    outs.append(z)
            frame[1] = outs
        pending = next((z for z in outs if z not in memo), None)
        if pending is not None:
            stack.append([pending, None])
            continue
        memo[y] = rule.decide([memo[z] for z in outs])
        stack.pop()
    return memo[x]


def _check(g, session):
    if session.graph is not g:
        raise InputError("session belongs to a different graph")


def simulate(g, session: ProbeSession, rule: SequentialRule, v: int):
    _check(g, session)
    g.check_vertex(v)
    return view_simulate(base_view(session), rule, v)


def l_mis(g, session: ProbeSession, v: int) -> bool:
    return simulate(g, session, MIS, v)


def l_color_delta_plus_1(g, session: ProbeSession, v: int) -> int:
    return simulate(g, session, FIRST_FIT, v)


class LineGraphView(View):
    """Line graph of G: an edge's ports list the edges at its smaller endpoint, then at its larger one."""

    def __init__(self, session: ProbeSession):
        self.session = session
        g = session.graph
        self.n = g.n
        self.id_bound = max(1, g.n * g.n)
        self.degree_bound = max(0, 2 * (g.max_degree - 1))
        self.memo = {}
        self._nbrs: dict = {}
        self._ports: dict = {}

    def node_id(self, e):
        return (e[0] - 1) * self.n + e[1]

    def neighbors(self, e):
        row = self._nbrs.get(e)
        if row is None:
            u, v = e
            row = [edge_ref(u, w) for w, _ in probe_ports(self.session, u) if w != v]
            row += [edge_ref(v, w) for w, _ in probe_ports(self.session, v) if w != u]
            self._nbrs[e] = row
        return row

    def ports(self, e):
        row = self._ports.get(e)
        if row is None:
            row = self._ports[e] = tuple((f, self.neighbors(f).index(e) + 1) for f in self.neighbors(e))
        return row


def line_view(session: ProbeSession) -> LineGraphView:
    view = session.memo.get("_line")
    if view is None:
        view = session.memo["_line"] = LineGraphView(session)
    return view


def l_mm(g, session: ProbeSession, e) -> bool:
    _check(g, session)
    e = g.check_edge(e)
    return view_simulate(line_view(session), MIS, e)


# ---- reference: the sequential algorithm run directly -----------------------

def run_sequential(order: Sequence, neighbors: Callable[[Hashable], Iterable], rule: SequentialRule) -> dict:
    """Decide nodes in ``order``; each sees the values of its already-decided neighbors."""
    vals: dict = {}
    for x in order:
        vals[x] = rule.decide([vals[y] for y in neighbors(x) if y in vals])
    return vals


def linear_extension(nodes: Iterable, keys: Mapping, neighbors: Callable, rng: random.Random | None = None) -> list:
    """A topological order of the orientation low key → ... with random tie-breaks.

    Edges point from larger to smaller key; the returned order lists heads
    before tails, i.e. it is a linear extension of the decision order.
    """
    h = nx.DiGraph()
    nodes = list(nodes)
    h.add_nodes_from(nodes)
    for x in nodes:
        for y in neighbors(x):
            if keys[y] < keys[x]:
                h.add_edge(y, x)
    rng = rng or random.Random(0)
    indeg = {x: h.in_degree(x) for x in nodes}
    ready = [x for x in nodes if indeg[x] == 0]
    out = []
    while ready:
        x = ready.pop(rng.randrange(len(ready)))
        out.append(x)
        for y in h.successors(x):
            indeg[y] -= 1
            if indeg[y] == 0:
                ready.append(y)
    if len(out) != len(nodes):
        raise AssertionError("orientation has a cycle")
    return out
