"""Probe-level access to real and virtual graphs.

Local algorithms (coloring, orientation, greedy simulation) only need
three things from a graph: the port list of a node, a distinct integer
ID with a known upper bound, and an upper bound on the degree. ``View``
packages exactly that, so the same code runs on G itself, on its line
graph, and on intersection graphs of augmenting structures.
"""
from __future__ import annotations

from typing import Callable, Hashable, Mapping, Sequence

from .graph import ProbeSession, probe_ports


class View:
    id_bound: int
    degree_bound: int
    memo: dict

    def ports(self, x) -> tuple[tuple[Hashable, int], ...]:
        raise NotImplementedError

    def node_id(self, x) -> int:
        raise NotImplementedError

    def neighbors(self, x) -> list:
        return [y for y, _ in self.ports(x)]

    def probe(self, x, i: int):
        row = self.ports(x)
        return row[i - 1] if 1 <= i <= len(row) else None


class SessionView(View):
    """G itself, seen through one query's probe session."""

    def __init__(self, session: ProbeSession):
        self.session = session
        self.id_bound = session.graph.n
        self.degree_bound = session.graph.max_degree
        self.memo = {}

    def ports(self, x):
        return probe_ports(self.session, x)

    def node_id(self, x):
        return x


def base_view(session: ProbeSession) -> SessionView:
    view = session.memo.get("_view")
    if view is None:
        view = session.memo["_view"] = SessionView(session)
    return view


class ExplicitView(View):
    """A fully materialized graph, used by global reference runs."""

    def __init__(
        self,
        adjacency: Mapping[Hashable, Sequence[Hashable]],
        node_id: Callable[[Hashable], int],
        id_bound: int,
        degree_bound: int,
    ):
        self._adj = {x: list(ys) for x, ys in adjacency.items()}
        pos = {x: {y: i for i, y in enumerate(ys, 1)} for x, ys in self._adj.items()}
        self._ports = {x: tuple((y, pos[y][x]) for y in ys) for x, ys in self._adj.items()}
        self._id = node_id
        self.id_bound = id_bound
        self.degree_bound = degree_bound
        self.memo = {}

    @property
    def nodes(self) -> list:
        return list(self._adj)

    def ports(self, x):
        return self._ports[x]

    def node_id(self, x):
        return self._id(x)
