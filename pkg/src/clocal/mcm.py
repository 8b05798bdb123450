"""(1−ε)-approximate maximum cardinality matching oracles.

Level t (1 ≤ t ≤ k+1, k = ⌈1/ε⌉) works with M_{t−1}: P_t is the set of
M_{t−1}-augmenting paths with 2t−1 edges, H_t is their intersection graph
(paths adjacent when they share a vertex), and M_t = M_{t−1} ⊕ E(MIS(H_t)).
Membership of an edge in M_t is answered recursively:

    O_t(e) = O_{t−1}(e) xor A_t(e),     O_0(e) = False,

where A_t(e) asks whether some path of P_t through e is in the MIS of
H_t. Probes to H_t are simulated by probes to G.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import pairwise

from .coloring import view_color
from .errors import InputError
from .graph import LabeledGraph, ProbeSession, collect_ball, edge_ref, probe_ports
from .seqsim import MIS, run_sequential, view_simulate
from .views import ExplicitView, View, base_view

Path = tuple[int, ...]


def as_eps(eps, *, upper_inclusive: bool = True) -> Fraction:
    """Exact ε from a Fraction, int, float or string such as '1/3'."""
    try:
        if isinstance(eps, float):
            val = Fraction(eps).limit_denominator(10**6)
        else:
            val = Fraction(eps)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad epsilon {eps!r}") from exc
    if val <= 0 or val > 1 or (val == 1 and not upper_inclusive):
        raise InputError(f"epsilon must lie in (0, 1), got {eps!r}")
    return val


def mcm_k(eps) -> int:
    eps = as_eps(eps)
    return math.ceil(1 / eps)


def path_edges(p: Path) -> list[tuple[int, int]]:
    return [edge_ref(a, b) for a, b in pairwise(p)]


def canonical_path(p) -> Path:
    p = tuple(p)
    return p if p[0] <= p[-1] else p[::-1]


def path_id(p: Path, n: int) -> int:
    base = n + 1
    x = 0
    for v in reversed(p):
        x = x * base + v
    return x + 1


def h_degree_bound(t: int, delta: int) -> int:
    return (2 * t) ** 2 * max(delta, 1) ** (2 * t - 1)


def augmenting_through(adj: dict, mate: dict, a: int, b: int, length: int) -> set[Path]:
    """All augmenting paths with ``length`` edges that use edge a-b.

    ``adj`` must contain every vertex within distance ``length`` of a or b;
    ``mate`` is the current matching restricted to those vertices. Edge
    number j (1-based along the path) is matched iff j is even.
    """
    e_matched = mate.get(a) == b
    found: set[Path] = set()
    walk: list[int] = []

    def arms(start, need_matched, steps, banned, out):
        if steps == 0:
            out.append(list(walk))
            return
        if need_matched:
            y = mate.get(start)
            cands = [] if y is None else [y]
        else:
            cands = [y for y in adj[start] if mate.get(start) != y]
        for y in cands:
            if y in banned or y in walk:
                continue
            walk.append(y)
            arms(y, not need_matched, steps - 1, banned, out)
            walk.pop()

    for s in range(length):
        if e_matched != ((s + 1) % 2 == 0):
            continue
        first_matched = s % 2 == 0 and s > 0
        for x, y in ((a, b), (b, a)):
            lefts: list[list[int]] = []
            arms(x, first_matched, s, {x, y}, lefts)
            for left in lefts:
                rights: list[list[int]] = []
                right_first = (s + 2) % 2 == 0
                arms(y, right_first, length - s - 1, {x, y, *left}, rights)
                for right in rights:
                    p = left[::-1] + [x, y] + right
                    if mate.get(p[0]) is None and mate.get(p[-1]) is None:
                        found.add(canonical_path(p))
    return found


class IntersectionGraphHandle(View):
    """H_t: nodes are level-t augmenting paths, ports follow canonical path order."""

    def __init__(self, ctx: "_Context", level: int):
        self.ctx = ctx
        self.level = level
        n = ctx.g.n
        self.n = n
        self.id_bound = (n + 1) ** (2 * level)
        self.degree_bound = h_degree_bound(level, ctx.g.max_degree)
        self.memo = {}
        self._nbrs: dict = {}
        self._ports: dict = {}

    def node_id(self, p):
        return path_id(p, self.n)

    def neighbors(self, p):
        row = self._nbrs.get(p)
        if row is None:
            found = set()
            for x in p:
                found |= self.ctx.paths_through_vertex(self.level, x)
            found.discard(p)
            row = self._nbrs[p] = sorted(found)
        return row

    def ports(self, p):
        row = self._ports.get(p)
        if row is None:
            row = self._ports[p] = tuple((q, self.neighbors(q).index(p) + 1) for q in self.neighbors(p))
        return row


class _Context:
    """Memo tables for one query. Nothing here outlives the session."""

    def __init__(self, session: ProbeSession):
        self.session = session
        self.g = session.graph
        self.members: dict = {}
        self.augs: dict = {}
        self.by_edge: dict = {}
        self.by_vertex: dict = {}
        self.views: dict = {}

    def member(self, i: int, e) -> bool:
        if i == 0:
            return False
        key = (i, e)
        val = self.members.get(key)
        if val is None:
            val = self.members[key] = self.member(i - 1, e) ^ self.aug(i, e)
        return val

    def aug(self, i: int, e) -> bool:
        key = (i, e)
        val = self.augs.get(key)
        if val is None:
            h = self.hview(i)
            val = any(view_simulate(h, MIS, p) for p in sorted(self.paths_through_edge(i, e)))
            self.augs[key] = val
        return val

    def hview(self, i: int) -> IntersectionGraphHandle:
        h = self.views.get(i)
        if h is None:
            h = self.views[i] = IntersectionGraphHandle(self, i)
        return h

    def paths_through_edge(self, i: int, e) -> set[Path]:
        key = (i, e)
        found = self.by_edge.get(key)
        if found is None:
            length = 2 * i - 1
            a, b = e
            verts = set(collect_ball(self.g, self.session, a, length).dist)
            verts |= collect_ball(self.g, self.session, b, length).dist.keys()
            adj = {v: [u for u, _ in probe_ports(self.session, v) if u in verts] for v in verts}
            mate: dict[int, int] = {}
            for v in verts:
                for u in adj[v]:
                    if v < u and self.member(i - 1, (v, u)):
                        if v in mate or u in mate:
                            raise AssertionError(f"M_{i - 1} is not a matching near {(v, u)}")
                        mate[v], mate[u] = u, v
            found = self.by_edge[key] = augmenting_through(adj, mate, a, b, length)
        return found

    def paths_through_vertex(self, i: int, v: int) -> set[Path]:
        key = (i, v)
        found = self.by_vertex.get(key)
        if found is None:
            collect_ball(self.g, self.session, v, 2 * i - 1)
            found = set()
            for u, _ in probe_ports(self.session, v):
                found |= self.paths_through_edge(i, edge_ref(v, u))
            self.by_vertex[key] = found
        return found


def _context(g, session: ProbeSession) -> _Context:
    if session.graph is not g:
        raise InputError("session belongs to a different graph")
    ctx = session.memo.get("_mcm")
    if ctx is None:
        ctx = session.memo["_mcm"] = _Context(session)
    return ctx


def oracle_O(i: int, g, session: ProbeSession, e, k: int) -> bool:
    """Is e in M_i?"""
    if not 0 <= i <= k + 1:
        raise InputError(f"level {i} outside 0..{k + 1}")
    e = g.check_edge(e)
    return _context(g, session).member(i, e)


def proc_A(i: int, g, session: ProbeSession, e, k: int) -> bool:
    """Is e on a path of the MIS of H_i?"""
    if not 1 <= i <= k + 1:
        raise InputError(f"level {i} outside 1..{k + 1}")
    e = g.check_edge(e)
    return _context(g, session).aug(i, e)


def probe_H(i: int, g, session: ProbeSession, p) -> list[Path]:
    """Neighbors of path p in H_i, in canonical order (virtual port j = j-th entry)."""
    if i < 1:
        raise InputError("level must be ≥ 1")
    ctx = _context(g, session)
    try:
        p = canonical_path(p)
        first = g.check_edge(p[:2])
    except (InputError, IndexError) as exc:
        raise InputError(f"{p!r} is not a level-{i} augmenting path") from exc
    if len(p) != 2 * i or p not in ctx.paths_through_edge(i, first):
        raise InputError(f"{p!r} is not a level-{i} augmenting path")
    return list(ctx.hview(i).neighbors(p))


def apx_mcm(g, session: ProbeSession, e, eps) -> bool:
    k = mcm_k(eps)
    return oracle_O(k + 1, g, session, e, k)


# ---- global reference -------------------------------------------------------

def all_augmenting_paths(g: LabeledGraph, matching, length: int) -> set[Path]:
    """Every M-augmenting path with ``length`` edges, by exhaustive DFS from free vertices."""
    mate = {}
    for u, v in matching:
        mate[u], mate[v] = v, u
    found: set[Path] = set()
    for s in g.vertices:
        if s in mate:
            continue
        stack = [(s,)]
        while stack:
            p = stack.pop()
            if len(p) - 1 == length:
                if p[-1] not in mate:
                    found.add(canonical_path(p))
                continue
            want_matched = (len(p) % 2) == 0  # next edge number is len(p)
            for u in g.neighbors(p[-1]):
                if u in p:
                    continue
                if (mate.get(p[-1]) == u) == want_matched:
                    stack.append(p + (u,))
    return found


def intersection_view(paths, n: int, level: int, delta: int) -> ExplicitView:
    at: dict[int, list[Path]] = {}
    for p in paths:
        for v in p:
            at.setdefault(v, []).append(p)
    adj = {}
    for p in paths:
        nb = {q for v in p for q in at[v]}
        nb.discard(p)
        adj[p] = sorted(nb)
    return ExplicitView(adj, lambda p: path_id(p, n), (n + 1) ** (2 * level), h_degree_bound(level, delta))


def global_apx_mcm(g: LabeledGraph, eps, *, history: bool = False):
    """Reference run of the level iteration on explicitly built intersection graphs.

    Returns the final matching, or with ``history`` the list of M_0..M_{k+1}.
    """
    k = mcm_k(eps)
    m: frozenset = frozenset()
    levels = [m]
    for t in range(1, k + 2):
        paths = all_augmenting_paths(g, m, 2 * t - 1)
        if paths:
            h = intersection_view(paths, g.n, t, g.max_degree)
            keys = {p: view_color(h, p) for p in paths}
            vals = run_sequential(sorted(paths, key=keys.__getitem__), h.neighbors, MIS)
            flip = set(m)
            for p in paths:
                if vals[p]:
                    flip.symmetric_difference_update(path_edges(p))
            m = frozenset(flip)
        levels.append(m)
    return levels if history else set(m)
