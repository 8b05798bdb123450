"""(1−ε)-approximate maximum weight matching oracles.

Weights are normalized so the heaviest edge weighs 1 and rounded down to
multiples of ε/n; edges that round to 0 are ignored. With k = ⌊2/ε⌋ and
L = ⌈2(2k+1)·ln(2/ε)⌉, level i (1 ≤ i ≤ L) augments M_{i−1} by an
index-greedy MIS of I(M_{i−1}): the intersection graph of alternating
paths and cycles with at most k unmatched edges and positive gain.
Nodes with a larger gain index are decided first; ties follow the
coloring of I(M_{i−1}).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import pairwise
from typing import Callable, Iterable, Mapping

from .coloring import view_color
from .errors import InputError, NotAugmentingError
from .graph import LabeledGraph, ProbeSession, collect_ball, edge_ref, probe_ports
from .mcm import as_eps
from .seqsim import MIS, run_sequential, view_simulate
from .views import ExplicitView, View

StructKey = tuple[tuple[int, ...], bool]  # (vertices, is_cycle)


def mwm_parameters(eps) -> tuple[int, int]:
    """(k, L) for a given ε."""
    eps = as_eps(eps, upper_inclusive=False)
    k = math.floor(2 / eps)
    levels = math.ceil(2 * (2 * k + 1) * math.log(2 / eps))
    return k, levels


def rho(eps) -> float:
    """Guaranteed ratio w(M_L)/w'(M*) before rounding loss."""
    k, levels = mwm_parameters(eps)
    return (k / (k + 1)) * (1 - (1 - 1 / (2 * (2 * k + 1))) ** levels)


def gain_index(value) -> int:
    """⌈log₂ gain⌉ computed exactly."""
    g = value.gain if isinstance(value, AugmentingStructure) else Fraction(value)
    if g <= 0:
        raise NotAugmentingError(f"gain {g} is not positive")
    t = g.numerator.bit_length() - g.denominator.bit_length()
    two = Fraction(2)
    while two**t < g:
        t += 1
    while two ** (t - 1) >= g:
        t -= 1
    return t


def structure_edges(vertices, cycle: bool) -> list[tuple[int, int]]:
    out = [edge_ref(a, b) for a, b in pairwise(vertices)]
    if cycle:
        out.append(edge_ref(vertices[-1], vertices[0]))
    return out


def canonical_cycle(cyc) -> tuple[int, ...]:
    i = cyc.index(min(cyc))
    c = list(cyc[i:]) + list(cyc[:i])
    if c[-1] < c[1]:
        c = [c[0]] + c[:0:-1]
    return tuple(c)


def canonical_structure(vertices, cycle: bool) -> StructKey:
    if cycle:
        return (canonical_cycle(vertices), True)
    v = tuple(vertices)
    return (v if v[0] <= v[-1] else v[::-1], False)


@dataclass(frozen=True, order=True)
class AugmentingStructure:
    vertices: tuple[int, ...]
    cycle: bool
    gain: Fraction = field(compare=False)
    gain_index: int = field(compare=False)
    level: int = field(default=0, compare=False)

    @property
    def key(self) -> StructKey:
        return (self.vertices, self.cycle)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return structure_edges(self.vertices, self.cycle)


def gain(matching: Iterable, p, weight) -> Fraction:
    """w(p∖M) − w(p∩M); raises if p does not alternate with respect to M."""
    m = {edge_ref(*e) for e in matching}
    if isinstance(p, AugmentingStructure):
        verts, cycle = p.vertices, p.cycle
    else:
        verts, cycle = p
    edges = structure_edges(verts, cycle)
    w = weight if callable(weight) else (lambda u, v: Fraction(weight[edge_ref(u, v)]))
    status = [e in m for e in edges]
    seq = status + status[:1] if cycle else status
    if any(a == b for a, b in pairwise(seq)):
        raise NotAugmentingError(f"{verts} does not alternate")
    total = Fraction(0)
    for e, s in zip(edges, status):
        total += -w(*e) if s else w(*e)
    return total


@dataclass
class RoundedWeights:
    eps: Fraction
    n: int
    wmax: Fraction
    normalized: dict
    rounded: dict  # surviving edges only
    dropped: frozenset

    @property
    def unit(self) -> Fraction:
        return self.eps / self.n

    @property
    def w_min(self) -> Fraction | None:
        return min(self.rounded.values(), default=None)

    def weight(self, u, v) -> Fraction:
        return self.rounded.get(edge_ref(u, v), Fraction(0))


def round_weight(w: Fraction, wmax: Fraction, unit: Fraction) -> Fraction:
    return math.floor(w / wmax / unit) * unit


def preprocess(g: LabeledGraph, eps) -> RoundedWeights:
    eps = as_eps(eps, upper_inclusive=False)
    raw = {e: g.weight(*e) for e in g.edges()}
    if any(w <= 0 for w in raw.values()):
        raise InputError("edge weights must be positive")
    wmax = max(raw.values(), default=Fraction(1))
    unit = eps / max(g.n, 1)
    normalized = {e: w / wmax for e, w in raw.items()}
    rounded = {}
    dropped = set()
    for e, w in raw.items():
        r = round_weight(w, wmax, unit)
        if r > 0:
            rounded[e] = r
        else:
            dropped.add(e)
    return RoundedWeights(eps, g.n, wmax, normalized, rounded, frozenset(dropped))


def i_degree_bound(k: int, delta: int) -> int:
    d = max(delta, 1)
    per_vertex = sum((l + 2) * d**l for l in range(1, 2 * k + 2))
    return (2 * k + 2) * per_vertex


def struct_id(key: StructKey, n: int) -> int:
    verts, cycle = key
    base = n + 1
    x = 0
    for v in reversed((2 if cycle else 1,) + verts):
        x = x * base + v
    return x + 1


def structures_through(adj: Mapping, mate: Mapping, weight: Callable, a: int, b: int, k: int) -> dict:
    """All (M,[1,k])-augmenting paths and cycles using edge a-b, with their gains.

    ``adj`` must cover every vertex within distance 2k+1 of a or b. Gains
    are in whatever exact numeric type ``weight`` returns.
    """
    maxlen = 2 * k + 1
    e_matched = mate.get(a) == b
    w_e = weight(a, b)
    e_nonm = 0 if e_matched else 1
    e_gain = -w_e if e_matched else w_e

    def arms(start, banned):
        # (vertices, status of last edge, unmatched count, gain, vertex bitmask)
        out = [((), None, 0, 0, 0)]
        walk: list[int] = []

        def rec(x, need_matched, nonm, g, mask, depth):
            if need_matched:
                y = mate.get(x)
                cands = () if y is None else (y,)
            else:
                nonm += 1
                if nonm > k:
                    return
                m = mate.get(x)
                cands = [y for y in adj[x] if y != m]
            if depth >= maxlen - 1:
                return
            for y in cands:
                if y in banned or (mask >> y) & 1:
                    continue
                wy = weight(x, y)
                g2 = g - wy if need_matched else g + wy
                walk.append(y)
                m2 = mask | (1 << y)
                out.append((tuple(walk), need_matched, nonm, g2, m2))
                rec(y, not need_matched, nonm, g2, m2, depth + 1)
                walk.pop()

        rec(start, not e_matched, 0, 0, 0, 0)
        out.sort(key=lambda arm: len(arm[0]))
        return out

    found: dict = {}
    lefts = arms(a, {a, b})
    rights = arms(b, {a, b})
    budget = k - e_nonm
    for lv, lst, lnm, lg, lmask in lefts:
        room = maxlen - 1 - len(lv)
        first_matched = e_matched if lst is None else lst
        if not first_matched and (lv[-1] if lv else a) in mate:
            continue
        for rv, rst, rnm, rg, rmask in rights:
            if len(rv) > room:
                break
            if lnm + rnm > budget or lmask & rmask:
                continue
            total = lg + rg + e_gain
            if total <= 0:
                continue
            last_matched = e_matched if rst is None else rst
            if not last_matched and (rv[-1] if rv else b) in mate:
                continue
            found[canonical_structure(lv[::-1] + (a, b) + rv, False)] = total
    for rv, rst, rnm, rg, _ in rights:
        if len(rv) < 2 or len(rv) + 2 > maxlen:
            continue
        x = rv[-1]
        if a not in adj[x]:
            continue
        closing = mate.get(x) == a
        if closing == rst or closing == e_matched:
            continue
        if rnm + e_nonm + (0 if closing else 1) > k:
            continue
        wc = weight(x, a)
        total = rg + e_gain + (-wc if closing else wc)
        if total > 0:
            found[canonical_structure((a, b) + rv, True)] = total
    return found


class AugmentationGraphHandle(View):
    """I(M_{i−1}): nodes are level-i augmenting structures, adjacent when sharing a vertex."""

    def __init__(self, ctx: "_Context", level: int):
        self.ctx = ctx
        self.level = level
        n = ctx.g.n
        self.n = n
        self.id_bound = (n + 1) ** (2 * ctx.k + 3)
        self.degree_bound = i_degree_bound(ctx.k, ctx.g.max_degree)
        self.memo = {}
        self._nbrs: dict = {}
        self._ports: dict = {}

    def node_id(self, p):
        return struct_id(p, self.n)

    def neighbors(self, p):
        row = self._nbrs.get(p)
        if row is None:
            found = set()
            for x in p[0]:
                found |= self.ctx.structs_through_vertex(self.level, x).keys()
            found.discard(p)
            row = self._nbrs[p] = sorted(found)
        return row

    def ports(self, p):
        row = self._ports.get(p)
        if row is None:
            row = self._ports[p] = tuple((q, self.neighbors(q).index(p) + 1) for q in self.neighbors(p))
        return row

    def gain_index_of(self, p) -> int:
        cache = self.memo.setdefault("_gamma", {})
        g = cache.get(p)
        if g is None:
            g = cache[p] = gain_index(self.ctx.gain_of(self.level, p))
        return g


def ig_key(view, p):
    """Greedy order: larger gain index first, then larger color."""
    return (-view.gain_index_of(p), view_color(view, p))


class _Context:
    def __init__(self, session: ProbeSession, eps: Fraction):
        self.session = session
        self.g = session.graph
        self.eps = eps
        self.k, self.levels = mwm_parameters(eps)
        self.unit = eps / max(self.g.n, 1)
        self.wmax = self.g.max_weight
        self.wcache: dict = {}
        self.members: dict = {}
        self.augs: dict = {}
        self.by_edge: dict = {}
        self.by_vertex: dict = {}
        self.gains: dict = {}
        self.views: dict = {}

    def weight(self, u, v) -> int:
        """Rounded weight in units of ε/n (exact integer)."""
        e = (u, v) if u < v else (v, u)
        w = self.wcache.get(e)
        if w is None:
            raw = self.g.weight(*e)
            if raw <= 0:
                raise InputError("edge weights must be positive")
            w = self.wcache[e] = math.floor(raw / self.wmax / self.unit)
        return w

    def member(self, i, e) -> bool:
        if i == 0:
            return False
        key = (i, e)
        val = self.members.get(key)
        if val is None:
            val = self.members[key] = self.member(i - 1, e) ^ self.aug(i, e)
        return val

    def aug(self, i, e) -> bool:
        key = (i, e)
        val = self.augs.get(key)
        if val is None:
            h = self.iview(i)
            structs = sorted(self.structs_through_edge(i, e))
            val = any(view_simulate(h, MIS, p, ig_key) for p in structs)
            self.augs[key] = val
        return val

    def iview(self, i) -> AugmentationGraphHandle:
        h = self.views.get(i)
        if h is None:
            h = self.views[i] = AugmentationGraphHandle(self, i)
        return h

    def gain_of(self, i, p) -> Fraction:
        return self.gains[(i, p)] * self.unit

    def structs_through_edge(self, i, e) -> dict[StructKey, Fraction]:
        key = (i, e)
        found = self.by_edge.get(key)
        if found is None:
            if self.weight(*e) == 0:
                found = {}
            else:
                depth = 2 * self.k + 1
                a, b = e
                verts = set(collect_ball(self.g, self.session, a, depth).dist)
                verts |= collect_ball(self.g, self.session, b, depth).dist.keys()
                adj = {
                    v: [u for u, _ in probe_ports(self.session, v) if u in verts and self.weight(v, u) > 0]
                    for v in verts
                }
                mate: dict[int, int] = {}
                for v in verts:
                    for u in adj[v]:
                        if v < u and self.member(i - 1, (v, u)):
                            if v in mate or u in mate:
                                raise AssertionError(f"M_{i - 1} is not a matching near {(v, u)}")
                            mate[v], mate[u] = u, v
                found = structures_through(adj, mate, self.weight, a, b, self.k)
            for p, gval in found.items():
                self.gains[(i, p)] = gval
            self.by_edge[key] = found
        return found

    def structs_through_vertex(self, i, v) -> dict[StructKey, Fraction]:
        key = (i, v)
        found = self.by_vertex.get(key)
        if found is None:
            collect_ball(self.g, self.session, v, 2 * self.k + 1)
            found = {}
            for u, _ in probe_ports(self.session, v):
                found.update(self.structs_through_edge(i, edge_ref(v, u)))
            self.by_vertex[key] = found
        return found


def _context(g, session: ProbeSession, eps) -> _Context:
    if session.graph is not g:
        raise InputError("session belongs to a different graph")
    eps = as_eps(eps, upper_inclusive=False)
    ctx = session.memo.get(("_mwm", eps))
    if ctx is None:
        ctx = session.memo[("_mwm", eps)] = _Context(session, eps)
    return ctx


def _levels_check(i, ctx, lo):
    if not lo <= i <= ctx.levels:
        raise InputError(f"level {i} outside {lo}..{ctx.levels}")


def oracle_O_w(i: int, g, session: ProbeSession, e, eps) -> bool:
    ctx = _context(g, session, eps)
    _levels_check(i, ctx, 0)
    return ctx.member(i, g.check_edge(e))


def proc_A_w(i: int, g, session: ProbeSession, e, eps) -> bool:
    ctx = _context(g, session, eps)
    _levels_check(i, ctx, 1)
    return ctx.aug(i, g.check_edge(e))


def enumerate_aug(i: int, g, session: ProbeSession, e, eps) -> list[AugmentingStructure]:
    """Level-i structures (relative to M_{i−1}) that contain e, in canonical order."""
    ctx = _context(g, session, eps)
    _levels_check(i, ctx, 1)
    found = ctx.structs_through_edge(i, g.check_edge(e))
    out = []
    for key in sorted(found):
        gval = ctx.gain_of(i, key)
        out.append(AugmentingStructure(key[0], key[1], gval, gain_index(gval), i))
    return out


def probe_I(i: int, g, session: ProbeSession, p, eps) -> list[StructKey]:
    """Neighbors of structure p in I(M_i), in canonical order."""
    ctx = _context(g, session, eps)
    _levels_check(i + 1, ctx, 1)
    if isinstance(p, AugmentingStructure):
        p = p.key
    key = canonical_structure(*p)
    first = g.check_edge(structure_edges(*key)[0])
    if key not in ctx.structs_through_edge(i + 1, first):
        raise InputError(f"{p!r} is not an augmenting structure at level {i + 1}")
    return list(ctx.iview(i + 1).neighbors(key))


def apx_mwm(g, session: ProbeSession, e, eps) -> bool:
    ctx = _context(g, session, eps)
    return ctx.member(ctx.levels, g.check_edge(e))


# ---- global reference -------------------------------------------------------

def all_structures(adj: Mapping, weight: Callable, matching, k: int) -> dict[StructKey, Fraction]:
    """Every (M,[1,k])-augmenting path or cycle, by DFS from every start vertex."""
    mate = {}
    for u, v in matching:
        mate[u], mate[v] = v, u
    maxlen = 2 * k + 1
    found: dict[StructKey, Fraction] = {}

    def status(u, v):
        return mate.get(u) == v

    for s in sorted(adj):
        stack = [((s,), None, None, 0, Fraction(0))]
        while stack:
            walk, first, last, nonm, g = stack.pop()
            x = walk[-1]
            nedges = len(walk) - 1
            if nedges >= 1:
                ok = (first or s not in mate) and (last or x not in mate)
                if ok and g > 0:
                    found[canonical_structure(walk, False)] = g
                if nedges >= 3 and s in adj[x]:
                    c = status(x, s)
                    if c != last and c != first and nedges + 1 <= maxlen and nonm + (not c) <= k:
                        gc = g + (-weight(x, s) if c else weight(x, s))
                        if gc > 0:
                            found[canonical_structure(walk, True)] = gc
            if nedges == maxlen:
                continue
            for y in adj[x]:
                if y in walk:
                    continue
                st = status(x, y)
                if last is not None and st == last:
                    continue
                nm = nonm + (not st)
                if nm > k:
                    continue
                w = weight(x, y)
                stack.append((walk + (y,), st if first is None else first, st, nm, g - w if st else g + w))
    return found


def augmentation_view(structs, n: int, k: int, delta: int, gains: Mapping) -> ExplicitView:
    at: dict[int, list] = {}
    for p in structs:
        for v in p[0]:
            at.setdefault(v, []).append(p)
    adj = {}
    for p in structs:
        nb = {q for v in p[0] for q in at[v]}
        nb.discard(p)
        adj[p] = sorted(nb)
    view = ExplicitView(adj, lambda p: struct_id(p, n), (n + 1) ** (2 * k + 3), i_degree_bound(k, delta))
    view.gain_index_of = lambda p: gain_index(gains[p])
    return view


@dataclass
class LevelRecord:
    level: int
    before: frozenset
    after: frozenset
    structures: dict
    chosen: list


def global_apx_mwm(g: LabeledGraph, eps, *, history: bool = False):
    """Reference run on explicitly built I(M); returns the matching (or the per-level records)."""
    rw = preprocess(g, eps)
    k, levels = mwm_parameters(eps)
    adj = {v: [u for u in g.neighbors(v) if edge_ref(u, v) in rw.rounded] for v in g.vertices}
    m: frozenset = frozenset()
    records = []
    for i in range(1, levels + 1):
        structs = all_structures(adj, rw.weight, m, k)
        chosen = []
        after = m
        if structs:
            view = augmentation_view(structs, g.n, k, g.max_degree, structs)
            keys = {p: ig_key(view, p) for p in structs}
            vals = run_sequential(sorted(structs, key=keys.__getitem__), view.neighbors, MIS)
            chosen = sorted(p for p in structs if vals[p])
            flip = set(m)
            for p in chosen:
                flip.symmetric_difference_update(structure_edges(*p))
            after = frozenset(flip)
        records.append(LevelRecord(i, m, after, structs, chosen))
        m = after
    return records if history else set(m)
