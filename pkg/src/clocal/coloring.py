"""Deterministic stateless O(Δ²) vertex coloring in the probe model.

Pipeline for a node x of a view with degree bound Δ and ID bound N:

1. Edge partition: edge {x, y} with p_i(x) = y, p_j(y) = x belongs to the
   part {i, j}. Every part has maximum degree 2.
2. Each part is 3-colored: ID colors, repeated Δ=2 polynomial reductions
   down to at most 25 colors, then one elimination round per color ≥ 3
   (highest first) in which nodes of that color pick the smallest free
   color among {0, 1, 2}.
3. The per-part colors are combined into one color (a vector of Δ² digits
   in base 3 when that is the smaller encoding, otherwise the sorted list
   of (part, color) pairs of the ≤ Δ parts a node touches).
4. Two best-degree reductions and one quadratic reduction shrink the
   palette to at most ``FINAL_PALETTE_CONSTANT · Δ²`` colors.

Colors returned by the public functions are 1-based.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .errors import InputError
from .graph import ProbeSession, probe_ports
from .reduction import Palette, Reduction, plan
from .views import View, base_view

FINAL_PALETTE_CONSTANT = 16


@dataclass(frozen=True)
class ColoringSchedule:
    id_bound: int
    delta: int
    part_steps: tuple[Reduction, ...]
    part_palette: int
    dense: bool
    combined: Palette
    steps: tuple[Reduction | None, ...]
    palettes: tuple[Palette, ...]

    @property
    def palette(self) -> int:
        return int(self.palettes[-1])


@lru_cache(maxsize=512)
def coloring_schedule(id_bound: int, delta: int) -> ColoringSchedule:
    """Reduction plan determined by the ID bound and degree bound alone."""
    if id_bound < 1:
        raise InputError("id bound must be positive")
    part_steps = []
    pal = Palette.of(id_bound)
    while True:
        r = plan(pal, 2)
        if r is None:
            break
        part_steps.append(r)
        pal = Palette.of(r.palette_out)
    part_palette = int(pal)
    if delta == 0:
        one = Palette.of(1)
        return ColoringSchedule(id_bound, 0, tuple(part_steps), part_palette, True, one, (), (one,))
    dense = delta * delta * math.log2(3) <= delta * math.log2(3 * delta * delta + 1)
    combined = Palette.power(3, delta * delta) if dense else Palette.power(3 * delta * delta + 1, delta)
    steps: list[Reduction | None] = []
    palettes = [combined]
    for degree in (None, None, 2):
        r = plan(palettes[-1], delta, degree)
        steps.append(r)
        palettes.append(palettes[-1] if r is None else Palette.of(r.palette_out))
    return ColoringSchedule(
        id_bound, delta, tuple(part_steps), part_palette, dense, combined, tuple(steps), tuple(palettes)
    )


class _State:
    """Per-query, per-view memo tables for the coloring pipeline."""

    def __init__(self, view: View):
        self.view = view
        self.sched = coloring_schedule(view.id_bound, view.degree_bound)
        self.pnbr: dict = {}
        self.pcol: dict = {}
        self.pfin: dict = {}
        self.code: dict = {}
        self.layer: dict = {}

    def part_neighbors(self, part, x):
        key = (part, x)
        res = self.pnbr.get(key)
        if res is None:
            a, b = part
            row = self.view.ports(x)
            res = []
            if a <= len(row) and row[a - 1][1] == b:
                res.append(row[a - 1][0])
            if a != b and b <= len(row) and row[b - 1][1] == a:
                res.append(row[b - 1][0])
            res = self.pnbr[key] = tuple(res)
        return res

    def part_round(self, part, x, t):
        if t == 0:
            return self.view.node_id(x) - 1
        key = (part, x, t)
        c = self.pcol.get(key)
        if c is None:
            own = self.part_round(part, x, t - 1)
            others = [self.part_round(part, y, t - 1) for y in self.part_neighbors(part, x)]
            c = self.pcol[key] = self.sched.part_steps[t - 1].apply(own, others)
        return c

    def part_final(self, part, x):
        """0-based color in {0,1,2} after the elimination rounds."""
        key = (part, x)
        c = self.pfin.get(key)
        if c is not None:
            return c
        nbrs = self.part_neighbors(part, x)
        if not nbrs:
            self.pfin[key] = 0
            return 0
        t = len(self.sched.part_steps)
        c = self.part_round(part, x, t)
        if c >= 3:
            # x recolors in the round for color c; neighbors with larger colors
            # have already settled, smaller ones ≥ 3 are still outside {0,1,2}
            used = set()
            for y in nbrs:
                cy = self.part_round(part, y, t)
                if cy < 3:
                    used.add(cy)
                elif cy > c:
                    used.add(self.part_final(part, y))
            c = min({0, 1, 2} - used)
        self.pfin[key] = c
        return c

    def parts_of(self, x):
        return sorted({(min(i, j), max(i, j)) for i, (_, j) in enumerate(self.view.ports(x), 1)})

    def combined_code(self, x):
        c = self.code.get(x)
        if c is None:
            delta = self.sched.delta
            c = 0
            if self.sched.dense:
                for a, b in self.parts_of(x):
                    c += self.part_final((a, b), x) * 3 ** ((a - 1) * delta + (b - 1))
            else:
                base = 3 * delta * delta + 1
                for t, (a, b) in enumerate(self.parts_of(x)):
                    idx = (a - 1) * delta + (b - 1)
                    c += (3 * idx + self.part_final((a, b), x) + 1) * base**t
            self.code[x] = c
        return c

    def layered(self, s, x):
        if s == 0:
            return self.combined_code(x)
        key = (s, x)
        c = self.layer.get(key)
        if c is None:
            r = self.sched.steps[s - 1]
            if r is None:
                c = self.layered(s - 1, x)
            else:
                others = [self.layered(s - 1, y) for y in self.view.neighbors(x)]
                c = r.apply(self.layered(s - 1, x), others)
            self.layer[key] = c
        return c

    def color(self, x) -> int:
        if self.sched.delta == 0:
            return 1
        return self.layered(len(self.sched.steps), x) + 1


def _state(view: View) -> _State:
    st = view.memo.get("_coloring")
    if st is None:
        st = view.memo["_coloring"] = _State(view)
    return st


def view_color(view: View, x) -> int:
    """Final color of node x of any view (1-based)."""
    return _state(view).color(x)


def view_palette(view: View) -> int:
    return coloring_schedule(view.id_bound, view.degree_bound).palette


def palette_bound(g) -> int:
    """Size of the final palette used on graph g."""
    return coloring_schedule(g.n, g.max_degree).palette


def _check_session(g, session: ProbeSession):
    if session.graph is not g:
        raise InputError("session belongs to a different graph")


def part_of_edge(g, session: ProbeSession, e) -> tuple[int, int]:
    """The unordered port pair {i, j} naming the part that contains e."""
    _check_session(g, session)
    u, v = g.check_edge(e)
    for i, (y, j) in enumerate(probe_ports(session, u), 1):
        if y == v:
            return (min(i, j), max(i, j))
    raise InputError(f"not an edge: {e!r}")  # pragma: no cover


def three_color_part(g, session: ProbeSession, part, v: int) -> int:
    _check_session(g, session)
    a, b = sorted(part)
    if a < 1 or b > max(g.max_degree, 1):
        raise InputError(f"no such part {part!r}")
    g.check_vertex(v)
    return _state(base_view(session)).part_final((a, b), v) + 1


def combined_color(g, session: ProbeSession, v: int) -> tuple[int, ...]:
    """Vector of the Δ² per-part colors of v, indexed by (i-1)·Δ + (j-1) for i ≤ j."""
    _check_session(g, session)
    g.check_vertex(v)
    delta = g.max_degree
    st = _state(base_view(session))
    vec = [1] * (delta * delta)
    for a, b in st.parts_of(v):
        vec[(a - 1) * delta + (b - 1)] = st.part_final((a, b), v) + 1
    return tuple(vec)


def combined_palette(g) -> Palette:
    return coloring_schedule(g.n, g.max_degree).combined


def reduce_once(g, session: ProbeSession, prior: Callable[[int], int], palette: int, v: int, *, degree: int | None = None) -> int:
    """One reduction round applied to the proper coloring ``prior`` (colors 1..palette).

    Reads the prior colors of v and of its neighbors only. The output
    palette is ``reduction_palette(palette, Δ)``.
    """
    _check_session(g, session)
    r = plan(Palette.of(palette), g.max_degree, degree)
    own = prior(v)
    if r is None:
        return own
    others = [prior(u) - 1 for u, _ in probe_ports(session, v)]
    return r.apply(own - 1, others) + 1


def reduction_palette(palette: int, delta: int, degree: int | None = None) -> int:
    r = plan(Palette.of(palette), delta, degree)
    return palette if r is None else r.palette_out


def color(g, session: ProbeSession, v: int) -> int:
    """Final color of v; proper, with palette ``palette_bound(g) ≤ 16·Δ²``."""
    _check_session(g, session)
    g.check_vertex(v)
    return view_color(base_view(session), v)
