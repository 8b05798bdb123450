"""Port-labeled graphs, per-query probe sessions and graph I/O."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import GraphFormatError, InputError

Edge = tuple[int, int]


def edge_ref(u: int, v: int) -> Edge:
    """Canonical form of the edge {u, v}: smaller endpoint first."""
    if u == v:
        raise InputError(f"self-loop {u}-{v} is not an edge")
    return (u, v) if u < v else (v, u)


def parse_weight(text) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"bad weight {text!r}") from exc


class LabeledGraph:
    """Immutable undirected graph with fixed port numbering.

    ``ports[v - 1]`` lists the neighbors of vertex ``v`` in port order
    (port 1 first). Vertices are ``1..n``. ``weights`` maps canonical
    edges to rationals; an unweighted graph reports weight 1 everywhere.
    """

    __slots__ = ("n", "max_degree", "_adj", "_weights", "_num_edges", "_hash")

    def __init__(self, ports: Sequence[Sequence[int]], weights: Mapping[Edge, object] | None = None):
        n = len(ports)
        adj: list[tuple[tuple[int, int], ...]] = [()]
        position: list[dict[int, int]] = [{}]
        for v, nbrs in enumerate(ports, 1):
            pos = {}
            for i, u in enumerate(nbrs, 1):
                if not isinstance(u, int) or not 1 <= u <= n:
                    raise InputError(f"vertex {v}: neighbor {u!r} out of range 1..{n}")
                if u == v:
                    raise InputError(f"vertex {v}: self-loop")
                if u in pos:
                    raise InputError(f"vertex {v}: parallel edge to {u}")
                pos[u] = i
            position.append(pos)
        count = 0
        for v in range(1, n + 1):
            row = []
            for u in ports[v - 1]:
                j = position[u].get(v)
                if j is None:
                    raise InputError(f"port lists not reciprocal: {v} lists {u} but not vice versa")
                row.append((u, j))
            count += len(row)
            adj.append(tuple(row))
        self.n = n
        self._adj = tuple(adj)
        self._num_edges = count // 2
        self.max_degree = max((len(r) for r in adj), default=0)
        self._weights = None
        if weights is not None:
            w = {}
            for key, val in weights.items():
                e = edge_ref(*key)
                if position[e[0]].get(e[1]) is None:
                    raise InputError(f"weight given for non-edge {e}")
                w[e] = parse_weight(val)
            if len(w) != self._num_edges:
                raise InputError("weighted graph must give a weight for every edge")
            self._weights = w
        self._hash = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], weights=None) -> "LabeledGraph":
        """Build a graph whose ports are sorted by neighbor ID."""
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise InputError(f"edge {(u, v)} has endpoint outside 1..{n}")
            if u == v:
                raise InputError(f"self-loop at {u}")
            nbrs[u - 1].add(v)
            nbrs[v - 1].add(u)
        return cls([sorted(s) for s in nbrs], weights)

    # raw access: used for construction checks and by reference oracles, never by local algorithms
    def neighbor(self, v: int, i: int):
        try:
            row = self._adj[v] if v >= 1 else None
        except (IndexError, TypeError):
            row = None
        if row is None:
            raise InputError(f"unknown vertex {v!r}")
        if not isinstance(i, int) or i < 1:
            raise InputError(f"port must be a positive integer, got {i!r}")
        return row[i - 1] if i <= len(row) else None

    def ports(self, v: int) -> tuple[tuple[int, int], ...]:
        self.check_vertex(v)
        return self._adj[v]

    def neighbors(self, v: int) -> list[int]:
        self.check_vertex(v)
        return [u for u, _ in self._adj[v]]

    def degree(self, v: int) -> int:
        self.check_vertex(v)
        return len(self._adj[v])

    def check_vertex(self, v):
        if not isinstance(v, int) or not 1 <= v <= self.n:
            raise InputError(f"unknown vertex {v!r}")

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def num_edges(self) -> int:
        return self._num_edges

    def edges(self) -> list[Edge]:
        return [(v, u) for v in range(1, self.n + 1) for u, _ in self._adj[v] if v < u]

    def has_edge(self, u: int, v: int) -> bool:
        if not (isinstance(u, int) and isinstance(v, int)) or not (1 <= u <= self.n and 1 <= v <= self.n):
            return False
        return any(x == v for x, _ in self._adj[u])

    def check_edge(self, e) -> Edge:
        try:
            u, v = e
        except (TypeError, ValueError) as exc:
            raise InputError(f"not an edge: {e!r}") from exc
        if u == v or not self.has_edge(u, v):
            raise InputError(f"not an edge: {e!r}")
        return edge_ref(u, v)

    @property
    def is_weighted(self) -> bool:
        return self._weights is not None

    def weight(self, u: int, v: int) -> Fraction:
        e = edge_ref(u, v)
        if self._weights is None:
            if not self.has_edge(*e):
                raise InputError(f"not an edge: {e}")
            return Fraction(1)
        try:
            return self._weights[e]
        except KeyError:
            raise InputError(f"not an edge: {e}") from None

    @property
    def max_weight(self) -> Fraction:
        if self._weights is None:
            return Fraction(1)
        return max(self._weights.values(), default=Fraction(1))

    def with_weights(self, weights) -> "LabeledGraph":
        return LabeledGraph([[u for u, _ in self._adj[v]] for v in self.vertices], weights)

    def to_networkx(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(self.vertices)
        for u, v in self.edges():
            h.add_edge(u, v, weight=self.weight(u, v))
        return h

    def _key(self):
        w = None if self._weights is None else tuple(sorted(self._weights.items()))
        return (self._adj, w)

    def __eq__(self, other):
        return isinstance(other, LabeledGraph) and self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        kind = "weighted " if self.is_weighted else ""
        return f"<{kind}LabeledGraph n={self.n} m={self._num_edges} max_degree={self.max_degree}>"


class ProbeSession:
    """Accounting for a single query.

    Every probe of the graph made while answering one query goes through
    this object. Answers to repeated probes are served from a cache that
    lives exactly as long as the session (``cache=False`` counts every
    invocation). ``memo`` is scratch space for algorithms during the
    query; it is discarded with the session.
    """

    def __init__(self, graph, origin=None, *, cache: bool = True):
        self.graph = graph
        self.origin = origin
        self.cache_enabled = cache
        self.probe_count = 0
        self.probed: set[tuple[int, int]] = set()
        self.memo: dict = {}
        self._cache: dict[tuple[int, int], object] = {}

    def probe(self, v: int, i: int):
        key = (v, i)
        if self.cache_enabled:
            hit = self._cache.get(key, self)
            if hit is not self:
                return hit
        ans = self.graph.neighbor(v, i)
        self.probe_count += 1
        self.probed.add(key)
        if self.cache_enabled:
            self._cache[key] = ans
        return ans

    @property
    def probed_vertices(self) -> set[int]:
        return {v for v, _ in self.probed}

    def radius_from(self, center) -> int:
        """Max distance from ``center`` (vertex or edge) to a probed vertex."""
        targets = self.probed_vertices
        if not targets:
            return 0
        sources = [center] if isinstance(center, int) else list(center)
        dist = {s: 0 for s in sources}
        remaining = set(targets) - set(sources)
        best = 0
        queue = deque(sources)
        while queue and remaining:
            x = queue.popleft()
            for y, _ in self.graph.ports(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    if y in remaining:
                        remaining.discard(y)
                        best = dist[y]
                    queue.append(y)
        if remaining:
            raise InputError(f"probed vertices unreachable from {center!r}")
        return best

    @property
    def radius(self) -> int:
        if self.origin is None:
            raise InputError("session has no origin; use radius_from()")
        return self.radius_from(self.origin)


def probe(g, session: ProbeSession, v: int, i: int):
    """Return ``(u, j)`` where u is the i-th neighbor of v and p_j(u) = v, or None."""
    if session.graph is not g:
        raise InputError("session belongs to a different graph")
    return session.probe(v, i)


def probe_ports(session: ProbeSession, v: int) -> tuple[tuple[int, int], ...]:
    """All ports of v, probing 1, 2, ... until a null answer (or Δ is reached)."""
    cache = session.memo.setdefault("_ports", {})
    row = cache.get(v)
    if row is None:
        out = []
        for i in range(1, session.graph.max_degree + 1):
            ans = session.probe(v, i)
            if ans is None:
                break
            out.append(ans)
        if not out and session.graph.max_degree == 0:
            session.graph.neighbor(v, 1)  # still validates v
        row = cache[v] = tuple(out)
    return row


@dataclass
class Ball:
    center: int
    radius: int
    dist: dict[int, int]
    ports: dict[int, tuple[tuple[int, int], ...]] = field(default_factory=dict)

    @property
    def vertices(self) -> set[int]:
        return set(self.dist)

    def adjacency(self) -> dict[int, list[int]]:
        """Neighbor lists restricted to the ball, in port order."""
        return {v: [u for _, u in self.ports[v]] for v in self.dist}

    @property
    def edges(self) -> set[Edge]:
        return {edge_ref(v, u) for v, row in self.ports.items() for _, u in row}


def collect_ball(g, session: ProbeSession, center: int, r: int) -> Ball:
    """Induced subgraph on all vertices within distance r of ``center``.

    Port lists in the result keep the original port numbers but only
    mention neighbors inside the ball.
    """
    if session.graph is not g:
        raise InputError("session belongs to a different graph")
    if not isinstance(r, int) or r < 0:
        raise InputError(f"radius must be a non-negative integer, got {r!r}")
    if r == 0:
        g.check_vertex(center)
        return Ball(center, 0, {center: 0}, {center: ()})
    dist = {center: 0}
    full: dict[int, tuple] = {}
    queue = deque([center])
    while queue:
        v = queue.popleft()
        full[v] = probe_ports(session, v)
        if dist[v] < r:
            for u, _ in full[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    queue.append(u)
    ports = {v: tuple((i, u) for i, (u, _) in enumerate(row, 1) if u in dist) for v, row in full.items()}
    return Ball(center, r, dist, ports)


# ---- generators -------------------------------------------------------------

def ring(n: int) -> LabeledGraph:
    if n < 3:
        raise InputError("a ring needs at least 3 vertices")
    return LabeledGraph.from_edges(n, [(v, v % n + 1) for v in range(1, n + 1)])


def path_graph(n: int) -> LabeledGraph:
    if n < 1:
        raise InputError("a path needs at least 1 vertex")
    return LabeledGraph.from_edges(n, [(v, v + 1) for v in range(1, n)])


def grid(rows: int, cols: int) -> LabeledGraph:
    if rows < 1 or cols < 1:
        raise InputError("grid dimensions must be positive")
    vid = lambda r, c: r * cols + c + 1  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return LabeledGraph.from_edges(rows * cols, edges)


def random_regular(n: int, d: int, seed: int = 0) -> LabeledGraph:
    if d < 0 or n < 1 or d >= n or (n * d) % 2:
        raise InputError(f"no {d}-regular graph on {n} vertices")
    h = nx.random_regular_graph(d, n, seed=seed)
    return LabeledGraph.from_edges(n, [(u + 1, v + 1) for u, v in h.edges()])


def random_graph(n: int, max_degree: int, m: int, seed: int = 0) -> LabeledGraph:
    """Up to m random edges on n vertices with every degree capped at ``max_degree``."""
    if n < 1 or max_degree < 0 or m < 0:
        raise InputError("bad random graph parameters")
    rng = random.Random(seed)
    deg = [0] * (n + 1)
    edges: set[Edge] = set()
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    rng.shuffle(pairs)
    for u, v in pairs:
        if len(edges) >= m:
            break
        if deg[u] < max_degree and deg[v] < max_degree:
            edges.add((u, v))
            deg[u] += 1
            deg[v] += 1
    return LabeledGraph.from_edges(n, sorted(edges))


def random_weights(g: LabeledGraph, seed: int = 0, denominator: int = 100) -> LabeledGraph:
    rng = random.Random(seed)
    return g.with_weights({e: Fraction(rng.randint(1, denominator), denominator) for e in g.edges()})


GENERATORS = {
    "ring": (ring, ("n",)),
    "path": (path_graph, ("n",)),
    "grid": (grid, ("rows", "cols")),
    "random-regular": (random_regular, ("n", "d")),
    "random": (random_graph, ("n", "max_degree", "m")),
}


def generate(kind: str, params: Mapping | Sequence = (), seed: int = 0, weighted: bool = False) -> LabeledGraph:
    """Build a graph from a named generator; deterministic in ``seed``."""
    try:
        fn, names = GENERATORS[kind]
    except KeyError:
        raise InputError(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}") from None
    if isinstance(params, Mapping):
        args = [params[k] for k in names if k in params]
    else:
        args = list(params)
    if len(args) != len(names):
        raise InputError(f"{kind} takes parameters {names}")
    try:
        args = [int(a) for a in args]
    except (TypeError, ValueError) as exc:
        raise InputError(f"{kind} parameters must be integers") from exc
    if kind in ("random-regular", "random"):
        g = fn(*args, seed=seed)
    else:
        g = fn(*args)
    return random_weights(g, seed) if weighted else g


# ---- text format ------------------------------------------------------------

def parse_graph(text: str) -> LabeledGraph:
    lines = [(no, ln.split("#", 1)[0].strip()) for no, ln in enumerate(text.splitlines(), 1)]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise GraphFormatError("empty graph file", 1)
    no, head = lines[0]
    try:
        n, m = (int(t) for t in head.split())
    except ValueError:
        raise GraphFormatError("expected header 'n m'", no) from None
    if n < 0 or m < 0:
        raise GraphFormatError("negative size in header", no)
    ports: list[list[int] | None] = [None] * n
    idx = 1
    while idx < len(lines) and lines[idx][1] != "weights:":
        no, ln = lines[idx]
        vtext, sep, rest = ln.partition(":")
        if not sep:
            raise GraphFormatError("expected 'v: u1 u2 ...'", no)
        try:
            v = int(vtext)
            row = [int(t) for t in rest.split()]
        except ValueError:
            raise GraphFormatError("non-integer vertex ID", no) from None
        if not 1 <= v <= n:
            raise GraphFormatError(f"vertex {v} outside 1..{n}", no)
        if ports[v - 1] is not None:
            raise GraphFormatError(f"vertex {v} listed twice", no)
        ports[v - 1] = row
        idx += 1
    for v, row in enumerate(ports, 1):
        if row is None:
            ports[v - 1] = []
    weights = None
    if idx < len(lines):
        weights = {}
        for no, ln in lines[idx + 1:]:
            parts = ln.split()
            if len(parts) != 3:
                raise GraphFormatError("expected 'u v p/q'", no)
            try:
                e = edge_ref(int(parts[0]), int(parts[1]))
                weights[e] = Fraction(parts[2])
            except (ValueError, ZeroDivisionError):
                raise GraphFormatError(f"bad weight line {ln!r}", no) from None
    try:
        g = LabeledGraph(ports, weights)
    except InputError as exc:
        raise GraphFormatError(str(exc), None) from exc
    if g.num_edges != m:
        raise GraphFormatError(f"header says {m} edges, found {g.num_edges}", lines[0][0])
    return g


def load_graph(path) -> LabeledGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_graph(text)


def dump_graph(g: LabeledGraph) -> str:
    out = [f"{g.n} {g.num_edges}"]
    for v in g.vertices:
        out.append(f"{v}: " + " ".join(str(u) for u in g.neighbors(v)) if g.degree(v) else f"{v}:")
    if g.is_weighted:
        out.append("weights:")
        for u, v in g.edges():
            out.append(f"{u} {v} {g.weight(u, v)}")
    return "\n".join(out) + "\n"


def save_graph(g: LabeledGraph, path) -> None:
    Path(path).write_text(dump_graph(g))
