"""Synchronous message-passing simulator and ball-collection execution of local algorithms.

Each node starts with its local input: its ID, degree, Δ, n, the largest
edge weight, and its port list (neighbor IDs with reciprocal ports and
edge weights). In every round all nodes send one message per port; a
message sent in round t is read at the start of round t+1. After r
rounds of forwarding everything it knows, a node holds the port lists of
all vertices within distance r, which is enough to answer every probe a
local algorithm of probe radius r makes from it.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Callable, Sequence

from .coloring import color
from .errors import InputError, RadiusViolationError, SimulationError
from .graph import LabeledGraph, ProbeSession, edge_ref
from .mcm import apx_mcm
from .mwm import apx_mwm
from .orientation import orient_edge
from .seqsim import l_color_delta_plus_1, l_mis, l_mm

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LocalInput:
    id: int
    degree: int
    delta: int
    n: int
    ports: tuple[tuple[int, int, Fraction], ...]
    max_weight: Fraction = Fraction(1)
    weighted: bool = False


class NodeProgram:
    """Behavior of one node. Subclasses override the four hooks."""

    def init(self, local: LocalInput):
        return local

    def send(self, state, round_no: int) -> Sequence:
        """One message per port (index 0 is port 1)."""
        return ()

    def receive(self, state, inbox: Sequence, round_no: int):
        return state

    def output(self, state):
        return state


@dataclass
class RoundTrace:
    rounds: int
    message_sizes: list[int] = field(default_factory=list)
    outputs: dict = field(default_factory=dict)


def local_inputs(g: LabeledGraph) -> dict[int, LocalInput]:
    wmax = g.max_weight
    out = {}
    for v in g.vertices:
        ports = tuple((u, j, g.weight(v, u)) for u, j in g.ports(v))
        out[v] = LocalInput(v, len(ports), g.max_degree, g.n, ports, wmax, g.is_weighted)
    return out


def _size(msg) -> int:
    try:
        return len(msg)
    except TypeError:
        return 0 if msg is None else 1


def run(g: LabeledGraph, program: NodeProgram, r: int, *, workers: int | None = None, order: Sequence[int] | None = None) -> RoundTrace:
    """Run ``program`` on every node for exactly r synchronous rounds.

    ``workers`` runs the handlers of one round on a thread pool;
    ``order`` fixes the order in which nodes are stepped within a round.
    Neither may change the result.
    """
    if not isinstance(r, int) or r < 0:
        raise InputError(f"round count must be a non-negative integer, got {r!r}")
    inputs = local_inputs(g)
    nodes = list(order) if order is not None else list(g.vertices)
    if sorted(nodes) != list(g.vertices):
        raise InputError("order must be a permutation of the vertices")

    def guarded(v, rnd, fn, *args):
        try:
            return fn(*args)
        except Exception as exc:  # noqa: BLE001 - re-raised with node and round
            raise SimulationError(v, rnd, exc) from exc

    pool = ThreadPoolExecutor(max_workers=workers) if workers else None

    def each(fn):
        if pool is None:
            return {v: fn(v) for v in nodes}
        futures = {v: pool.submit(fn, v) for v in nodes}
        return {v: futures[v].result() for v in nodes}

    try:
        state = each(lambda v: guarded(v, 0, program.init, inputs[v]))
        trace = RoundTrace(r)
        for rnd in range(1, r + 1):
            outbox = each(lambda v: list(guarded(v, rnd, program.send, state[v], rnd)))
            for v in nodes:
                if len(outbox[v]) != inputs[v].degree:
                    raise SimulationError(v, rnd, ValueError("must send exactly one message per port"))
            # barrier: every message of this round is fixed before anyone reads
            inbox = {v: [outbox[u][j - 1] for u, j, _ in inputs[v].ports] for v in nodes}
            trace.message_sizes.append(sum(_size(m) for v in nodes for m in outbox[v]))
            state = each(lambda v: guarded(v, rnd, program.receive, state[v], inbox[v], rnd))
        trace.outputs = {v: guarded(v, r, program.output, state[v]) for v in sorted(nodes)}
    finally:
        if pool is not None:
            pool.shutdown()
    return trace


class FloodIDs(NodeProgram):
    """Each node learns the IDs within distance r."""

    def init(self, local):
        return (local.degree, frozenset([local.id]))

    def send(self, state, round_no):
        return [state[1]] * state[0]

    def receive(self, state, inbox, round_no):
        return (state[0], state[1].union(*inbox))

    def output(self, state):
        return state[1]


class BallCollection(NodeProgram):
    """Forward the whole known subgraph every round; output the collected port lists."""

    def init(self, local):
        return (local, {local.id: local.ports})

    def send(self, state, round_no):
        snapshot = MappingProxyType(dict(state[1]))
        return [snapshot] * state[0].degree

    def receive(self, state, inbox, round_no):
        known = dict(state[1])
        for msg in inbox:
            for v, row in msg.items():
                known.setdefault(v, row)
        return (state[0], known)

    def output(self, state):
        return state


class BallGraph:
    """Graph interface backed only by what one node has collected.

    Probing a vertex whose port list was not collected raises
    ``RadiusViolationError``.
    """

    def __init__(self, owner: int, local: LocalInput, known: dict):
        self.owner = owner
        self.n = local.n
        self.max_degree = local.delta
        self.max_weight = local.max_weight
        self.is_weighted = local.weighted
        self._known = known

    def check_vertex(self, v):
        if not isinstance(v, int) or not 1 <= v <= self.n:
            raise InputError(f"unknown vertex {v!r}")

    def _row(self, v, probe=None):
        self.check_vertex(v)
        row = self._known.get(v)
        if row is None:
            raise RadiusViolationError(self.owner, probe if probe is not None else (v, None))
        return row

    def neighbor(self, v, i):
        row = self._row(v, (v, i))
        if not isinstance(i, int) or i < 1:
            raise InputError(f"port must be a positive integer, got {i!r}")
        if i > len(row):
            return None
        u, j, _ = row[i - 1]
        return (u, j)

    def ports(self, v):
        return tuple((u, j) for u, j, _ in self._row(v))

    def neighbors(self, v):
        return [u for u, _, _ in self._row(v)]

    def has_edge(self, u, v):
        try:
            return any(x == v for x, _, _ in self._row(u))
        except (RadiusViolationError, InputError):
            return False

    def check_edge(self, e):
        try:
            u, v = e
        except (TypeError, ValueError) as exc:
            raise InputError(f"not an edge: {e!r}") from exc
        if u == v or not self.has_edge(u, v):
            raise InputError(f"not an edge: {e!r}")
        return edge_ref(u, v)

    def weight(self, u, v):
        for x, _, w in self._row(u, (u, None)):
            if x == v:
                return w
        raise InputError(f"not an edge: {(u, v)}")


# ---- algorithm registry -----------------------------------------------------

@dataclass(frozen=True)
class LocalAlgorithm:
    name: str
    kind: str  # "vertex" or "edge"
    fn: Callable
    needs_eps: bool = False

    def bind(self, eps=None) -> Callable:
        if self.needs_eps:
            if eps is None:
                raise InputError(f"{self.name} needs --eps")
            return lambda g, s, q: self.fn(g, s, q, eps)
        return self.fn


ALGORITHMS = {
    "color": LocalAlgorithm("color", "vertex", color),
    "mis": LocalAlgorithm("mis", "vertex", l_mis),
    "color-seq": LocalAlgorithm("color-seq", "vertex", l_color_delta_plus_1),
    "mm": LocalAlgorithm("mm", "edge", l_mm),
    "orient": LocalAlgorithm("orient", "edge", orient_edge),
    "mcm": LocalAlgorithm("mcm", "edge", apx_mcm, True),
    "mwm": LocalAlgorithm("mwm", "edge", apx_mwm, True),
}


def get_algorithm(name: str) -> LocalAlgorithm:
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise InputError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}") from None


def queries_of(g, kind: str) -> list:
    return list(g.vertices) if kind == "vertex" else g.edges()


def _home(q, kind):
    return q if kind == "vertex" else min(q)


@dataclass
class Sweep:
    answers: dict
    probes: dict
    radii: dict

    @property
    def radius(self) -> int:
        return max(self.radii.values(), default=0)


def centlocal_sweep(g, kind: str, alg: Callable, queries=None) -> Sweep:
    """Answer queries one by one, each in a fresh session.

    Radii are measured from the node that would answer the query in the
    distributed setting (the vertex itself, or an edge's smaller endpoint).
    """
    answers, probes, radii = {}, {}, {}
    for q in queries if queries is not None else queries_of(g, kind):
        s = ProbeSession(g, q)
        answers[q] = alg(g, s, q)
        probes[q] = s.probe_count
        radii[q] = s.radius_from(_home(q, kind))
    return Sweep(answers, probes, radii)


def simulate_centlocal(g: LabeledGraph, kind: str, alg: Callable, r: int, *, workers: int | None = None, order=None) -> RoundTrace:
    """Collect r-balls, then let every node answer its own queries locally.

    Vertex queries are answered by the vertex; edge queries by the smaller
    endpoint. ``trace.outputs[v]`` maps each query answered at v to its answer.
    """
    if kind not in ("vertex", "edge"):
        raise InputError(f"query kind must be 'vertex' or 'edge', got {kind!r}")
    trace = run(g, BallCollection(), r, workers=workers, order=order)
    outputs = {}
    for v in sorted(trace.outputs):
        local, known = trace.outputs[v]
        bg = BallGraph(v, local, known)
        if kind == "vertex":
            mine = [v]
        else:
            mine = [(v, u) for u, _, _ in local.ports if u > v]
        outputs[v] = {q: alg(bg, ProbeSession(bg, q), q) for q in mine}
    trace.outputs = outputs
    return trace


def merged(trace: RoundTrace) -> dict:
    out = {}
    for answers in trace.outputs.values():
        out.update(answers)
    return out


@dataclass
class DistResult:
    answers: dict
    rounds: int
    trace: RoundTrace
    sweep: Sweep | None = None


def dist_run(g: LabeledGraph, name: str, eps=None, rounds: int | None = None, **kw) -> DistResult:
    """Distributed execution with the round count taken from a dry run's measured radius."""
    spec = get_algorithm(name)
    alg = spec.bind(eps)
    sweep = None
    if rounds is None:
        sweep = centlocal_sweep(g, spec.kind, alg)
        rounds = sweep.radius
    log.debug("%s: running %d rounds", name, rounds)
    trace = simulate_centlocal(g, spec.kind, alg, rounds, **kw)
    return DistResult(merged(trace), rounds, trace, sweep)


def dist_mcm(g, eps, **kw) -> DistResult:
    return dist_run(g, "mcm", eps, **kw)


def dist_mwm(g, eps, **kw) -> DistResult:
    return dist_run(g, "mwm", eps, **kw)


def dist_orientation(g, **kw) -> DistResult:
    return dist_run(g, "orient", **kw)


def measured_rounds(g, name: str, eps=None, queries=None) -> int:
    """Rounds needed to simulate ``name`` on g: the largest radius over the given queries."""
    spec = get_algorithm(name)
    return centlocal_sweep(g, spec.kind, spec.bind(eps), queries).radius
