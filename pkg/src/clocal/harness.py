"""Verification oracles, the consistency fuzzer and the experiment runner."""
from __future__ import annotations

import csv
import io
import json
import random
import statistics
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Mapping

import networkx as nx

from .distsim import get_algorithm, queries_of
from .errors import BudgetExceededError, InputError, VerificationError
from .graph import LabeledGraph, ProbeSession, generate, load_graph
from .mcm import as_eps

EDGE_BUDGET = 22


# ---- exact optima -----------------------------------------------------------

def _matchings_best(g: LabeledGraph, value: Callable[[tuple[int, int]], object]):
    edges = g.edges()
    if len(edges) > EDGE_BUDGET:
        raise BudgetExceededError(f"{len(edges)} edges exceed the exhaustive budget of {EDGE_BUDGET}")
    best = [0, ()]

    def rec(i, used, total, chosen):
        if total > best[0]:
            best[0], best[1] = total, tuple(chosen)
        for j in range(i, len(edges)):
            u, v = edges[j]
            if u in used or v in used:
                continue
            chosen.append(edges[j])
            rec(j + 1, used | {u, v}, total + value(edges[j]), chosen)
            chosen.pop()

    rec(0, frozenset(), 0, [])
    return best[0], set(best[1])


def brute_mcm(g: LabeledGraph) -> int:
    """Maximum matching size by exhaustive search over edge subsets."""
    return _matchings_best(g, lambda e: 1)[0]


def brute_mwm(g: LabeledGraph, weights: Mapping | None = None) -> Fraction:
    """Maximum matching weight by exhaustive search (weights default to the graph's)."""
    w = (lambda e: Fraction(weights.get(e, 0))) if weights is not None else (lambda e: g.weight(*e))
    return Fraction(_matchings_best(g, w)[0])


def max_gain_packing(structs: Mapping[tuple, Fraction]) -> Fraction:
    """Largest total gain of pairwise vertex-disjoint structures (exhaustive)."""
    verts = sorted({v for p in structs for v in p[0]})
    bit = {v: 1 << i for i, v in enumerate(verts)}
    by_low: dict[int, list[tuple[int, Fraction]]] = {}
    for p, gval in structs.items():
        mask = 0
        for v in p[0]:
            mask |= bit[v]
        for v in p[0]:
            by_low.setdefault(bit[v], []).append((mask, gval))
    full = (1 << len(verts)) - 1

    @lru_cache(maxsize=None)
    def best(decided: int) -> Fraction:
        if decided == full:
            return Fraction(0)
        low = ~decided & (decided + 1)
        out = best(decided | low)
        for mask, gval in by_low.get(low, ()):
            if not mask & decided:
                out = max(out, gval + best(decided | mask))
        return out

    return best(0)


def is_matching(edges) -> bool:
    seen = set()
    for u, v in edges:
        if u in seen or v in seen:
            return False
        seen.update((u, v))
    return True


def shortest_augmenting_path(g: LabeledGraph, matching) -> int | None:
    """Length (edges) of the shortest M-augmenting path, by exhaustive DFS; None if there is none."""
    mate = {}
    for u, v in matching:
        mate[u], mate[v] = v, u
    best = None
    for s in g.vertices:
        if s in mate:
            continue
        stack = [(s,)]
        while stack:
            p = stack.pop()
            length = len(p) - 1
            if best is not None and length >= best:
                continue
            x = p[-1]
            if length % 2 == 1 and x not in mate:
                best = length
                continue
            want_matched = length % 2 == 1
            for y in g.neighbors(x):
                if y not in p and (mate.get(x) == y) == want_matched:
                    stack.append(p + (y,))
    return best


# ---- solution predicates ----------------------------------------------------

def check_solution(g: LabeledGraph, problem: str, answers: Mapping) -> None:
    """Raise VerificationError unless ``answers`` solve ``problem`` on g."""
    if problem == "mis":
        chosen = {v for v, a in answers.items() if a}
        for u, v in g.edges():
            if u in chosen and v in chosen:
                raise VerificationError("not independent", (u, v))
        for v in g.vertices:
            if v not in chosen and not any(u in chosen for u in g.neighbors(v)):
                raise VerificationError("not maximal", v)
    elif problem in ("mm", "matching"):
        chosen = [e for e, a in answers.items() if a]
        if not is_matching(chosen):
            raise VerificationError("not a matching", sorted(chosen))
        if problem == "mm":
            covered = {x for e in chosen for x in e}
            for u, v in g.edges():
                if u not in covered and v not in covered:
                    raise VerificationError("matching not maximal", (u, v))
    elif problem == "coloring":
        for u, v in g.edges():
            if answers[u] == answers[v]:
                raise VerificationError("coloring not proper", (u, v))
    elif problem == "orientation":
        h = nx.DiGraph()
        h.add_nodes_from(g.vertices)
        for e, (tail, head) in answers.items():
            if {tail, head} != set(e):
                raise VerificationError("direction does not match edge", e)
            h.add_edge(tail, head)
        if not nx.is_directed_acyclic_graph(h):
            raise VerificationError("orientation has a cycle", nx.find_cycle(h))
    else:
        raise InputError(f"unknown problem {problem!r}")


PROBLEM_OF = {
    "color": "coloring",
    "color-seq": "coloring",
    "mis": "mis",
    "mm": "mm",
    "orient": "orientation",
    "mcm": "matching",
    "mwm": "matching",
}
KIND_OF_PROBLEM = {"mis": "vertex", "coloring": "vertex", "mm": "edge", "matching": "edge", "orientation": "edge"}


@dataclass
class FuzzReport:
    passed: bool
    trials: int
    queries: int
    message: str = ""
    witness: object = None
    orders: tuple = ()

    def __bool__(self):
        return self.passed


def consistency_fuzz(g: LabeledGraph, alg, trials: int, *, problem: str | None = None, eps=None, queries=None, seed: int = 0) -> FuzzReport:
    """Answer all queries in ``trials`` random orders; every order must agree and solve the problem.

    ``alg`` is an algorithm name (see ``distsim.ALGORITHMS``) or a callable
    ``alg(g, session, query)``, in which case ``problem`` is required.
    """
    if isinstance(alg, str):
        spec = get_algorithm(alg)
        fn, kind = spec.bind(eps), spec.kind
        problem = problem or PROBLEM_OF[alg]
    else:
        if problem not in KIND_OF_PROBLEM:
            raise InputError("a callable algorithm needs problem= one of " + ", ".join(sorted(KIND_OF_PROBLEM)))
        fn, kind = alg, KIND_OF_PROBLEM[problem]
    if trials < 1:
        raise InputError("trials must be ≥ 1")
    qs = list(queries) if queries is not None else queries_of(g, kind)
    rng = random.Random(seed)
    reference = None
    ref_order = None
    for _ in range(trials):
        order = qs[:]
        rng.shuffle(order)
        answers = {q: fn(g, ProbeSession(g, q), q) for q in order}
        if reference is None:
            reference, ref_order = answers, order
            continue
        for q in qs:
            if answers[q] != reference[q]:
                return FuzzReport(
                    False, trials, len(qs), f"answer to {q!r} depends on query order", q, (tuple(ref_order), tuple(order))
                )
    if reference is not None and queries is None:
        try:
            check_solution(g, problem, reference)
        except VerificationError as exc:
            return FuzzReport(False, trials, len(qs), str(exc), exc.witness)
    return FuzzReport(True, trials, len(qs))


# ---- experiments ------------------------------------------------------------

COLUMNS = ["algorithm", "n", "delta", "eps", "probes_max", "probes_mean", "radius_max", "rounds", "value", "optimum", "ratio"]


@dataclass
class ExperimentSpec:
    algorithm: str
    graph: dict
    eps: str | None = None
    queries: object = "all"  # "all" or a sample size
    sample_seed: int = 0
    verify: bool = False
    output: str | None = None

    @classmethod
    def from_dict(cls, d: Mapping) -> "ExperimentSpec":
        try:
            spec = cls(**d)
        except TypeError as exc:
            raise InputError(f"invalid experiment spec: {exc}") from exc
        spec.validate()
        return spec

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> None:
        alg = get_algorithm(self.algorithm)
        if alg.needs_eps:
            if self.eps is None:
                raise InputError(f"{self.algorithm} needs eps")
            as_eps(self.eps, upper_inclusive=self.algorithm != "mwm")
        if not (self.queries == "all" or (isinstance(self.queries, int) and self.queries > 0)):
            raise InputError("queries must be 'all' or a positive integer")
        if not isinstance(self.graph, Mapping) or not ("file" in self.graph or "generator" in self.graph):
            raise InputError("graph must name a 'file' or a 'generator'")

    def build_graph(self) -> LabeledGraph:
        if "file" in self.graph:
            return load_graph(self.graph["file"])
        return generate(
            self.graph["generator"],
            self.graph.get("params", ()),
            seed=int(self.graph.get("seed", 0)),
            weighted=bool(self.graph.get("weighted", False)),
        )


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def run_experiment(spec: ExperimentSpec) -> dict:
    spec.validate()
    g = spec.build_graph()
    alg = get_algorithm(spec.algorithm)
    eps = as_eps(spec.eps, upper_inclusive=spec.algorithm != "mwm") if alg.needs_eps else None
    qs = queries_of(g, alg.kind)
    if spec.queries != "all" and spec.queries < len(qs):
        qs = sorted(random.Random(spec.sample_seed).sample(qs, spec.queries), key=str)
    answers, probes, radii, rounds = {}, [], [], []
    fn = alg.bind(eps)
    for q in qs:
        s = ProbeSession(g, q)
        answers[q] = fn(g, s, q)
        probes.append(s.probe_count)
        radii.append(s.radius)
        rounds.append(s.radius_from(q if alg.kind == "vertex" else min(q)))
    full = len(qs) == len(queries_of(g, alg.kind))
    value = optimum = ratio = None
    if spec.algorithm in ("mcm", "mwm", "mm"):
        chosen = [e for e, a in answers.items() if a]
        value = len(chosen) if spec.algorithm != "mwm" else sum((g.weight(*e) for e in chosen), Fraction(0))
        if spec.verify and full:
            optimum = brute_mwm(g) if spec.algorithm == "mwm" else brute_mcm(g)
            ratio = float(Fraction(value) / optimum) if optimum else 1.0
    elif spec.algorithm in ("color", "color-seq"):
        value = max(answers.values(), default=0)
    elif spec.algorithm == "mis":
        value = sum(1 for a in answers.values() if a)
    if spec.verify and full:
        check_solution(g, PROBLEM_OF[spec.algorithm], answers)
    return {
        "algorithm": spec.algorithm,
        "n": g.n,
        "delta": g.max_degree,
        "eps": "" if eps is None else str(eps),
        "probes_max": max(probes, default=0),
        "probes_mean": statistics.fmean(probes) if probes else 0.0,
        "radius_max": max(radii, default=0),
        "rounds": max(rounds, default=0),
        "value": value,
        "optimum": optimum,
        "ratio": ratio,
    }


def render(rows: list[dict], fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([{c: _fmt(r[c]) for c in COLUMNS} for r in rows], indent=2) + "\n"
    raise InputError(f"unknown output format {fmt!r}")


def bench(specs, output=None, fmt: str = "csv") -> str:
    """Run experiment specs in order and emit one row each; returns the rendered text."""
    specs = [s if isinstance(s, ExperimentSpec) else ExperimentSpec.from_dict(s) for s in specs]
    rows = [run_experiment(s) for s in specs]
    text = render(rows, fmt)
    if output is not None:
        Path(output).write_text(text)
    return text
