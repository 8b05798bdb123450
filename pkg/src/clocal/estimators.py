"""Estimator-style wrappers: ``fit`` takes a graph, ``predict`` answers queries.

The oracles have nothing to learn, so ``fit`` only validates and stores the
graph. Each ``predict`` call answers every query in its own fresh session.
"""
from __future__ import annotations

from fractions import Fraction

import networkx as nx
import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .distsim import get_algorithm, queries_of
from .errors import InputError
from .graph import LabeledGraph, ProbeSession
from .mcm import as_eps


def check_graph(graph) -> LabeledGraph:
    """Coerce a LabeledGraph, a networkx graph, an edge list or an (m, 2) array."""
    if isinstance(graph, LabeledGraph):
        return graph
    if isinstance(graph, nx.Graph):
        if graph.is_directed() or graph.is_multigraph():
            raise InputError("expected a simple undirected graph")
        nodes = sorted(graph.nodes)
        if nodes != list(range(1, len(nodes) + 1)):
            raise InputError("networkx graph nodes must be 1..n")
        edges = list(graph.edges)
        weights = None
        if edges and all("weight" in graph.edges[e] for e in edges):
            weights = {e: Fraction(graph.edges[e]["weight"]) for e in edges}
        return LabeledGraph.from_edges(len(nodes), edges, weights)
    arr = np.asarray(graph)
    if arr.ndim != 2 or arr.shape[1] != 2 or not np.issubdtype(arr.dtype, np.integer):
        raise InputError("edge array must have integer shape (m, 2)")
    n = int(arr.max()) if arr.size else 0
    return LabeledGraph.from_edges(n, [tuple(map(int, row)) for row in arr])


def check_queries(g: LabeledGraph, queries, kind: str) -> list:
    """Validate queries against g; ``None`` means every vertex or edge."""
    if queries is None:
        return queries_of(g, kind)
    arr = np.asarray(queries)
    if kind == "vertex":
        if arr.ndim != 1 or (arr.size and not np.issubdtype(arr.dtype, np.integer)):
            raise InputError("vertex queries must be a 1-d integer array")
        out = [int(v) for v in arr]
        for v in out:
            g.check_vertex(v)
        return out
    if arr.size == 0:
        return []
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError("edge queries must have shape (m, 2)")
    return [g.check_edge((int(u), int(v))) for u, v in arr]


def check_eps(eps, *, upper_inclusive: bool = True) -> Fraction:
    return as_eps(eps, upper_inclusive=upper_inclusive)


class LocalOracle(BaseEstimator):
    algorithm: str = ""

    def _fn(self):
        return get_algorithm(self.algorithm).fn

    def fit(self, graph, y=None):
        self.graph_ = check_graph(graph)
        self.kind_ = get_algorithm(self.algorithm).kind
        self.n_vertices_ = self.graph_.n
        self.max_degree_ = self.graph_.max_degree
        self._answer = self._fn()
        return self

    def predict(self, queries=None) -> np.ndarray:
        check_is_fitted(self, "graph_")
        qs = check_queries(self.graph_, queries, self.kind_)
        answers, probes, radii = [], [], []
        for q in qs:
            s = ProbeSession(self.graph_, q)
            answers.append(self._answer(self.graph_, s, q))
            probes.append(s.probe_count)
            radii.append(s.radius)
        self.probe_counts_ = np.asarray(probes, dtype=np.int64)
        self.radii_ = np.asarray(radii, dtype=np.int64)
        if answers and isinstance(answers[0], tuple):
            return np.asarray(answers, dtype=np.int64).reshape(len(answers), 2)
        return np.asarray(answers)


class LocalColoring(LocalOracle):
    algorithm = "color"


class LocalOrientation(LocalOracle):
    """predict returns (tail, head) rows."""

    algorithm = "orient"


class LocalMIS(LocalOracle):
    algorithm = "mis"


class LocalMaximalMatching(LocalOracle):
    algorithm = "mm"


class LocalGreedyColoring(LocalOracle):
    algorithm = "color-seq"


class ApproxMCM(LocalOracle):
    algorithm = "mcm"

    def __init__(self, eps=Fraction(1, 2)):
        self.eps = eps

    def _fn(self):
        return get_algorithm(self.algorithm).bind(check_eps(self.eps))


class ApproxMWM(LocalOracle):
    algorithm = "mwm"

    def __init__(self, eps=Fraction(1, 2)):
        self.eps = eps

    def _fn(self):
        return get_algorithm(self.algorithm).bind(check_eps(self.eps, upper_inclusive=False))
