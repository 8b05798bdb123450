from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from clocal.graph import LabeledGraph, ProbeSession


@st.composite
def graphs(draw, min_n=1, max_n=12, max_degree=4, weighted=False):
    """Simple graphs on 1..n with every degree ≤ max_degree, ports in ID order."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    picks = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    deg = [0] * (n + 1)
    edges = []
    for (u, v), take in zip(pairs, picks):
        if take and deg[u] < max_degree and deg[v] < max_degree:
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    weights = None
    if weighted:
        nums = draw(st.lists(st.integers(1, 20), min_size=len(edges), max_size=len(edges)))
        weights = {e: Fraction(x, 20) for e, x in zip(edges, nums)}
    return LabeledGraph.from_edges(n, edges, weights)


def sweep(g, fn, queries):
    """Answer each query in its own fresh session."""
    return {q: fn(g, ProbeSession(g, q), q) for q in queries}
