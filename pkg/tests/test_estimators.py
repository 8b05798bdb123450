from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from clocal.errors import InputError
from clocal.estimators import (
    ApproxMCM,
    ApproxMWM,
    LocalColoring,
    LocalGreedyColoring,
    LocalMaximalMatching,
    LocalMIS,
    LocalOrientation,
    check_graph,
)
from clocal.graph import random_graph, random_weights, ring
from clocal.harness import check_solution


def test_coloring_predict_all():
    g = ring(30)
    est = LocalColoring().fit(g)
    cols = est.predict()
    assert cols.shape == (30,)
    check_solution(g, "coloring", dict(zip(g.vertices, cols.tolist())))
    assert est.probe_counts_.shape == (30,) and est.radii_.max() >= 1


def test_orientation_rows():
    g = random_graph(15, 3, 20, 1)
    out = LocalOrientation().fit(g).predict()
    assert out.shape == (g.num_edges, 2)
    for (u, v), (t, h) in zip(g.edges(), out.tolist()):
        assert {t, h} == {u, v}


@pytest.mark.parametrize("cls,problem", [(LocalMIS, "mis"), (LocalGreedyColoring, "coloring")])
def test_vertex_estimators(cls, problem):
    g = random_graph(25, 4, 40, 2)
    out = cls().fit(g).predict()
    check_solution(g, problem, dict(zip(g.vertices, out.tolist())))


def test_edge_queries_subset():
    g = ring(8)
    est = LocalMaximalMatching().fit(g)
    assert est.predict(np.array([[1, 2], [2, 3]])).shape == (2,)
    assert est.predict(np.empty((0, 2), dtype=int)).shape == (0,)


def test_networkx_and_array_inputs_agree():
    h = nx.cycle_graph(range(1, 9))
    arr = np.array(list(h.edges))
    a = LocalMIS().fit(h).predict()
    b = LocalMIS().fit(arr).predict()
    assert a.tolist() == b.tolist()


def test_networkx_weights_carried():
    h = nx.path_graph(range(1, 4))
    nx.set_edge_attributes(h, {(1, 2): 0.5, (2, 3): 1}, "weight")
    g = check_graph(h)
    assert g.weight(1, 2) == Fraction(1, 2)


def test_approx_matchings():
    g = random_weights(random_graph(10, 3, 13, 4), 4)
    mcm = ApproxMCM(eps=Fraction(1, 2)).fit(g).predict()
    mwm = ApproxMWM(eps=0.9).fit(g).predict()
    for ans in (mcm, mwm):
        check_solution(g, "matching", dict(zip(g.edges(), ans.tolist())))


def test_clone_and_params():
    est = ApproxMCM(eps=Fraction(1, 3))
    assert est.get_params() == {"eps": Fraction(1, 3)}
    assert clone(est).eps == Fraction(1, 3)
    assert LocalMIS().get_params() == {}


def test_not_fitted():
    with pytest.raises(NotFittedError):
        LocalMIS().predict()


@pytest.mark.parametrize(
    "graph",
    [nx.DiGraph([(1, 2)]), nx.path_graph(3), np.array([[1.5, 2.0]]), np.array([1, 2, 3])],
)
def test_bad_graphs(graph):
    with pytest.raises(InputError):
        check_graph(graph)


def test_bad_queries_and_eps():
    est = LocalMIS().fit(ring(5))
    with pytest.raises(InputError):
        est.predict([9])
    with pytest.raises(InputError):
        LocalMaximalMatching().fit(ring(5)).predict([[1, 3]])
    with pytest.raises(InputError):
        ApproxMWM(eps=1).fit(ring(5))
