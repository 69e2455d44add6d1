# test/unit_testing/test_separation.py
"""
Pruebas de m-separación, modelos inducidos, maximalidad y Markov local ordenado
"""

import itertools
import logging

import numpy as np
import pytest
from hypothesis import given

from common.errors import GraphError, OrderError, QueryError
from graphs.ancestral import minimal_order
from graphs.generators import random_ancestral_graph
from graphs.graph import Graph
from graphs.order import PartialOrder
from independence.model import Triple
from independence.relations import is_markovian
from separation.induced import induced_model, is_maximal, ordered_local_markov_holds
from separation.msep import SeparationQuery, connecting_path, is_connecting_path, m_separated, reachable

from .strategies import PROPERTY_SETTINGS, ancestral_graphs, graphs_with_orders, seeds

logger = logging.getLogger(__name__)


def _inducing_path_graph() -> Graph:
    """a↔b↔c↔d con b→d y c→a: a y d no son adyacentes pero nada los separa"""
    return Graph.from_edges(
        ["a", "b", "c", "d"],
        [("b", "d"), ("c", "a")],
        [("a", "b"), ("b", "c"), ("c", "d")],
    )


# ==========================================
# CONSULTAS
# ==========================================

def test_query_rejects_empty_sets():
    with pytest.raises(QueryError):
        SeparationQuery.of([], ["b"])


def test_query_rejects_overlap(chain4):
    with pytest.raises(QueryError):
        m_separated(chain4, ["i"], ["i"])
    with pytest.raises(QueryError):
        m_separated(chain4, ["i"], ["j"], ["j"])


def test_unknown_node(chain4):
    with pytest.raises(GraphError):
        m_separated(chain4, ["i"], ["z"])


def test_unknown_method(chain4):
    with pytest.raises(QueryError):
        m_separated(chain4, ["i"], ["j"], method="moralización")


# ==========================================
# M-SEPARACIÓN
# ==========================================

@pytest.mark.parametrize("method", ["reachability", "paths"])
@pytest.mark.parametrize("a, b, c, expected", [
    (["k"], ["j"], ["l"], True),
    (["i"], ["l"], [], True),
    (["i"], ["l"], ["k"], False),
    (["i"], ["j"], [], True),
    (["i"], ["j"], ["k"], False),
    (["i"], ["j"], ["k", "l"], True),
    (["k"], ["j"], [], False),
])
def test_chain_separations(chain4, method, a, b, c, expected):
    assert m_separated(chain4, a, b, c, method=method) is expected


def test_collider_opened_by_conditioning(chain4):
    assert connecting_path(chain4, ["i"], ["l"], ["k"]) == ("i", "k", "l")
    assert connecting_path(chain4, ["i"], ["j"], ["k"]) == ("i", "k", "l", "j")
    assert connecting_path(chain4, ["i"], ["l"]) is None


def test_colliders_on_arc_paths(latent4):
    assert m_separated(latent4, ["3"], ["2"])
    assert not m_separated(latent4, ["3"], ["2"], ["1"])
    assert m_separated(latent4, ["3"], ["4"], ["1"])
    assert not m_separated(latent4, ["3"], ["4"], ["1", "2"])


def test_is_connecting_path(chain4):
    assert is_connecting_path(chain4, ["i", "k", "l"], ["k"])
    assert not is_connecting_path(chain4, ["i", "k", "l"])
    assert is_connecting_path(chain4, ["k", "l", "j"])
    assert not is_connecting_path(chain4, ["k", "l", "j"], ["l"])


@pytest.mark.parametrize("path", [["i"], ["i", "k", "i"], ["i", "l"]])
def test_is_connecting_path_rejects_non_paths(chain4, path):
    with pytest.raises(GraphError):
        is_connecting_path(chain4, path)


def test_reachable(chain4):
    assert reachable(chain4, ["i"]) == {"k"}
    assert reachable(chain4, ["i"], ["k"]) == {"l", "j"}


@PROPERTY_SETTINGS
@given(ancestral_graphs(min_nodes=2, max_nodes=5))
def test_reachability_agrees_with_path_search(g):
    for i, j in itertools.combinations(g.nodes, 2):
        others = [label for label in g.nodes if label not in (i, j)]
        for size in range(len(others) + 1):
            for c in itertools.combinations(others, size):
                assert m_separated(g, [i], [j], c) == m_separated(g, [i], [j], c, method="paths")


@PROPERTY_SETTINGS
@given(ancestral_graphs(min_nodes=2, max_nodes=5))
def test_connecting_path_is_connecting(g):
    i, j = g.nodes[0], g.nodes[-1]
    path = connecting_path(g, [i], [j])
    if path is None:
        assert m_separated(g, [i], [j])
    else:
        assert path[0] == i and path[-1] == j
        assert is_connecting_path(g, path)


# ==========================================
# MODELO INDUCIDO Y MAXIMALIDAD
# ==========================================

def test_induced_model_of_chain(chain4):
    model = induced_model(chain4)
    assert model.holds(["i"], ["j"])
    assert model.holds(["k"], ["j"], ["l"])
    assert model.holds(["j"], ["i"])
    assert not model.holds(["i"], ["l"], ["k"])
    assert model.holds(["i"], ["l", "j"])
    assert model.provenance["source"] == "graph"


def test_induced_model_of_collider(collider3):
    model = induced_model(collider3)
    assert list(model.canonical_triples()) == [Triple.of(["a"], ["b"])]
    assert len(model) == 2


@PROPERTY_SETTINGS
@given(ancestral_graphs(min_nodes=2, max_nodes=4))
def test_induced_model_matches_separation(g):
    model = induced_model(g)
    for triple in model.triples():
        assert m_separated(g, triple.a, triple.b, triple.c)


def test_chain_is_maximal(chain4, latent4):
    assert is_maximal(chain4)
    assert is_maximal(latent4)


def test_inducing_path_breaks_maximality():
    verdict = is_maximal(_inducing_path_graph())
    assert not verdict
    assert verdict.witness == ("a", "d")


# ==========================================
# MARKOV LOCAL ORDENADO
# ==========================================

def test_ordered_local_markov_on_own_model(chain4):
    assert ordered_local_markov_holds(induced_model(chain4), chain4, minimal_order(chain4))


def test_ordered_local_markov_witness(chain4):
    model = induced_model(chain4).without_statements([(["k"], ["j"], ["i", "l"])])
    verdict = ordered_local_markov_holds(model, chain4, minimal_order(chain4))
    assert not verdict
    assert verdict.witness["node"] == "k"
    assert verdict.witness["statement"] == Triple.of(["k"], ["j"], ["i", "l"])
    assert set(verdict.witness["ancestral_set"]) == {"i", "k", "l", "j"}


def test_ordered_local_markov_rejects_invalid_order(chain4):
    order = PartialOrder.from_pairs(chain4.nodes, [("k", "i")])
    with pytest.raises(OrderError):
        ordered_local_markov_holds(induced_model(chain4), chain4, order)


@PROPERTY_SETTINGS
@given(graphs_with_orders(max_nodes=4))
def test_graph_model_is_ordered_local_markov(pair):
    g, order = pair
    assert ordered_local_markov_holds(induced_model(g), g, order)


@PROPERTY_SETTINGS
@given(graphs_with_orders(max_nodes=4), seeds)
def test_ordered_local_markov_equals_global(pair, seed):
    g, order = pair
    other = random_ancestral_graph(np.random.default_rng(seed), len(g.nodes), labels=g.nodes)
    model = induced_model(other)
    local = ordered_local_markov_holds(model, g, order).holds
    assert local == is_markovian(model, g).holds
