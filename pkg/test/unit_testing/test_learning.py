# test/unit_testing/test_learning.py
"""
Pruebas del algoritmo natural de aprendizaje, la equivalencia de Markov y
la auditoría de modelos frente a G0
"""

import itertools
import logging

import numpy as np
import pytest
from hypothesis import given

from common.errors import BoundExceededError, MethodMismatchError, NoStableOrientationError, UniverseMismatchError
from common.report import validate_report
from graphs.generators import all_dags, random_dag, random_maximal_ancestral_graph
from graphs.graph import Graph
from graphs.graph_io import serialize_graph
from independence.model import IndependenceModel, Triple
from learning.audit import BASE_HYPOTHESES, audit, outputs_equivalent
from learning.equivalence import (
    Method,
    dag_uniqueness_property,
    equivalence_class,
    markov_equivalent,
    uniqueness_property,
)
from learning.orientations import canonical_choice, natural_learn, stable_orientations
from separation.induced import induced_model

from .strategies import PROPERTY_SETTINGS, dags, maximal_ancestral_graphs, seeds

logger = logging.getLogger(__name__)


@pytest.fixture
def arc_only_model() -> IndependenceModel:
    """⟨1,2|∅⟩ y ⟨1,3|∅⟩: solo 2↔3 es estable"""
    return IndependenceModel.from_statements(["1", "2", "3"], [(["1"], ["2"]), (["1"], ["3"])])


def _abc(arrows):
    return Graph.from_edges(["a", "b", "c"], arrows)


# ==========================================
# EQUIVALENCIA DE MARKOV
# ==========================================

def test_graph_is_equivalent_to_itself(chain4):
    for method in Method:
        assert markov_equivalent(chain4, chain4, method)


def test_reversed_chain_is_dag_equivalent():
    forward = _abc([("a", "b"), ("b", "c")])
    backward = _abc([("c", "b"), ("b", "a")])
    assert markov_equivalent(forward, backward, Method.DAG)
    assert markov_equivalent(forward, backward, Method.BRUTE)


def test_collider_witness_by_method():
    chain = _abc([("a", "b"), ("b", "c")])
    collider = _abc([("a", "b"), ("c", "b")])

    dag = markov_equivalent(chain, collider, Method.DAG)
    assert not dag
    assert dag.witness == {"kind": "v_configuration", "triple": ("a", "b", "c"), "in": "second"}

    brute = markov_equivalent(chain, collider, Method.BRUTE)
    assert not brute
    assert brute.witness == {"kind": "triple", "triple": Triple.of(["a"], ["c"]), "in": "second"}
    assert brute.to_jsonable()["witness"]["triple"] == {"a": ["a"], "b": ["c"], "c": []}


def test_skeleton_witness():
    verdict = markov_equivalent(_abc([("a", "b")]), _abc([("b", "c")]), Method.DAG)
    assert verdict.witness == {"kind": "skeleton", "only_in_first": [("a", "b")], "only_in_second": [("b", "c")]}


def test_diamond_graphs_differ_as_mags(diamond_g1, diamond_g2):
    verdict = markov_equivalent(diamond_g1, diamond_g2, Method.MAG)
    assert not verdict
    assert verdict.witness == {"kind": "minimal_collider_path", "path": ("1", "2", "4"), "in": "second"}
    assert not markov_equivalent(diamond_g1, diamond_g2, Method.BRUTE)


def test_dag_method_rejects_arcs(diamond_g1, diamond_g2):
    with pytest.raises(MethodMismatchError):
        markov_equivalent(diamond_g1, diamond_g2, Method.DAG)


def test_mag_method_rejects_non_maximal():
    g = Graph.from_edges(["a", "b", "c", "d"], [("b", "d"), ("c", "a")], [("a", "b"), ("b", "c"), ("c", "d")])
    with pytest.raises(MethodMismatchError):
        markov_equivalent(g, g, Method.MAG)


def test_equivalence_needs_same_nodes(chain4, collider3):
    with pytest.raises(UniverseMismatchError):
        markov_equivalent(chain4, collider3)


def test_dag_equivalence_class_of_chain(chain4):
    members = equivalence_class(chain4, dag_only=True)
    assert len(members) == 2
    assert chain4 in members
    assert all(member.parents("k") == {"i", "l"} for member in members)


def test_mag_equivalence_class_is_brute_equivalent(chain4):
    members = equivalence_class(chain4)
    assert chain4 in members
    assert len(members) > 2
    assert all(markov_equivalent(chain4, member, Method.BRUTE) for member in members)


@PROPERTY_SETTINGS
@given(dags(min_nodes=2, max_nodes=4), seeds)
def test_dag_criterion_matches_brute_force(g, seed):
    h = random_dag(np.random.default_rng(seed), len(g.nodes), labels=g.nodes)
    assert markov_equivalent(g, h, Method.DAG).equivalent == markov_equivalent(g, h, Method.BRUTE).equivalent


@PROPERTY_SETTINGS
@given(maximal_ancestral_graphs(min_nodes=2, max_nodes=4), seeds)
def test_mag_criterion_matches_brute_force(g, seed):
    h = random_maximal_ancestral_graph(np.random.default_rng(seed), len(g.nodes), labels=g.nodes)
    assert markov_equivalent(g, h, Method.MAG).equivalent == markov_equivalent(g, h, Method.BRUTE).equivalent


@pytest.mark.slow
def test_dag_criterion_on_every_pair_of_four_node_dags():
    graphs = list(all_dags(["1", "2", "3", "4"]))
    assert len(graphs) == 543
    keys = [induced_model(g).keys for g in graphs]
    for (first, g), (second, h) in itertools.combinations(enumerate(graphs), 2):
        assert markov_equivalent(g, h, Method.DAG).equivalent == (keys[first] == keys[second])


# ==========================================
# ALGORITMO NATURAL
# ==========================================

def test_chain_model_learns_equivalent_graphs(chain4, chain_j):
    output = natural_learn(chain_j)
    assert output.chosen == canonical_choice(output.graphs)
    assert len(output.orders) == len(output.graphs)
    assert outputs_equivalent(list(output.graphs), chain4, Method.BRUTE)
    assert output.to_jsonable()["dag_only"] is False


def test_diamond_has_non_equivalent_stable_orientations(diamond_g1, diamond_g2, diamond_j):
    outputs = stable_orientations(diamond_j)
    assert diamond_g1 in outputs
    assert diamond_g2 in outputs
    assert not uniqueness_property(diamond_j)
    assert dag_uniqueness_property(diamond_j)


def test_diamond_dag_outputs_are_equivalent_to_g1(diamond_g1, diamond_j):
    outputs = stable_orientations(diamond_j, dag_only=True)
    assert outputs
    assert all(g.is_dag for g in outputs)
    assert outputs_equivalent(outputs, diamond_g1, Method.DAG)


def test_only_arc_orientation_is_stable(arc_only_model):
    output = natural_learn(arc_only_model)
    assert output.graphs == (Graph.from_edges(["1", "2", "3"], [], [("2", "3")]),)
    with pytest.raises(NoStableOrientationError):
        natural_learn(arc_only_model, dag_only=True)


def test_outputs_equivalent_without_outputs(chain4):
    verdict = outputs_equivalent([], chain4, Method.BRUTE)
    assert not verdict
    assert verdict.witness == {"reason": "no-stable-orientation"}


def test_skeleton_bound():
    model = IndependenceModel.empty([str(label) for label in range(1, 7)])
    with pytest.raises(BoundExceededError):
        stable_orientations(model)


def test_parallel_scan_matches_serial(diamond_j):
    assert stable_orientations(diamond_j, jobs=2) == stable_orientations(diamond_j, jobs=1)


@PROPERTY_SETTINGS
@given(maximal_ancestral_graphs(min_nodes=2, max_nodes=4))
def test_graph_models_learn_their_class(g):
    outputs = stable_orientations(induced_model(g))
    assert g in outputs
    assert outputs_equivalent(outputs, g, Method.BRUTE)


# ==========================================
# AUDITORÍA
# ==========================================

def test_audit_of_chain_model(chain4, chain_j):
    report = audit(chain_j, chain4, fixture="chain4")
    expected = {
        "g0_maximal": True,
        "markovian": True,
        "converse_pairwise": True,
        "ordered_up": True,
        "ordered_down": True,
        "v_stable": True,
        "skeleton_match": True,
        "learner_equivalent": True,
        "uniqueness": True,
        "minimally_markovian": True,
        "faithful": False,
        "singleton_transitive": False,
        "graphical": False,
    }
    for name, holds in expected.items():
        assert report.flag(name) is holds, name
    assert report.flags["faithful"].witness == {"extra": {"a": ["i"], "b": ["j"], "c": ["k"]}}
    assert report.ledger["skeleton_recovery"].status == "observed"
    assert report.ledger["minimal_markov"].status == "observed"
    assert set(BASE_HYPOTHESES) <= set(report.ledger["skeleton_recovery"].hypotheses)
    assert report.ledger["skeleton_recovery"].theorem == "Thm 8"
    assert report.ledger["minimal_markov"].theorem == "Cor 9"
    assert report.inconsistencies() == []
    assert report.provenance.fixture == "chain4"
    validate_report(report.to_json_dict())


def test_audit_of_orientation_model(orientation_g0, orientation_j):
    report = audit(orientation_j, orientation_g0)
    assert report.flag("v_stable") is True
    assert report.flag("orientation_faithful") is False
    assert report.flags["orientation_faithful"].witness == {"v_configuration": ["j", "l", "k"], "s": ["s"]}
    assert report.inconsistencies() == []


def test_audit_with_arc_g0_skips_dag_learner(latent4):
    report = audit(induced_model(latent4), latent4)
    assert report.flag("dag_learner_equivalent") is None
    assert report.ledger["dag_learner_equivalence"].status == "n/a"
    assert report.flag("graphical") is True
    assert report.flags["graphical"].witness.startswith("nodes:")
    assert report.inconsistencies() == []


def test_audit_details_list_orientations(chain4, chain_j):
    report = audit(chain_j, chain4)
    outputs = report.details["stable_orientations"]
    assert serialize_graph(chain4) in outputs
    assert report.details["chosen"] == min(outputs)


def test_audit_universe_mismatch(chain_j, collider3):
    with pytest.raises(UniverseMismatchError):
        audit(chain_j, collider3)


def test_text_report_mentions_flags(chain4, chain_j):
    text = audit(chain_j, chain4).render_text()
    assert "faithful" in text
    assert "skeleton_recovery" in text
