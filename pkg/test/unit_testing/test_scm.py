# test/unit_testing/test_scm.py
"""
Pruebas de SCMs discretos: conjunta exacta, consultas de independencia,
condiciones sobre mecanismos y ruidos, formato JSON y auditoría
"""

import json
import logging
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from common.errors import FixtureError, GraphError, ParseError, ScmPreconditionError, ScmValidationError
from common.report import validate_report
from graphs.graph import Graph
from independence.model import Triple
from independence.relations import is_markovian
from scm.conditions import (
    arrow_laws_identical,
    check_noise_injective,
    check_noise_support_smaller,
    check_noise_surjective,
    check_noise_uniform,
    check_non_constant_fibers,
    check_positivity,
    independent_arrows,
    uniform_noise_instances,
    uniform_noise_obstruction,
)
from scm.examples import bernoulli, load_builtin, tabulate, uniform
from scm.generators import random_scm
from scm.model import NoiseBlock, Scm, ci_query, induced_model_scm
from scm.scm_audit import scm_audit
from scm.scm_io import load_scm, parse_probability, parse_scm, save_scm, scm_to_dict, serialize_scm
from separation.msep import SeparationQuery

from .strategies import PROPERTY_SETTINGS, scms

logger = logging.getLogger(__name__)


def _query(a, b, c=()):
    return SeparationQuery.of(a, b, c)


def _two_node_scm(noise_values, noise_law, supports, function, name):
    """X2 uniforme en su soporte, X1 = function(X2, ε1) con ε1 según noise_law"""
    graph = Graph.from_edges(["1", "2"], [("2", "1")])
    blocks = (NoiseBlock(("1",), noise_law), NoiseBlock(("2",), uniform(supports["2"])))
    mechanisms = {
        "2": tabulate("2", [], supports, supports["2"], lambda e: e),
        "1": tabulate("1", ["2"], supports, noise_values, function),
    }
    return Scm(graph, supports, blocks, mechanisms, name=name)


@pytest.fixture
def collapsing_noise_scm():
    # ε1 = 0 y ε1 = 2 dan la misma salida; X1 sigue dependiendo de X2
    law = {(0,): Fraction(1, 2), (1,): Fraction(1, 4), (2,): Fraction(1, 4)}
    return _two_node_scm((0, 1, 2), law, {"1": (0, 1), "2": (0, 1)},
                         lambda x2, e: (x2 + e) % 2, "mod2-ruido3")


@pytest.fixture
def small_noise_scm():
    # X1 = X2 + ε1 con ε1 en {0, 1}: cuatro valores de X1 frente a dos de ruido
    return _two_node_scm((0, 1), bernoulli(Fraction(1, 2)), {"1": (0, 1, 2, 3), "2": (0, 1, 2)},
                         lambda x2, e: x2 + e, "suma-ruido2")


# ==========================================
# CONJUNTA E INDEPENDENCIAS
# ==========================================

def test_mod2_half_joint_is_uniform(mod2_half):
    table = mod2_half.joint
    assert table.total == 1
    assert set(table.probabilities.values()) == {Fraction(1, 4)}
    assert ci_query(mod2_half, _query(["1"], ["2"]))
    assert ci_query(table, _query(["2"], ["1"]))


def test_mod2_third_is_dependent(mod2_third):
    assert not ci_query(mod2_third, _query(["1"], ["2"]))
    assert len(induced_model_scm(mod2_third)) == 0
    assert mod2_third.joint.law("1") == {0: Fraction(1, 2), 1: Fraction(1, 2)}


def test_xor3_pairwise_without_composition(xor3_scm):
    model = induced_model_scm(xor3_scm)
    assert set(model.canonical_triples()) == {
        Triple.of(["1"], ["2"]),
        Triple.of(["1"], ["3"]),
        Triple.of(["2"], ["3"]),
    }
    assert not ci_query(xor3_scm, _query(["1"], ["2", "3"]))
    assert not ci_query(xor3_scm, _query(["1"], ["2"], ["3"]))
    assert xor3_scm.joint.law("1")[1] == Fraction(1, 2)
    assert model.provenance["source"] == "scm"


def test_joint_frame_has_probability_column(mod2_half):
    frame = mod2_half.joint.to_frame()
    assert list(frame.columns) == ["1", "2", "prob"]
    assert len(frame) == 4
    assert sum(frame["prob"]) == 1


def test_ci_query_unknown_node(mod2_half):
    with pytest.raises(GraphError):
        ci_query(mod2_half, _query(["1"], ["9"]))


def test_unknown_builtin():
    with pytest.raises(FixtureError):
        load_builtin("mod3")


@PROPERTY_SETTINGS
@given(scms(max_nodes=3, max_support=3))
def test_random_scms_are_markovian(s):
    assert s.joint.total == 1
    verdict = is_markovian(induced_model_scm(s), s.graph)
    assert verdict, verdict.message


@PROPERTY_SETTINGS
@given(scms(max_nodes=3, max_support=3, style="additive"))
def test_additive_scms_are_markovian(s):
    assert is_markovian(induced_model_scm(s), s.graph)


def test_random_scm_unknown_style():
    with pytest.raises(ValueError):
        random_scm(np.random.default_rng(0), 2, style="lineal")


# ==========================================
# VALIDACIÓN
# ==========================================

def test_noise_block_must_sum_to_one(mod2_half):
    data = scm_to_dict(mod2_half)
    data["noise_blocks"][0]["table"][0]["prob"] = "1/3"
    with pytest.raises(ScmValidationError):
        parse_scm(json.dumps(data))


def test_mechanism_output_outside_support():
    graph = Graph.from_edges(["1"], [])
    with pytest.raises(ScmValidationError):
        Scm(graph, {"1": (0, 1)}, (NoiseBlock(("1",), bernoulli(Fraction(1, 2))),),
            {"1": tabulate("1", [], {"1": (0, 1)}, (0, 1), lambda e: e + 5)})


def test_mechanism_must_read_parents():
    graph = Graph.from_edges(["1", "2"], [("1", "2")])
    supports = {"1": (0, 1), "2": (0, 1)}
    blocks = (NoiseBlock(("1",), bernoulli(Fraction(1, 2))), NoiseBlock(("2",), bernoulli(Fraction(1, 2))))
    mechanisms = {
        "1": tabulate("1", [], supports, (0, 1), lambda e: e),
        "2": tabulate("2", [], supports, (0, 1), lambda e: e),
    }
    with pytest.raises(ScmValidationError):
        Scm(graph, supports, blocks, mechanisms)


def test_arc_needs_dependent_noise():
    graph = Graph.from_edges(["1", "2"], [], [("1", "2")])
    supports = {"1": (0, 1), "2": (0, 1)}
    product = {(a, b): Fraction(1, 4) for a in (0, 1) for b in (0, 1)}
    mechanisms = {
        "1": tabulate("1", [], supports, (0, 1), lambda e: e),
        "2": tabulate("2", [], supports, (0, 1), lambda e: e),
    }
    with pytest.raises(ScmValidationError):
        Scm(graph, supports, (NoiseBlock(("1", "2"), product),), mechanisms)
    correlated = {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)}
    s = Scm(graph, supports, (NoiseBlock(("1", "2"), correlated),), mechanisms)
    assert not ci_query(s, _query(["1"], ["2"]))


# ==========================================
# CONDICIONES
# ==========================================

def test_positivity_witness(copy_scm, mod2_half):
    assert check_positivity(mod2_half)
    verdict = check_positivity(copy_scm)
    assert not verdict
    assert verdict.witness == {"b": ("1",), "a": ("2",), "x_b": {"1": 1}, "x_a": {"2": 0}}


def test_noise_injectivity(mod2_half, copy_scm):
    assert check_noise_injective(mod2_half)
    # un ruido degenerado es trivialmente inyectivo
    assert check_noise_injective(copy_scm)


def test_max_mechanisms_collapse_noise():
    s = load_builtin("maxdiamond")
    verdict = check_noise_injective(s)
    assert not verdict
    witness = verdict.witness
    mechanism = s.mechanisms[witness["node"]]
    first, second = witness["noise"]
    assert first != second
    assert mechanism(witness["parents"], first) == mechanism(witness["parents"], second) == witness["out"]
    with pytest.raises(ScmPreconditionError):
        check_noise_surjective(s)


def test_non_constant_fibers(mod2_half, mod2_third, copy_scm):
    verdict = check_non_constant_fibers(mod2_half)
    assert not verdict
    assert verdict.witness == {"node": "1", "parent": "2"}
    assert check_non_constant_fibers(mod2_third)
    assert check_non_constant_fibers(copy_scm)


def test_noise_surjective(mod2_half, xor3_scm):
    assert check_noise_surjective(mod2_half)
    assert check_noise_surjective(xor3_scm)


def test_noise_uniformity(mod2_half, mod2_third):
    assert check_noise_uniform(mod2_half) == [("1", True), ("2", True)]
    assert check_noise_uniform(mod2_third) == [("1", False), ("2", True)]


def test_noise_support_smaller(small_noise_scm, mod2_half):
    assert check_noise_support_smaller(small_noise_scm)
    verdict = check_noise_support_smaller(mod2_half)
    assert not verdict
    assert verdict.witness == {"node": "1", "noise_support": 2, "support": 2}


def test_small_noise_support_breaks_positivity(small_noise_scm):
    assert not check_positivity(small_noise_scm)


@PROPERTY_SETTINGS
@given(scms(max_nodes=3, max_support=3))
def test_positivity_excludes_smaller_noise_support(s):
    if any(s.graph.parents(label) for label in s.nodes) and check_positivity(s):
        assert not check_noise_support_smaller(s)


@pytest.mark.parametrize("builtin, identical", [("mod2@1/2", True), ("mod2@1/3", False)])
def test_arrow_laws_match_ci_query(builtin, identical):
    s = load_builtin(builtin)
    assert bool(arrow_laws_identical(s, "1", "2")) is identical
    assert ci_query(s, _query(["1"], ["2"])) is identical


def test_arrow_laws_need_an_arrow(mod2_half):
    with pytest.raises(GraphError):
        arrow_laws_identical(mod2_half, "2", "1")


def test_uniform_noise_obstruction(mod2_half, mod2_third):
    model = induced_model_scm(mod2_half)
    assert independent_arrows(mod2_half, model) == [("2", "1")]
    instances = uniform_noise_instances(mod2_half, model)
    assert instances[0]["noise_uniform"] and instances[0]["support_match"]
    assert uniform_noise_obstruction(mod2_half, model, instances)
    assert uniform_noise_instances(mod2_third, induced_model_scm(mod2_third)) == []


# ==========================================
# FORMATO JSON
# ==========================================

@pytest.mark.parametrize("raw, expected", [("1/3", Fraction(1, 3)), (1, Fraction(1)), ("2/4", Fraction(1, 2))])
def test_parse_probability(raw, expected):
    assert parse_probability(raw) == expected


@pytest.mark.parametrize("raw", [0.5, "0.5", "uno", True, "1/0"])
def test_parse_probability_rejects_inexact(raw):
    with pytest.raises(ValueError):
        parse_probability(raw)


def test_scm_round_trip(mod2_third, tmp_path):
    path = save_scm(mod2_third, tmp_path / "mod2.scm.json")
    loaded = load_scm(path)
    assert scm_to_dict(loaded) == scm_to_dict(mod2_third)
    assert serialize_scm(loaded) == path.read_text(encoding="utf-8")
    assert loaded.joint.probabilities == mod2_third.joint.probabilities


def test_scm_file_rejects_float_probability(mod2_half):
    data = scm_to_dict(mod2_half)
    data["noise_blocks"][0]["table"][0]["prob"] = 0.5
    with pytest.raises(ParseError):
        parse_scm(json.dumps(data), source="mod2.json")


def test_scm_file_rejects_bad_json():
    with pytest.raises(ParseError) as error:
        parse_scm('{"graph": \n', source="roto.json")
    assert error.value.line == 2


def test_scm_file_rejects_unknown_field(mod2_half):
    data = scm_to_dict(mod2_half)
    data["seed"] = 3
    with pytest.raises(ParseError):
        parse_scm(json.dumps(data))


# ==========================================
# AUDITORÍA
# ==========================================

def test_scm_audit_of_mod2_half(mod2_half):
    report = scm_audit(mod2_half)
    assert report.subject == "scm"
    assert report.flag("markovian") is True
    assert report.flag("converse_pairwise") is False
    assert report.flag("positivity") is True
    assert report.flag("non_constant_fibers") is False
    assert report.flag("noise_surjective") is True
    assert report.ledger["scm_converse_pairwise"].status == "hypotheses-unmet"
    assert report.ledger["uniform_noise_obstruction"].status == "observed"
    assert report.provenance.fixture == "mod2@1/2"
    assert report.inconsistencies() == []
    validate_report(report.to_json_dict())


def test_scm_audit_marks_surjectivity_not_applicable():
    report = scm_audit(load_builtin("maxdiamond"))
    assert report.flag("noise_injective") is False
    assert report.flag("noise_surjective") is None
    assert report.flag("markovian") is True
    assert report.inconsistencies() == []


def test_scm_audit_noise_flags(mod2_third):
    report = scm_audit(mod2_third)
    assert report.flag("noise_uniform") is False
    assert report.flags["noise_uniform"].witness == ["1"]
    assert report.flags["noise_nonuniform"].witness == ["2"]
    assert report.flag("converse_pairwise") is True


def test_converse_pairwise_without_injectivity_on_dag(collapsing_noise_scm):
    assert not check_noise_injective(collapsing_noise_scm)
    report = scm_audit(collapsing_noise_scm)
    assert report.flag("positivity") is True
    assert report.flag("non_constant_fibers") is True
    assert report.flag("converse_pairwise") is True
    entry = report.ledger["scm_converse_pairwise"]
    assert entry.hypotheses["injective_or_dag"] is True
    assert entry.status == "observed"
    assert report.inconsistencies() == []


def test_scm_audit_noise_support_entry(small_noise_scm):
    report = scm_audit(small_noise_scm)
    assert report.flag("noise_support_smaller") is True
    assert report.flag("positivity") is False
    entry = report.ledger["noise_support_converse_pairwise"]
    assert entry.hypotheses == {"positivity": False, "noise_support_smaller": True, "injective_or_dag": True}
    assert entry.status == "hypotheses-unmet"
    validate_report(report.to_json_dict())


def test_scm_ledger_carries_theorem_labels(mod2_half):
    ledger = scm_audit(mod2_half).ledger
    assert ledger["scm_converse_pairwise"].theorem == "Cor 18"
    assert ledger["uniform_noise_obstruction"].theorem == "Prop 20"
    assert ledger["scm_global_markov"].theorem == "Thm 16"
    assert ledger["nonuniform_noise_converse_pairwise"].theorem is None
