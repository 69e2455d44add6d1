# test/unit_testing/test_report.py
"""
Pruebas del reporte de auditoría, del libro de resultados y de la conversión a JSON
"""

import logging
from fractions import Fraction

import jsonschema
import pytest
from pydantic import ValidationError

from common.report import AuditReport, FlagResult, LedgerEntry, Provenance, label_ledger, validate_report
from common.utils import format_node_set, to_jsonable
from common.verdict import Verdict
from independence.model import Triple
from learning.equivalence import Method

logger = logging.getLogger(__name__)


def _report(**ledger) -> AuditReport:
    return AuditReport(
        subject="model",
        flags={"markovian": FlagResult(holds=True), "faithful": FlagResult(holds=False, witness={"extra": 1})},
        ledger=ledger,
        provenance=Provenance(fixture="chain4"),
    )


# ==========================================
# VEREDICTOS Y JSON
# ==========================================

def test_verdict_is_truthy():
    assert Verdict.ok("bien")
    failed = Verdict.fail(("a", "b"), "mal")
    assert not failed
    assert failed.witness == ("a", "b")


def test_to_jsonable_domain_types():
    data = {
        "p": Fraction(1, 3),
        "set": frozenset({"b", "a"}),
        "pair": ("i", "k"),
        "triple": Triple.of(["b", "a"], ["c"]),
        "method": Method.DAG,
    }
    assert to_jsonable(data) == {
        "p": "1/3",
        "set": ["a", "b"],
        "pair": ["i", "k"],
        "triple": {"a": ["a", "b"], "b": ["c"], "c": []},
        "method": Method.DAG.value,
    }


def test_format_node_set():
    assert format_node_set({"l", "j"}) == "{j,l}"


# ==========================================
# FLAGS Y LIBRO DE RESULTADOS
# ==========================================

def test_false_flag_needs_witness():
    with pytest.raises(ValidationError):
        FlagResult(holds=False)
    assert FlagResult.not_applicable("sin arcos").holds is None


def test_flag_from_verdict():
    assert FlagResult.from_verdict(Verdict.ok()).witness is None
    flag = FlagResult.from_verdict(Verdict.fail(frozenset({"k", "i"}), "par"))
    assert flag.holds is False
    assert flag.witness == ["i", "k"]


@pytest.mark.parametrize("hypotheses, observed, applicable, status", [
    ({"a": True, "b": True}, True, True, "observed"),
    ({"a": True, "b": True}, False, True, "violated"),
    ({"a": True, "b": False}, False, True, "hypotheses-unmet"),
    ({"a": True, "b": None}, True, True, "hypotheses-unmet"),
    ({"a": True}, None, False, "n/a"),
])
def test_ledger_status(hypotheses, observed, applicable, status):
    entry = LedgerEntry.evaluate(hypotheses, "conclusión", observed, applicable=applicable)
    assert entry.status == status
    assert entry.hypotheses_met is (status in ("observed", "violated"))


def test_inconsistencies_are_violated_entries():
    report = _report(
        ok=LedgerEntry.evaluate({"a": True}, "c", True),
        roto=LedgerEntry.evaluate({"a": True}, "c", False),
    )
    assert report.inconsistencies() == ["roto"]
    assert "INCONSISTENCIAS: roto" in report.render_text()


def test_label_ledger():
    entries = {
        "learner_equivalence": LedgerEntry.evaluate({"a": True}, "c", True),
        "sin_etiqueta": LedgerEntry.evaluate({"a": False}, "c", None),
    }
    labelled = label_ledger(entries)
    assert labelled["learner_equivalence"].theorem == "Thm 14a"
    assert labelled["sin_etiqueta"].theorem is None
    assert entries["learner_equivalence"].theorem is None
    report = _report(**labelled)
    validate_report(report.to_json_dict())
    assert "observed (Thm 14a)" in report.render_text()


# ==========================================
# ESQUEMA
# ==========================================

def test_report_json_validates():
    report = _report(ok=LedgerEntry.evaluate({"a": True}, "c", True))
    data = report.to_json_dict()
    validate_report(data)
    assert data["provenance"]["fixture"] == "chain4"
    assert data["flags"]["faithful"]["witness"] == {"extra": 1}


def test_schema_rejects_false_flag_without_witness():
    data = _report().to_json_dict()
    data["flags"]["faithful"]["witness"] = None
    with pytest.raises(jsonschema.ValidationError):
        validate_report(data)


def test_schema_rejects_unknown_status():
    data = _report(ok=LedgerEntry.evaluate({"a": True}, "c", True)).to_json_dict()
    data["ledger"]["ok"]["status"] = "quizás"
    with pytest.raises(jsonschema.ValidationError):
        validate_report(data)


def test_text_report_marks_flags():
    text = _report().render_text()
    assert "Fixture: chain4" in text
    assert "markovian" in text and "✅" in text
    assert 'testigo: {"extra": 1}' in text
