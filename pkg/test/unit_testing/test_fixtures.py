# test/unit_testing/test_fixtures.py
"""
Regresión de los fixtures de ejemplos resueltos y del pipeline que los recorre
"""

import dataclasses
import json
import logging

import pytest

from common.errors import FixtureError
from graphs.graph_io import load_graph
from independence.model_io import load_model
from pipeline.audit_pipeline import FixtureAuditPipeline, summarize
from pipeline.fixtures import (
    FIXTURE_ALIASES,
    FIXTURE_IDS,
    diff_manifest,
    export_fixture,
    load_fixture,
    observe_fixture,
)
from scm.scm_io import load_scm

logger = logging.getLogger(__name__)


@pytest.mark.parametrize("fixture_id", FIXTURE_IDS)
def test_fixture_matches_manifest(fixture_id):
    bundle = load_fixture(fixture_id)
    observed, report = observe_fixture(bundle)
    assert diff_manifest(bundle, observed) == []
    if report is not None:
        assert report.inconsistencies() == []


def test_fixture_ids():
    assert FIXTURE_IDS == ("fig1", "fig2", "fig3", "fig4", "fig5",
                           "mod2-half", "mod2-third", "xor3", "maxdiamond")


def test_unknown_fixture():
    with pytest.raises(FixtureError):
        load_fixture("fig6")


@pytest.mark.parametrize("alias, fixture_id", sorted(FIXTURE_ALIASES.items()))
def test_descriptive_aliases(alias, fixture_id):
    assert load_fixture(alias).fixture_id == fixture_id


def test_manifest_change_is_reported():
    bundle = load_fixture("fig2")
    observed, _ = observe_fixture(bundle)
    tampered = dataclasses.replace(bundle, asserted={**bundle.asserted, "faithful": True})
    mismatches = diff_manifest(tampered, observed)
    assert mismatches == [{"key": "faithful", "kind": "asserted", "expected": True, "observed": False}]


def test_asserted_wins_over_derived():
    bundle = load_fixture("mod2-half")
    assert set(bundle.asserted) <= set(bundle.expected)
    for key, value in bundle.asserted.items():
        assert bundle.expected[key] == value


def test_export_fixture(tmp_path):
    bundle = load_fixture("mod2-half")
    written = export_fixture(bundle, tmp_path)
    assert all(path.exists() for path in written)
    scm_files = [path for path in written if path.name.endswith(".scm.json")]
    assert len(scm_files) == 1
    assert load_scm(scm_files[0]).joint.probabilities == bundle.scm.joint.probabilities


def test_export_graphs_and_models(tmp_path):
    bundle = load_fixture("fig3")
    written = export_fixture(bundle, tmp_path)
    graphs = {path.name: load_graph(path) for path in written if path.suffix == ".graph"}
    models = [load_model(path) for path in written if path.suffix == ".model"]
    assert graphs["fig3_g1.graph"] == bundle.graphs["g1"]
    assert models[0] == bundle.models["model"]


# ==========================================
# PIPELINE
# ==========================================

def test_pipeline_writes_reports(tmp_path):
    result = FixtureAuditPipeline(["fig2", "fig1"], write_reports=True, reports_path=tmp_path).run()
    assert result["overall_success"]
    assert result["steps_completed"] == ["fig2", "fig1"]
    files = result["steps"]["reports"]["files"]
    assert len(files) == 4
    payload = json.loads(next(path for path in tmp_path.iterdir() if "fig2" in path.name
                              and path.suffix == ".json").read_text(encoding="utf-8"))
    assert payload["mismatches"] == []
    assert payload["report"]["subject"] == "model"


def test_pipeline_records_errors():
    result = FixtureAuditPipeline(["chain4", "no-existe"]).run()
    assert not result["overall_success"]
    assert result["steps_failed"] == ["no-existe"]
    lines = summarize(result)
    assert lines[0].startswith("✅ fig2")
    assert lines[1].startswith("❌ no-existe")
