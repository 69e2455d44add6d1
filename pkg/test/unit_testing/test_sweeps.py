# test/unit_testing/test_sweeps.py
"""
Pruebas del motor de barridos: cada barrido corto pasa sin fallos, las
semillas no dependen de los workers y los contadores se acumulan por batch
"""

import logging

import numpy as np
import pytest

from common.errors import ConfigurationError
from pipeline.sweep_engine import SWEEP_NAMES, SweepEngine, create_sweep_engine, run_case

logger = logging.getLogger(__name__)


@pytest.mark.parametrize("name", SWEEP_NAMES)
def test_short_sweep_has_no_failures(name):
    result = SweepEngine(name, count=8, seed=3, max_nodes=4).run()
    assert result["success"], result["failures"]
    stats = result["stats"]
    assert stats["count"] == 8
    assert stats["passed"] + stats["skipped"] == 8
    assert stats["checked"] == stats["passed"]


@pytest.mark.slow
@pytest.mark.parametrize("name", SWEEP_NAMES)
def test_full_sweep_has_no_failures(name):
    result = create_sweep_engine(name).run()
    assert result["success"], result["failures"]


def test_sweep_independent_of_jobs():
    serial = SweepEngine("equivalence-oracle", count=6, seed=11, jobs=1, max_nodes=4).run()
    parallel = SweepEngine("equivalence-oracle", count=6, seed=11, jobs=2, max_nodes=4).run()
    for key in ("count", "passed", "failed", "skipped", "skip_reasons"):
        assert serial["stats"][key] == parallel["stats"][key]


def test_run_case_is_deterministic():
    seed = np.random.SeedSequence(5).spawn(1)[0]
    first = run_case("scm-markov", {"max_nodes": 3, "max_support": 2}, seed, 0)
    second = run_case("scm-markov", {"max_nodes": 3, "max_support": 2}, seed, 0)
    assert first == second
    assert first["index"] == 0


def test_run_case_turns_exceptions_into_failures():
    seed = np.random.SeedSequence(0)
    outcome = run_case("scm-markov", {}, seed, 4)
    assert outcome["status"] == "fail"
    assert outcome["witness"]["exception"] == "KeyError"
    assert outcome["index"] == 4


def test_batches_and_history():
    engine = SweepEngine("scm-markov", count=5, seed=1, batch_size=2, max_nodes=3)
    assert engine.format_stats() == "Count: 0 (sin casos)"
    result = engine.run()
    history = engine.get_batch_history()
    assert [batch["cases_processed"] for batch in history] == [2, 2, 1]
    assert history[-1]["running_count_after"] == 5
    assert result["stats"]["batches_processed"] == 3
    assert engine.format_stats().startswith("Count: 5, Pass: 5")
    assert "BARRIDO scm-markov" in engine.format_detailed_stats()


def test_update_batch_counts_statuses():
    engine = SweepEngine("scm-markov", count=0)
    stats = engine.update_batch([
        {"status": "pass", "index": 0},
        {"status": "skip", "reason": "proyección: conflicto", "index": 1},
        {"status": "fail", "witness": {"x": 1}, "index": 2},
    ])
    assert (stats["passed"], stats["skipped"], stats["failed"]) == (1, 1, 1)
    assert stats["skip_reasons"] == {"proyección": 1}
    assert engine.failures[0]["index"] == 2


def test_unknown_sweep():
    with pytest.raises(ConfigurationError):
        SweepEngine("monte-carlo")
    with pytest.raises(ConfigurationError):
        SweepEngine("batch_size")
