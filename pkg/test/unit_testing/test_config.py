# test/unit_testing/test_config.py
"""
Pruebas de la configuración: cotas, workers y nivel de log desde el entorno
"""

import logging

import pytest

from common.errors import ConfigurationError
from config.workbench_config import (
    SWEEP_CONFIG,
    WORKBENCH_CONFIG,
    get_jobs,
    get_log_level,
    get_max_nodes,
    get_sweep_config,
)

logger = logging.getLogger(__name__)


def test_max_nodes_defaults(monkeypatch):
    monkeypatch.delenv("CS_MAX_NODES", raising=False)
    assert get_max_nodes() == WORKBENCH_CONFIG["max_nodes"] == 8


def test_max_nodes_from_environment(monkeypatch):
    monkeypatch.setenv("CS_MAX_NODES", "5")
    assert get_max_nodes() == 5
    assert get_max_nodes(3) == 3


@pytest.mark.parametrize("value", [0, 11])
def test_max_nodes_out_of_range(value):
    with pytest.raises(ConfigurationError):
        get_max_nodes(value)


def test_max_nodes_must_be_integer(monkeypatch):
    monkeypatch.setenv("CS_MAX_NODES", "ocho")
    with pytest.raises(ConfigurationError):
        get_max_nodes()


def test_jobs(monkeypatch):
    monkeypatch.setenv("CS_JOBS", "4")
    assert get_jobs() == 4
    monkeypatch.setenv("CS_JOBS", "")
    assert get_jobs() == WORKBENCH_CONFIG["jobs"]
    with pytest.raises(ConfigurationError):
        get_jobs(0)


def test_log_level(monkeypatch):
    monkeypatch.delenv("CS_LOG_LEVEL", raising=False)
    assert get_log_level() == "WARNING"
    monkeypatch.setenv("CS_LOG_LEVEL", "debug")
    assert get_log_level() == "DEBUG"


def test_sweep_config_is_a_copy():
    params = get_sweep_config("scm-markov")
    params["count"] = 1
    assert SWEEP_CONFIG["scm-markov"]["count"] == 1000


@pytest.mark.parametrize("name", ["batch_size", "scm-markovian"])
def test_unknown_sweep_config(name):
    with pytest.raises(ConfigurationError):
        get_sweep_config(name)
