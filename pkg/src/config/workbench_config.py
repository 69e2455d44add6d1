# src/config/workbench_config.py
"""
Configuración general del workbench de aprendizaje estructural
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from common.errors import ConfigurationError

# ==========================================
# RUTAS DEL PROYECTO
# ==========================================

# Rutas base del proyecto
PROJECT_ROOT = Path(__file__).parent.parent.parent
LOGS_PATH = PROJECT_ROOT / "logs"
REPORTS_PATH = PROJECT_ROOT / "reports"
FIXTURES_PATH = PROJECT_ROOT / "fixtures"
SCHEMAS_PATH = PROJECT_ROOT / "schemas"

# Variables de entorno locales (.env en la raíz)
load_dotenv(PROJECT_ROOT / ".env")

# ==========================================
# CONFIGURACIÓN DEL WORKBENCH
# ==========================================

WORKBENCH_CONFIG = {
    # Límites de escala de escritorio
    "max_nodes": 8,                        # ✅ Cota por defecto (CS_MAX_NODES)
    "hard_max_nodes": 10,                  # Cota dura, no configurable
    "max_skeleton_edges": 12,              # 3^12 orientaciones candidatas como máximo

    # Paralelismo
    "jobs": 1,                             # Workers para barridos y búsqueda (CS_JOBS)
    "chunk_size": 256,                     # Candidatos por tarea al repartir

    # Logging
    "log_level": "WARNING",                # DEBUG, INFO, WARNING, ERROR (CS_LOG_LEVEL)
    "log_to_file": False,                  # Si guardar logs en archivo
    "log_file_pattern": "workbench_{timestamp}.log",

    # Grafos aumentados
    "noise_prefix": "e_",                  # Etiqueta de los nodos de ruido: e_<nodo>
}

# ==========================================
# CONFIGURACIÓN DE BARRIDOS
# ==========================================

SWEEP_CONFIG = {
    "scm-markov": {"count": 1000, "max_nodes": 4, "max_support": 3, "seed": 16},
    "scm-converse": {"count": 500, "max_nodes": 4, "max_support": 3, "seed": 18},
    "uniform-noise": {"count": 500, "max_nodes": 3, "max_support": 3, "seed": 20},
    "separation-soundness": {"count": 500, "max_nodes": 6, "projection_nodes": 5, "seed": 7},
    "equivalence-oracle": {"count": 200, "max_nodes": 5, "seed": 2},
    "learner-end-to-end": {"count": 200, "max_nodes": 5, "seed": 14},
    "ordered-local-markov": {"count": 200, "max_nodes": 5, "seed": 5},
    "batch_size": 50,                      # Casos por batch en el historial
}

# ==========================================
# CONFIGURACIÓN DE REPORTES
# ==========================================

REPORT_CONFIG = {
    "tool_name": "ancestral-workbench",
    "tool_version": "1.0.0",
    "json_pattern": "audit_report_{fixture}_{timestamp}.json",
    "text_pattern": "audit_report_{fixture}_{timestamp}.txt",
    "indent": 2,
    "schema_file": "audit_report.schema.json",
    # resultado teórico que respalda cada entrada del libro
    "ledger_theorems": {
        "skeleton_recovery": "Thm 8",
        "minimal_markov": "Cor 9",
        "learner_equivalence": "Thm 14a",
        "dag_learner_equivalence": "Thm 14b",
        "scm_global_markov": "Thm 16",
        "scm_converse_pairwise": "Cor 18",
        "uniform_noise_obstruction": "Prop 20",
        "scm_learner_equivalence": "Thm 21a",
        "scm_dag_learner_equivalence": "Thm 21b",
    },
}


def _env_int(name: str) -> Optional[int]:
    """Lee un entero de entorno; None si no está definido"""
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError("{} debe ser entero, recibido: {!r}".format(name, raw))


def get_max_nodes(override: Optional[int] = None) -> int:
    """
    Resuelve la cota de nodos: override CLI → CS_MAX_NODES → defecto

    Raises:
        ConfigurationError: si la cota está fuera de [1, hard_max_nodes]
    """
    value = override if override is not None else _env_int("CS_MAX_NODES")
    if value is None:
        value = WORKBENCH_CONFIG["max_nodes"]

    if not 1 <= value <= WORKBENCH_CONFIG["hard_max_nodes"]:
        raise ConfigurationError(
            "max_nodes={} fuera de rango [1, {}]".format(value, WORKBENCH_CONFIG["hard_max_nodes"])
        )
    return value


def get_jobs(override: Optional[int] = None) -> int:
    """Número de workers: override → CS_JOBS → defecto"""
    value = override if override is not None else _env_int("CS_JOBS")
    if value is None:
        value = WORKBENCH_CONFIG["jobs"]
    if value < 1:
        raise ConfigurationError("jobs debe ser >= 1, recibido: {}".format(value))
    return value


def get_log_level() -> str:
    """Nivel de logging desde CS_LOG_LEVEL o configuración"""
    return os.getenv("CS_LOG_LEVEL", WORKBENCH_CONFIG["log_level"]).upper()


def get_sweep_config(name: str) -> Dict[str, Any]:
    """Configuración de un barrido por nombre"""
    if name not in SWEEP_CONFIG or name == "batch_size":
        raise ConfigurationError("Barrido desconocido: {}".format(name))
    return dict(SWEEP_CONFIG[name])
