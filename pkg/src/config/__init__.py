# src/config/__init__.py
"""
Módulo de configuración del workbench
"""

try:
    from .workbench_config import (
        PROJECT_ROOT,
        LOGS_PATH,
        REPORTS_PATH,
        FIXTURES_PATH,
        SCHEMAS_PATH,
        WORKBENCH_CONFIG,
        SWEEP_CONFIG,
        REPORT_CONFIG,
        get_max_nodes,
        get_jobs,
        get_log_level,
        get_sweep_config
    )
except ImportError:
    # Fallback values si python-dotenv no está instalado
    from pathlib import Path
    PROJECT_ROOT = Path(__file__).parent.parent.parent
    LOGS_PATH = PROJECT_ROOT / "logs"
    REPORTS_PATH = PROJECT_ROOT / "reports"
    FIXTURES_PATH = PROJECT_ROOT / "fixtures"
    SCHEMAS_PATH = PROJECT_ROOT / "schemas"

    WORKBENCH_CONFIG = {"max_nodes": 8, "hard_max_nodes": 10, "max_skeleton_edges": 12,
                        "jobs": 1, "chunk_size": 256, "log_level": "WARNING", "noise_prefix": "e_"}
    SWEEP_CONFIG = {"batch_size": 50}
    REPORT_CONFIG = {"tool_name": "ancestral-workbench", "tool_version": "1.0.0", "indent": 2,
                     "schema_file": "audit_report.schema.json"}

    def get_max_nodes(override=None):
        return override if override is not None else WORKBENCH_CONFIG["max_nodes"]

    def get_jobs(override=None):
        return override if override is not None else WORKBENCH_CONFIG["jobs"]

    def get_log_level():
        return WORKBENCH_CONFIG["log_level"]

    def get_sweep_config(name):
        return dict(SWEEP_CONFIG.get(name, {}))

__all__ = [
    "PROJECT_ROOT",
    "LOGS_PATH",
    "REPORTS_PATH",
    "FIXTURES_PATH",
    "SCHEMAS_PATH",
    "WORKBENCH_CONFIG",
    "SWEEP_CONFIG",
    "REPORT_CONFIG",
    "get_max_nodes",
    "get_jobs",
    "get_log_level",
    "get_sweep_config"
]
