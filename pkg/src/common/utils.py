# src/common/utils.py
"""
Utilidades comunes: logging y conversión a JSON
"""

import dataclasses
import logging
import sys
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, TextIO


# Configurar logging
def setup_logging(log_level: str = "INFO", log_file: Optional[str] = None,
                  stream: Optional[TextIO] = None) -> logging.Logger:
    """
    Configura el sistema de logging

    Args:
        log_level: Nivel de logging (DEBUG, INFO, WARNING, ERROR)
        log_file: Archivo de log opcional
        stream: Stream de consola (stderr para no mezclar con la salida de la CLI)

    Returns:
        Logger configurado
    """
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    logger = logging.getLogger()
    logger.setLevel(getattr(logging, log_level.upper(), logging.WARNING))

    # Evitar handlers duplicados si se llama más de una vez
    for handler in list(logger.handlers):
        if getattr(handler, "_workbench", False):
            logger.removeHandler(handler)

    console_handler = logging.StreamHandler(stream or sys.stderr)
    console_handler.setFormatter(formatter)
    console_handler._workbench = True
    logger.addHandler(console_handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        file_handler._workbench = True
        logger.addHandler(file_handler)

    return logger


def to_jsonable(obj: Any) -> Any:
    """
    Convierte veredictos, testigos y tipos del dominio a estructuras JSON

    Conjuntos se ordenan para que la salida sea determinista; las fracciones
    se escriben como "num/den".
    """
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return "{}/{}".format(obj.numerator, obj.denominator)
    if isinstance(obj, Enum):
        return obj.value
    if hasattr(obj, "to_jsonable"):
        return obj.to_jsonable()
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted((to_jsonable(item) for item in obj), key=str)
    if hasattr(obj, "_asdict"):
        return {key: to_jsonable(value) for key, value in obj._asdict().items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    if dataclasses.is_dataclass(obj):
        return {field.name: to_jsonable(getattr(obj, field.name)) for field in dataclasses.fields(obj)}
    return str(obj)


def format_node_set(nodes) -> str:
    """{a,b} para logs y salida humana"""
    return "{" + ",".join(sorted(str(node) for node in nodes)) + "}"
