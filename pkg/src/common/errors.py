# src/common/errors.py
"""
Jerarquía de excepciones del workbench
"""

from typing import Optional


class WorkbenchError(Exception):
    """Raíz de todos los errores del workbench"""


class ConfigurationError(WorkbenchError, ValueError):
    """Valor de configuración inválido (entorno, CLI o dicts de config)"""


class GraphError(WorkbenchError, ValueError):
    """Nodo desconocido, arista faltante, grafo no simple o no ancestral"""


class OrderError(WorkbenchError, ValueError):
    """Orden parcial inválido o sobre otro dominio"""


class ParseError(WorkbenchError, ValueError):
    """Error de formato en un archivo de entrada, con número de línea"""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        location = ""
        if source:
            location += source
        if line is not None:
            location += "{}línea {}".format(":" if source else "", line)
        super().__init__("{}: {}".format(location, message) if location else message)


class BoundExceededError(WorkbenchError):
    """Se superó la cota de nodos o de aristas"""


class QueryError(WorkbenchError, ValueError):
    """Consulta de separación/independencia con conjuntos solapados o vacíos"""


class UniverseMismatchError(WorkbenchError, ValueError):
    """Modelo y grafo definidos sobre conjuntos de nodos distintos"""


class ProjectionConflictError(WorkbenchError):
    """La proyección latente requiere dos aristas entre el mismo par"""


class ClosureError(WorkbenchError, ValueError):
    """Propiedad no admitida en una clausura"""


class MethodMismatchError(WorkbenchError, ValueError):
    """Criterio de equivalencia no aplicable a la clase de grafos"""


class NoStableOrientationError(WorkbenchError):
    """El modelo no admite ninguna salida natural"""


class ScmValidationError(WorkbenchError, ValueError):
    """SCM inválido (mecanismo no total, bloques de ruido incorrectos, ...)"""


class ScmPreconditionError(WorkbenchError):
    """La condición previa de un chequeo SCM no se cumple"""


class FixtureError(WorkbenchError, KeyError):
    """Fixture desconocido"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "fixture desconocido"
