# src/common/verdict.py
"""
Veredictos booleanos con testigo
"""

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Verdict:
    """
    Resultado de un chequeo: holds + testigo cuando falla

    Se evalúa como bool, de modo que `if is_ancestral(g):` funciona igual
    que con un booleano plano.
    """

    holds: bool
    witness: Any = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.holds

    @classmethod
    def ok(cls, message: str = "") -> "Verdict":
        return cls(True, None, message)

    @classmethod
    def fail(cls, witness: Any, message: str = "") -> "Verdict":
        return cls(False, witness, message)
