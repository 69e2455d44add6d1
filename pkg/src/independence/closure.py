# src/independence/closure.py
"""
Clausura de un modelo bajo reglas de inferencia monótonas
"""

import logging
from typing import Iterable, Optional, Set

from common.errors import ClosureError, OrderError
from graphs.order import PartialOrder
from independence.model import IndependenceModel
from independence.properties import PropertyId, iter_violations

logger = logging.getLogger(__name__)

# Conclusiones disyuntivas o por eliminación: no definen una clausura única
REFUSED = frozenset({PropertyId.SINGLETON_TRANSITIVITY, PropertyId.ORDERED_DOWNWARD})


def closure(model: IndependenceModel, props: Iterable[PropertyId],
            order: Optional[PartialOrder] = None, max_rounds: int = 1000) -> IndependenceModel:
    """
    Menor superconjunto de `model` cerrado bajo las reglas pedidas

    Cada ronda aplica todas las reglas sobre el modelo actual y añade las
    conclusiones ausentes (con sus duales); termina cuando una ronda no
    añade nada. El espacio de tripletas es finito.

    Raises:
        ClosureError: se pide singleton-transitividad o estabilidad hacia abajo
        OrderError: estabilidad hacia arriba sin orden
    """
    props = [PropertyId(prop) for prop in props]
    refused = [prop.value for prop in props if prop in REFUSED]
    if refused:
        raise ClosureError("No se admite clausura bajo: {}".format(", ".join(refused)))
    if PropertyId.ORDERED_UPWARD in props and order is None:
        raise OrderError("La clausura bajo estabilidad hacia arriba requiere un orden")

    current = model
    for round_number in range(1, max_rounds + 1):
        additions: Set[int] = set()
        for prop in props:
            for witness in iter_violations(current, prop, order):
                for triple in witness.missing:
                    a, b, c = (current.mask(part) for part in triple)
                    additions.add(current.pack(a, b, c))
                    additions.add(current.pack(b, a, c))
        additions -= current.keys
        if not additions:
            logger.debug(f"✅ Clausura estable tras {round_number} rondas: {len(current) // 2} tripletas")
            return IndependenceModel(current.universe, current.keys, dict(model.provenance, closure=[
                prop.value for prop in props]))
        current = IndependenceModel(current.universe, current.keys | additions, current.provenance)

    raise ClosureError("La clausura no convergió en {} rondas".format(max_rounds))
