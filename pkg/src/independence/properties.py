# src/independence/properties.py
"""
Las nueve propiedades de modelos de independencia

1-6: simetría, descomposición, unión débil, contracción, intersección y
composición (sobre conjuntos). 7-9: transitividad singleton y estabilidad
ordenada hacia arriba/abajo, cuantificadas solo sobre pares singleton ⟨i,j|C⟩.

Cada chequeo recorre las tripletas guardadas en orden (C, A, B) y los
subconjuntos en orden creciente de máscara, así el primer testigo es
determinista.
"""

import logging
from enum import Enum
from typing import Any, Callable, Dict, Iterator, List, NamedTuple, Optional

from common.errors import OrderError
from common.verdict import Verdict
from graphs.order import PartialOrder
from independence.bitsets import nonempty_submasks, proper_nonempty_submasks, single_bits
from independence.model import IndependenceModel, Triple

logger = logging.getLogger(__name__)


class PropertyId(str, Enum):
    SYMMETRY = "symmetry"
    DECOMPOSITION = "decomposition"
    WEAK_UNION = "weak-union"
    CONTRACTION = "contraction"
    INTERSECTION = "intersection"
    COMPOSITION = "composition"
    SINGLETON_TRANSITIVITY = "singleton-transitivity"
    ORDERED_UPWARD = "ordered-upward"
    ORDERED_DOWNWARD = "ordered-downward"

    @property
    def needs_order(self) -> bool:
        return self in (PropertyId.ORDERED_UPWARD, PropertyId.ORDERED_DOWNWARD)


SEMIGRAPHOID = (PropertyId.SYMMETRY, PropertyId.DECOMPOSITION, PropertyId.WEAK_UNION,
                PropertyId.CONTRACTION)
GRAPHOID = SEMIGRAPHOID + (PropertyId.INTERSECTION,)
COMPOSITIONAL_GRAPHOID = GRAPHOID + (PropertyId.COMPOSITION,)
SINGLETON_TRANSITIVE_COMPOSITIONAL_GRAPHOID = COMPOSITIONAL_GRAPHOID + (PropertyId.SINGLETON_TRANSITIVITY,)
ORDERED_STABILITIES = (PropertyId.ORDERED_UPWARD, PropertyId.ORDERED_DOWNWARD)


class Witness(NamedTuple):
    """
    Contraejemplo: premisas presentes y conclusiones ausentes

    Para singleton-transitividad `missing` lista las dos alternativas de la
    conclusión disyuntiva (ninguna está en el modelo).
    """
    property: PropertyId
    instantiation: Dict[str, Any]

    @property
    def premises(self) -> List[Triple]:
        return self.instantiation["premises"]

    @property
    def missing(self) -> List[Triple]:
        return self.instantiation["missing"]

    def to_jsonable(self) -> Dict[str, Any]:
        data = {"property": self.property.value}
        for key, value in self.instantiation.items():
            if isinstance(value, list):
                data[key] = [str(item) for item in value]
            elif isinstance(value, frozenset):
                data[key] = sorted(value)
            else:
                data[key] = value
        return data

    def __str__(self) -> str:
        return "{}: {} ⇒ falta {}".format(
            self.property.value,
            ", ".join(str(triple) for triple in self.premises),
            " o ".join(str(triple) for triple in self.missing))


def witness_reproduces(model: IndependenceModel, witness: Witness) -> bool:
    """Re-evalúa el testigo: premisas en el modelo y ninguna conclusión presente"""
    premises_hold = all(model.holds(*triple) for triple in witness.premises)
    conclusions_absent = not any(model.holds(*triple) for triple in witness.missing)
    return premises_hold and conclusions_absent


# ==========================================
# PROPIEDADES 1-6 (CONJUNTOS)
# ==========================================

def _witness(model: IndependenceModel, prop: PropertyId, premises, missing, **extra) -> Witness:
    instantiation = {
        "premises": [model.triple(*masks) for masks in premises],
        "missing": [model.triple(*masks) for masks in missing],
    }
    for key, value in extra.items():
        instantiation[key] = model.labels(value) if isinstance(value, int) else value
    return Witness(prop, instantiation)


def _symmetry(model: IndependenceModel, order: Optional[PartialOrder]) -> Iterator[Witness]:
    for a, b, c in model.ordered_masks:
        if not model.contains_masks(b, a, c):
            yield _witness(model, PropertyId.SYMMETRY, [(a, b, c)], [(b, a, c)])


def _decomposition(model: IndependenceModel, order: Optional[PartialOrder]) -> Iterator[Witness]:
    # ⟨A,B∪D|C⟩ ⇒ ⟨A,B|C⟩
    for a, x, c in model.ordered_masks:
        for b in proper_nonempty_submasks(x):
            if not model.contains_masks(a, b, c):
                yield _witness(model, PropertyId.DECOMPOSITION, [(a, x, c)], [(a, b, c)])


def _weak_union(model: IndependenceModel, order: Optional[PartialOrder]) -> Iterator[Witness]:
    # ⟨A,B∪D|C⟩ ⇒ ⟨A,B|C∪D⟩
    for a, x, c in model.ordered_masks:
        for d in proper_nonempty_submasks(x):
            b = x & ~d
            if not model.contains_masks(a, b, c | d):
                yield _witness(model, PropertyId.WEAK_UNION, [(a, x, c)], [(a, b, c | d)])


def _contraction(model: IndependenceModel, order: Optional[PartialOrder]) -> Iterator[Witness]:
    # ⟨A,B|C∪D⟩ ∧ ⟨A,D|C⟩ ⇒ ⟨A,B∪D|C⟩
    for a, b, e in model.ordered_masks:
        for d in nonempty_submasks(e):
            c = e & ~d
            if model.contains_masks(a, d, c) and not model.contains_masks(a, b | d, c):
                yield _witness(model, PropertyId.CONTRACTION, [(a, b, e), (a, d, c)], [(a, b | d, c)])


def _intersection(model: IndependenceModel, order: Optional[PartialOrder]) -> Iterator[Witness]:
    # ⟨A,B|C∪D⟩ ∧ ⟨A,D|C∪B⟩ ⇒ ⟨A,B∪D|C⟩
    for a, b, e in model.ordered_masks:
        for d in nonempty_submasks(e):
            c = e & ~d
            if model.contains_masks(a, d, c | b) and not model.contains_masks(a, b | d, c):
                yield _witness(model, PropertyId.INTERSECTION, [(a, b, e), (a, d, c | b)], [(a, b | d, c)])


def _composition(model: IndependenceModel, order: Optional[PartialOrder]) -> Iterator[Witness]:
    # ⟨A,B|C⟩ ∧ ⟨A,D|C⟩ ⇒ ⟨A,B∪D|C⟩
    groups: Dict[tuple, List[int]] = {}
    for a, b, c in model.ordered_masks:
        groups.setdefault((c, a), []).append(b)
    for (c, a), partners in groups.items():
        for position, b in enumerate(partners):
            for d in partners[position + 1:]:
                if b & d:
                    continue
                if not model.contains_masks(a, b | d, c):
                    yield _witness(model, PropertyId.COMPOSITION, [(a, b, c), (a, d, c)], [(a, b | d, c)])


# ==========================================
# PROPIEDADES 7-9 (PARES SINGLETON)
# ==========================================

def _singleton_transitivity(model: IndependenceModel, order: Optional[PartialOrder]) -> Iterator[Witness]:
    # ⟨i,j|C⟩ ∧ ⟨i,j|C∪{k}⟩ ⇒ ⟨i,k|C⟩ ∨ ⟨j,k|C⟩
    for i, j, c in model.singleton_pairs():
        for k in single_bits(model.all_mask & ~(i | j | c)):
            if not model.contains_masks(i, j, c | k):
                continue
            if model.contains_masks(i, k, c) or model.contains_masks(j, k, c):
                continue
            yield _witness(model, PropertyId.SINGLETON_TRANSITIVITY,
                           [(i, j, c), (i, j, c | k)], [(i, k, c), (j, k, c)],
                           i=_single_label(model, i), j=_single_label(model, j),
                           c=c, k=_single_label(model, k))


def _single_label(model: IndependenceModel, bit: int) -> str:
    return next(iter(model.labels(bit)))


def _above_masks(model: IndependenceModel, order: PartialOrder) -> Dict[int, int]:
    """Por cada bit de nodo, la máscara de los nodos estrictamente mayores"""
    if set(order.domain) != set(model.universe):
        raise OrderError("El orden está definido sobre {} y el modelo sobre {}".format(
            sorted(order.domain), sorted(model.universe)))
    return {model.mask([label]): model.mask(order.above(label)) for label in model.universe}


def _ordered_upward(model: IndependenceModel, order: PartialOrder) -> Iterator[Witness]:
    # ⟨i,j|C⟩ ⇒ ⟨i,j|C∪{k}⟩ para todo k con i < k o j < k
    above = _above_masks(model, order)
    for i, j, c in model.singleton_pairs():
        candidates = (above[i] | above[j]) & ~(i | j | c)
        for k in single_bits(candidates):
            if not model.contains_masks(i, j, c | k):
                yield _witness(model, PropertyId.ORDERED_UPWARD, [(i, j, c)], [(i, j, c | k)],
                               i=_single_label(model, i), j=_single_label(model, j),
                               c=c, k=_single_label(model, k))


def _ordered_downward(model: IndependenceModel, order: PartialOrder) -> Iterator[Witness]:
    # ⟨i,j|C⟩ ⇒ ⟨i,j|C\{k}⟩ para k ∈ C con i ≮ k, j ≮ k y l ≮ k para l ∈ C\{k}
    above = _above_masks(model, order)
    for i, j, c in model.singleton_pairs():
        for k in single_bits(c):
            if above[i] & k or above[j] & k:
                continue
            if any(above[l] & k for l in single_bits(c & ~k)):
                continue
            if not model.contains_masks(i, j, c & ~k):
                yield _witness(model, PropertyId.ORDERED_DOWNWARD, [(i, j, c)], [(i, j, c & ~k)],
                               i=_single_label(model, i), j=_single_label(model, j),
                               c=c, k=_single_label(model, k))


_CHECKERS: Dict[PropertyId, Callable[[IndependenceModel, Optional[PartialOrder]], Iterator[Witness]]] = {
    PropertyId.SYMMETRY: _symmetry,
    PropertyId.DECOMPOSITION: _decomposition,
    PropertyId.WEAK_UNION: _weak_union,
    PropertyId.CONTRACTION: _contraction,
    PropertyId.INTERSECTION: _intersection,
    PropertyId.COMPOSITION: _composition,
    PropertyId.SINGLETON_TRANSITIVITY: _singleton_transitivity,
    PropertyId.ORDERED_UPWARD: _ordered_upward,
    PropertyId.ORDERED_DOWNWARD: _ordered_downward,
}


def iter_violations(model: IndependenceModel, prop: PropertyId,
                    order: Optional[PartialOrder] = None) -> Iterator[Witness]:
    """
    Todos los contraejemplos de `prop`, en orden de testigos

    Raises:
        OrderError: propiedad ordenada sin orden, u orden sobre otro dominio
    """
    prop = PropertyId(prop)
    if prop.needs_order and order is None:
        raise OrderError("La propiedad {} requiere un orden parcial".format(prop.value))
    return _CHECKERS[prop](model, order)


def check_property(model: IndependenceModel, prop: PropertyId,
                   order: Optional[PartialOrder] = None) -> Verdict:
    """Primer contraejemplo como testigo, o Verdict.ok()"""
    prop = PropertyId(prop)
    witness = next(iter_violations(model, prop, order), None)
    if witness is None:
        return Verdict.ok()
    logger.debug(f"🔍 {prop.value} falla: {witness}")
    return Verdict.fail(witness, str(witness))


def check_properties(model: IndependenceModel, props, order: Optional[PartialOrder] = None) -> Dict[PropertyId, Verdict]:
    return {PropertyId(prop): check_property(model, prop, order) for prop in props}


def satisfies_all(model: IndependenceModel, props, order: Optional[PartialOrder] = None) -> Verdict:
    """Primer fallo en el orden dado de propiedades"""
    for prop in props:
        verdict = check_property(model, prop, order)
        if not verdict:
            return verdict
    return Verdict.ok()
