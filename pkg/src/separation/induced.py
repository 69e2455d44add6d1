# src/separation/induced.py
"""
Modelo de independencia inducido por un grafo, maximalidad y la propiedad
de Markov local ordenada
"""

import itertools
import logging
from typing import Dict

from common.errors import OrderError
from common.verdict import Verdict
from graphs.ancestral import anc_pair, is_ancestral_set, is_valid_order, markov_blanket
from graphs.graph import Graph
from graphs.order import PartialOrder
from independence.bitsets import nonempty_submasks, single_bits, submasks
from independence.model import IndependenceModel, Triple
from separation.msep import m_separated, reachable

logger = logging.getLogger(__name__)


def induced_model(g: Graph) -> IndependenceModel:
    """
    J(G): todas las tripletas ⟨A,B|C⟩ no triviales con A ⊥ B | C en g

    La separación de conjuntos se reduce a pares: A ⊥ B | C sii todo a ∈ A
    y b ∈ B están separados dado C. Por cada C se calcula la matriz de pares
    con una búsqueda por nodo y luego se expanden los conjuntos.

    Raises:
        BoundExceededError: más nodos que la cota configurada
    """
    model = IndependenceModel(g.nodes, provenance={"source": "graph", "graph": str(g)})
    masks = []
    for c in submasks(model.all_mask):
        c_labels = model.labels(c)
        rest = model.all_mask & ~c
        separated_from: Dict[int, int] = {}
        for bit in single_bits(rest):
            label = next(iter(model.labels(bit)))
            connected = reachable(g, [label], c_labels)
            separated_from[bit] = rest & ~bit & ~model.mask(connected)
        for a in nonempty_submasks(rest):
            allowed = rest & ~a
            for bit in single_bits(a):
                allowed &= separated_from[bit]
            for b in nonempty_submasks(allowed):
                masks.append((a, b, c))
    result = IndependenceModel.from_masks(model.universe, masks, model.provenance)
    logger.debug(f"📊 J(G) sobre {model.size} nodos: {len(result) // 2} tripletas")
    return result


def is_maximal(g: Graph) -> Verdict:
    """
    Todo par no adyacente es separable por algún C

    Primero se prueba C = an(i,j); si falla, búsqueda exhaustiva. Testigo:
    el par no adyacente inseparable.
    """
    nodes = list(g.nodes)
    for i, j in itertools.combinations(nodes, 2):
        if g.adjacent(i, j):
            continue
        if m_separated(g, [i], [j], anc_pair(g, i, j)):
            continue
        others = [label for label in nodes if label not in (i, j)]
        separable = any(
            m_separated(g, [i], [j], subset)
            for size in range(len(others) + 1)
            for subset in itertools.combinations(others, size)
        )
        if not separable:
            return Verdict.fail((i, j), "{} y {} no adyacentes e inseparables".format(i, j))
    return Verdict.ok()


def ordered_local_markov_holds(model: IndependenceModel, g: Graph, order: PartialOrder) -> Verdict:
    """
    Propiedad de Markov local ordenada

    Para cada nodo i y cada conjunto ancestral A con i ∈ A ⊆ pst(i), exige
    ⟨i, A \\ (mb(i,A) ∪ {i}) | mb(i,A)⟩. pst(i) se toma en la extensión
    lineal canónica del orden (mayores primero): los predecesores de i y el
    propio i. Testigo: {"node", "ancestral_set", "statement"}.

    Raises:
        OrderError: el orden no es válido para g
    """
    validity = is_valid_order(g, order)
    if not validity:
        raise OrderError("Orden no válido para el grafo: {}".format(validity.message))
    model = model.aligned_to(g.nodes)

    linear = order.linear_extension
    for position, i in enumerate(linear):
        predecessors = model.mask(linear[:position])
        i_bit = model.mask([i])
        for extra in submasks(predecessors):
            ancestral = model.labels(extra | i_bit)
            if not is_ancestral_set(g, ancestral):
                continue
            blanket = markov_blanket(g, i, ancestral)
            rest = ancestral - blanket - {i}
            if not rest:
                continue
            if not model.holds([i], rest, blanket):
                statement = Triple.of([i], rest, blanket)
                return Verdict.fail(
                    {"node": i, "ancestral_set": g.sort_nodes(ancestral), "statement": statement},
                    "falta {} (nodo {}, A={})".format(statement, i, sorted(ancestral)))
    return Verdict.ok()

