# src/independence/stability.py
"""
Estabilidad en V y estabilidad de caminos

Ambas se definen solo sobre el modelo (y su esqueleto), nunca sobre el grafo
causal. La estabilidad en V es el caso r = 0 de la de caminos.
"""

import logging
from typing import Any, Dict, Iterator, List, Optional, Tuple

from common.verdict import Verdict
from graphs.graph import Label
from independence.bitsets import submasks
from independence.model import IndependenceModel
from independence.relations import skeleton_of_model

logger = logging.getLogger(__name__)


def _unstable_sets(model: IndependenceModel, i: Label, j: Label, k: Label,
                   inner: Tuple[Label, ...]) -> Iterator[int]:
    """C disjunto de {i,j,k} ∪ U con ⟨i,j|U∪C⟩ y ⟨i,j|U∪C∪{k}⟩ (orden creciente)"""
    i_bit, j_bit, k_bit = model.mask([i]), model.mask([j]), model.mask([k])
    u = model.mask(inner)
    free = model.all_mask & ~(i_bit | j_bit | k_bit | u)
    for c in submasks(free):
        if model.contains_masks(i_bit, j_bit, u | c) and model.contains_masks(i_bit, j_bit, u | c | k_bit):
            yield c


def iter_path_instabilities(model: IndependenceModel, max_inner: Optional[int] = None) -> Iterator[Dict[str, Any]]:
    """
    Caminos ⟨i=i0, i1..ir, k, j⟩ de sk(J) con i ≁ j, i_r ∼ j (r ≥ 1) y un C
    que deja i ⊥ j dado U ∪ C y dado U ∪ C ∪ {k}, U = {i1..ir}

    Se recorren pares (i, j) no adyacentes en orden de índices (ambos
    sentidos), caminos por DFS y C en orden creciente. Con max_inner=0 solo
    se generan V-configuraciones.
    """
    sk = skeleton_of_model(model)
    universe = model.universe
    index = {label: position for position, label in enumerate(universe)}

    def by_index(labels):
        return sorted(labels, key=index.__getitem__)

    for i in universe:
        for j in universe:
            if i == j or sk.adjacent(i, j):
                continue
            j_neighbors = sk.neighbors(j)

            def walk(path: List[Label]) -> Iterator[Dict[str, Any]]:
                last = path[-1]
                candidates = [node for node in by_index(sk.neighbors(last))
                              if node not in path and node != j and node in j_neighbors]
                inner = tuple(path[1:])
                for k in candidates:
                    for c in _unstable_sets(model, i, j, k, inner):
                        yield {
                            "path": tuple(path) + (k, j),
                            "u": frozenset(inner),
                            "c": model.labels(c),
                        }
                if max_inner is not None and len(inner) >= max_inner:
                    return
                for nxt in candidates:
                    yield from walk(path + [nxt])

            yield from walk([i])


def path_stable(model: IndependenceModel, max_inner: Optional[int] = None) -> Verdict:
    """Sin caminos inestables; testigo {"path", "u", "c"}"""
    witness = next(iter_path_instabilities(model, max_inner), None)
    if witness is None:
        return Verdict.ok()
    logger.debug(f"🔍 Camino inestable: {witness}")
    return Verdict.fail(witness, "camino {} inestable con C={}".format(
        "-".join(witness["path"]), sorted(witness["c"])))


def v_stable(model: IndependenceModel) -> Verdict:
    """
    Sin V-configuración ⟨i,k,j⟩ de sk(J) y C disjunto de {i,j,k} con
    ⟨i,j|C⟩ y ⟨i,j|C∪{k}⟩. Testigo (i, k, j, C).
    """
    sk = skeleton_of_model(model)
    for i, k, j in sk.v_configurations():
        for c in _unstable_sets(model, i, j, k, ()):
            witness = (i, k, j, model.labels(c))
            return Verdict.fail(witness, "V-configuración {}-{}-{} inestable con C={}".format(
                i, k, j, sorted(witness[3])))
    return Verdict.ok()
