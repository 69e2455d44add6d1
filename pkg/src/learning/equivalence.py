# src/learning/equivalence.py
"""
Equivalencia de Markov entre grafos

Tres criterios que deben coincidir donde son aplicables:
- dag: mismo esqueleto y mismas V-configuraciones colisionadoras (solo DAGs)
- mag: mismo esqueleto y mismos caminos colisionadores mínimos (maximales ancestrales)
- brute: igualdad de los modelos inducidos
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, List, Optional, Tuple

from common.errors import MethodMismatchError, UniverseMismatchError
from common.utils import to_jsonable
from common.verdict import Verdict
from graphs.ancestral import (
    canonical_path,
    collider_v_configurations,
    is_ancestral,
    minimal_collider_paths,
    skeleton,
)
from graphs.graph import Graph
from independence.model import IndependenceModel
from learning.orientations import build_orientation, orientation_options, stable_orientations
from separation.induced import induced_model, is_maximal

logger = logging.getLogger(__name__)


class Method(str, Enum):
    DAG = "dag"
    MAG = "mag"
    BRUTE = "brute"


@dataclass(frozen=True)
class EquivalenceVerdict:
    """
    Veredicto con testigo: {"kind": "skeleton" | "v_configuration" |
    "minimal_collider_path" | "triple", ...}
    """

    equivalent: bool
    method: Method
    witness: Any = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.equivalent

    def to_jsonable(self):
        return {
            "equivalent": self.equivalent,
            "method": self.method.value,
            "witness": to_jsonable(self.witness),
            "message": self.message,
        }


def _skeleton_witness(g: Graph, h: Graph) -> Optional[dict]:
    g_edges, h_edges = skeleton(g).edges, skeleton(h).edges
    if g_edges == h_edges:
        return None
    return {
        "kind": "skeleton",
        "only_in_first": sorted(tuple(g.sort_nodes(edge)) for edge in g_edges - h_edges),
        "only_in_second": sorted(tuple(g.sort_nodes(edge)) for edge in h_edges - g_edges),
    }


def _require(method: Method, g: Graph, h: Graph) -> None:
    if method is Method.DAG:
        for graph in (g, h):
            if not graph.is_dag:
                raise MethodMismatchError("El criterio dag requiere DAGs: {}".format(graph))
    elif method is Method.MAG:
        for graph in (g, h):
            if not is_ancestral(graph) or not is_maximal(graph):
                raise MethodMismatchError("El criterio mag requiere grafos maximales ancestrales: {}".format(graph))


def _v_configuration_keys(g: Graph) -> dict:
    return {(frozenset((i, j)), t): (i, t, j) for i, t, j in collider_v_configurations(g)}


def _first_difference(first: dict, second: dict, order_key) -> Optional[Tuple[Any, str]]:
    differences = [(value, "first") for key, value in first.items() if key not in second]
    differences += [(value, "second") for key, value in second.items() if key not in first]
    if not differences:
        return None
    return min(differences, key=lambda item: (order_key(item[0]), item[1]))


def markov_equivalent(g: Graph, h: Graph, method: Method = Method.BRUTE) -> EquivalenceVerdict:
    """
    Raises:
        UniverseMismatchError: nodos distintos
        MethodMismatchError: criterio no aplicable a la clase de grafos
    """
    method = Method(method)
    if set(g.nodes) != set(h.nodes):
        raise UniverseMismatchError("Grafos sobre nodos distintos: {} vs {}".format(
            sorted(g.nodes), sorted(h.nodes)))
    _require(method, g, h)

    if method is Method.BRUTE:
        g_model = induced_model(g)
        h_model = induced_model(h).aligned_to(g.nodes)
        only_g = g_model.difference(h_model)
        only_h = h_model.difference(g_model)
        if not only_g and not only_h:
            return EquivalenceVerdict(True, method)
        candidates = [(masks, "first") for masks in only_g[:1]] + [(masks, "second") for masks in only_h[:1]]
        masks, side = min(candidates, key=lambda item: ((item[0][2], item[0][0], item[0][1]), item[1]))
        triple = g_model.triple(*masks)
        return EquivalenceVerdict(False, method, {"kind": "triple", "triple": triple, "in": side},
                                  "{} solo en el {} grafo".format(triple, "primer" if side == "first" else "segundo"))

    skeleton_difference = _skeleton_witness(g, h)
    if skeleton_difference:
        return EquivalenceVerdict(False, method, skeleton_difference, "esqueletos distintos")

    def by_index(labels):
        return tuple(g.index(label) for label in labels)

    if method is Method.DAG:
        found = _first_difference(_v_configuration_keys(g), _v_configuration_keys(h), by_index)
        if found:
            triple, side = found
            return EquivalenceVerdict(False, method, {"kind": "v_configuration", "triple": triple, "in": side},
                                      "V-configuración colisionadora {} solo en un grafo".format("-".join(triple)))
        return EquivalenceVerdict(True, method)

    g_paths = {canonical_path(g, path): path for path in minimal_collider_paths(g)}
    h_paths = {canonical_path(g, path): path for path in minimal_collider_paths(h)}
    found = _first_difference(g_paths, h_paths, lambda path: (len(path), by_index(path)))
    if found:
        path, side = found
        return EquivalenceVerdict(False, method, {"kind": "minimal_collider_path", "path": path, "in": side},
                                  "camino colisionador mínimo {} solo en un grafo".format("-".join(path)))
    return EquivalenceVerdict(True, method)


def pairwise_uniqueness(graphs: List[Graph], method: Method) -> Verdict:
    if len(graphs) < 2:
        return Verdict.ok("{} orientaciones estables".format(len(graphs)))
    reference = graphs[0]
    for other in graphs[1:]:
        verdict = markov_equivalent(reference, other, method)
        if not verdict:
            return Verdict.fail((reference, other), verdict.message)
    return Verdict.ok()


def uniqueness_property(model: IndependenceModel, jobs: Optional[int] = None) -> Verdict:
    """Todas las orientaciones estables son Markov equivalentes; testigo: un par no equivalente"""
    return pairwise_uniqueness(stable_orientations(model, dag_only=False, jobs=jobs), Method.MAG)


def dag_uniqueness_property(model: IndependenceModel, jobs: Optional[int] = None) -> Verdict:
    return pairwise_uniqueness(stable_orientations(model, dag_only=True, jobs=jobs), Method.DAG)


def equivalence_class(g: Graph, dag_only: bool = False) -> List[Graph]:
    """
    Orientaciones de sk(g) (maximales ancestrales, o DAGs) Markov equivalentes a g
    """
    sk = skeleton(g)
    edges = sk.sorted_edges()
    options = orientation_options(dag_only)
    method = Method.DAG if dag_only else Method.MAG
    members = []
    for choice in itertools.product(options, repeat=len(edges)):
        candidate = build_orientation(g.nodes, edges, choice)
        if dag_only:
            if not candidate.is_dag:
                continue
        elif not is_ancestral(candidate) or not is_maximal(candidate):
            continue
        if markov_equivalent(g, candidate, method):
            members.append(candidate)
    logger.debug(f"📊 Clase de equivalencia de {g}: {len(members)} miembros")
    return members

