# src/learning/orientations.py
"""
Algoritmo natural de aprendizaje estructural (referencia por fuerza bruta)

Se recorren las 3^e asignaciones {→, ←, ↔} de las aristas de sk(J) (2^e en
modo DAG) y se filtran en este orden: ancestral → maximal → J estable hacia
arriba y hacia abajo respecto del orden mínimo del grafo.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed
from tqdm import tqdm

from common.errors import BoundExceededError, NoStableOrientationError
from config import WORKBENCH_CONFIG, get_jobs
from graphs.ancestral import is_ancestral, minimal_order
from graphs.graph import Graph, Label
from graphs.graph_io import serialize_graph
from graphs.order import PartialOrder
from independence.model import IndependenceModel
from independence.properties import PropertyId, check_property
from independence.relations import skeleton_of_model
from separation.induced import is_maximal

logger = logging.getLogger(__name__)

FORWARD, BACKWARD, ARC = 0, 1, 2
Pair = Tuple[Label, Label]


def orientation_options(dag_only: bool) -> Tuple[int, ...]:
    return (FORWARD, BACKWARD) if dag_only else (FORWARD, BACKWARD, ARC)


def decode_candidate(index: int, options: Sequence[int], edge_count: int) -> List[int]:
    """Índice → elección por arista (la primera arista es el dígito más significativo)"""
    base = len(options)
    digits = [0] * edge_count
    for position in range(edge_count - 1, -1, -1):
        index, digit = divmod(index, base)
        digits[position] = options[digit]
    return digits


def build_orientation(nodes: Sequence[Label], edges: Sequence[Pair], choice: Sequence[int]) -> Graph:
    arrows, arcs = [], []
    for (a, b), option in zip(edges, choice):
        if option == FORWARD:
            arrows.append((a, b))
        elif option == BACKWARD:
            arrows.append((b, a))
        else:
            arcs.append((a, b))
    return Graph.from_edges(nodes, arrows, arcs)


def is_stable_for(model: IndependenceModel, g: Graph) -> Optional[PartialOrder]:
    """Orden mínimo de g si J es estable (arriba y abajo) respecto de él; si no, None"""
    order = minimal_order(g)
    aligned = model.aligned_to(g.nodes)
    if not check_property(aligned, PropertyId.ORDERED_UPWARD, order):
        return None
    if not check_property(aligned, PropertyId.ORDERED_DOWNWARD, order):
        return None
    return order


def _scan_chunk(model: IndependenceModel, nodes: Sequence[Label], edges: Sequence[Pair],
                options: Sequence[int], start: int, stop: int) -> List[Tuple[int, Graph]]:
    """Evalúa los candidatos [start, stop); devuelve (índice, grafo) de los estables"""
    accepted = []
    for index in range(start, stop):
        g = build_orientation(nodes, edges, decode_candidate(index, options, len(edges)))
        if not is_ancestral(g):
            continue
        if not is_maximal(g):
            continue
        if is_stable_for(model, g) is None:
            continue
        accepted.append((index, g))
    return accepted


def stable_orientations(model: IndependenceModel, dag_only: bool = False, jobs: Optional[int] = None,
                        allow_large: bool = False, progress: bool = False) -> List[Graph]:
    """
    Todas las orientaciones estables de sk(J), en orden de índice de candidato

    Raises:
        BoundExceededError: más de max_skeleton_edges aristas sin allow_large
    """
    sk = skeleton_of_model(model)
    edges = sk.sorted_edges()
    limit = WORKBENCH_CONFIG["max_skeleton_edges"]
    if len(edges) > limit and not allow_large:
        raise BoundExceededError(
            "El esqueleto tiene {} aristas (máximo {}); use allow_large para forzar".format(len(edges), limit))

    options = orientation_options(dag_only)
    total = len(options) ** len(edges)
    chunk_size = WORKBENCH_CONFIG["chunk_size"]
    chunks = [(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]
    jobs = get_jobs(jobs)

    logger.info(f"🔍 Buscando orientaciones: {len(edges)} aristas, {total} candidatos, {jobs} workers")
    if jobs == 1:
        iterator = tqdm(chunks, desc="orientaciones", disable=not progress)
        results = [_scan_chunk(model, sk.nodes, edges, options, start, stop) for start, stop in iterator]
    else:
        results = Parallel(n_jobs=jobs)(
            delayed(_scan_chunk)(model, sk.nodes, edges, options, start, stop)
            for start, stop in chunks
        )

    # Parallel conserva el orden de entrada: la fusión es determinista
    accepted = [g for chunk in results for _, g in chunk]
    logger.info(f"✅ {len(accepted)} orientaciones estables de {total} candidatos")
    return accepted


@dataclass(frozen=True)
class LearnerOutput:
    """Salida del algoritmo natural: todas las orientaciones estables y la canónica"""

    graphs: Tuple[Graph, ...]
    chosen: Graph
    dag_only: bool
    orders: Tuple[PartialOrder, ...] = field(default_factory=tuple)

    def to_jsonable(self) -> Dict[str, Any]:
        return {
            "dag_only": self.dag_only,
            "chosen": self.chosen.to_jsonable(),
            "graphs": [g.to_jsonable() for g in self.graphs],
            "orders": [order.to_jsonable() for order in self.orders],
        }


def canonical_choice(graphs: Sequence[Graph]) -> Graph:
    """La orientación con el grafo serializado lexicográficamente menor"""
    return min(graphs, key=serialize_graph)


def natural_learn(model: IndependenceModel, dag_only: bool = False, jobs: Optional[int] = None,
                  allow_large: bool = False, progress: bool = False) -> LearnerOutput:
    """
    Raises:
        NoStableOrientationError: ninguna orientación es estable
    """
    graphs = stable_orientations(model, dag_only, jobs, allow_large, progress)
    if not graphs:
        raise NoStableOrientationError(
            "El modelo no admite salida natural{}".format(" (solo DAGs)" if dag_only else ""))
    return LearnerOutput(
        graphs=tuple(graphs),
        chosen=canonical_choice(graphs),
        dag_only=dag_only,
        orders=tuple(minimal_order(g) for g in graphs),
    )
