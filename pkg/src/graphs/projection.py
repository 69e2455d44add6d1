# src/graphs/projection.py
"""
Proyección latente y grafo aumentado con nodos de ruido
"""

import logging
from typing import Dict, FrozenSet, Iterable, List, Optional, Set

from common.errors import GraphError, ProjectionConflictError
from config import WORKBENCH_CONFIG
from graphs.ancestral import is_collider, require_ancestral
from graphs.graph import Edge, Graph, Label, Mark

logger = logging.getLogger(__name__)


def noise_label(label: Label, prefix: Optional[str] = None) -> Label:
    prefix = WORKBENCH_CONFIG["noise_prefix"] if prefix is None else prefix
    return "{}{}".format(prefix, label)


def augment(g: Graph, prefix: Optional[str] = None) -> Graph:
    """
    Grafo aumentado: ε_i → X_i para cada nodo, cada arco X_i↔X_j pasa a ε_i↔ε_j

    Los nodos de ruido se añaden detrás de los originales, en el mismo orden.
    """
    require_ancestral(g)
    noise = {label: noise_label(label, prefix) for label in g.nodes}
    clash = set(noise.values()) & set(g.nodes)
    if clash:
        raise GraphError("Etiquetas de ruido en conflicto con nodos existentes: {}".format(sorted(clash)))

    arrows = set(g.arrows) | {(noise[label], label) for label in g.nodes}
    arcs = {(noise[a], noise[b]) for a, b in g.arcs}
    augmented = Graph.from_edges(g.nodes + tuple(noise[label] for label in g.nodes), arrows, arcs)
    logger.debug(f"🔧 Grafo aumentado con {len(g.nodes)} nodos de ruido")
    return augmented


def _edge_from_marks(i: Label, j: Label, head_at_i: bool, head_at_j: bool) -> Edge:
    if head_at_i and head_at_j:
        return Edge(i, j, Mark.ARC)
    if head_at_j:
        return Edge(i, j, Mark.ARROW)
    if head_at_i:
        return Edge(j, i, Mark.ARROW)
    raise ProjectionConflictError(
        "Camino sin puntas de flecha entre {} y {}: requiere una línea".format(i, j))


def _normalize(g: Graph, edge: Edge) -> Edge:
    if edge.mark is Mark.ARC and g.index(edge.head) < g.index(edge.tail):
        return Edge(edge.head, edge.tail, Mark.ARC)
    return edge


def _generated_edges(g: Graph, latent: FrozenSet[Label]) -> Dict[FrozenSet[Label], Set[Edge]]:
    """Aristas inducidas por caminos cuyos nodos internos están en latent y no son colisionadores"""
    candidates: Dict[FrozenSet[Label], Set[Edge]] = {}

    def walk(path: List[Label]) -> None:
        last = path[-1]
        for nxt in sorted(g.neighbors(last), key=g.index):
            if nxt in path:
                continue
            if len(path) >= 2 and is_collider(g, path[-2], last, nxt):
                continue
            if nxt in latent:
                walk(path + [nxt])
                continue
            start = path[0]
            edge = _edge_from_marks(start, nxt, g.arrowhead_at(path[1] if len(path) > 1 else nxt, start),
                                    g.arrowhead_at(last, nxt))
            candidates.setdefault(frozenset((start, nxt)), set()).add(_normalize(g, edge))

    for start in g.nodes:
        if start not in latent:
            walk([start])
    return candidates


def latent_projection(g: Graph, latent: Iterable[Label]) -> Graph:
    """
    Marginaliza los nodos de `latent` preservando la separación entre los retenidos

    Se generan aristas a partir de caminos con nodos internos latentes y no
    colisionadores, hasta un punto fijo, y luego se borran los latentes.

    Raises:
        GraphError: latent no es subconjunto de los nodos
        ProjectionConflictError: un par retenido recibe marcas distintas
    """
    latent = frozenset(latent)
    unknown = latent - set(g.nodes)
    if unknown:
        raise GraphError("Nodos latentes desconocidos: {}".format(sorted(unknown)))
    if not latent:
        return g

    current = g
    while True:
        candidates = _generated_edges(current, latent)
        for pair, edges in candidates.items():
            if len(edges) > 1:
                listed = ", ".join(sorted(str(edge) for edge in edges))
                logger.warning(f"⚠️ Proyección con marcas en conflicto: {listed}")
                raise ProjectionConflictError(
                    "Marcas en conflicto para el par {}: {}".format(sorted(pair), listed))

        known = {frozenset((edge.tail, edge.head)) for edge in current.edges()}
        new_edges = [next(iter(edges)) for pair, edges in candidates.items() if pair not in known]
        if not new_edges:
            break
        current = Graph.from_edges(
            current.nodes,
            set(current.arrows) | {(edge.tail, edge.head) for edge in new_edges if edge.mark is Mark.ARROW},
            set(current.arcs) | {(edge.tail, edge.head) for edge in new_edges if edge.mark is Mark.ARC},
        )

    retained = tuple(label for label in g.nodes if label not in latent)
    projected = current.induced_subgraph(retained)
    logger.debug(f"🔍 Proyección sobre {len(retained)} nodos: {projected.edge_count} aristas")
    return projected

