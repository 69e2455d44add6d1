# src/graphs/ancestral.py
"""
Combinatoria de grafos ancestrales dirigidos

Validez, ancestros, colisionadores, órdenes mínimos, caminos colisionadores
mínimos, distritos y mantos de Markov.
"""

import logging
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple

import networkx as nx

from common.errors import GraphError, OrderError
from common.verdict import Verdict
from graphs.graph import Edge, Graph, Label, Mark, Skeleton
from graphs.order import PartialOrder

logger = logging.getLogger(__name__)

Path = Tuple[Label, ...]


class TripathKind(str, Enum):
    COLLIDER = "collider"
    NON_COLLIDER = "non-collider"


# ==========================================
# ANCESTROS Y VALIDEZ
# ==========================================

def ancestors(g: Graph, i: Label) -> FrozenSet[Label]:
    """an(i): nodos con un camino dirigido hacia i (i excluido)"""
    g.index(i)
    return frozenset(nx.ancestors(g.digraph, i)) - {i}


def ancestors_of_set(g: Graph, nodes: Iterable[Label]) -> FrozenSet[Label]:
    """Unión de an(v) para v en nodes (puede incluir miembros de nodes)"""
    result: Set[Label] = set()
    for node in nodes:
        result |= ancestors(g, node)
    return frozenset(result)


def anc_pair(g: Graph, i: Label, j: Label) -> FrozenSet[Label]:
    """an(i,j) = (an(i) ∪ an(j)) \\ {i,j}"""
    if i == j:
        raise GraphError("anc_pair requiere nodos distintos, recibido {} dos veces".format(i))
    return (ancestors(g, i) | ancestors(g, j)) - {i, j}


def is_ancestral(g: Graph) -> Verdict:
    """
    Sin ciclos dirigidos y sin arcos entre un nodo y uno de sus ancestros

    Testigos: {"kind": "cycle", "nodes": [...]} o
    {"kind": "arc", "arc": (a, b), "ancestor": x, "descendant": y}.
    """
    try:
        cycle = nx.find_cycle(g.digraph)
        nodes = [edge[0] for edge in cycle]
        return Verdict.fail({"kind": "cycle", "nodes": nodes}, "ciclo dirigido {}".format(" -> ".join(nodes)))
    except nx.NetworkXNoCycle:
        pass

    for edge in g.edges():
        if edge.mark is not Mark.ARC:
            continue
        a, b = edge.tail, edge.head
        for ancestor, descendant in ((a, b), (b, a)):
            if ancestor in ancestors(g, descendant):
                return Verdict.fail(
                    {"kind": "arc", "arc": (a, b), "ancestor": ancestor, "descendant": descendant},
                    "arco {}<->{} con {} ancestro de {}".format(a, b, ancestor, descendant),
                )
    return Verdict.ok()


def require_ancestral(g: Graph) -> None:
    verdict = is_ancestral(g)
    if not verdict:
        raise GraphError("El grafo no es ancestral: {}".format(verdict.message))


def classify_tripath(g: Graph, a: Label, t: Label, b: Label) -> TripathKind:
    """Colisionador sii ambas aristas tienen punta de flecha en t"""
    for endpoint in (a, t, b):
        g.index(endpoint)
    if g.arrowhead_at(a, t) and g.arrowhead_at(b, t):
        return TripathKind.COLLIDER
    return TripathKind.NON_COLLIDER


def is_collider(g: Graph, a: Label, t: Label, b: Label) -> bool:
    return classify_tripath(g, a, t, b) is TripathKind.COLLIDER


# ==========================================
# ÓRDENES
# ==========================================

def minimal_order(g: Graph) -> PartialOrder:
    """i > j sii hay camino dirigido i ⇒ j; arcos y nodos sueltos quedan incomparables"""
    require_ancestral(g)
    pairs = [(ancestor, node) for node in g.nodes for ancestor in ancestors(g, node)]
    return PartialOrder.from_pairs(g.nodes, pairs)


def is_valid_order(g: Graph, order: PartialOrder) -> Verdict:
    """Toda flecha i→j cumple i > j y todo arco tiene extremos incomparables"""
    if set(order.domain) != set(g.nodes):
        raise OrderError("El orden está definido sobre {} y el grafo sobre {}".format(
            sorted(order.domain), sorted(g.nodes)))

    for edge in g.edges():
        if edge.mark is Mark.ARROW and not order.greater(edge.tail, edge.head):
            return Verdict.fail(edge, "flecha {} sin {} > {}".format(edge, edge.tail, edge.head))
        if edge.mark is Mark.ARC and order.comparable(edge.tail, edge.head):
            return Verdict.fail(edge, "arco {} con extremos comparables".format(edge))
    return Verdict.ok()


# ==========================================
# ESQUELETO Y COLISIONADORES
# ==========================================

def skeleton(g: Graph) -> Skeleton:
    return Skeleton.from_pairs(g.nodes, ((edge.tail, edge.head) for edge in g.edges()))


def collider_v_configurations(g: Graph) -> List[Tuple[Label, Label, Label]]:
    """⟨i,t,j⟩ con i, j no adyacentes y t colisionador"""
    return [
        (i, t, j) for i, t, j in skeleton(g).v_configurations()
        if is_collider(g, i, t, j)
    ]


def canonical_path(g: Graph, path: Iterable[Label]) -> Path:
    """Un camino y su reverso son el mismo; se elige el extremo de menor índice primero"""
    path = tuple(path)
    if len(path) > 1 and g.index(path[-1]) < g.index(path[0]):
        return path[::-1]
    return path


def collider_paths(g: Graph) -> Dict[Tuple[Label, Label], List[Path]]:
    """
    Caminos colisionadores entre extremos no adyacentes, agrupados por extremos

    Cada camino aparece una vez, orientado desde el extremo de menor índice.
    """
    found: Dict[Tuple[Label, Label], List[Path]] = {}

    def extend(path: List[Label]) -> None:
        last = path[-1]
        for nxt in sorted(g.neighbors(last), key=g.index):
            if nxt in path:
                continue
            if len(path) >= 2 and not is_collider(g, path[-2], last, nxt):
                continue
            candidate = path + [nxt]
            start = candidate[0]
            if len(candidate) >= 3 and not g.adjacent(start, nxt) and g.index(start) < g.index(nxt):
                found.setdefault((start, nxt), []).append(tuple(candidate))
            extend(candidate)

    for start in g.nodes:
        extend([start])
    return found


def minimal_collider_paths(g: Graph) -> List[Path]:
    """
    Caminos colisionadores ⟨i,B,j⟩ sin B' ⊊ B que forme otro camino colisionador

    Se devuelven ordenados por longitud y luego por índices.
    """
    require_ancestral(g)
    minimal: List[Path] = []
    for paths in collider_paths(g).values():
        inner_sets = [frozenset(path[1:-1]) for path in paths]
        for path, inner in zip(paths, inner_sets):
            if not any(other < inner for other in inner_sets):
                minimal.append(path)
    minimal.sort(key=lambda path: (len(path), tuple(g.index(node) for node in path)))
    logger.debug(f"🔍 {len(minimal)} caminos colisionadores mínimos")
    return minimal


# ==========================================
# DISTRITOS Y MANTOS DE MARKOV
# ==========================================

def district(g: Graph, i: Label) -> FrozenSet[Label]:
    """Nodos alcanzables desde i solo por arcos, más i"""
    g.index(i)
    return frozenset(nx.node_connected_component(g.arc_graph, i))


def is_ancestral_set(g: Graph, nodes: Iterable[Label]) -> bool:
    nodes = g.check_nodes(nodes)
    return ancestors_of_set(g, nodes) <= nodes


def markov_blanket(g: Graph, i: Label, nodes: Iterable[Label]) -> FrozenSet[Label]:
    """
    mb(i, A) = pa_{G[A]}(dis_{G[A]}(i)) ∪ (dis_{G[A]}(i) \\ {i})

    Raises:
        GraphError: A no es ancestral, no contiene a i, o i tiene hijos en A
    """
    nodes = g.check_nodes(nodes)
    if i not in nodes:
        raise GraphError("{} no pertenece al conjunto {}".format(i, sorted(nodes)))
    if not is_ancestral_set(g, nodes):
        raise GraphError("El conjunto {} no es ancestral".format(sorted(nodes)))
    if g.children(i) & nodes:
        raise GraphError("{} tiene hijos en {}".format(i, sorted(nodes)))

    sub = g.induced_subgraph(nodes)
    members = district(sub, i)
    blanket: Set[Label] = set(members)
    for member in members:
        blanket |= sub.parents(member)
    return frozenset(blanket - {i})


def edge_of(g: Graph, a: Label, b: Label) -> Edge:
    edge = g.edge_between(a, b)
    if edge is None:
        raise GraphError("No hay arista entre {} y {}".format(a, b))
    return edge
