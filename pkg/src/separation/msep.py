# src/separation/msep.py
"""
m-separación en grafos mixtos

Dos implementaciones que deben coincidir:
- "paths": enumeración de caminos simples (referencia)
- "reachability": búsqueda sobre estados (nodo, ¿llegamos con punta de flecha?)
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from common.errors import GraphError, QueryError
from graphs.ancestral import ancestors_of_set, is_collider
from graphs.graph import Graph, Label

logger = logging.getLogger(__name__)

METHODS = ("reachability", "paths")


@dataclass(frozen=True)
class SeparationQuery:
    """⟨A, B | C⟩ con A, B no vacíos y los tres conjuntos disjuntos"""

    a: FrozenSet[Label]
    b: FrozenSet[Label]
    c: FrozenSet[Label] = frozenset()

    def __post_init__(self):
        a, b, c = (frozenset(map(str, part)) for part in (self.a, self.b, self.c))
        if not a or not b:
            raise QueryError("A y B deben ser no vacíos")
        if a & b or a & c or b & c:
            raise QueryError("Conjuntos solapados: A={} B={} C={}".format(sorted(a), sorted(b), sorted(c)))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def of(cls, a: Iterable[Label], b: Iterable[Label], c: Iterable[Label] = ()) -> "SeparationQuery":
        return cls(frozenset(a), frozenset(b), frozenset(c))

    def swapped(self) -> "SeparationQuery":
        return SeparationQuery(self.b, self.a, self.c)

    def check_nodes(self, g: Graph) -> None:
        g.check_nodes(self.a | self.b | self.c)


def _closure_of(g: Graph, c: FrozenSet[Label]) -> FrozenSet[Label]:
    """C ∪ an(C): donde un colisionador queda abierto"""
    return c | ancestors_of_set(g, c)


def _inner_node_open(g: Graph, before: Label, node: Label, after: Label,
                     c: FrozenSet[Label], open_colliders: FrozenSet[Label]) -> bool:
    if is_collider(g, before, node, after):
        return node in open_colliders
    return node not in c


def is_connecting_path(g: Graph, path: Sequence[Label], c: Iterable[Label] = ()) -> bool:
    """
    Colisionadores internos en C ∪ an(C) y no colisionadores fuera de C

    Raises:
        GraphError: path no es un camino de g
    """
    path = tuple(path)
    c = g.check_nodes(c)
    g.check_nodes(path)
    if len(path) < 2:
        raise GraphError("Un camino necesita al menos una arista: {}".format(path))
    if len(set(path)) != len(path):
        raise GraphError("Camino con nodos repetidos: {}".format(path))
    for a, b in zip(path, path[1:]):
        if not g.adjacent(a, b):
            raise GraphError("{} y {} no son adyacentes".format(a, b))

    open_colliders = _closure_of(g, c)
    return all(
        _inner_node_open(g, path[position - 1], path[position], path[position + 1], c, open_colliders)
        for position in range(1, len(path) - 1)
    )


def connecting_path(g: Graph, a: Iterable[Label], b: Iterable[Label],
                    c: Iterable[Label] = ()) -> Optional[Tuple[Label, ...]]:
    """Primer camino conectante entre A y B dado C (DFS por índice), o None"""
    query = SeparationQuery.of(a, b, c)
    query.check_nodes(g)
    open_colliders = _closure_of(g, query.c)

    def extend(path: List[Label]) -> Optional[Tuple[Label, ...]]:
        last = path[-1]
        for nxt in sorted(g.neighbors(last), key=g.index):
            if nxt in path:
                continue
            if len(path) >= 2 and not _inner_node_open(g, path[-2], last, nxt, query.c, open_colliders):
                continue
            if nxt in query.b:
                return tuple(path + [nxt])
            if nxt in query.a:
                continue
            found = extend(path + [nxt])
            if found:
                return found
        return None

    for start in g.sort_nodes(query.a):
        found = extend([start])
        if found:
            return found
    return None


def reachable(g: Graph, sources: Iterable[Label], c: Iterable[Label] = ()) -> FrozenSet[Label]:
    """
    Nodos fuera de C unidos a `sources` por un camino conectante dado C

    Estados (nodo, punta_de_flecha_en_nodo). Un nodo intermedio deja pasar
    si es colisionador en C ∪ an(C), o no colisionador fuera de C.
    """
    sources = g.check_nodes(sources)
    c = g.check_nodes(c)
    open_colliders = _closure_of(g, c)

    reached: Set[Label] = set()
    seen: Set[Tuple[Label, Optional[bool]]] = set()
    queue = deque((source, None) for source in sorted(sources, key=g.index))
    while queue:
        node, head_in = queue.popleft()
        if (node, head_in) in seen:
            continue
        seen.add((node, head_in))
        for nxt in g.neighbors(node):
            if head_in is not None:
                collider = head_in and g.arrowhead_at(nxt, node)
                if collider and node not in open_colliders:
                    continue
                if not collider and node in c:
                    continue
            reached.add(nxt)
            queue.append((nxt, g.arrowhead_at(node, nxt)))
    return frozenset(reached - c - sources)


def m_separated(g: Graph, a: Iterable[Label], b: Iterable[Label], c: Iterable[Label] = (),
                method: str = "reachability") -> bool:
    """
    A ⊥ B | C en g: ningún camino entre A y B es conectante dado C

    Raises:
        QueryError: conjuntos solapados o vacíos, o método desconocido
        GraphError: nodos desconocidos
    """
    query = SeparationQuery.of(a, b, c)
    query.check_nodes(g)
    if method == "paths":
        return connecting_path(g, query.a, query.b, query.c) is None
    if method == "reachability":
        return not (reachable(g, query.a, query.c) & query.b)
    raise QueryError("Método de separación desconocido: {} (opciones: {})".format(method, ", ".join(METHODS)))


def separated(g: Graph, query: SeparationQuery, method: str = "reachability") -> bool:
    return m_separated(g, query.a, query.b, query.c, method)
