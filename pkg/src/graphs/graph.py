# src/graphs/graph.py
"""
Grafos mixtos simples (flechas y arcos) y su vista no dirigida
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Set, Tuple

import networkx as nx

from common.errors import GraphError

Label = str
NodeSet = FrozenSet[Label]


class Mark(str, Enum):
    """Tipo de arista"""
    ARROW = "->"
    ARC = "<->"


class Edge(NamedTuple):
    tail: Label
    head: Label
    mark: Mark

    def __str__(self) -> str:
        return "{} {} {}".format(self.tail, self.mark.value, self.head)


@dataclass(frozen=True)
class Graph:
    """
    Grafo mixto simple sobre un conjunto finito y ordenado de nodos

    Los nodos son etiquetas; su índice es la posición en `nodes`. Los arcos se
    guardan una sola vez con el extremo de menor índice primero, así la
    igualdad de conjuntos es igualdad estructural.

    Args:
        nodes: etiquetas en orden (índices densos 0..n-1)
        arrows: pares (cola, cabeza)
        arcs: pares no ordenados
        allow_multi: admite más de una arista por par (solo para validar
            entradas defectuosas con is_ancestral)
    """

    nodes: Tuple[Label, ...]
    arrows: FrozenSet[Tuple[Label, Label]] = frozenset()
    arcs: FrozenSet[Tuple[Label, Label]] = frozenset()
    allow_multi: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        nodes = tuple(str(node) for node in self.nodes)
        if len(set(nodes)) != len(nodes):
            raise GraphError("Etiquetas de nodo duplicadas: {}".format(nodes))
        object.__setattr__(self, "nodes", nodes)

        index = {label: position for position, label in enumerate(nodes)}
        arrows = frozenset((str(a), str(b)) for a, b in self.arrows)
        arcs = set()
        for a, b in self.arcs:
            a, b = str(a), str(b)
            if a in index and b in index and index[b] < index[a]:
                a, b = b, a
            arcs.add((a, b))
        arcs = frozenset(arcs)

        seen: Set[FrozenSet[Label]] = set()
        for a, b in sorted(arrows) + sorted(arcs):
            for endpoint in (a, b):
                if endpoint not in index:
                    raise GraphError("Nodo desconocido en arista {}-{}: {}".format(a, b, endpoint))
            if a == b:
                raise GraphError("Lazo no permitido en {}".format(a))
            pair = frozenset((a, b))
            if pair in seen and not self.allow_multi:
                raise GraphError("Más de una arista entre {} y {}".format(a, b))
            seen.add(pair)

        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "arcs", arcs)

    # ------------------------------------------------------------------
    # Constructores
    # ------------------------------------------------------------------

    @classmethod
    def from_edges(cls, nodes: Iterable[Label], arrows: Iterable[Tuple[Label, Label]] = (),
                   arcs: Iterable[Tuple[Label, Label]] = (), allow_multi: bool = False) -> "Graph":
        return cls(tuple(nodes), frozenset(arrows), frozenset(arcs), allow_multi)

    @classmethod
    def empty(cls, nodes: Iterable[Label]) -> "Graph":
        return cls(tuple(nodes))

    @classmethod
    def complete_dag(cls, nodes: Iterable[Label]) -> "Graph":
        """DAG completo siguiendo el orden de los nodos"""
        nodes = tuple(nodes)
        arrows = [(nodes[i], nodes[j]) for i in range(len(nodes)) for j in range(i + 1, len(nodes))]
        return cls.from_edges(nodes, arrows)

    # ------------------------------------------------------------------
    # Índices y adyacencia
    # ------------------------------------------------------------------

    @cached_property
    def _index(self) -> Dict[Label, int]:
        return {label: position for position, label in enumerate(self.nodes)}

    @cached_property
    def digraph(self) -> nx.DiGraph:
        """Parte dirigida (solo flechas) como DiGraph de networkx"""
        directed = nx.DiGraph()
        directed.add_nodes_from(self.nodes)
        directed.add_edges_from(self.arrows)
        return directed

    @cached_property
    def arc_graph(self) -> nx.Graph:
        """Parte bidirigida como Graph de networkx"""
        bidirected = nx.Graph()
        bidirected.add_nodes_from(self.nodes)
        bidirected.add_edges_from(self.arcs)
        return bidirected

    @cached_property
    def _neighbors(self) -> Dict[Label, FrozenSet[Label]]:
        neighbors: Dict[Label, Set[Label]] = {label: set() for label in self.nodes}
        for a, b in self.arrows | self.arcs:
            neighbors[a].add(b)
            neighbors[b].add(a)
        return {label: frozenset(adjacent) for label, adjacent in neighbors.items()}

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def index(self, label: Label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GraphError("Nodo desconocido: {}".format(label)) from None

    def check_nodes(self, labels: Iterable[Label]) -> FrozenSet[Label]:
        """Valida etiquetas y las devuelve como frozenset"""
        labels = frozenset(labels)
        for label in labels:
            self.index(label)
        return labels

    def sort_nodes(self, labels: Iterable[Label]) -> Tuple[Label, ...]:
        """Ordena etiquetas por índice del grafo"""
        return tuple(sorted(labels, key=self.index))

    def parents(self, label: Label) -> FrozenSet[Label]:
        self.index(label)
        return frozenset(self.digraph.predecessors(label))

    def children(self, label: Label) -> FrozenSet[Label]:
        self.index(label)
        return frozenset(self.digraph.successors(label))

    def spouses(self, label: Label) -> FrozenSet[Label]:
        self.index(label)
        return frozenset(self.arc_graph.neighbors(label))

    def neighbors(self, label: Label) -> FrozenSet[Label]:
        self.index(label)
        return self._neighbors[label]

    def adjacent(self, a: Label, b: Label) -> bool:
        return b in self.neighbors(a)

    def edge_between(self, a: Label, b: Label) -> Optional[Edge]:
        """Arista entre a y b (o None); en grafos no simples, la primera"""
        if (a, b) in self.arrows:
            return Edge(a, b, Mark.ARROW)
        if (b, a) in self.arrows:
            return Edge(b, a, Mark.ARROW)
        if (a, b) in self.arcs:
            return Edge(a, b, Mark.ARC)
        if (b, a) in self.arcs:
            return Edge(b, a, Mark.ARC)
        return None

    def arrowhead_at(self, a: Label, t: Label) -> bool:
        """La arista a–t tiene punta de flecha en t"""
        edge = self.edge_between(a, t)
        if edge is None:
            raise GraphError("No hay arista entre {} y {}".format(a, t))
        return edge.mark is Mark.ARC or edge.head == t

    def edges(self) -> List[Edge]:
        """Aristas en orden canónico: flechas y luego arcos, por índice"""
        arrows = sorted(self.arrows, key=lambda pair: (self.index(pair[0]), self.index(pair[1])))
        arcs = sorted(self.arcs, key=lambda pair: (self.index(pair[0]), self.index(pair[1])))
        return [Edge(a, b, Mark.ARROW) for a, b in arrows] + [Edge(a, b, Mark.ARC) for a, b in arcs]

    @property
    def edge_count(self) -> int:
        return len(self.arrows) + len(self.arcs)

    @cached_property
    def is_dag(self) -> bool:
        return not self.arcs and nx.is_directed_acyclic_graph(self.digraph)

    def induced_subgraph(self, labels: Iterable[Label]) -> "Graph":
        keep = self.check_nodes(labels)
        return Graph(
            tuple(label for label in self.nodes if label in keep),
            frozenset(pair for pair in self.arrows if pair[0] in keep and pair[1] in keep),
            frozenset(pair for pair in self.arcs if pair[0] in keep and pair[1] in keep),
            self.allow_multi,
        )

    def to_jsonable(self) -> Dict[str, list]:
        return {
            "nodes": list(self.nodes),
            "arrows": [[edge.tail, edge.head] for edge in self.edges() if edge.mark is Mark.ARROW],
            "arcs": [[edge.tail, edge.head] for edge in self.edges() if edge.mark is Mark.ARC],
        }

    def __str__(self) -> str:
        edges = ", ".join(str(edge) for edge in self.edges())
        return "Graph[{}]({})".format(" ".join(self.nodes), edges)


@dataclass(frozen=True)
class Skeleton:
    """Vista no dirigida: mismos nodos, aristas sin marcas"""

    nodes: Tuple[Label, ...]
    edges: FrozenSet[FrozenSet[Label]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        edges = frozenset(frozenset(edge) for edge in self.edges)
        for edge in edges:
            if len(edge) != 2 or not edge <= set(self.nodes):
                raise GraphError("Arista de esqueleto inválida: {}".format(sorted(edge)))
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_pairs(cls, nodes: Iterable[Label], pairs: Iterable[Tuple[Label, Label]]) -> "Skeleton":
        return cls(tuple(nodes), frozenset(frozenset(pair) for pair in pairs))

    @cached_property
    def _index(self) -> Dict[Label, int]:
        return {label: position for position, label in enumerate(self.nodes)}

    @cached_property
    def _neighbors(self) -> Dict[Label, FrozenSet[Label]]:
        neighbors: Dict[Label, Set[Label]] = {label: set() for label in self.nodes}
        for edge in self.edges:
            a, b = tuple(edge)
            neighbors[a].add(b)
            neighbors[b].add(a)
        return {label: frozenset(adjacent) for label, adjacent in neighbors.items()}

    def neighbors(self, label: Label) -> FrozenSet[Label]:
        if label not in self._neighbors:
            raise GraphError("Nodo desconocido: {}".format(label))
        return self._neighbors[label]

    def adjacent(self, a: Label, b: Label) -> bool:
        return frozenset((a, b)) in self.edges

    def sorted_edges(self) -> List[Tuple[Label, Label]]:
        """Aristas como pares (menor índice primero), en orden lexicográfico de índices"""
        pairs = [tuple(sorted(edge, key=self._index.__getitem__)) for edge in self.edges]
        return sorted(pairs, key=lambda pair: (self._index[pair[0]], self._index[pair[1]]))

    def v_configurations(self) -> List[Tuple[Label, Label, Label]]:
        """Tripletas ⟨i,k,j⟩ con i–k–j e i, j no adyacentes (i antes que j)"""
        configurations = []
        for k in self.nodes:
            around = sorted(self._neighbors[k], key=self._index.__getitem__)
            for position, i in enumerate(around):
                for j in around[position + 1:]:
                    if not self.adjacent(i, j):
                        configurations.append((i, k, j))
        return sorted(configurations, key=lambda triple: tuple(self._index[label] for label in triple))

    def to_jsonable(self) -> Dict[str, list]:
        return {"nodes": list(self.nodes), "edges": [list(pair) for pair in self.sorted_edges()]}

    def __str__(self) -> str:
        return "Skeleton({})".format(", ".join("{}-{}".format(a, b) for a, b in self.sorted_edges()))
