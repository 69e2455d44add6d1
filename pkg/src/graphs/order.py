# src/graphs/order.py
"""
Órdenes parciales estrictos sobre los nodos
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Tuple

import networkx as nx

from common.errors import OrderError

Label = str


@dataclass(frozen=True)
class PartialOrder:
    """
    Orden parcial estricto; `relation` contiene pares (a, b) con a > b

    La relación se cierra transitivamente al construir. Un ciclo (a > b y
    b > a, directa o transitivamente) o un par reflexivo es un OrderError.
    """

    domain: Tuple[Label, ...]
    relation: FrozenSet[Tuple[Label, Label]] = frozenset()

    def __post_init__(self):
        domain = tuple(str(label) for label in self.domain)
        if len(set(domain)) != len(domain):
            raise OrderError("Dominio con etiquetas duplicadas: {}".format(domain))

        cover = nx.DiGraph()
        cover.add_nodes_from(domain)
        for greater, lesser in self.relation:
            greater, lesser = str(greater), str(lesser)
            if greater not in cover or lesser not in cover:
                raise OrderError("Par fuera del dominio: {} > {}".format(greater, lesser))
            if greater == lesser:
                raise OrderError("Par reflexivo: {} > {}".format(greater, lesser))
            cover.add_edge(greater, lesser)

        if not nx.is_directed_acyclic_graph(cover):
            cycle = nx.find_cycle(cover)
            raise OrderError("Relación no antisimétrica, ciclo: {}".format(
                " > ".join(edge[0] for edge in cycle)))

        closure = nx.transitive_closure_dag(cover)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "relation", frozenset(closure.edges()))

    @classmethod
    def from_pairs(cls, domain: Iterable[Label], pairs: Iterable[Tuple[Label, Label]]) -> "PartialOrder":
        """Orden generado por pares (mayor, menor)"""
        return cls(tuple(domain), frozenset(pairs))

    @cached_property
    def _index(self) -> Dict[Label, int]:
        return {label: position for position, label in enumerate(self.domain)}

    @cached_property
    def _above(self) -> Dict[Label, FrozenSet[Label]]:
        above = {label: set() for label in self.domain}
        for greater, lesser in self.relation:
            above[lesser].add(greater)
        return {label: frozenset(nodes) for label, nodes in above.items()}

    def greater(self, a: Label, b: Label) -> bool:
        """a > b"""
        return (a, b) in self.relation

    def less(self, a: Label, b: Label) -> bool:
        """a < b"""
        return (b, a) in self.relation

    def comparable(self, a: Label, b: Label) -> bool:
        return self.greater(a, b) or self.less(a, b)

    def above(self, label: Label) -> FrozenSet[Label]:
        """Nodos estrictamente mayores que label"""
        if label not in self._above:
            raise OrderError("Nodo fuera del dominio: {}".format(label))
        return self._above[label]

    @cached_property
    def linear_extension(self) -> Tuple[Label, ...]:
        """
        Extensión lineal canónica: mayores primero, empates por índice
        """
        cover = nx.DiGraph()
        cover.add_nodes_from(self.domain)
        cover.add_edges_from(self.relation)
        return tuple(nx.lexicographical_topological_sort(cover, key=self._index.__getitem__))

    def to_jsonable(self):
        pairs = sorted(self.relation, key=lambda pair: (self._index[pair[0]], self._index[pair[1]]))
        return [list(pair) for pair in pairs]

    def __str__(self) -> str:
        return "{" + ", ".join("{}>{}".format(a, b) for a, b in self.to_jsonable()) + "}"
