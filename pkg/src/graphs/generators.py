# src/graphs/generators.py
"""
Generación de grafos ancestrales aleatorios y enumeración de DAGs
"""

import itertools
import logging
from typing import Iterator, List, Optional, Sequence

import networkx as nx
import numpy as np

from common.errors import OrderError
from graphs.ancestral import ancestors, is_valid_order, minimal_order
from graphs.graph import Graph, Label
from graphs.order import PartialOrder

logger = logging.getLogger(__name__)


def default_labels(n: int) -> List[Label]:
    return [str(position + 1) for position in range(n)]


def random_ancestral_graph(rng: np.random.Generator, n: int, edge_prob: float = 0.5,
                           arc_prob: float = 0.3, labels: Optional[Sequence[Label]] = None) -> Graph:
    """
    Grafo ancestral aleatorio

    Se sortea un orden total; cada par recibe (con prob. edge_prob) una flecha
    en el sentido del orden o un arco. Los arcos que quedan entre un nodo y su
    ancestro se convierten en flecha, hasta que no quede ninguno.
    """
    labels = list(labels) if labels is not None else default_labels(n)
    permutation = [labels[position] for position in rng.permutation(n)]

    arrows = set()
    arcs = set()
    for first, second in itertools.combinations(range(n), 2):
        if rng.random() >= edge_prob:
            continue
        a, b = permutation[first], permutation[second]
        if rng.random() < arc_prob:
            arcs.add((a, b))
        else:
            arrows.add((a, b))

    while True:
        graph = Graph.from_edges(labels, arrows, arcs)
        offending = [(a, b) for a, b in sorted(arcs)
                     if a in ancestors(graph, b) or b in ancestors(graph, a)]
        if not offending:
            return graph
        for a, b in offending:
            arcs.discard((a, b))
            # a precede a b en la permutación: la flecha respeta el orden
            arrows.add((a, b))


def random_dag(rng: np.random.Generator, n: int, edge_prob: float = 0.5,
               labels: Optional[Sequence[Label]] = None) -> Graph:
    return random_ancestral_graph(rng, n, edge_prob=edge_prob, arc_prob=0.0, labels=labels)


def random_maximal_ancestral_graph(rng: np.random.Generator, n: int, edge_prob: float = 0.5,
                                   arc_prob: float = 0.3, max_attempts: int = 200,
                                   labels: Optional[Sequence[Label]] = None) -> Graph:
    """Reintenta hasta obtener un grafo ancestral maximal (los DAG siempre lo son)"""
    from separation.induced import is_maximal

    for _ in range(max_attempts):
        graph = random_ancestral_graph(rng, n, edge_prob, arc_prob, labels)
        if is_maximal(graph):
            return graph
    logger.warning("⚠️ Sin grafo maximal tras %d intentos, se usa un DAG", max_attempts)
    return random_dag(rng, n, edge_prob, labels)


def all_dags(labels: Sequence[Label]) -> Iterator[Graph]:
    """Todos los DAGs etiquetados sobre labels (sin arista, a→b o b→a por par)"""
    labels = list(labels)
    pairs = list(itertools.combinations(labels, 2))
    for choice in itertools.product((0, 1, 2), repeat=len(pairs)):
        arrows = []
        for (a, b), option in zip(pairs, choice):
            if option == 1:
                arrows.append((a, b))
            elif option == 2:
                arrows.append((b, a))
        directed = nx.DiGraph(arrows)
        if nx.is_directed_acyclic_graph(directed):
            yield Graph.from_edges(labels, arrows)


def random_valid_order(rng: np.random.Generator, g: Graph, extra_pairs: int = 3) -> PartialOrder:
    """
    Orden válido para g: el orden mínimo más pares aleatorios que no vuelvan
    comparables los extremos de un arco
    """
    order = minimal_order(g)
    labels = list(g.nodes)
    for _ in range(extra_pairs):
        if len(labels) < 2:
            break
        first, second = rng.choice(len(labels), size=2, replace=False)
        a, b = labels[first], labels[second]
        if order.comparable(a, b):
            continue
        try:
            candidate = PartialOrder.from_pairs(g.nodes, set(order.relation) | {(a, b)})
        except OrderError:
            continue
        if is_valid_order(g, candidate):
            order = candidate
    return order
