# src/scm/generators.py
"""
SCMs discretos aleatorios y válidos por construcción

Cada arco i↔j aporta una variable binaria compartida u_ij; el ruido ε_i
codifica su componente propia junto con los u de sus arcos. Así ε_A y ε_B
son dependientes exactamente cuando hay un arco entre A y B.
"""

import itertools
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from graphs.generators import random_ancestral_graph
from graphs.graph import Graph, Label
from scm.model import Mechanism, NoiseBlock, Scm

logger = logging.getLogger(__name__)

STYLES = ("random", "additive")


def random_law(rng: np.random.Generator, size: int, uniform: bool = False) -> List[Fraction]:
    """Ley racional con todos los pesos positivos"""
    weights = [1] * size if uniform else [int(w) for w in rng.integers(1, 6, size=size)]
    total = sum(weights)
    return [Fraction(w, total) for w in weights]


def _block_table(rng: np.random.Generator, g: Graph, component: Sequence[Label], own_sizes: Dict[Label, int],
                 uniform: bool) -> Dict[tuple, Fraction]:
    """Tabla conjunta de los ruidos de una componente de arcos"""
    arcs = [tuple(g.sort_nodes(pair)) for pair in g.arcs if pair[0] in component and pair[1] in component]
    arcs.sort(key=lambda pair: (g.index(pair[0]), g.index(pair[1])))
    own_laws = {label: random_law(rng, own_sizes[label], uniform) for label in component}
    # una ley binaria no degenerada por arco
    arc_laws = [random_law(rng, 2, uniform) for _ in arcs]

    table: Dict[tuple, Fraction] = {}
    own_ranges = [range(own_sizes[label]) for label in component]
    for own in itertools.product(*own_ranges):
        own_weight = Fraction(1)
        for label, value in zip(component, own):
            own_weight *= own_laws[label][value]
        for bits in itertools.product((0, 1), repeat=len(arcs)):
            weight = own_weight
            for law, bit in zip(arc_laws, bits):
                weight *= law[bit]
            values = []
            for label, own_value in zip(component, own):
                code = own_value
                for (a, b), bit in zip(arcs, bits):
                    if label in (a, b):
                        code = code * 2 + bit
                values.append(code)
            key = tuple(values)
            table[key] = table.get(key, Fraction(0)) + weight
    return table


def random_scm(rng: np.random.Generator, n: int, max_support: int = 3, edge_prob: float = 0.5,
               arc_prob: float = 0.3, style: str = "random", uniform_noise: bool = False,
               graph: Optional[Graph] = None) -> Scm:
    """
    SCM aleatorio sobre un grafo ancestral (dado o sorteado)

    Args:
        style: "random" tablas arbitrarias; "additive" φ_i = (Σ c_p·x_p + ε_i) mod k_i,
            inyectiva y sobreyectiva en el ruido cuando |supp ε_i| = k_i
        uniform_noise: todas las leyes de ruido uniformes
    """
    if style not in STYLES:
        raise ValueError("Estilo desconocido: {} (use {})".format(style, STYLES))
    g = graph if graph is not None else random_ancestral_graph(rng, n, edge_prob, arc_prob)

    arc_degree = {label: len(g.spouses(label)) for label in g.nodes}
    own_sizes: Dict[Label, int] = {}
    for label in g.nodes:
        if style == "additive" and arc_degree[label]:
            own_sizes[label] = 1
        else:
            own_sizes[label] = int(rng.integers(1 if arc_degree[label] else 2, max_support + 1))

    blocks: List[NoiseBlock] = []
    for component in sorted(nx.connected_components(g.arc_graph), key=lambda nodes: min(map(g.index, nodes))):
        members = g.sort_nodes(component)
        blocks.append(NoiseBlock(members, _block_table(rng, g, members, own_sizes, uniform_noise)))

    noise_values = {label: own_sizes[label] * 2 ** arc_degree[label] for label in g.nodes}
    supports: Dict[Label, Tuple[int, ...]] = {}
    for label in g.nodes:
        size = noise_values[label] if style == "additive" else int(rng.integers(2, max_support + 1))
        supports[label] = tuple(range(size))

    mechanisms: Dict[Label, Mechanism] = {}
    for label in g.nodes:
        parents = g.sort_nodes(g.parents(label))
        size = len(supports[label])
        coefficients = [int(c) for c in rng.integers(1, max(size, 2), size=len(parents))]
        table = {}
        for values in itertools.product(*(supports[p] for p in parents)):
            for e in range(noise_values[label]):
                if style == "additive":
                    out = (sum(c * x for c, x in zip(coefficients, values)) + e) % size
                else:
                    out = int(rng.integers(size))
                table[(tuple(values), e)] = out
        mechanisms[label] = Mechanism(label, parents, table)

    scm = Scm(g, supports, tuple(blocks), mechanisms, name="random-{}".format(style))
    logger.debug(f"🔧 SCM aleatorio: {scm}")
    return scm
