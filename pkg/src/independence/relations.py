# src/independence/relations.py
"""
Relaciones entre un modelo de independencia y un grafo

Esqueleto del modelo, Markov global, fidelidad, Markov minimal, Markov
pareado inverso, fidelidad de orientación y marginalización.
"""

import itertools
import logging
from typing import Iterable

from common.errors import UniverseMismatchError
from common.verdict import Verdict
from graphs.ancestral import anc_pair, require_ancestral, skeleton
from graphs.graph import Graph, Label, Skeleton
from independence.bitsets import submasks
from independence.model import IndependenceModel, Triple
from separation.induced import induced_model
from separation.msep import m_separated

logger = logging.getLogger(__name__)


def _aligned(model: IndependenceModel, g: Graph) -> IndependenceModel:
    return model.aligned_to(g.nodes)


def skeleton_of_model(model: IndependenceModel) -> Skeleton:
    """Arista i–j sii ningún C ⊆ V\\{i,j} da ⟨i,j|C⟩"""
    separated = {
        frozenset(model.labels(a) | model.labels(b))
        for a, b, _ in model.singleton_pairs()
    }
    pairs = [
        (i, j) for i, j in itertools.combinations(model.universe, 2)
        if frozenset((i, j)) not in separated
    ]
    return Skeleton.from_pairs(model.universe, pairs)


def is_markovian(model: IndependenceModel, g: Graph) -> Verdict:
    """J(G) ⊆ J; testigo: la primera tripleta de separación ausente"""
    model = _aligned(model, g)
    missing = induced_model(g).difference(model)
    if missing:
        witness = model.triple(*missing[0])
        return Verdict.fail(witness, "separación sin independencia: {}".format(witness))
    return Verdict.ok()


def is_faithful(model: IndependenceModel, g: Graph) -> Verdict:
    """J = J(G); testigo {"missing": t} (separación ausente) o {"extra": t}"""
    model = _aligned(model, g)
    graph_model = induced_model(g)
    missing = graph_model.difference(model)
    if missing:
        triple = model.triple(*missing[0])
        return Verdict.fail({"missing": triple}, "falta {}".format(triple))
    extra = model.difference(graph_model)
    if extra:
        triple = model.triple(*extra[0])
        return Verdict.fail({"extra": triple}, "independencia sin separación: {}".format(triple))
    return Verdict.ok()


def is_minimally_markovian(model: IndependenceModel, g: Graph) -> Verdict:
    """Markoviano y sk(G) = sk(J)"""
    markov = is_markovian(model, g)
    if not markov:
        return Verdict.fail({"markov": markov.witness}, markov.message)

    graph_edges = skeleton(g).edges
    model_edges = skeleton_of_model(_aligned(model, g)).edges
    if graph_edges != model_edges:
        only_graph = sorted(tuple(g.sort_nodes(edge)) for edge in graph_edges - model_edges)
        only_model = sorted(tuple(g.sort_nodes(edge)) for edge in model_edges - graph_edges)
        return Verdict.fail(
            {"only_in_graph": only_graph, "only_in_model": only_model},
            "esqueletos distintos: grafo {} / modelo {}".format(only_graph, only_model))
    return Verdict.ok()


def converse_pairwise_markov(model: IndependenceModel, g: Graph) -> Verdict:
    """Para cada par adyacente i∼j de g, ⟨i,j|an(i,j)⟩ ∉ J"""
    model = _aligned(model, g)
    for i, j in skeleton(g).sorted_edges():
        ancestors = anc_pair(g, i, j)
        if model.holds([i], [j], ancestors):
            witness = {"pair": (i, j), "ancestors": g.sort_nodes(ancestors)}
            return Verdict.fail(witness, "{} ∼ {} pero {}".format(i, j, Triple.of([i], [j], ancestors)))
    return Verdict.ok()


def orientation_faithful(model: IndependenceModel, g: Graph) -> Verdict:
    """
    Para toda V-configuración ⟨a,l,b⟩ de g y todo S ⊆ V\\{a,b} con a y b
    conectados dado S, ⟨a,b|S⟩ ∉ J. Testigo (a, l, b, S).
    """
    require_ancestral(g)
    model = _aligned(model, g)
    for a, l, b in skeleton(g).v_configurations():
        free = model.all_mask & ~model.mask([a, b])
        for s in submasks(free):
            s_labels = model.labels(s)
            if m_separated(g, [a], [b], s_labels):
                continue
            if model.holds([a], [b], s_labels):
                witness = {"v_configuration": (a, l, b), "s": s_labels}
                return Verdict.fail(witness, "{} conectado a {} dado {} pero independientes".format(
                    a, b, sorted(s_labels)))
    return Verdict.ok()


def marginalize_model(model: IndependenceModel, marginalized: Iterable[Label]) -> IndependenceModel:
    """
    Tripletas que evitan M, sobre V \\ M

    Raises:
        UniverseMismatchError: M contiene nodos fuera del universo
    """
    marginalized = frozenset(map(str, marginalized))
    unknown = marginalized - set(model.universe)
    if unknown:
        raise UniverseMismatchError("Nodos a marginalizar fuera del universo: {}".format(sorted(unknown)))
    if not marginalized:
        return model
    kept = [label for label in model.universe if label not in marginalized]
    return model.restricted_to(kept)
