# src/learning/audit.py
"""
Auditoría de un modelo de independencia frente a un grafo causal G0

Reúne los chequeos del modelo (propiedades, estabilidades, relaciones con
G0) y las salidas del algoritmo natural en un AuditReport con flags y
libro de resultados.
"""

import logging
from typing import Dict, Iterable, List, Optional

from common.errors import UniverseMismatchError
from common.report import AuditReport, FlagResult, LedgerEntry, Provenance, label_ledger
from common.verdict import Verdict
from graphs.ancestral import minimal_order, require_ancestral, skeleton
from graphs.graph import Graph
from graphs.graph_io import serialize_graph
from independence.graphicality import is_graphical
from independence.model import IndependenceModel
from independence.properties import (
    COMPOSITIONAL_GRAPHOID,
    GRAPHOID,
    PropertyId,
    check_property,
    satisfies_all,
)
from independence.relations import (
    converse_pairwise_markov,
    is_faithful,
    is_markovian,
    is_minimally_markovian,
    orientation_faithful,
    skeleton_of_model,
)
from independence.stability import path_stable, v_stable
from learning.equivalence import Method, markov_equivalent, pairwise_uniqueness
from learning.orientations import canonical_choice, stable_orientations
from separation.induced import is_maximal

logger = logging.getLogger(__name__)

# Hipótesis comunes a los resultados sobre el esqueleto y el aprendizaje
BASE_HYPOTHESES = ("g0_maximal", "markovian", "converse_pairwise", "ordered_up", "ordered_down")


def _skeleton_match(model: IndependenceModel, g0: Graph) -> Verdict:
    graph_edges = skeleton(g0).edges
    model_edges = skeleton_of_model(model).edges
    if graph_edges == model_edges:
        return Verdict.ok()
    witness = {
        "only_in_graph": sorted(tuple(g0.sort_nodes(edge)) for edge in graph_edges - model_edges),
        "only_in_model": sorted(tuple(g0.sort_nodes(edge)) for edge in model_edges - graph_edges),
    }
    return Verdict.fail(witness, "sk(G0) ≠ sk(J)")


def outputs_equivalent(outputs: List[Graph], g0: Graph, method: Method) -> Verdict:
    """Todas las salidas Markov equivalentes a G0; sin salidas el flag es falso"""
    if not outputs:
        return Verdict.fail({"reason": "no-stable-orientation"}, "el aprendizaje no produce salida")
    for output in outputs:
        verdict = markov_equivalent(g0, output, method)
        if not verdict:
            witness = {"output": serialize_graph(output), "equivalence": verdict.witness}
            return Verdict.fail(witness, "salida no equivalente a G0: {}".format(verdict.message))
    return Verdict.ok("{} salidas equivalentes a G0".format(len(outputs)))


def build_ledger(flags: Dict[str, FlagResult], g0_is_dag: bool) -> Dict[str, LedgerEntry]:
    """Resultados teóricos: hipótesis evaluadas sobre los flags y conclusión observada"""

    def hypotheses(*names: str) -> Dict[str, Optional[bool]]:
        return {name: flags[name].holds for name in names}

    return label_ledger({
        "skeleton_recovery": LedgerEntry.evaluate(
            hypotheses(*BASE_HYPOTHESES), "sk(G0) = sk(J)", flags["skeleton_match"].holds),
        "minimal_markov": LedgerEntry.evaluate(
            hypotheses(*BASE_HYPOTHESES), "J es minimalmente markoviano a G0",
            flags["minimally_markovian"].holds),
        "learner_equivalence": LedgerEntry.evaluate(
            hypotheses(*BASE_HYPOTHESES, "path_stable"),
            "toda salida del algoritmo natural es Markov equivalente a G0",
            flags["learner_equivalent"].holds),
        "dag_learner_equivalence": LedgerEntry.evaluate(
            hypotheses(*BASE_HYPOTHESES, "v_stable"),
            "toda salida DAG del algoritmo natural es Markov equivalente a G0",
            flags["dag_learner_equivalent"].holds,
            applicable=g0_is_dag),
    })


def audit(model: IndependenceModel, g0: Graph, jobs: Optional[int] = None,
          inputs: Iterable[str] = (), fixture: Optional[str] = None) -> AuditReport:
    """
    Auditoría completa de J frente a G0

    Raises:
        UniverseMismatchError: J y G0 sobre nodos distintos
        GraphError: G0 no es ancestral
        BoundExceededError: esqueleto demasiado grande para el aprendizaje
    """
    if set(model.universe) != set(g0.nodes):
        raise UniverseMismatchError("Modelo sobre {} y grafo sobre {}".format(
            sorted(model.universe), sorted(g0.nodes)))
    require_ancestral(g0)
    model = model.aligned_to(g0.nodes)
    order = minimal_order(g0)

    logger.info(f"🚀 Auditando modelo ({len(model) // 2} sentencias) frente a G0 = {g0}")

    outputs = stable_orientations(model, dag_only=False, jobs=jobs)
    dag_outputs = stable_orientations(model, dag_only=True, jobs=jobs)

    verdicts: Dict[str, Verdict] = {
        "g0_maximal": is_maximal(g0),
        "markovian": is_markovian(model, g0),
        "converse_pairwise": converse_pairwise_markov(model, g0),
        "ordered_up": check_property(model, PropertyId.ORDERED_UPWARD, order),
        "ordered_down": check_property(model, PropertyId.ORDERED_DOWNWARD, order),
        "path_stable": path_stable(model),
        "v_stable": v_stable(model),
        "skeleton_match": _skeleton_match(model, g0),
        "learner_equivalent": outputs_equivalent(outputs, g0, Method.BRUTE),
        "uniqueness": pairwise_uniqueness(outputs, Method.MAG),
        "dag_uniqueness": pairwise_uniqueness(dag_outputs, Method.DAG),
        "minimally_markovian": is_minimally_markovian(model, g0),
        "faithful": is_faithful(model, g0),
        "singleton_transitive": check_property(model, PropertyId.SINGLETON_TRANSITIVITY),
        "graphoid": satisfies_all(model, GRAPHOID),
        "compositional": satisfies_all(model, COMPOSITIONAL_GRAPHOID),
        "graphical": is_graphical(model),
        "orientation_faithful": orientation_faithful(model, g0),
    }
    flags = {name: FlagResult.from_verdict(verdict) for name, verdict in verdicts.items()}
    # el flag de grafo gráfico lleva el grafo como testigo positivo
    if verdicts["graphical"].holds:
        flags["graphical"] = FlagResult(holds=True, witness=serialize_graph(verdicts["graphical"].witness),
                                        message=verdicts["graphical"].message)

    if g0.is_dag:
        flags["dag_learner_equivalent"] = FlagResult.from_verdict(
            outputs_equivalent(dag_outputs, g0, Method.DAG))
    else:
        flags["dag_learner_equivalent"] = FlagResult.not_applicable("G0 no es un DAG")

    report = AuditReport(
        subject="model",
        flags=flags,
        ledger=build_ledger(flags, g0.is_dag),
        details={
            "g0": serialize_graph(g0),
            "minimal_order": order.to_jsonable(),
            "stable_orientations": [serialize_graph(g) for g in outputs],
            "dag_orientations": [serialize_graph(g) for g in dag_outputs],
            "chosen": serialize_graph(canonical_choice(outputs)) if outputs else None,
        },
        provenance=Provenance(inputs=list(inputs), fixture=fixture),
    )
    failed = [name for name, result in flags.items() if result.holds is False]
    logger.info(f"📊 Auditoría: {len(flags) - len(failed)} flags OK, fallan {failed}")
    inconsistencies = report.inconsistencies()
    if inconsistencies:
        logger.error(f"❌ Inconsistencias en el libro de resultados: {inconsistencies}")
    return report
