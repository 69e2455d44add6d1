# src/scm/scm_audit.py
"""
Auditoría de un SCM: condiciones del SCM, modelo inducido frente a G0 y
libro de resultados con las garantías del lado del SCM
"""

import logging
from typing import Dict, Iterable, Optional

from common.errors import ScmPreconditionError
from common.report import AuditReport, FlagResult, LedgerEntry, Provenance, label_ledger
from common.utils import to_jsonable
from graphs.graph_io import serialize_graph
from independence.model_io import serialize_model
from learning.audit import audit
from scm.conditions import (
    check_noise_injective,
    check_noise_support_smaller,
    check_noise_surjective,
    check_noise_uniform,
    check_non_constant_fibers,
    check_positivity,
    uniform_noise_instances,
    uniform_noise_obstruction,
)
from scm.model import Scm, induced_model_scm

logger = logging.getLogger(__name__)

SCM_FLAGS = ("positivity", "non_constant_fibers", "noise_injective", "noise_surjective",
             "noise_support_smaller", "noise_uniform", "noise_nonuniform", "uniform_noise_obstruction")


def _noise_flags(uniformity) -> Dict[str, FlagResult]:
    uniform_nodes = [label for label, uniform in uniformity if uniform]
    other_nodes = [label for label, uniform in uniformity if not uniform]
    return {
        "noise_uniform": FlagResult(holds=not other_nodes, witness=other_nodes or None,
                                    message="ruidos no uniformes: {}".format(other_nodes) if other_nodes else ""),
        "noise_nonuniform": FlagResult(holds=not uniform_nodes, witness=uniform_nodes or None,
                                       message="ruidos uniformes: {}".format(uniform_nodes) if uniform_nodes else ""),
    }


def build_scm_ledger(flags: Dict[str, FlagResult], g0_is_dag: bool,
                     independent_arrow: bool) -> Dict[str, LedgerEntry]:
    """
    Resultados del lado del SCM sobre los flags ya calculados

    Con G0 DAG la inyectividad en el ruido deja de ser hipótesis: solo hace
    falta para preservar la dependencia de los ruidos en los arcos.
    """

    def hypotheses(*names: str) -> Dict[str, Optional[bool]]:
        return {name: flags[name].holds for name in names}

    injective_or_dag = bool(flags["noise_injective"].holds) or g0_is_dag
    learner_base = ("g0_maximal", "positivity", "non_constant_fibers", "ordered_up", "ordered_down")

    return label_ledger({
        "scm_global_markov": LedgerEntry.evaluate(
            {"valid_scm": True}, "J(P) es markoviano a G0", flags["markovian"].holds),
        "scm_converse_pairwise": LedgerEntry.evaluate(
            {**hypotheses("positivity", "non_constant_fibers"), "injective_or_dag": injective_or_dag},
            "J(P) cumple Markov pareado inverso respecto de G0", flags["converse_pairwise"].holds),
        "uniform_noise_obstruction": LedgerEntry.evaluate(
            {**hypotheses("positivity", "noise_injective", "noise_surjective"),
             "independent_arrow": independent_arrow},
            "ε_i uniforme con |supp ε_i| = |supp X_i| en cada flecha independiente",
            flags["uniform_noise_obstruction"].holds),
        "scm_minimal_markov": LedgerEntry.evaluate(
            {**hypotheses(*learner_base), "injective_or_dag": injective_or_dag},
            "J(P) es minimalmente markoviano a G0", flags["minimally_markovian"].holds),
        "scm_learner_equivalence": LedgerEntry.evaluate(
            hypotheses(*learner_base, "noise_injective", "path_stable"),
            "toda salida del algoritmo natural es Markov equivalente a G0",
            flags["learner_equivalent"].holds),
        "scm_dag_learner_equivalence": LedgerEntry.evaluate(
            {**hypotheses(*learner_base, "v_stable"), "injective_or_dag": injective_or_dag},
            "toda salida DAG del algoritmo natural es Markov equivalente a G0",
            flags["dag_learner_equivalent"].holds,
            applicable=g0_is_dag),
        "noise_support_converse_pairwise": LedgerEntry.evaluate(
            {**hypotheses("positivity", "noise_support_smaller"), "injective_or_dag": injective_or_dag},
            "J(P) cumple Markov pareado inverso respecto de G0", flags["converse_pairwise"].holds),
        "nonuniform_noise_converse_pairwise": LedgerEntry.evaluate(
            hypotheses("positivity", "noise_injective", "noise_surjective", "noise_nonuniform"),
            "J(P) cumple Markov pareado inverso respecto de G0", flags["converse_pairwise"].holds),
    })


def scm_audit(s: Scm, jobs: Optional[int] = None, inputs: Iterable[str] = (),
              fixture: Optional[str] = None) -> AuditReport:
    """
    Reporte compuesto del SCM; el flag markovian debe valer siempre

    Raises:
        BoundExceededError: nodos o aristas por encima de las cotas
    """
    logger.info(f"🚀 Auditando {s}")
    model = induced_model_scm(s)
    model_report = audit(model, s.graph, jobs=jobs, inputs=inputs, fixture=fixture)

    flags = dict(model_report.flags)
    flags["positivity"] = FlagResult.from_verdict(check_positivity(s))
    flags["non_constant_fibers"] = FlagResult.from_verdict(check_non_constant_fibers(s))
    flags["noise_injective"] = FlagResult.from_verdict(check_noise_injective(s))
    try:
        flags["noise_surjective"] = FlagResult.from_verdict(check_noise_surjective(s))
    except ScmPreconditionError as e:
        flags["noise_surjective"] = FlagResult.not_applicable(str(e))
    flags["noise_support_smaller"] = FlagResult.from_verdict(check_noise_support_smaller(s))

    uniformity = check_noise_uniform(s)
    flags.update(_noise_flags(uniformity))

    instances = uniform_noise_instances(s, model)
    flags["uniform_noise_obstruction"] = FlagResult.from_verdict(uniform_noise_obstruction(s, model, instances))

    ledger = dict(model_report.ledger)
    ledger.update(build_scm_ledger(flags, s.graph.is_dag, bool(instances)))

    details = dict(model_report.details)
    details.update({
        "scm": s.name,
        "graph": serialize_graph(s.graph),
        "induced_model": serialize_model(model),
        "noise_uniform": dict(uniformity),
        "independent_arrows": to_jsonable(instances),
    })

    report = AuditReport(
        subject="scm",
        flags=flags,
        ledger=ledger,
        details=details,
        provenance=Provenance(inputs=list(inputs), fixture=fixture or s.name),
    )
    if not flags["markovian"].holds:
        logger.error(f"❌ {s} no es markoviano a su grafo: {flags['markovian'].witness}")
    inconsistencies = report.inconsistencies()
    if inconsistencies:
        logger.error(f"❌ Inconsistencias en el libro de resultados: {inconsistencies}")
    else:
        logger.info(f"✅ Auditoría de {s} sin inconsistencias")
    return report


