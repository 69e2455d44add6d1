# src/pipeline/sweep_engine.py
"""
Motor de barridos aleatorios con contadores incrementales

Cada barrido con nombre genera casos con semillas derivadas de una
SeedSequence, los evalúa por batches (en paralelo con joblib si jobs > 1)
y acumula contadores pass/fail/skip y un historial de batches. Las semillas
por caso no dependen del número de workers: el resultado es el mismo con
cualquier --jobs.
"""

import logging
import time
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from common.errors import ProjectionConflictError, ScmPreconditionError
from common.utils import to_jsonable
from config.workbench_config import SWEEP_CONFIG, get_jobs, get_sweep_config
from graphs.ancestral import is_ancestral, minimal_order, skeleton
from graphs.generators import random_ancestral_graph, random_maximal_ancestral_graph, random_valid_order
from graphs.graph_io import serialize_graph
from graphs.projection import latent_projection
from independence.model import IndependenceModel
from independence.properties import PropertyId, check_property, satisfies_all
from independence.relations import converse_pairwise_markov, is_markovian
from independence.stability import path_stable, v_stable
from learning.audit import outputs_equivalent
from learning.equivalence import Method, markov_equivalent
from learning.orientations import build_orientation, stable_orientations
from scm.conditions import (
    check_noise_injective,
    check_noise_surjective,
    check_non_constant_fibers,
    check_positivity,
    uniform_noise_instances,
    uniform_noise_obstruction,
)
from scm.generators import random_scm
from scm.model import induced_model_scm
from separation.induced import induced_model, is_maximal, ordered_local_markov_holds

logger = logging.getLogger(__name__)

Outcome = Dict[str, Any]

ALL_PROPERTIES = tuple(PropertyId)


def _passed(**extra) -> Outcome:
    return {"status": "pass", **extra}


def _failed(witness: Any, **extra) -> Outcome:
    return {"status": "fail", "witness": to_jsonable(witness), **extra}


def _skipped(reason: str) -> Outcome:
    return {"status": "skip", "reason": reason}


# ==========================================
# CASOS POR BARRIDO
# ==========================================

def _node_count(rng: np.random.Generator, params: Dict[str, Any]) -> int:
    return int(rng.integers(2, params["max_nodes"] + 1))


def _scm_markov_case(rng: np.random.Generator, params: Dict[str, Any]) -> Outcome:
    """Todo SCM válido induce un modelo markoviano a su grafo"""
    arc_prob = 0.0 if rng.random() < 0.5 else 0.4
    s = random_scm(rng, _node_count(rng, params), max_support=params["max_support"], arc_prob=arc_prob)
    verdict = is_markovian(induced_model_scm(s), s.graph)
    if verdict:
        return _passed()
    return _failed({"graph": serialize_graph(s.graph), "missing": verdict.witness})


def _scm_converse_case(rng: np.random.Generator, params: Dict[str, Any]) -> Outcome:
    """Positividad, fibras no constantes e inyectividad (prescindible con G DAG) ⇒ Markov pareado inverso"""
    style = "additive" if rng.random() < 0.8 else "random"
    s = random_scm(rng, _node_count(rng, params), max_support=params["max_support"], style=style)
    for name, check in (("positivity", check_positivity), ("non_constant_fibers", check_non_constant_fibers)):
        if not check(s):
            return _skipped(name)
    if not s.graph.is_dag and not check_noise_injective(s):
        return _skipped("noise_injective")
    verdict = converse_pairwise_markov(induced_model_scm(s), s.graph)
    if verdict:
        return _passed()
    return _failed({"graph": serialize_graph(s.graph), "pair": verdict.witness})


def _uniform_noise_case(rng: np.random.Generator, params: Dict[str, Any]) -> Outcome:
    """Una flecha independiente bajo positividad, inyectividad y sobreyectividad exige ruido uniforme"""
    s = random_scm(rng, _node_count(rng, params), max_support=params["max_support"], style="additive",
                   uniform_noise=bool(rng.random() < 0.5))
    if not check_positivity(s):
        return _skipped("positivity")
    try:
        if not check_noise_surjective(s):
            return _skipped("noise_surjective")
    except ScmPreconditionError:
        return _skipped("noise_injective")
    model = induced_model_scm(s)
    instances = uniform_noise_instances(s, model)
    if not instances:
        return _skipped("no_independent_arrow")
    verdict = uniform_noise_obstruction(s, model, instances)
    if verdict:
        return _passed(arrows=len(instances))
    return _failed({"graph": serialize_graph(s.graph), "instance": verdict.witness})


def _separation_soundness_case(rng: np.random.Generator, params: Dict[str, Any]) -> Outcome:
    """J(G) cumple las nueve propiedades; la proyección latente preserva la separación"""
    n = _node_count(rng, params)
    g = random_ancestral_graph(rng, n)
    model = induced_model(g)
    verdict = satisfies_all(model, ALL_PROPERTIES, minimal_order(g))
    if not verdict:
        return _failed({"graph": serialize_graph(g), "property": verdict.witness})

    if n > params["projection_nodes"] or n < 3:
        return _passed()
    hidden = [label for label in g.nodes if rng.random() < 0.3][: n - 2]
    if not hidden:
        return _passed()
    try:
        projected = latent_projection(g, hidden)
    except ProjectionConflictError as e:
        return _skipped("projection_conflict: {}".format(e))
    kept = [label for label in g.nodes if label not in hidden]
    expected = model.restricted_to(kept)
    observed = induced_model(projected).aligned_to(expected.universe)
    if expected.keys == observed.keys:
        return _passed()
    missing = expected.difference(observed) or observed.difference(expected)
    return _failed({"graph": serialize_graph(g), "hidden": hidden, "triple": expected.triple(*missing[0])})


def _equivalence_oracle_case(rng: np.random.Generator, params: Dict[str, Any]) -> Outcome:
    """Los criterios DAG y MAG coinciden con la igualdad de modelos inducidos"""
    n = _node_count(rng, params)
    g = random_maximal_ancestral_graph(rng, n)
    edges = skeleton(g).sorted_edges()
    options = (0, 1) if g.is_dag and rng.random() < 0.5 else (0, 1, 2)
    h = build_orientation(g.nodes, edges, [options[int(rng.integers(len(options)))] for _ in edges])
    if not is_ancestral(h) or not is_maximal(h):
        return _skipped("not_maximal_ancestral")

    brute = markov_equivalent(g, h, Method.BRUTE).equivalent
    methods = [Method.MAG] + ([Method.DAG] if g.is_dag and h.is_dag else [])
    for method in methods:
        if markov_equivalent(g, h, method).equivalent != brute:
            return _failed({"g": serialize_graph(g), "h": serialize_graph(h), "method": method, "brute": brute})
    return _passed(equivalent=brute)


def _random_extra_statement(rng: np.random.Generator, g, model: IndependenceModel) -> IndependenceModel:
    """Añade ⟨i,j|C⟩ para un par no adyacente con C aleatorio"""
    pairs = [(a, b) for position, a in enumerate(g.nodes) for b in g.nodes[position + 1:] if not g.adjacent(a, b)]
    if not pairs:
        return model
    a, b = pairs[int(rng.integers(len(pairs)))]
    c = [label for label in g.nodes if label not in (a, b) and rng.random() < 0.5]
    return model.with_statements([([a], [b], c)])


def _learner_case(rng: np.random.Generator, params: Dict[str, Any]) -> Outcome:
    """Hipótesis del libro cumplidas ⇒ toda salida del algoritmo natural es equivalente a G0"""
    g0 = random_maximal_ancestral_graph(rng, _node_count(rng, params))
    model = induced_model(g0)
    if rng.random() < 0.5:
        model = _random_extra_statement(rng, g0, model)
    order = minimal_order(g0)

    hypotheses = (
        ("markovian", lambda: is_markovian(model, g0)),
        ("converse_pairwise", lambda: converse_pairwise_markov(model, g0)),
        ("ordered_up", lambda: check_property(model, PropertyId.ORDERED_UPWARD, order)),
        ("ordered_down", lambda: check_property(model, PropertyId.ORDERED_DOWNWARD, order)),
    )
    for name, check in hypotheses:
        if not check():
            return _skipped(name)

    checked = []
    if path_stable(model):
        verdict = outputs_equivalent(stable_orientations(model, jobs=1), g0, Method.BRUTE)
        if not verdict:
            return _failed({"g0": serialize_graph(g0), "variant": "mag", "outputs": verdict.witness})
        checked.append("mag")
    if g0.is_dag and v_stable(model):
        verdict = outputs_equivalent(stable_orientations(model, dag_only=True, jobs=1), g0, Method.DAG)
        if not verdict:
            return _failed({"g0": serialize_graph(g0), "variant": "dag", "outputs": verdict.witness})
        checked.append("dag")
    if not checked:
        return _skipped("not_stable")
    return _passed(variants=checked)


def _ordered_local_markov_case(rng: np.random.Generator, params: Dict[str, Any]) -> Outcome:
    """Markov local ordenado ⇔ Markov global, con orden válido aleatorio"""
    g = random_ancestral_graph(rng, _node_count(rng, params))
    # J viene de g o de otro grafo sobre los mismos nodos; así J sigue siendo un grafoide composicional
    source = g if rng.random() < 0.5 else random_ancestral_graph(rng, len(g.nodes), labels=g.nodes)
    model = induced_model(source)
    order = random_valid_order(rng, g)
    local = ordered_local_markov_holds(model, g, order).holds
    global_ = is_markovian(model, g).holds
    if local == global_:
        return _passed(markovian=global_)
    return _failed({"graph": serialize_graph(g), "order": order.to_jsonable(), "local": local, "global": global_})


SWEEP_CASES: Dict[str, Callable[[np.random.Generator, Dict[str, Any]], Outcome]] = {
    "scm-markov": _scm_markov_case,
    "scm-converse": _scm_converse_case,
    "uniform-noise": _uniform_noise_case,
    "separation-soundness": _separation_soundness_case,
    "equivalence-oracle": _equivalence_oracle_case,
    "learner-end-to-end": _learner_case,
    "ordered-local-markov": _ordered_local_markov_case,
}

SWEEP_NAMES = tuple(SWEEP_CASES)


def run_case(name: str, params: Dict[str, Any], seed: np.random.SeedSequence, index: int) -> Outcome:
    """Un caso aislado; las excepciones inesperadas cuentan como fallo con su mensaje"""
    rng = np.random.default_rng(seed)
    try:
        outcome = SWEEP_CASES[name](rng, params)
    except Exception as e:
        logger.error(f"❌ Caso {index} de {name} lanzó {type(e).__name__}: {e}")
        outcome = _failed({"exception": type(e).__name__, "error": str(e)})
    outcome["index"] = index
    return outcome


# ==========================================
# MOTOR
# ==========================================

class SweepEngine:
    """
    Ejecuta un barrido con nombre y mantiene contadores incrementales

    ✅ Semillas por caso independientes del número de workers
    ✅ Historial de batches como en un procesamiento por micro-batches
    """

    def __init__(self, name: str, count: Optional[int] = None, seed: Optional[int] = None,
                 jobs: Optional[int] = None, batch_size: Optional[int] = None,
                 progress: bool = False, max_failures: int = 20, **overrides):
        """
        Args:
            name: barrido de SWEEP_CASES
            count: casos a generar (por defecto SWEEP_CONFIG)
            seed: semilla raíz (por defecto SWEEP_CONFIG)
            jobs: workers de joblib
            overrides: parámetros del barrido (max_nodes, max_support, ...)
        """
        self.params = get_sweep_config(name)
        self.params.update({key: value for key, value in overrides.items() if value is not None})
        self.name = name
        self.count = count if count is not None else self.params["count"]
        self.seed = seed if seed is not None else self.params["seed"]
        self.jobs = get_jobs(jobs)
        self.batch_size = batch_size or SWEEP_CONFIG["batch_size"]
        self.progress = progress
        self.max_failures = max_failures
        self.reset_stats()
        logger.info(f"🔢 SweepEngine {name}: {self.count} casos, semilla {self.seed}, {self.jobs} workers")

    def reset_stats(self) -> None:
        self.stats = {
            'count': 0,
            'passed': 0,
            'failed': 0,
            'skipped': 0,
            'skip_reasons': {},
            'created_at': datetime.now().isoformat(),
            'last_updated': datetime.now().isoformat(),
        }
        self.batch_history: List[Dict[str, Any]] = []
        self.failures: List[Outcome] = []

    def update_batch(self, outcomes: List[Outcome], batch_info: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Acumula los resultados de un batch, en el orden de los casos"""
        if not outcomes:
            logger.warning("⚠️ Batch vacío recibido")
            return self.get_current_stats()

        before = self.stats['count']
        batch_failed = 0
        for outcome in sorted(outcomes, key=lambda item: item["index"]):
            self.stats['count'] += 1
            status = outcome["status"]
            if status == "pass":
                self.stats['passed'] += 1
            elif status == "skip":
                self.stats['skipped'] += 1
                reason = outcome["reason"].split(":")[0]
                self.stats['skip_reasons'][reason] = self.stats['skip_reasons'].get(reason, 0) + 1
            else:
                self.stats['failed'] += 1
                batch_failed += 1
                if len(self.failures) < self.max_failures:
                    self.failures.append(outcome)
        self.stats['last_updated'] = datetime.now().isoformat()

        batch_record = {
            'batch_number': len(self.batch_history) + 1,
            'cases_processed': len(outcomes),
            'batch_failed': batch_failed,
            'running_count_before': before,
            'running_count_after': self.stats['count'],
            'processed_at': datetime.now().isoformat(),
        }
        if batch_info:
            batch_record.update(batch_info)
        self.batch_history.append(batch_record)

        if batch_failed:
            logger.error(f"❌ Batch {batch_record['batch_number']}: {batch_failed} fallos")
        logger.debug(f"✅ Batch procesado: {self.format_stats()}")
        return self.get_current_stats()

    def run(self) -> Dict[str, Any]:
        """
        Ejecuta todos los casos por batches

        Returns:
            Dict con success (sin fallos), estadísticas, fallos y tiempo
        """
        start = time.time()
        seeds = np.random.SeedSequence(self.seed).spawn(self.count)
        starts = list(range(0, self.count, self.batch_size))
        logger.info(f"🚀 Barrido {self.name}: {self.count} casos en {len(starts)} batches")

        for first in tqdm(starts, desc=self.name, disable=not self.progress):
            indices = range(first, min(first + self.batch_size, self.count))
            if self.jobs == 1:
                outcomes = [run_case(self.name, self.params, seeds[index], index) for index in indices]
            else:
                outcomes = Parallel(n_jobs=self.jobs)(
                    delayed(run_case)(self.name, self.params, seeds[index], index) for index in indices)
            self.update_batch(outcomes, {'first_case': first})

        result = {
            'success': self.stats['failed'] == 0,
            'sweep': self.name,
            'seed': self.seed,
            'params': dict(self.params),
            'stats': self.get_current_stats(),
            'failures': list(self.failures),
            'execution_time': time.time() - start,
        }
        if result['success']:
            logger.info(f"✅ Barrido {self.name} sin fallos: {self.format_stats()}")
        else:
            logger.error(f"❌ Barrido {self.name} con fallos: {self.format_stats()}")
        return result

    def get_current_stats(self) -> Dict[str, Any]:
        current_stats = dict(self.stats, skip_reasons=dict(self.stats['skip_reasons']))
        current_stats.update({
            'batches_processed': len(self.batch_history),
            'checked': self.stats['passed'] + self.stats['failed'],
            'last_batch_info': self.batch_history[-1] if self.batch_history else None,
        })
        return current_stats

    def get_batch_history(self) -> List[Dict[str, Any]]:
        return list(self.batch_history)

    def format_stats(self) -> str:
        if self.stats['count'] == 0:
            return "Count: 0 (sin casos)"
        return "Count: {:,}, Pass: {:,}, Fail: {:,}, Skip: {:,}".format(
            self.stats['count'], self.stats['passed'], self.stats['failed'], self.stats['skipped'])

    def format_detailed_stats(self) -> str:
        if self.stats['count'] == 0:
            return "📊 Sin casos procesados aún"
        reasons = ", ".join("{}={}".format(key, value) for key, value in sorted(self.stats['skip_reasons'].items()))
        return f"""📊 BARRIDO {self.name}:
   Casos: {self.stats['count']:,}
   Verificados: {self.stats['passed'] + self.stats['failed']:,}
   Fallos: {self.stats['failed']:,}
   Omitidos: {self.stats['skipped']:,} ({reasons or 'ninguno'})
   Batches: {len(self.batch_history)}
   Última actualización: {self.stats['last_updated']}"""


def create_sweep_engine(name: str, **kwargs) -> SweepEngine:
    """Factory function para crear el motor de un barrido"""
    return SweepEngine(name, **kwargs)
