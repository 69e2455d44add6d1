# src/pipeline/cli.py
"""
CLI del workbench

    workbench graph-check G.graph [--augment] [--project e_1,e_2]
    workbench msep G.graph --a k --b j --c l
    workbench model M.model [--graph G0.graph] [--closure semigraphoid] [--marginalize x,y]
    workbench learn M.model [--dags-only]
    workbench equiv G1.graph G2.graph --method dag|mag|brute
    workbench audit M.model --graph G0.graph
    workbench scm (FILE.json | --builtin mod2@1/2) [--a 1 --b 2 --c 3]
    workbench paper (ID | ALIAS | all) [--export DIR] [--reports]
    workbench sweep NAME [--count N] [--seed S] [--progress]

Opciones comunes: --json, --strict, --jobs N, --max-nodes N.
Códigos de salida: 0 éxito, 1 veredicto falso con --strict (o fixture o
barrido con fallos), 2 error de uso, de archivo o del dominio.
"""

import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import click

# Configurar path
src_dir = Path(__file__).parent.parent
if str(src_dir) not in sys.path:
    sys.path.insert(0, str(src_dir))

from common.errors import NoStableOrientationError, WorkbenchError  # noqa: E402
from common.report import validate_report  # noqa: E402
from common.utils import format_node_set, setup_logging, to_jsonable  # noqa: E402
from config.workbench_config import (  # noqa: E402
    LOGS_PATH,
    REPORT_CONFIG,
    WORKBENCH_CONFIG,
    get_jobs,
    get_log_level,
    get_max_nodes,
)
from graphs.ancestral import collider_v_configurations, is_ancestral, minimal_order, skeleton  # noqa: E402
from graphs.graph_io import load_graph, serialize_graph  # noqa: E402
from graphs.projection import augment, latent_projection  # noqa: E402
from independence.closure import closure  # noqa: E402
from independence.graphicality import is_graphical  # noqa: E402
from independence.model_io import load_model, serialize_model  # noqa: E402
from independence.properties import (  # noqa: E402
    COMPOSITIONAL_GRAPHOID,
    GRAPHOID,
    ORDERED_STABILITIES,
    SEMIGRAPHOID,
    PropertyId,
    check_properties,
)
from independence.relations import (  # noqa: E402
    is_faithful,
    is_markovian,
    is_minimally_markovian,
    marginalize_model,
)
from independence.stability import path_stable, v_stable  # noqa: E402
from learning.audit import audit  # noqa: E402
from learning.equivalence import Method, markov_equivalent  # noqa: E402
from learning.orientations import natural_learn  # noqa: E402
from pipeline.audit_pipeline import FixtureAuditPipeline, summarize  # noqa: E402
from pipeline.fixtures import (  # noqa: E402
    FIXTURE_ALIASES,
    FIXTURE_IDS,
    export_fixture,
    load_fixture,
    resolve_fixture_id,
)
from pipeline.sweep_engine import SWEEP_NAMES, SweepEngine  # noqa: E402
from scm.examples import BUILTIN_SCMS, load_builtin  # noqa: E402
from scm.model import ci_query  # noqa: E402
from scm.scm_audit import scm_audit  # noqa: E402
from scm.scm_io import load_scm  # noqa: E402
from separation.induced import is_maximal  # noqa: E402
from separation.msep import SeparationQuery, connecting_path, m_separated  # noqa: E402

logger = logging.getLogger(__name__)

PROPERTY_SETS = {
    "semigraphoid": SEMIGRAPHOID,
    "graphoid": GRAPHOID,
    "compositional": COMPOSITIONAL_GRAPHOID,
}


@dataclass(frozen=True)
class Settings:
    as_json: bool
    strict: bool
    jobs: int


def _labels(raw: Optional[str]) -> List[str]:
    """'a,b, c' → ['a', 'b', 'c']"""
    if not raw:
        return []
    return [part.strip() for part in raw.split(",") if part.strip()]


def _settings(as_json: bool, strict: bool, jobs: Optional[int], max_nodes: Optional[int]) -> Settings:
    """Valida las cotas y las publica para el resto de módulos"""
    if max_nodes is not None:
        bound = get_max_nodes(max_nodes)
        if bound > WORKBENCH_CONFIG["max_nodes"]:
            logger.warning(f"⚠️ Cota de nodos elevada a {bound} (defecto {WORKBENCH_CONFIG['max_nodes']})")
        os.environ["CS_MAX_NODES"] = str(bound)
    if jobs is not None:
        os.environ["CS_JOBS"] = str(get_jobs(jobs))
    return Settings(as_json, strict, get_jobs(jobs))


def common_options(command: Callable) -> Callable:
    command = click.option("--max-nodes", type=int, default=None,
                           help="Cota de nodos (también CS_MAX_NODES)")(command)
    command = click.option("--jobs", type=int, default=None, help="Workers para búsquedas y barridos")(command)
    command = click.option("--strict", is_flag=True, help="Veredicto falso → código de salida 1")(command)
    command = click.option("--json", "as_json", is_flag=True, help="Salida JSON")(command)
    return command


def _emit(settings: Settings, payload: Dict[str, Any], lines: Sequence[str]) -> None:
    if settings.as_json:
        click.echo(json.dumps(to_jsonable(payload), indent=REPORT_CONFIG["indent"], ensure_ascii=False))
    else:
        click.echo("\n".join(lines))


def _verdict_exit(settings: Settings, holds: bool) -> int:
    return 1 if settings.strict and not holds else 0


def _mark(holds: Optional[bool]) -> str:
    if holds is None:
        return "n/a"
    return "✅" if holds else "❌"


def _verdict_payload(verdict) -> Dict[str, Any]:
    return {"holds": verdict.holds, "witness": verdict.witness, "message": verdict.message}


# ==========================================
# GRUPO PRINCIPAL
# ==========================================

@click.group()
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR (también CS_LOG_LEVEL)")
def cli(log_level: Optional[str]) -> None:
    """Workbench de grafos ancestrales, modelos de independencia y SCMs discretos"""
    log_file = None
    if WORKBENCH_CONFIG.get("log_to_file"):
        from datetime import datetime
        log_file = str(LOGS_PATH / WORKBENCH_CONFIG["log_file_pattern"].format(
            timestamp=datetime.now().strftime('%Y%m%d_%H%M%S')))
    setup_logging(log_level or get_log_level(), log_file)


@cli.command("graph-check")
@click.argument("graph_file", type=click.Path(dir_okay=False))
@click.option("--augment", "show_augmented", is_flag=True, help="Mostrar el grafo aumentado")
@click.option("--project", "latent", default=None, help="Nodos a marginalizar (proyección latente)")
@common_options
def graph_check(graph_file, show_augmented, latent, as_json, strict, jobs, max_nodes) -> int:
    """Ancestralidad, maximalidad, orden mínimo y colisionadores de un grafo"""
    settings = _settings(as_json, strict, jobs, max_nodes)
    g = load_graph(graph_file)
    ancestral = is_ancestral(g)
    payload: Dict[str, Any] = {"graph": serialize_graph(g), "ancestral": _verdict_payload(ancestral),
                               "is_dag": g.is_dag}
    lines = [f"{_mark(ancestral.holds)} ancestral" + ("" if ancestral else f": {ancestral.message}")]

    if ancestral:
        maximal = is_maximal(g)
        payload.update({
            "maximal": _verdict_payload(maximal),
            "minimal_order": minimal_order(g).to_jsonable(),
            "skeleton": skeleton(g).to_jsonable(),
            "collider_v_configurations": collider_v_configurations(g),
        })
        lines.extend([
            f"{_mark(maximal.holds)} maximal" + ("" if maximal else f": {maximal.message}"),
            f"DAG: {'sí' if g.is_dag else 'no'}",
            f"orden mínimo: {minimal_order(g)}",
            f"esqueleto: {skeleton(g)}",
            "colisionadores: " + (", ".join("⟨{}⟩".format(",".join(t)) for t in payload["collider_v_configurations"])
                                  or "ninguno"),
        ])
        if show_augmented:
            payload["augmented"] = serialize_graph(augment(g))
            lines.extend(["", "grafo aumentado:", payload["augmented"].rstrip()])
        if latent:
            payload["projection"] = serialize_graph(latent_projection(g, _labels(latent)))
            lines.extend(["", "proyección latente:", payload["projection"].rstrip()])

    _emit(settings, payload, lines)
    return _verdict_exit(settings, ancestral.holds)


@cli.command("msep")
@click.argument("graph_file", type=click.Path(dir_okay=False))
@click.option("--a", "a", required=True, help="Conjunto A (separado por comas)")
@click.option("--b", "b", required=True, help="Conjunto B")
@click.option("--c", "c", default="", help="Conjunto condicionante C")
@common_options
def msep(graph_file, a, b, c, as_json, strict, jobs, max_nodes) -> int:
    """m-separación de A y B dado C; camino conectante como testigo"""
    settings = _settings(as_json, strict, jobs, max_nodes)
    g = load_graph(graph_file)
    query = SeparationQuery.of(_labels(a), _labels(b), _labels(c))
    is_separated = m_separated(g, query.a, query.b, query.c)
    path = None if is_separated else connecting_path(g, query.a, query.b, query.c)
    payload = {"query": query, "separated": is_separated, "path": path}
    line = "separated" if is_separated else "connected: {}".format(" - ".join(path))
    _emit(settings, payload, [line])
    return _verdict_exit(settings, is_separated)


@cli.command("model")
@click.argument("model_file", type=click.Path(dir_okay=False))
@click.option("--graph", "graph_file", type=click.Path(dir_okay=False), default=None,
              help="G0 para propiedades ordenadas y relaciones")
@click.option("--closure", "closure_spec", default=None,
              help="semigraphoid | graphoid | compositional, o propiedades separadas por comas")
@click.option("--marginalize", default=None, help="Nodos a marginalizar")
@common_options
def model_cmd(model_file, graph_file, closure_spec, marginalize, as_json, strict, jobs, max_nodes) -> int:
    """Propiedades 1-9, estabilidades y graficidad de un modelo"""
    settings = _settings(as_json, strict, jobs, max_nodes)
    model = load_model(model_file)
    g0 = load_graph(graph_file) if graph_file else None
    order = minimal_order(g0) if g0 is not None else None
    if g0 is not None:
        model = model.aligned_to(g0.nodes)

    payload: Dict[str, Any] = {"model": serialize_model(model)}
    lines: List[str] = []
    if closure_spec:
        try:
            props = PROPERTY_SETS.get(closure_spec) or tuple(PropertyId(name) for name in _labels(closure_spec))
        except ValueError as e:
            raise click.UsageError(f"Propiedad desconocida en --closure: {e}")
        model = closure(model, props, order)
        payload["closure"] = serialize_model(model)
        lines.extend(["clausura:", payload["closure"].rstrip(), ""])
    if marginalize:
        marginal = marginalize_model(model, _labels(marginalize))
        payload["marginal"] = serialize_model(marginal)
        lines.extend(["marginal:", payload["marginal"].rstrip(), ""])

    props = list(COMPOSITIONAL_GRAPHOID) + [PropertyId.SINGLETON_TRANSITIVITY]
    if order is not None:
        props += list(ORDERED_STABILITIES)
    verdicts = {prop.value: verdict for prop, verdict in check_properties(model, props, order).items()}
    verdicts["path-stable"] = path_stable(model)
    verdicts["v-stable"] = v_stable(model)
    verdicts["graphical"] = is_graphical(model)
    if g0 is not None:
        verdicts["markovian"] = is_markovian(model, g0)
        verdicts["faithful"] = is_faithful(model, g0)
        verdicts["minimally-markovian"] = is_minimally_markovian(model, g0)

    payload["checks"] = {name: _verdict_payload(verdict) for name, verdict in verdicts.items()}
    for name, verdict in verdicts.items():
        detail = "" if verdict.holds or not verdict.message else f": {verdict.message}"
        lines.append(f"{_mark(verdict.holds)} {name}{detail}")
    _emit(settings, payload, lines)
    return _verdict_exit(settings, all(v.holds for name, v in verdicts.items() if name != "graphical"))


@cli.command("learn")
@click.argument("model_file", type=click.Path(dir_okay=False))
@click.option("--dags-only", is_flag=True, help="Solo orientaciones DAG")
@click.option("--progress", is_flag=True, help="Barra de progreso (stderr)")
@common_options
def learn(model_file, dags_only, progress, as_json, strict, jobs, max_nodes) -> int:
    """Algoritmo natural: orientaciones estables de sk(J) y la canónica"""
    settings = _settings(as_json, strict, jobs, max_nodes)
    model = load_model(model_file)
    try:
        output = natural_learn(model, dag_only=dags_only, jobs=settings.jobs, progress=progress)
    except NoStableOrientationError as e:
        _emit(settings, {"dag_only": dags_only, "graphs": [], "chosen": None, "error": str(e)},
              [f"❌ {e}"])
        return _verdict_exit(settings, False)

    payload = {"dag_only": dags_only, "chosen": serialize_graph(output.chosen),
               "graphs": [serialize_graph(g) for g in output.graphs]}
    lines = [f"{len(output.graphs)} orientaciones estables; canónica:", payload["chosen"].rstrip()]
    _emit(settings, payload, lines)
    return 0


@cli.command("equiv")
@click.argument("first_file", type=click.Path(dir_okay=False))
@click.argument("second_file", type=click.Path(dir_okay=False))
@click.option("--method", type=click.Choice([method.value for method in Method]), default="brute",
              show_default=True)
@common_options
def equiv(first_file, second_file, method, as_json, strict, jobs, max_nodes) -> int:
    """Equivalencia de Markov entre dos grafos"""
    settings = _settings(as_json, strict, jobs, max_nodes)
    verdict = markov_equivalent(load_graph(first_file), load_graph(second_file), Method(method))
    line = "equivalent" if verdict else "not equivalent: {}".format(verdict.message)
    _emit(settings, verdict.to_jsonable(), [line])
    return _verdict_exit(settings, verdict.equivalent)


@cli.command("audit")
@click.argument("model_file", type=click.Path(dir_okay=False))
@click.option("--graph", "graph_file", type=click.Path(dir_okay=False), required=True, help="G0")
@common_options
def audit_cmd(model_file, graph_file, as_json, strict, jobs, max_nodes) -> int:
    """Reporte completo de J frente a G0 con el libro de resultados"""
    settings = _settings(as_json, strict, jobs, max_nodes)
    report = audit(load_model(model_file), load_graph(graph_file), jobs=settings.jobs,
                   inputs=[model_file, graph_file])
    return _emit_report(settings, report)


def _emit_report(settings: Settings, report, extra_lines: Sequence[str] = ()) -> int:
    if settings.as_json:
        data = report.to_json_dict()
        validate_report(data)
        click.echo(json.dumps(data, indent=REPORT_CONFIG["indent"], ensure_ascii=False))
    else:
        click.echo("\n".join(list(extra_lines) + [report.render_text()]))
    return _verdict_exit(settings, not report.inconsistencies())


@cli.command("scm")
@click.argument("scm_file", type=click.Path(dir_okay=False), required=False)
@click.option("--builtin", type=click.Choice(list(BUILTIN_SCMS)), default=None, help="SCM incluido")
@click.option("--a", "a", default=None, help="Consulta CI: conjunto A")
@click.option("--b", "b", default=None, help="Consulta CI: conjunto B")
@click.option("--c", "c", default="", help="Consulta CI: conjunto C")
@common_options
def scm_cmd(scm_file, builtin, a, b, c, as_json, strict, jobs, max_nodes) -> int:
    """Auditoría de un SCM discreto o una consulta de independencia exacta"""
    settings = _settings(as_json, strict, jobs, max_nodes)
    if bool(scm_file) == bool(builtin):
        raise click.UsageError("Indique un archivo SCM o --builtin, no ambos")
    s = load_builtin(builtin) if builtin else load_scm(scm_file)

    if a or b:
        if not (a and b):
            raise click.UsageError("La consulta necesita --a y --b")
        query = SeparationQuery.of(_labels(a), _labels(b), _labels(c))
        independent = ci_query(s, query)
        line = "{} ⊥ {} | {}: {}".format(format_node_set(query.a), format_node_set(query.b),
                                          format_node_set(query.c), "independent" if independent else "dependent")
        _emit(settings, {"scm": s.name, "query": query, "independent": independent}, [line])
        return _verdict_exit(settings, independent)

    report = scm_audit(s, jobs=settings.jobs, inputs=[scm_file] if scm_file else [], fixture=builtin)
    joint = s.joint.to_frame().to_string(index=False)
    return _emit_report(settings, report, ["📊 Distribución conjunta:", joint, ""])


@cli.command("paper")
@click.argument("fixture_id", type=click.Choice(list(FIXTURE_IDS) + list(FIXTURE_ALIASES) + ["all"]))
@click.option("--export", "export_dir", type=click.Path(file_okay=False), default=None,
              help="Escribir las entradas del fixture en este directorio")
@click.option("--reports", is_flag=True, help="Guardar reportes JSON y de texto en reports/")
@common_options
def paper_cmd(fixture_id, export_dir, reports, as_json, strict, jobs, max_nodes) -> int:
    """Ejecuta un fixture (o todos) y lo compara con su manifiesto"""
    settings = _settings(as_json, strict, jobs, max_nodes)
    ids = list(FIXTURE_IDS) if fixture_id == "all" else [resolve_fixture_id(fixture_id)]
    if export_dir:
        for name in ids:
            export_fixture(load_fixture(name), export_dir)

    result = FixtureAuditPipeline(ids, jobs=settings.jobs, write_reports=reports).run()
    payload = {
        "overall_success": result["overall_success"],
        "fixtures": {
            name: {key: step.get(key) for key in ("success", "mismatches", "inconsistencies", "observed",
                                                  "report", "error") if key in step}
            for name, step in result["steps"].items() if name != "reports"
        },
    }
    _emit(settings, payload, summarize(result))
    # un fixture con discrepancias es una regresión, con o sin --strict
    return 0 if result["overall_success"] else 1


@cli.command("sweep")
@click.argument("name", type=click.Choice(list(SWEEP_NAMES)))
@click.option("--count", type=int, default=None, help="Casos (por defecto el de SWEEP_CONFIG)")
@click.option("--seed", type=int, default=None, help="Semilla raíz")
@click.option("--sweep-max-nodes", type=int, default=None, help="Nodos máximos de los casos generados")
@click.option("--progress", is_flag=True, help="Barra de progreso (stderr)")
@common_options
def sweep_cmd(name, count, seed, sweep_max_nodes, progress, as_json, strict, jobs, max_nodes) -> int:
    """Barrido aleatorio con nombre; cualquier fallo detiene el build"""
    settings = _settings(as_json, strict, jobs, max_nodes)
    engine = SweepEngine(name, count=count, seed=seed, jobs=settings.jobs, progress=progress,
                         max_nodes=sweep_max_nodes)
    result = engine.run()
    lines = [engine.format_detailed_stats()]
    for failure in result["failures"]:
        lines.append(f"❌ caso {failure['index']}: {failure['witness']}")
    _emit(settings, result, lines)
    return 0 if result["success"] else 1


# ==========================================
# PUNTO DE ENTRADA
# ==========================================

def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Ejecuta la CLI y devuelve el código de salida

    Los errores del dominio y de archivo se escriben en stderr con código 2.
    """
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        code = cli.main(args=args, prog_name="workbench", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return 2
    except click.exceptions.Abort:
        click.echo("Abortado", err=True)
        return 2
    except WorkbenchError as e:
        logger.debug("Error del dominio", exc_info=True)
        click.echo(f"error: {e}", err=True)
        return 2
    except OSError as e:
        click.echo(f"error: {e}", err=True)
        return 2
    return code if isinstance(code, int) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
