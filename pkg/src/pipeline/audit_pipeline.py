# src/pipeline/audit_pipeline.py
"""
🚀 AUDITORÍA DE FIXTURES - COORDINADOR
======================================
Ejecuta los fixtures de ejemplos resueltos paso a paso:
1. Materialización de grafos, modelos y SCMs
2. Observación (auditoría completa y chequeos propios del fixture)
3. Comparación contra el manifiesto (afirmado / derivado)
4. Reportes JSON (validados contra el esquema) y de texto

✅ Regresión: todos los fixtures deben pasar en cada build
"""

import json
import logging
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

# Configurar path
current_dir = Path(__file__).parent
src_dir = current_dir.parent

if str(src_dir) not in sys.path:
    sys.path.insert(0, str(src_dir))

from common.report import validate_report  # noqa: E402
from common.utils import to_jsonable  # noqa: E402
from config.workbench_config import REPORT_CONFIG, REPORTS_PATH  # noqa: E402
from pipeline.fixtures import (  # noqa: E402
    FIXTURE_ALIASES,
    FIXTURE_IDS,
    diff_manifest,
    load_fixture,
    observe_fixture,
)

logger = logging.getLogger(__name__)


class FixtureAuditPipeline:
    """
    Pipeline que recorre los fixtures y compara cada observación con su manifiesto
    """

    def __init__(self, fixture_ids: Optional[Iterable[str]] = None, jobs: Optional[int] = None,
                 write_reports: bool = False, reports_path: Optional[Path] = None):
        """
        Args:
            fixture_ids: fixtures a ejecutar (por defecto todos)
            jobs: workers para la búsqueda de orientaciones
            write_reports: si guardar reportes JSON y de texto
            reports_path: directorio de reportes (por defecto REPORTS_PATH)
        """
        # los alias se normalizan; un id desconocido queda y falla en su paso
        self.fixture_ids = [FIXTURE_ALIASES.get(name, name) for name in (fixture_ids or FIXTURE_IDS)]
        self.jobs = jobs
        self.write_reports = write_reports
        self.reports_path = Path(reports_path) if reports_path else REPORTS_PATH
        self.execution_start = None
        self.execution_end = None

        logger.info("🚀 FixtureAuditPipeline inicializado")
        logger.info(f"📋 Fixtures: {', '.join(self.fixture_ids)}")

    def run(self) -> Dict[str, Any]:
        """
        Ejecuta todos los fixtures; un fixture que falla no detiene a los demás

        Returns:
            Dict con resultado de la ejecución completa
        """
        self.execution_start = datetime.now()
        logger.info("🚀 INICIANDO AUDITORÍA DE FIXTURES")

        pipeline_result = {
            'overall_success': False,
            'execution_start': self.execution_start.isoformat(),
            'execution_end': None,
            'steps_completed': [],
            'steps_failed': [],
            'total_duration': None,
            'steps': {},
        }

        for fixture_id in self.fixture_ids:
            logger.info(f"🔍 FIXTURE {fixture_id}")
            result = self._step_run_fixture(fixture_id)
            pipeline_result['steps'][fixture_id] = result
            if result['success']:
                pipeline_result['steps_completed'].append(fixture_id)
                logger.info(f"✅ {fixture_id} coincide con su manifiesto")
            else:
                pipeline_result['steps_failed'].append(fixture_id)
                logger.error(f"❌ {fixture_id}: {result.get('error') or result.get('mismatches')}")

        if self.write_reports:
            report_result = self._step_write_reports(pipeline_result)
            pipeline_result['steps']['reports'] = report_result
            if not report_result['success']:
                pipeline_result['steps_failed'].append('reports')

        pipeline_result['overall_success'] = not pipeline_result['steps_failed']
        return self._finalize_result(pipeline_result)

    def _step_run_fixture(self, fixture_id: str) -> Dict[str, Any]:
        """Materializa, observa y compara un fixture"""
        start = time.time()
        try:
            bundle = load_fixture(fixture_id)
            observed, report = observe_fixture(bundle, jobs=self.jobs)
            mismatches = diff_manifest(bundle, observed)
            inconsistencies = report.inconsistencies() if report else []
            return {
                'success': not mismatches and not inconsistencies,
                'fixture': fixture_id,
                'description': bundle.description,
                'mismatches': mismatches,
                'inconsistencies': inconsistencies,
                'observed': observed,
                'asserted': to_jsonable(bundle.asserted),
                'derived': to_jsonable(bundle.derived),
                'report': report.to_json_dict() if report else None,
                'text': report.render_text() if report else None,
                'duration': time.time() - start,
            }
        except Exception as e:
            logger.error(f"Error en fixture {fixture_id}: {e}")
            return {
                'success': False,
                'fixture': fixture_id,
                'error': str(e),
                'duration': time.time() - start,
            }

    def _step_write_reports(self, pipeline_result: Dict[str, Any]) -> Dict[str, Any]:
        """Guarda un JSON y un texto por fixture auditado"""
        try:
            self.reports_path.mkdir(parents=True, exist_ok=True)
            timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
            written = []
            for fixture_id, step in pipeline_result['steps'].items():
                if 'observed' not in step:
                    continue
                if step['report'] is not None:
                    validate_report(step['report'])

                json_file = self.reports_path / REPORT_CONFIG['json_pattern'].format(
                    fixture=fixture_id, timestamp=timestamp)
                payload = {key: step[key] for key in ('fixture', 'success', 'mismatches', 'inconsistencies',
                                                      'observed', 'asserted', 'derived', 'report')}
                with open(json_file, 'w', encoding='utf-8') as f:
                    json.dump(payload, f, indent=REPORT_CONFIG['indent'], ensure_ascii=False)

                text_file = self.reports_path / REPORT_CONFIG['text_pattern'].format(
                    fixture=fixture_id, timestamp=timestamp)
                with open(text_file, 'w', encoding='utf-8') as f:
                    f.write(self._generate_text_report(step))
                written.extend([str(json_file), str(text_file)])

            return {
                'success': True,
                'files': written,
                'message': '{} reportes generados'.format(len(written)),
            }
        except Exception as e:
            logger.error(f"Error generando reportes: {e}")
            return {
                'success': False,
                'error': str(e),
            }

    def _generate_text_report(self, step: Dict[str, Any]) -> str:
        """Reporte de texto de un fixture"""
        lines = [
            f"🚀 FIXTURE {step['fixture']}",
            "=" * 50,
            step['description'],
            "",
            f"📅 Fecha: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}",
            f"🎯 Resultado: {'✅ coincide' if step['success'] else '❌ discrepancias'}",
            "",
            "📋 MANIFIESTO:",
            "-" * 25,
        ]
        for kind in ('asserted', 'derived'):
            for key, expected in step[kind].items():
                observed = step['observed'].get(key)
                marker = "✅" if observed == expected else "❌"
                lines.append(f"{marker} [{kind}] {key}: esperado {expected}, observado {observed}")

        if step['inconsistencies']:
            lines.extend(["", f"❌ Inconsistencias del libro de resultados: {step['inconsistencies']}"])
        if step['text']:
            lines.extend(["", step['text']])
        return "\n".join(lines)

    def _finalize_result(self, pipeline_result: Dict[str, Any]) -> Dict[str, Any]:
        """Finaliza y retorna resultado del pipeline"""
        self.execution_end = datetime.now()
        pipeline_result['execution_end'] = self.execution_end.isoformat()

        if self.execution_start:
            duration = (self.execution_end - self.execution_start).total_seconds()
            pipeline_result['total_duration'] = duration
            logger.info(f"⏱️ DURACIÓN TOTAL: {duration:.2f} segundos")

        logger.info("📊 RESUMEN FINAL:")
        logger.info(f"   ✅ Fixtures correctos: {len(pipeline_result['steps_completed'])}")
        logger.info(f"   ❌ Fallidos: {len(pipeline_result['steps_failed'])}")
        logger.info(f"   🎯 Éxito general: {'SÍ' if pipeline_result['overall_success'] else 'NO'}")
        return pipeline_result


def summarize(pipeline_result: Dict[str, Any]) -> List[str]:
    """Una línea por fixture para la salida humana de la CLI"""
    lines = []
    for fixture_id, step in pipeline_result['steps'].items():
        if fixture_id == 'reports':
            continue
        if 'error' in step:
            lines.append(f"❌ {fixture_id}: error {step['error']}")
        elif step['success']:
            lines.append(f"✅ {fixture_id}: {len(step['asserted']) + len(step['derived'])} veredictos coinciden")
        else:
            keys = [item['key'] for item in step['mismatches']] + step['inconsistencies']
            lines.append(f"❌ {fixture_id}: discrepancias en {', '.join(keys)}")
    return lines


def main(argv: Optional[List[str]] = None) -> int:
    """Ejecuta todos los fixtures y escribe reportes; código 0 si todos pasan"""
    from common.utils import setup_logging

    setup_logging("INFO")
    fixture_ids = argv if argv else None
    try:
        result = FixtureAuditPipeline(fixture_ids, write_reports=True).run()
    except Exception as e:
        logger.error(f"❌ Error crítico: {e}")
        return 2
    for line in summarize(result):
        print(line)
    return 0 if result['overall_success'] else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
