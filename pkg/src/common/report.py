# src/common/report.py
"""
Reporte de auditoría: flags con testigo, libro de resultados y procedencia
"""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import jsonschema
from pydantic import BaseModel, Field, model_validator

from common.utils import to_jsonable
from common.verdict import Verdict
from config import REPORT_CONFIG, SCHEMAS_PATH

Status = Literal["observed", "violated", "hypotheses-unmet", "n/a"]


class FlagResult(BaseModel):
    """Un flag del reporte; holds=None cuando no aplica"""

    holds: Optional[bool] = None
    witness: Any = None
    message: str = ""

    @model_validator(mode="after")
    def _false_needs_witness(self) -> "FlagResult":
        if self.holds is False and self.witness is None:
            raise ValueError("un flag falso debe llevar testigo")
        return self

    @classmethod
    def from_verdict(cls, verdict: Verdict) -> "FlagResult":
        return cls(holds=verdict.holds, witness=to_jsonable(verdict.witness) if not verdict.holds else None,
                   message=verdict.message)

    @classmethod
    def not_applicable(cls, message: str) -> "FlagResult":
        return cls(holds=None, message=message)


class LedgerEntry(BaseModel):
    """Hipótesis de un resultado, su conclusión y si se observó"""

    hypotheses: Dict[str, Optional[bool]]
    hypotheses_met: bool
    conclusion: str
    conclusion_observed: Optional[bool] = None
    status: Status
    theorem: Optional[str] = None

    @classmethod
    def evaluate(cls, hypotheses: Dict[str, Optional[bool]], conclusion: str,
                 observed: Optional[bool], applicable: bool = True) -> "LedgerEntry":
        met = applicable and all(value is True for value in hypotheses.values())
        if not applicable:
            status = "n/a"
        elif not met:
            status = "hypotheses-unmet"
        elif observed:
            status = "observed"
        else:
            status = "violated"
        return cls(hypotheses=hypotheses, hypotheses_met=met, conclusion=conclusion,
                   conclusion_observed=observed, status=status)


def label_ledger(entries: Dict[str, LedgerEntry]) -> Dict[str, LedgerEntry]:
    """Anota cada entrada con su resultado teórico según REPORT_CONFIG['ledger_theorems']"""
    theorems = REPORT_CONFIG.get("ledger_theorems", {})
    return {key: entry.model_copy(update={"theorem": theorems.get(key)}) for key, entry in entries.items()}


class Provenance(BaseModel):
    tool_name: str = REPORT_CONFIG["tool_name"]
    tool_version: str = REPORT_CONFIG["tool_version"]
    inputs: List[str] = Field(default_factory=list)
    fixture: Optional[str] = None
    generated_at: str = Field(default_factory=lambda: datetime.now().isoformat(timespec="seconds"))


class AuditReport(BaseModel):
    """
    Reporte de auditoría de un modelo (frente a G0) o de un SCM

    Un ledger con status "violated" es una inconsistencia: las hipótesis se
    cumplen y la conclusión garantizada no se observó.
    """

    subject: Literal["model", "scm"]
    flags: Dict[str, FlagResult]
    ledger: Dict[str, LedgerEntry] = Field(default_factory=dict)
    details: Dict[str, Any] = Field(default_factory=dict)
    provenance: Provenance = Field(default_factory=Provenance)

    def flag(self, name: str) -> Optional[bool]:
        return self.flags[name].holds

    def inconsistencies(self) -> List[str]:
        return [key for key, entry in self.ledger.items() if entry.status == "violated"]

    def to_json_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=REPORT_CONFIG["indent"], ensure_ascii=False)

    def render_text(self) -> str:
        """Versión humana con los mismos veredictos que el JSON"""
        lines = ["=" * 60, "REPORTE DE AUDITORÍA ({})".format(self.subject.upper()), "=" * 60]
        if self.provenance.fixture:
            lines.append("Fixture: {}".format(self.provenance.fixture))
        if self.provenance.inputs:
            lines.append("Entradas: {}".format(", ".join(self.provenance.inputs)))
        lines.append("")
        lines.append("FLAGS:")
        for name, result in self.flags.items():
            mark = "n/a" if result.holds is None else ("✅" if result.holds else "❌")
            line = "  {:<28} {}".format(name, mark)
            if result.holds is False:
                line += "  testigo: {}".format(json.dumps(result.witness, ensure_ascii=False))
            lines.append(line)
        if self.ledger:
            lines.append("")
            lines.append("RESULTADOS:")
            for key, entry in self.ledger.items():
                label = " ({})".format(entry.theorem) if entry.theorem else ""
                lines.append("  {:<36} {}{}".format(key, entry.status, label))
        inconsistencies = self.inconsistencies()
        if inconsistencies:
            lines.append("")
            lines.append("⚠️ INCONSISTENCIAS: {}".format(", ".join(inconsistencies)))
        return "\n".join(lines) + "\n"


def load_report_schema(path: Optional[Path] = None) -> Dict[str, Any]:
    path = Path(path) if path else SCHEMAS_PATH / REPORT_CONFIG["schema_file"]
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def validate_report(data: Dict[str, Any], schema: Optional[Dict[str, Any]] = None) -> None:
    """
    Raises:
        jsonschema.ValidationError: el JSON no cumple el esquema del repo
    """
    jsonschema.validate(instance=data, schema=schema or load_report_schema())
