# src/scm/scm_io.py
"""
Formato JSON de SCMs

    {
      "name": "mod2@1/2",
      "graph": "nodes: 1 2\\n2 -> 1\\n",
      "supports": {"1": [0, 1], "2": [0, 1]},
      "noise_blocks": [{"nodes": ["1"], "table": [{"values": [0], "prob": "1/2"}, ...]}, ...],
      "mechanisms": {"1": [{"parents": [0], "noise": 1, "out": 1}, ...], ...}
    }

Las probabilidades son racionales exactos escritos como "num/den".
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from common.errors import ParseError
from graphs.graph_io import parse_graph, serialize_graph
from scm.model import Mechanism, NoiseBlock, Scm

logger = logging.getLogger(__name__)

ScalarValue = Union[int, str]


def parse_probability(raw: Union[str, int]) -> Fraction:
    """'num/den' o entero → Fraction; los floats se rechazan"""
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise ValueError("probabilidad no exacta: {!r} (use 'num/den')".format(raw))
    try:
        value = Fraction(raw)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError("probabilidad inválida: {!r}".format(raw)) from e
    if isinstance(raw, str) and "." in raw:
        raise ValueError("probabilidad decimal {!r}: use 'num/den'".format(raw))
    return value


def format_probability(value: Fraction) -> str:
    return "{}/{}".format(value.numerator, value.denominator)


class NoiseRowSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    values: List[ScalarValue]
    prob: Fraction

    @field_validator("prob", mode="before")
    @classmethod
    def _exact(cls, raw):
        return parse_probability(raw)


class NoiseBlockSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    nodes: List[str]
    table: List[NoiseRowSpec]


class MechanismRowSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    parents: List[ScalarValue] = Field(default_factory=list)
    noise: ScalarValue
    out: ScalarValue


class ScmFile(BaseModel):
    """Esquema del archivo; la validación semántica la hace Scm"""

    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    graph: str
    supports: Dict[str, List[ScalarValue]]
    noise_blocks: List[NoiseBlockSpec]
    mechanisms: Dict[str, List[MechanismRowSpec]]


def parse_scm(text: str, source: Optional[str] = None) -> Scm:
    """
    Raises:
        ParseError: JSON mal formado, campos faltantes o probabilidades no exactas
        ScmValidationError: el SCM no es válido (estructura, totalidad, ruidos)
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("JSON inválido: {}".format(e.msg), e.lineno, source) from e

    try:
        spec = ScmFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ParseError("{}: {}".format(location, first["msg"]), None, source) from e

    graph = parse_graph(spec.graph, source="{}#graph".format(source) if source else "graph")
    blocks = [
        NoiseBlock(tuple(block.nodes), {tuple(row.values): row.prob for row in block.table})
        for block in spec.noise_blocks
    ]
    mechanisms = {}
    for label, rows in spec.mechanisms.items():
        table = {}
        for row in rows:
            key = (tuple(row.parents), row.noise)
            if key in table:
                raise ParseError("fila repetida en el mecanismo de {}: {}".format(label, key), None, source)
            table[key] = row.out
        parents = graph.sort_nodes(graph.parents(label)) if label in graph else ()
        mechanisms[label] = Mechanism(label, parents, table)

    scm = Scm(graph, {label: tuple(values) for label, values in spec.supports.items()},
              tuple(blocks), mechanisms, spec.name)
    logger.debug(f"📄 SCM parseado: {scm}")
    return scm


def scm_to_dict(s: Scm) -> Dict:
    return {
        "name": s.name,
        "graph": serialize_graph(s.graph),
        "supports": {label: list(s.supports[label]) for label in s.nodes},
        "noise_blocks": [
            {
                "nodes": list(block.nodes),
                "table": [{"values": list(values), "prob": format_probability(p)}
                          for values, p in block.table.items()],
            }
            for block in s.noise_blocks
        ],
        "mechanisms": {
            label: [{"parents": list(parents), "noise": noise, "out": out}
                    for (parents, noise), out in s.mechanisms[label].table.items()]
            for label in s.nodes
        },
    }


def serialize_scm(s: Scm) -> str:
    return json.dumps(scm_to_dict(s), indent=2, ensure_ascii=False) + "\n"


def load_scm(path: Union[str, Path]) -> Scm:
    path = Path(path)
    return parse_scm(path.read_text(encoding="utf-8"), source=str(path))


def save_scm(s: Scm, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_scm(s), encoding="utf-8")
    return path
