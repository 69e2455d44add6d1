# src/independence/model_io.py
"""
Formato de texto de modelos de independencia

    # comentario
    nodes: 1 2 3 4
    {1} _||_ {4} | {2,3}
    {2} _||_ {3} | {}

La cabecera `nodes:` es opcional; sin ella el universo se infiere en orden de
aparición. Las duales se añaden al cargar.
"""

import logging
import re
from pathlib import Path
from typing import List, Optional, Tuple, Union

from common.errors import ParseError, QueryError, UniverseMismatchError
from independence.model import IndependenceModel, Label

logger = logging.getLogger(__name__)

_STATEMENT = re.compile(r"^\{(?P<a>[^{}]*)\}\s*_\|\|_\s*\{(?P<b>[^{}]*)\}\s*\|\s*\{(?P<c>[^{}]*)\}$")


def _split_set(raw: str) -> Tuple[Label, ...]:
    return tuple(token.strip() for token in raw.split(",") if token.strip())


def parse_model(text: str, source: Optional[str] = None) -> IndependenceModel:
    """
    Parsea un modelo; avisa (warning) si una dual aparece explícitamente

    Raises:
        ParseError: línea mal formada, conjuntos solapados o nodo desconocido
    """
    declared: Optional[Tuple[Label, ...]] = None
    seen_order: List[Label] = []
    statements: List[Tuple[int, Tuple[Label, ...], Tuple[Label, ...], Tuple[Label, ...]]] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        if line.startswith("nodes:"):
            if declared is not None:
                raise ParseError("declaración 'nodes:' repetida", number, source)
            if statements:
                raise ParseError("'nodes:' debe ir antes de las sentencias", number, source)
            declared = tuple(line[len("nodes:"):].split())
            if len(set(declared)) != len(declared):
                raise ParseError("nodos duplicados en 'nodes:'", number, source)
            continue

        match = _STATEMENT.match(line)
        if not match:
            raise ParseError("sentencia no reconocida: {!r}".format(raw.strip()), number, source)
        a, b, c = (_split_set(match.group(part)) for part in ("a", "b", "c"))
        if not a or not b:
            raise ParseError("A y B deben ser no vacíos", number, source)
        if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
            raise ParseError("conjuntos solapados en la sentencia", number, source)
        for label in a + b + c:
            if declared is not None and label not in declared:
                raise ParseError("nodo desconocido: {}".format(label), number, source)
            if label not in seen_order:
                seen_order.append(label)
        statements.append((number, a, b, c))

    universe = declared if declared is not None else tuple(seen_order)

    seen = {}
    for number, a, b, c in statements:
        key = (frozenset(a), frozenset(b), frozenset(c))
        dual = (frozenset(b), frozenset(a), frozenset(c))
        if dual in seen and dual != key:
            logger.warning(f"⚠️ Línea {number}: dual explícita de la línea {seen[dual]} (se ignora)")
        seen.setdefault(key, number)

    try:
        model = IndependenceModel.from_statements(
            universe, [(a, b, c) for _, a, b, c in statements],
            provenance={"source": source or "<texto>"})
    except (QueryError, UniverseMismatchError) as e:
        raise ParseError(str(e), None, source) from e

    logger.debug(f"📄 Modelo parseado: {model.size} nodos, {len(model) // 2} sentencias")
    return model


def serialize_model(model: IndependenceModel) -> str:
    """Cabecera de nodos y una sentencia por par simétrico, en orden (C, A, B)"""
    lines = ["nodes: " + " ".join(model.universe)]
    for a, b, c in model.ordered_masks:
        if a < b:
            parts = [",".join(model.sorted_labels(mask)) for mask in (a, b, c)]
            lines.append("{{{}}} _||_ {{{}}} | {{{}}}".format(*parts))
    return "\n".join(lines) + "\n"


def load_model(path: Union[str, Path]) -> IndependenceModel:
    path = Path(path)
    return parse_model(path.read_text(encoding="utf-8"), source=str(path))


def save_model(model: IndependenceModel, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_model(model), encoding="utf-8")
    return path
