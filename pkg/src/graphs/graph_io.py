# src/graphs/graph_io.py
"""
Formato de texto de grafos

    # comentario
    nodes: a b c d
    a -> b
    c <-> d
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from common.errors import GraphError, ParseError
from graphs.graph import Graph, Label, Mark

logger = logging.getLogger(__name__)

_MARKS = {"->": Mark.ARROW, "<->": Mark.ARC}


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_graph(text: str, source: Optional[str] = None) -> Graph:
    """
    Parseo estricto: nodo desconocido, arista duplicada o lazo son errores con línea

    Raises:
        ParseError: con número de línea (1-based)
    """
    nodes: Optional[Tuple[Label, ...]] = None
    arrows: List[Tuple[Label, Label]] = []
    arcs: List[Tuple[Label, Label]] = []
    seen_pairs: Dict[frozenset, int] = {}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue

        if line.startswith("nodes:"):
            if nodes is not None:
                raise ParseError("declaración 'nodes:' repetida", number, source)
            labels = tuple(line[len("nodes:"):].split())
            duplicated = {label for label in labels if labels.count(label) > 1}
            if duplicated:
                raise ParseError("nodos duplicados: {}".format(sorted(duplicated)), number, source)
            nodes = labels
            continue

        tokens = line.split()
        if len(tokens) != 3 or tokens[1] not in _MARKS:
            raise ParseError("línea no reconocida: {!r}".format(raw.strip()), number, source)
        if nodes is None:
            raise ParseError("arista antes de la declaración 'nodes:'", number, source)

        a, mark, b = tokens[0], _MARKS[tokens[1]], tokens[2]
        for endpoint in (a, b):
            if endpoint not in nodes:
                raise ParseError("nodo desconocido: {}".format(endpoint), number, source)
        if a == b:
            raise ParseError("lazo en {}".format(a), number, source)
        pair = frozenset((a, b))
        if pair in seen_pairs:
            raise ParseError("arista duplicada {}-{} (ya declarada en línea {})".format(
                a, b, seen_pairs[pair]), number, source)
        seen_pairs[pair] = number
        (arrows if mark is Mark.ARROW else arcs).append((a, b))

    if nodes is None:
        raise ParseError("falta la declaración 'nodes:'", None, source)

    try:
        graph = Graph.from_edges(nodes, arrows, arcs)
    except GraphError as e:
        raise ParseError(str(e), None, source) from e

    logger.debug(f"📄 Grafo parseado: {len(graph.nodes)} nodos, {graph.edge_count} aristas")
    return graph


def serialize_graph(g: Graph) -> str:
    """Forma canónica: cabecera de nodos, flechas y luego arcos por índice"""
    lines = ["nodes: " + " ".join(g.nodes)]
    lines.extend(str(edge) for edge in g.edges())
    return "\n".join(lines) + "\n"


def load_graph(path: Union[str, Path]) -> Graph:
    path = Path(path)
    return parse_graph(path.read_text(encoding="utf-8"), source=str(path))


def save_graph(g: Graph, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_graph(g), encoding="utf-8")
    return path
