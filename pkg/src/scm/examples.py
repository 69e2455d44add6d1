# src/scm/examples.py
"""
SCMs incluidos, cargables por id

- mod2@1/2, mod2@1/3: X2 = ε2, X1 = X2 ⊕ ε1 (mod 2), ε1 ~ Bern(p), ε2 ~ Bern(1/2)
- xor3: X1 = X2 ⊕ X3 ⊕ ε1, ε1 ~ Bern(1/3), ε2, ε3 ~ Bern(1/2)
- maxdiamond: X4 = ε4, X3 = max(2·X4, ε3), X2 = max(X4, ε2),
  X1 = max(X2, X3, ε1), ruidos i.i.d. uniformes en {0, 1, 2}
"""

import itertools
import logging
from fractions import Fraction
from typing import Callable, Dict, Sequence

from common.errors import FixtureError
from graphs.graph import Graph
from scm.model import Mechanism, NoiseBlock, Scm, Value

logger = logging.getLogger(__name__)


def bernoulli(p: Fraction) -> Dict[tuple, Fraction]:
    return {(0,): 1 - Fraction(p), (1,): Fraction(p)}


def uniform(values: Sequence[Value]) -> Dict[tuple, Fraction]:
    return {(value,): Fraction(1, len(values)) for value in values}


def tabulate(node: str, parents: Sequence[str], supports: Dict[str, Sequence[Value]],
             noise: Sequence[Value], function: Callable[..., Value]) -> Mechanism:
    """Tabla total de function(*padres, ruido) sobre el producto de soportes"""
    table = {}
    for values in itertools.product(*(supports[p] for p in parents)):
        for e in noise:
            table[(tuple(values), e)] = function(*values, e)
    return Mechanism(node, tuple(parents), table)


def mod2(p: Fraction) -> Scm:
    p = Fraction(p)
    graph = Graph.from_edges(["1", "2"], [("2", "1")])
    supports = {"1": (0, 1), "2": (0, 1)}
    blocks = (NoiseBlock(("1",), bernoulli(p)), NoiseBlock(("2",), bernoulli(Fraction(1, 2))))
    mechanisms = {
        "2": tabulate("2", [], supports, (0, 1), lambda e: e),
        "1": tabulate("1", ["2"], supports, (0, 1), lambda x2, e: (x2 + e) % 2),
    }
    return Scm(graph, supports, blocks, mechanisms, name="mod2@{}".format(p))


def xor3() -> Scm:
    graph = Graph.from_edges(["1", "2", "3"], [("2", "1"), ("3", "1")])
    supports = {"1": (0, 1), "2": (0, 1), "3": (0, 1)}
    blocks = (
        NoiseBlock(("1",), bernoulli(Fraction(1, 3))),
        NoiseBlock(("2",), bernoulli(Fraction(1, 2))),
        NoiseBlock(("3",), bernoulli(Fraction(1, 2))),
    )
    mechanisms = {
        "3": tabulate("3", [], supports, (0, 1), lambda e: e),
        "2": tabulate("2", [], supports, (0, 1), lambda e: e),
        "1": tabulate("1", ["2", "3"], supports, (0, 1), lambda x2, x3, e: (x2 + x3 + e) % 2),
    }
    return Scm(graph, supports, blocks, mechanisms, name="xor3")


def maxdiamond() -> Scm:
    noise = (0, 1, 2)
    graph = Graph.from_edges(["1", "2", "3", "4"], [("4", "3"), ("4", "2"), ("3", "1"), ("2", "1")])
    supports = {"4": (0, 1, 2), "3": (0, 1, 2, 4), "2": (0, 1, 2), "1": (0, 1, 2, 4)}
    blocks = tuple(NoiseBlock((label,), uniform(noise)) for label in ("1", "2", "3", "4"))
    mechanisms = {
        "4": tabulate("4", [], supports, noise, lambda e: e),
        "3": tabulate("3", ["4"], supports, noise, lambda x4, e: max(2 * x4, e)),
        "2": tabulate("2", ["4"], supports, noise, lambda x4, e: max(x4, e)),
        "1": tabulate("1", ["2", "3"], supports, noise, lambda x2, x3, e: max(x2, x3, e)),
    }
    return Scm(graph, supports, blocks, mechanisms, name="maxdiamond")


BUILTIN_SCMS: Dict[str, Callable[[], Scm]] = {
    "mod2@1/2": lambda: mod2(Fraction(1, 2)),
    "mod2@1/3": lambda: mod2(Fraction(1, 3)),
    "xor3": xor3,
    "maxdiamond": maxdiamond,
}


def load_builtin(name: str) -> Scm:
    """
    Raises:
        FixtureError: id desconocido
    """
    if name not in BUILTIN_SCMS:
        raise FixtureError("SCM desconocido: {} (disponibles: {})".format(name, ", ".join(BUILTIN_SCMS)))
    logger.debug(f"📄 Cargando SCM incluido {name}")
    return BUILTIN_SCMS[name]()
