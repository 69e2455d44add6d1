# test/conftest.py
"""
Fixtures compartidos: grafos, modelos y SCMs de referencia
"""

import logging
import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Agregar src al path (pytest.ini ya lo hace; esto cubre ejecuciones sueltas)
SRC_PATH = Path(__file__).resolve().parent.parent / "src"
if str(SRC_PATH) not in sys.path:
    sys.path.insert(0, str(SRC_PATH))

from graphs.graph import Graph  # noqa: E402
from pipeline.fixtures import (  # noqa: E402
    chain4_graph,
    chain_model,
    diamond_graphs,
    diamond_model,
    latent4_augmented,
    latent4_graph,
    order_necessity_graphs,
    orientation_graph,
    orientation_model,
)
from scm.examples import bernoulli, load_builtin, tabulate  # noqa: E402
from scm.model import NoiseBlock, Scm  # noqa: E402

logger = logging.getLogger(__name__)


@pytest.fixture(autouse=True)
def isolated_bounds(monkeypatch):
    """La CLI publica cotas en el entorno; cada test empieza con los valores por defecto"""
    monkeypatch.setenv("CS_MAX_NODES", "8")
    monkeypatch.setenv("CS_JOBS", "1")


# ==========================================
# GRAFOS
# ==========================================

@pytest.fixture
def chain4() -> Graph:
    """i→k←l←j"""
    return chain4_graph()


@pytest.fixture
def latent4() -> Graph:
    """3→1, 4→2, 1↔2"""
    return latent4_graph()


@pytest.fixture
def latent4_aug() -> Graph:
    return latent4_augmented()


@pytest.fixture
def diamond_g1() -> Graph:
    return diamond_graphs()[0]


@pytest.fixture
def diamond_g2() -> Graph:
    return diamond_graphs()[1]


@pytest.fixture
def orientation_g0() -> Graph:
    return orientation_graph()


@pytest.fixture
def necessity_graphs():
    return order_necessity_graphs()


@pytest.fixture
def collider3() -> Graph:
    """a→c←b"""
    return Graph.from_edges(["a", "b", "c"], [("a", "c"), ("b", "c")])


# ==========================================
# MODELOS
# ==========================================

@pytest.fixture
def chain_j():
    return chain_model()


@pytest.fixture
def diamond_j():
    return diamond_model()


@pytest.fixture
def orientation_j():
    return orientation_model()


# ==========================================
# SCMs
# ==========================================

@pytest.fixture
def mod2_half() -> Scm:
    return load_builtin("mod2@1/2")


@pytest.fixture
def mod2_third() -> Scm:
    return load_builtin("mod2@1/3")


@pytest.fixture
def xor3_scm() -> Scm:
    return load_builtin("xor3")


@pytest.fixture
def copy_scm() -> Scm:
    """X1 ~ Bernoulli(1/2), X2 = X1 con ruido degenerado"""
    graph = Graph.from_edges(["1", "2"], [("1", "2")])
    supports = {"1": (0, 1), "2": (0, 1)}
    blocks = (NoiseBlock(("1",), bernoulli(Fraction(1, 2))), NoiseBlock(("2",), {(0,): Fraction(1)}))
    mechanisms = {
        "1": tabulate("1", [], supports, (0, 1), lambda e: e),
        "2": tabulate("2", ["1"], supports, (0,), lambda x1, e: x1),
    }
    return Scm(graph, supports, blocks, mechanisms, name="copy")


@pytest.fixture
def write_text(tmp_path):
    """Escribe un archivo de texto en tmp_path y devuelve su ruta"""

    def _write(name: str, content: str) -> Path:
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return path

    return _write
