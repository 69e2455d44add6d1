# src/scm/model.py
"""
Modelos causales estructurales discretos y exactos

X_i = φ_i(X_pa(i), ε_i), con φ_i como tabla de consulta y los ruidos
agrupados en bloques (componentes conexas por arcos). Toda probabilidad es
una Fraction: la independencia condicional se decide por igualdad exacta.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

import networkx as nx
import pandas as pd

from common.errors import GraphError, ScmValidationError
from graphs.ancestral import require_ancestral
from graphs.graph import Graph, Label
from independence.bitsets import nonempty_submasks
from independence.model import IndependenceModel
from separation.msep import SeparationQuery

logger = logging.getLogger(__name__)

Value = Union[int, str]
Assignment = Tuple[Value, ...]


def marginalize(nodes: Tuple[Label, ...], table: Mapping[Assignment, Fraction],
                keep: Iterable[Label]) -> Dict[Assignment, Fraction]:
    """Marginal de una tabla conjunta sobre `keep` (en el orden dado)"""
    positions = [nodes.index(label) for label in keep]
    result: Dict[Assignment, Fraction] = {}
    for values, probability in table.items():
        key = tuple(values[position] for position in positions)
        result[key] = result.get(key, Fraction(0)) + probability
    return result


def factorizes(nodes: Tuple[Label, ...], table: Mapping[Assignment, Fraction],
               left: Iterable[Label], right: Iterable[Label]) -> bool:
    """P(left, right) = P(left)·P(right) en todas las celdas, exacto"""
    left, right = tuple(left), tuple(right)
    joint = marginalize(nodes, table, left + right)
    left_marginal = marginalize(nodes, table, left)
    right_marginal = marginalize(nodes, table, right)
    for x, px in left_marginal.items():
        for y, py in right_marginal.items():
            if joint.get(x + y, Fraction(0)) != px * py:
                return False
    return True


@dataclass(frozen=True)
class NoiseBlock:
    """Ley conjunta de los ruidos de una componente conexa por arcos"""

    nodes: Tuple[Label, ...]
    table: Mapping[Assignment, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(str(label) for label in self.nodes))
        table = {tuple(values): Fraction(probability) for values, probability in self.table.items()}
        object.__setattr__(self, "table", table)

    def marginal(self, labels: Iterable[Label]) -> Dict[Assignment, Fraction]:
        return marginalize(self.nodes, self.table, labels)

    def noise_law(self, label: Label) -> Dict[Value, Fraction]:
        """Ley marginal de ε_label (solo valores con probabilidad positiva)"""
        return {values[0]: p for values, p in self.marginal([label]).items() if p > 0}

    def support(self, label: Label) -> Tuple[Value, ...]:
        return tuple(self.noise_law(label))

    def positive_rows(self) -> Iterator[Tuple[Assignment, Fraction]]:
        for values, probability in self.table.items():
            if probability > 0:
                yield values, probability


@dataclass(frozen=True)
class Mechanism:
    """Tabla total φ: (valores de los padres, ruido) → valor del nodo"""

    node: Label
    parents: Tuple[Label, ...]
    table: Mapping[Tuple[Assignment, Value], Value]

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(str(label) for label in self.parents))
        table = {(tuple(parents), noise): out for (parents, noise), out in self.table.items()}
        object.__setattr__(self, "table", table)

    def __call__(self, parent_values: Assignment, noise: Value) -> Value:
        return self.table[(tuple(parent_values), noise)]


@dataclass(frozen=True)
class JointTable:
    """Distribución conjunta exacta de las variables endógenas"""

    nodes: Tuple[Label, ...]
    probabilities: Mapping[Assignment, Fraction]

    def marginal(self, labels: Iterable[Label]) -> Dict[Assignment, Fraction]:
        return marginalize(self.nodes, self.probabilities, labels)

    def support(self, label: Label) -> Tuple[Value, ...]:
        return tuple(key[0] for key, p in self.marginal([label]).items() if p > 0)

    def law(self, label: Label) -> Dict[Value, Fraction]:
        return {key[0]: p for key, p in self.marginal([label]).items() if p > 0}

    @property
    def total(self) -> Fraction:
        return sum(self.probabilities.values(), Fraction(0))

    def to_frame(self) -> pd.DataFrame:
        """Una columna por nodo más `prob` (Fraction), filas ordenadas por valores"""
        rows = [dict(zip(self.nodes, values), prob=p) for values, p in self.probabilities.items()]
        frame = pd.DataFrame(rows, columns=list(self.nodes) + ["prob"])
        if not frame.empty:
            frame = frame.sort_values(list(self.nodes), key=lambda column: column.astype(str)).reset_index(drop=True)
        return frame

    def to_jsonable(self):
        return {
            "nodes": list(self.nodes),
            "rows": [{"values": list(values), "prob": "{}/{}".format(p.numerator, p.denominator)}
                     for values, p in sorted(self.probabilities.items(), key=lambda item: str(item[0]))],
        }


@dataclass(frozen=True, eq=False)
class Scm:
    """
    SCM discreto validado al construirse

    Args:
        graph: grafo causal ancestral G0
        supports: valores posibles de cada variable endógena
        noise_blocks: un bloque por componente conexa de arcos
        mechanisms: φ_i por nodo, leyendo exactamente pa(i) en orden de índice
        name: identificador opcional (ejemplos incluidos)

    Raises:
        ScmValidationError: estructura, probabilidades o mecanismos inválidos
    """

    graph: Graph
    supports: Mapping[Label, Tuple[Value, ...]]
    noise_blocks: Tuple[NoiseBlock, ...]
    mechanisms: Mapping[Label, Mechanism]
    name: Optional[str] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "supports", {str(k): tuple(v) for k, v in self.supports.items()})
        object.__setattr__(self, "noise_blocks", tuple(self.noise_blocks))
        object.__setattr__(self, "mechanisms", {str(k): v for k, v in self.mechanisms.items()})
        self._validate()

    # ------------------------------------------------------------------
    # Validación
    # ------------------------------------------------------------------

    def _validate(self) -> None:
        g = self.graph
        try:
            require_ancestral(g)
        except GraphError as e:
            raise ScmValidationError("G0 no es ancestral: {}".format(e)) from e

        nodes = set(g.nodes)
        if set(self.supports) != nodes:
            raise ScmValidationError("Soportes declarados para {} pero el grafo tiene {}".format(
                sorted(self.supports), sorted(nodes)))
        for label, values in self.supports.items():
            if not values or len(set(values)) != len(values):
                raise ScmValidationError("Soporte vacío o con repetidos en {}".format(label))
        if set(self.mechanisms) != nodes:
            raise ScmValidationError("Mecanismos declarados para {} pero el grafo tiene {}".format(
                sorted(self.mechanisms), sorted(nodes)))

        self._validate_blocks()
        for label in g.nodes:
            self._validate_mechanism(self.mechanisms[label])

    def _validate_blocks(self) -> None:
        g = self.graph
        components = {frozenset(component) for component in nx.connected_components(g.arc_graph)}
        seen = [label for block in self.noise_blocks for label in block.nodes]
        if len(seen) != len(set(seen)) or set(seen) != set(g.nodes):
            raise ScmValidationError("Los bloques de ruido no particionan los nodos: {}".format(seen))

        for block in self.noise_blocks:
            if frozenset(block.nodes) not in components:
                raise ScmValidationError("El bloque {} no es una componente conexa de arcos".format(
                    list(block.nodes)))
            for values, probability in block.table.items():
                if len(values) != len(block.nodes):
                    raise ScmValidationError("Fila de ruido {} con aridad distinta de {}".format(
                        list(values), list(block.nodes)))
                if probability < 0:
                    raise ScmValidationError("Probabilidad negativa en el bloque {}".format(list(block.nodes)))
            total = sum(block.table.values(), Fraction(0))
            if total != 1:
                raise ScmValidationError("El bloque {} suma {} (debe sumar 1)".format(list(block.nodes), total))
            self._validate_block_dependence(block)

    def _validate_block_dependence(self, block: NoiseBlock) -> None:
        """ε_A ⊥ ε_B sii no hay arco entre A y B (subconjuntos disjuntos del bloque)"""
        g = self.graph
        nodes = block.nodes
        full = (1 << len(nodes)) - 1
        for a_mask in nonempty_submasks(full):
            for b_mask in nonempty_submasks(full & ~a_mask):
                if a_mask > b_mask:
                    continue
                left = [nodes[k] for k in range(len(nodes)) if a_mask >> k & 1]
                right = [nodes[k] for k in range(len(nodes)) if b_mask >> k & 1]
                has_arc = any(g.spouses(x) & set(right) for x in left)
                independent = factorizes(nodes, block.table, left, right)
                if has_arc and independent:
                    raise ScmValidationError(
                        "Ruidos de {} y {} independientes pese a un arco entre ellos".format(left, right))
                if not has_arc and not independent:
                    raise ScmValidationError(
                        "Ruidos de {} y {} dependientes sin arco entre ellos".format(left, right))

    def _validate_mechanism(self, mechanism: Mechanism) -> None:
        label = mechanism.node
        expected = self.graph.sort_nodes(self.graph.parents(label))
        if tuple(mechanism.parents) != expected:
            raise ScmValidationError("φ_{} lee {} pero pa({}) = {}".format(
                label, list(mechanism.parents), label, list(expected)))
        noise_support = self.noise_support(label)
        for parent_values in self.parent_assignments(label):
            for noise in noise_support:
                key = (parent_values, noise)
                if key not in mechanism.table:
                    raise ScmValidationError("φ_{} no está definida en padres={} ruido={}".format(
                        label, list(parent_values), noise))
                if mechanism.table[key] not in self.supports[label]:
                    raise ScmValidationError("φ_{} devuelve {} fuera del soporte {}".format(
                        label, mechanism.table[key], list(self.supports[label])))

    # ------------------------------------------------------------------
    # Accesos
    # ------------------------------------------------------------------

    @property
    def nodes(self) -> Tuple[Label, ...]:
        return self.graph.nodes

    @cached_property
    def _block_of(self) -> Dict[Label, NoiseBlock]:
        return {label: block for block in self.noise_blocks for label in block.nodes}

    def block_of(self, label: Label) -> NoiseBlock:
        return self._block_of[label]

    def noise_law(self, label: Label) -> Dict[Value, Fraction]:
        return self.block_of(label).noise_law(label)

    def noise_support(self, label: Label) -> Tuple[Value, ...]:
        return self.block_of(label).support(label)

    def parent_assignments(self, label: Label) -> List[Assignment]:
        """Producto de los soportes de pa(label), en orden de índice"""
        parents = self.mechanisms[label].parents
        return [tuple(values) for values in itertools.product(*(self.supports[p] for p in parents))]

    @cached_property
    def topological_order(self) -> Tuple[Label, ...]:
        g = self.graph
        return tuple(nx.lexicographical_topological_sort(g.digraph, key=g.index))

    @cached_property
    def joint(self) -> JointTable:
        return joint_distribution(self)

    def __str__(self) -> str:
        return "Scm({}, {})".format(self.name or "anónimo", self.graph)


def joint_distribution(s: Scm) -> JointTable:
    """Push-forward exacto del producto de bloques por los mecanismos"""
    blocks = list(s.noise_blocks)
    probabilities: Dict[Assignment, Fraction] = {}

    for rows in itertools.product(*(list(block.positive_rows()) for block in blocks)):
        noise: Dict[Label, Value] = {}
        weight = Fraction(1)
        for block, (values, probability) in zip(blocks, rows):
            noise.update(zip(block.nodes, values))
            weight *= probability

        state: Dict[Label, Value] = {}
        for label in s.topological_order:
            mechanism = s.mechanisms[label]
            state[label] = mechanism(tuple(state[p] for p in mechanism.parents), noise[label])

        key = tuple(state[label] for label in s.nodes)
        probabilities[key] = probabilities.get(key, Fraction(0)) + weight

    table = JointTable(s.nodes, probabilities)
    logger.debug(f"📊 Conjunta de {s}: {len(probabilities)} celdas con probabilidad positiva")
    return table


def _independent(marginals: "MarginalCache", a: Tuple[Label, ...], b: Tuple[Label, ...],
                 c: Tuple[Label, ...]) -> bool:
    """P(a,b,c)·P(c) = P(a,c)·P(b,c) para todo c con P(c) > 0"""
    p_abc = marginals.get(a + b + c)
    p_ac = marginals.get(a + c)
    p_bc = marginals.get(b + c)
    p_c = marginals.get(c)
    na, nb = len(a), len(b)

    ac_by_c: Dict[Assignment, List[Tuple[Assignment, Fraction]]] = {}
    for key, p in p_ac.items():
        if p > 0:
            ac_by_c.setdefault(key[na:], []).append((key[:na], p))
    bc_by_c: Dict[Assignment, List[Tuple[Assignment, Fraction]]] = {}
    for key, p in p_bc.items():
        if p > 0:
            bc_by_c.setdefault(key[nb:], []).append((key[:nb], p))

    for cv, pc in p_c.items():
        if pc == 0:
            continue
        for av, pa in ac_by_c.get(cv, ()):
            for bv, pb in bc_by_c.get(cv, ()):
                if p_abc.get(av + bv + cv, Fraction(0)) * pc != pa * pb:
                    return False
    # celdas con P(a,c)=0 o P(b,c)=0 tienen P(a,b,c)=0 en ambos lados
    return True


class MarginalCache:
    """Marginales memoizadas de una tabla conjunta"""

    def __init__(self, table: JointTable):
        self.table = table
        self._cache: Dict[Tuple[Label, ...], Dict[Assignment, Fraction]] = {}

    def get(self, labels: Tuple[Label, ...]) -> Dict[Assignment, Fraction]:
        if labels not in self._cache:
            self._cache[labels] = self.table.marginal(labels)
        return self._cache[labels]


def _as_table(source: Union[Scm, JointTable]) -> JointTable:
    return source.joint if isinstance(source, Scm) else source


def ci_query(source: Union[Scm, JointTable], query: SeparationQuery) -> bool:
    """
    ¿X_A ⊥ X_B | X_C? Comparación exacta con racionales

    Raises:
        QueryError: conjuntos solapados o vacíos (al construir la consulta)
        GraphError: nodos desconocidos
    """
    table = _as_table(source)
    unknown = (query.a | query.b | query.c) - set(table.nodes)
    if unknown:
        raise GraphError("Nodos desconocidos en la consulta: {}".format(sorted(unknown)))

    def ordered(labels):
        return tuple(label for label in table.nodes if label in labels)

    return _independent(MarginalCache(table), ordered(query.a), ordered(query.b), ordered(query.c))


def induced_model_scm(s: Scm) -> IndependenceModel:
    """
    Todas las tripletas disjuntas que valen en la conjunta del SCM

    Raises:
        BoundExceededError: más nodos que la cota configurada
    """
    template = IndependenceModel.empty(s.nodes)
    marginals = MarginalCache(s.joint)
    holding = []
    for a, b, c in template.iter_disjoint_masks():
        if a > b:
            continue
        if _independent(marginals, template.sorted_labels(a), template.sorted_labels(b), template.sorted_labels(c)):
            holding.append((a, b, c))
    model = IndependenceModel.from_masks(s.nodes, holding, {"source": "scm", "name": s.name})
    logger.info(f"✅ Modelo inducido por {s}: {len(model) // 2} sentencias")
    return model
