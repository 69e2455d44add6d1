# src/independence/model.py
"""
Modelos de independencia explícitos

Cada tripleta ⟨A,B|C⟩ se empaqueta en un entero: A | B << n | C << 2n,
con n el tamaño del universo. La simetría es una normalización de
almacenamiento: ⟨A,B|C⟩ está guardada sii ⟨B,A|C⟩ lo está. Las tripletas con
A o B vacío valen por convención y nunca se guardan.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Tuple

from common.errors import BoundExceededError, QueryError, UniverseMismatchError
from config import get_max_nodes
from independence.bitsets import single_bits, submasks

logger = logging.getLogger(__name__)

Label = str
Masks = Tuple[int, int, int]


class Triple(NamedTuple):
    """⟨A,B|C⟩ sobre etiquetas"""
    a: FrozenSet[Label]
    b: FrozenSet[Label]
    c: FrozenSet[Label]

    @classmethod
    def of(cls, a: Iterable[Label], b: Iterable[Label], c: Iterable[Label] = ()) -> "Triple":
        return cls(frozenset(map(str, a)), frozenset(map(str, b)), frozenset(map(str, c)))

    def dual(self) -> "Triple":
        return Triple(self.b, self.a, self.c)

    def to_jsonable(self) -> Dict[str, List[Label]]:
        return {"a": sorted(self.a), "b": sorted(self.b), "c": sorted(self.c)}

    def __str__(self) -> str:
        def fmt(nodes):
            return "{" + ",".join(sorted(nodes)) + "}"
        return "{} _||_ {} | {}".format(fmt(self.a), fmt(self.b), fmt(self.c))


@dataclass(frozen=True)
class IndependenceModel:
    """
    Conjunto finito de tripletas disjuntas sobre un universo ordenado

    Args:
        universe: etiquetas en orden (bit i = universe[i])
        keys: tripletas empaquetadas, ya simetrizadas
        provenance: metadatos de origen (no participan en la igualdad)
    """

    universe: Tuple[Label, ...]
    keys: FrozenSet[int] = frozenset()
    provenance: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        universe = tuple(str(label) for label in self.universe)
        if len(set(universe)) != len(universe):
            raise UniverseMismatchError("Universo con etiquetas duplicadas: {}".format(universe))
        bound = get_max_nodes()
        if len(universe) > bound:
            raise BoundExceededError(
                "Universo de {} nodos supera la cota {} (CS_MAX_NODES)".format(len(universe), bound))
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "keys", frozenset(self.keys))

    # ------------------------------------------------------------------
    # Codificación
    # ------------------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.universe)

    @cached_property
    def _bit(self) -> Dict[Label, int]:
        return {label: 1 << position for position, label in enumerate(self.universe)}

    @property
    def all_mask(self) -> int:
        return (1 << self.size) - 1

    def mask(self, labels: Iterable[Label]) -> int:
        result = 0
        for label in labels:
            try:
                result |= self._bit[str(label)]
            except KeyError:
                raise UniverseMismatchError("Nodo fuera del universo: {}".format(label)) from None
        return result

    def labels(self, mask: int) -> FrozenSet[Label]:
        return frozenset(label for label, bit in self._bit.items() if mask & bit)

    def sorted_labels(self, mask: int) -> Tuple[Label, ...]:
        return tuple(label for label in self.universe if mask & self._bit[label])

    def pack(self, a: int, b: int, c: int) -> int:
        n = self.size
        return a | (b << n) | (c << (2 * n))

    def unpack(self, key: int) -> Masks:
        n = self.size
        full = self.all_mask
        return key & full, (key >> n) & full, (key >> (2 * n)) & full

    def triple(self, a: int, b: int, c: int) -> Triple:
        return Triple(self.labels(a), self.labels(b), self.labels(c))

    # ------------------------------------------------------------------
    # Constructores
    # ------------------------------------------------------------------

    @classmethod
    def from_masks(cls, universe: Iterable[Label], masks: Iterable[Masks],
                   provenance: Dict[str, Any] = None) -> "IndependenceModel":
        """Añade las duales; descarta tripletas triviales (A o B vacío)"""
        model = cls(tuple(universe), frozenset(), dict(provenance or {}))
        keys = set()
        for a, b, c in masks:
            if a & b or a & c or b & c:
                raise QueryError("Tripleta no disjunta: {}".format(model.triple(a, b, c)))
            if not a or not b:
                continue
            keys.add(model.pack(a, b, c))
            keys.add(model.pack(b, a, c))
        return cls(model.universe, frozenset(keys), model.provenance)

    @classmethod
    def from_statements(cls, universe: Iterable[Label], statements: Iterable[Tuple[Iterable[Label], ...]],
                        provenance: Dict[str, Any] = None) -> "IndependenceModel":
        """Sentencias (A, B, C) sobre etiquetas; C puede omitirse"""
        universe = tuple(str(label) for label in universe)
        template = cls(universe)
        masks = []
        for statement in statements:
            a, b = statement[0], statement[1]
            c = statement[2] if len(statement) > 2 else ()
            masks.append((template.mask(a), template.mask(b), template.mask(c)))
        return cls.from_masks(universe, masks, provenance)

    @classmethod
    def empty(cls, universe: Iterable[Label]) -> "IndependenceModel":
        return cls(tuple(universe))

    @classmethod
    def full(cls, universe: Iterable[Label]) -> "IndependenceModel":
        """Todas las tripletas disjuntas no triviales"""
        model = cls(tuple(universe))
        return cls.from_masks(model.universe, model.iter_disjoint_masks(), {"source": "full"})

    def iter_disjoint_masks(self) -> Iterator[Masks]:
        """Todas las (A, B, C) disjuntas con A, B no vacíos, orden (C, A, B)"""
        full = self.all_mask
        for c in submasks(full):
            rest = full & ~c
            for a in submasks(rest):
                if not a:
                    continue
                for b in submasks(rest & ~a):
                    if b:
                        yield a, b, c

    # ------------------------------------------------------------------
    # Consultas
    # ------------------------------------------------------------------

    def contains_masks(self, a: int, b: int, c: int) -> bool:
        if not a or not b:
            return True
        return self.pack(a, b, c) in self.keys

    def holds(self, a: Iterable[Label], b: Iterable[Label], c: Iterable[Label] = ()) -> bool:
        a_mask, b_mask, c_mask = self.mask(a), self.mask(b), self.mask(c)
        if a_mask & b_mask or a_mask & c_mask or b_mask & c_mask:
            raise QueryError("Conjuntos solapados en la consulta")
        return self.contains_masks(a_mask, b_mask, c_mask)

    def __contains__(self, triple: object) -> bool:
        if not isinstance(triple, tuple) or len(triple) != 3:
            return False
        return self.holds(*triple)

    def __len__(self) -> int:
        return len(self.keys)

    @cached_property
    def ordered_masks(self) -> List[Masks]:
        """Tripletas guardadas en el orden documentado para testigos: (C, A, B)"""
        unpacked = [self.unpack(key) for key in self.keys]
        return sorted(unpacked, key=lambda masks: (masks[2], masks[0], masks[1]))

    def triples(self) -> Iterator[Triple]:
        for a, b, c in self.ordered_masks:
            yield self.triple(a, b, c)

    def singleton_pairs(self) -> Iterator[Masks]:
        """⟨i,j|C⟩ con i, j singletons e i < j (por índice), orden (C, i, j)"""
        for a, b, c in self.ordered_masks:
            if a < b and a & (a - 1) == 0 and b & (b - 1) == 0:
                yield a, b, c

    def canonical_triples(self) -> Iterator[Triple]:
        """Una tripleta por par simétrico (máscara de A menor que la de B)"""
        for a, b, c in self.ordered_masks:
            if a < b:
                yield self.triple(a, b, c)

    # ------------------------------------------------------------------
    # Álgebra de modelos
    # ------------------------------------------------------------------

    def _require_same_universe(self, other: "IndependenceModel") -> "IndependenceModel":
        if other.universe == self.universe:
            return other
        return other.aligned_to(self.universe)

    def aligned_to(self, universe: Iterable[Label]) -> "IndependenceModel":
        """Re-codifica el modelo sobre otro orden del mismo conjunto de etiquetas"""
        universe = tuple(str(label) for label in universe)
        if set(universe) != set(self.universe):
            raise UniverseMismatchError("Universos distintos: {} vs {}".format(
                sorted(self.universe), sorted(universe)))
        if universe == self.universe:
            return self
        target = IndependenceModel(universe)
        remap = {bit: target.mask([label]) for label, bit in self._bit.items()}

        def convert(mask: int) -> int:
            return sum(remap[bit] for bit in single_bits(mask))

        masks = [(convert(a), convert(b), convert(c)) for a, b, c in self.ordered_masks]
        return IndependenceModel.from_masks(universe, masks, self.provenance)

    def issubset(self, other: "IndependenceModel") -> bool:
        other = self._require_same_universe(other)
        return self.keys <= other.keys

    def union(self, other: "IndependenceModel") -> "IndependenceModel":
        other = self._require_same_universe(other)
        return IndependenceModel(self.universe, self.keys | other.keys, dict(self.provenance))

    def difference(self, other: "IndependenceModel") -> List[Masks]:
        """Tripletas de self ausentes en other, en orden de testigos"""
        other = self._require_same_universe(other)
        return [masks for masks in self.ordered_masks if self.pack(*masks) not in other.keys]

    def with_statements(self, statements: Iterable[Tuple[Iterable[Label], ...]]) -> "IndependenceModel":
        extra = IndependenceModel.from_statements(self.universe, statements)
        return self.union(extra)

    def without_statements(self, statements: Iterable[Tuple[Iterable[Label], ...]]) -> "IndependenceModel":
        """Quita las sentencias dadas y sus duales"""
        removed = IndependenceModel.from_statements(self.universe, statements)
        return IndependenceModel(self.universe, self.keys - removed.keys, dict(self.provenance))

    def restricted_to(self, labels: Iterable[Label]) -> "IndependenceModel":
        """Tripletas que evitan los nodos fuera de labels, sobre el universo reducido"""
        wanted = set(labels)
        keep = [label for label in self.universe if label in wanted]
        keep_mask = self.mask(keep)
        target = IndependenceModel(tuple(keep))

        def convert(mask: int) -> int:
            return target.mask(self.labels(mask))

        masks = [
            (convert(a), convert(b), convert(c))
            for a, b, c in self.ordered_masks
            if (a | b | c) & ~keep_mask == 0
        ]
        return IndependenceModel.from_masks(target.universe, masks, dict(self.provenance))

    def to_jsonable(self) -> Dict[str, Any]:
        return {
            "universe": list(self.universe),
            "statements": [str(triple) for triple in self.canonical_triples()],
            "provenance": self.provenance,
        }

    def __str__(self) -> str:
        return "IndependenceModel({} nodos, {} tripletas)".format(self.size, len(self.keys) // 2)
