# src/scm/conditions.py
"""
Condiciones suficientes del lado del SCM

Positividad, fibras no constantes, inyectividad y sobreyectividad en el
ruido, soportes de ruido menores que los de las variables, uniformidad de
los ruidos y la caracterización por leyes de una flecha. Todo se decide
por enumeración finita y aritmética exacta.
"""

import itertools
import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from common.errors import GraphError, ScmPreconditionError
from common.verdict import Verdict
from graphs.ancestral import anc_pair
from graphs.graph import Label, Mark
from independence.bitsets import nonempty_submasks
from independence.model import IndependenceModel
from scm.model import Assignment, MarginalCache, Scm, Value

logger = logging.getLogger(__name__)


def _positive_values(marginal: Dict[Assignment, Fraction]) -> List[Assignment]:
    return [key for key, p in marginal.items() if p > 0]


def _ordered(s: Scm, labels) -> Tuple[Label, ...]:
    return tuple(label for label in s.nodes if label in labels)


def _value_key(values: Assignment, supports: List[Tuple[Value, ...]]) -> Tuple[int, ...]:
    return tuple(support.index(value) for value, support in zip(values, supports))


def check_positivity(s: Scm) -> Verdict:
    """
    Para A, B disjuntos, x_A y x_B con probabilidad positiva: P(x_A, x_B) > 0

    Testigo {"b", "a", "x_b", "x_a"}: se recorre B por fuera y A por dentro,
    valores en el orden de los soportes.
    """
    marginals = MarginalCache(s.joint)
    full = (1 << len(s.nodes)) - 1

    def labels_of(mask: int) -> Tuple[Label, ...]:
        return tuple(label for position, label in enumerate(s.nodes) if mask >> position & 1)

    for b_mask in nonempty_submasks(full):
        for a_mask in nonempty_submasks(full & ~b_mask):
            a, b = labels_of(a_mask), labels_of(b_mask)
            joint = marginals.get(a + b)
            a_supports = [s.supports[label] for label in a]
            b_supports = [s.supports[label] for label in b]
            a_values = sorted(_positive_values(marginals.get(a)), key=lambda v: _value_key(v, a_supports))
            b_values = sorted(_positive_values(marginals.get(b)), key=lambda v: _value_key(v, b_supports))
            for xa in a_values:
                for xb in b_values:
                    if joint.get(xa + xb, Fraction(0)) == 0:
                        witness = {"b": b, "a": a, "x_b": dict(zip(b, xb)), "x_a": dict(zip(a, xa))}
                        return Verdict.fail(witness, "P(X_{}={} | X_{}={}) = 0".format(
                            list(b), list(xb), list(a), list(xa)))
    return Verdict.ok()


def check_noise_injective(s: Scm) -> Verdict:
    """e ↦ φ_i(x_pa, e) inyectiva para toda tupla de padres; testigo (nodo, padres, e, e')"""
    for label in s.nodes:
        mechanism = s.mechanisms[label]
        for parents in s.parent_assignments(label):
            seen: Dict[Value, Value] = {}
            for noise in s.noise_support(label):
                out = mechanism(parents, noise)
                if out in seen:
                    witness = {"node": label, "parents": parents, "noise": (seen[out], noise), "out": out}
                    return Verdict.fail(witness, "φ_{}({}, ·) colapsa e={} y e={} en {}".format(
                        label, list(parents), seen[out], noise, out))
                seen[out] = noise
    return Verdict.ok()


def output_law(s: Scm, label: Label, parents: Assignment) -> Dict[Value, Fraction]:
    """Ley de φ_label(x_pa, ε_label) con la ley marginal del ruido"""
    mechanism = s.mechanisms[label]
    law: Dict[Value, Fraction] = {}
    for noise, probability in s.noise_law(label).items():
        out = mechanism(parents, noise)
        law[out] = law.get(out, Fraction(0)) + probability
    return law


def check_non_constant_fibers(s: Scm) -> Verdict:
    """
    Para cada nodo v y cada padre j existe una asignación positiva de los
    demás padres y un S con k(x_j) = P(φ_v(..., x_j, ..., ε_v) ∈ S) no
    constante en los x_j positivos

    Basta que dos x_j den leyes de salida distintas (S = un valor donde
    difieren). Testigo {"node", "parent"}.
    """
    marginals = MarginalCache(s.joint)
    for label in s.nodes:
        parents = s.mechanisms[label].parents
        parent_law = marginals.get(parents) if parents else {}
        for position, parent in enumerate(parents):
            groups: Dict[Assignment, List[Assignment]] = {}
            for values, p in parent_law.items():
                if p > 0:
                    others = values[:position] + values[position + 1:]
                    groups.setdefault(others, []).append(values)
            found = False
            for assignments in groups.values():
                laws = {tuple(sorted(output_law(s, label, values).items(), key=str)) for values in assignments}
                if len(laws) > 1:
                    found = True
                    break
            if not found:
                return Verdict.fail({"node": label, "parent": parent},
                                    "k(x_{}) constante para φ_{} en todo S".format(parent, label))
    return Verdict.ok()


def check_noise_surjective(s: Scm) -> Verdict:
    """
    Para cada nodo, padre j y asignación fija de los demás padres, algún x*
    cuyas preimágenes de ruido, al variar x_j, recorren todo el soporte del ruido

    Raises:
        ScmPreconditionError: algún mecanismo no es inyectivo en el ruido
    """
    injective = check_noise_injective(s)
    if not injective:
        raise ScmPreconditionError(
            "La sobreyectividad exige mecanismos inyectivos en el ruido: {}".format(injective.message))

    for label in s.nodes:
        mechanism = s.mechanisms[label]
        noise_support = set(s.noise_support(label))
        parents = mechanism.parents
        for position, parent in enumerate(parents):
            other_supports = [s.supports[p] for k, p in enumerate(parents) if k != position]
            for others in itertools.product(*other_supports):
                inverses: Dict[Value, set] = {}
                for x_j in s.supports[parent]:
                    values = others[:position] + (x_j,) + others[position:]
                    for noise in noise_support:
                        inverses.setdefault(mechanism(values, noise), set()).add(noise)
                if not any(preimages == noise_support for preimages in inverses.values()):
                    witness = {"node": label, "parent": parent, "others": tuple(others)}
                    return Verdict.fail(witness, "φ_{} no recorre el ruido al variar x_{}".format(label, parent))
    return Verdict.ok()


def check_noise_support_smaller(s: Scm) -> Verdict:
    """
    |supp ε_i| < |supp X_i| en cada nodo con algún padre

    Los nodos sin padres quedan fuera: X_i = φ_i(ε_i) nunca tiene más
    valores que su ruido. Con positividad la condición no puede cumplirse en
    un nodo con padres (dado x_pa, X_i toma a lo sumo |supp ε_i| valores).
    Testigo {"node", "noise_support", "support"}.
    """
    table = s.joint
    for label in s.nodes:
        if not s.graph.parents(label):
            continue
        noise_size, size = len(s.noise_support(label)), len(table.support(label))
        if noise_size >= size:
            witness = {"node": label, "noise_support": noise_size, "support": size}
            return Verdict.fail(witness, "|supp ε_{}| = {} no es menor que |supp X_{}| = {}".format(
                label, noise_size, label, size))
    return Verdict.ok()


def is_uniform(law: Dict[Any, Fraction]) -> bool:
    values = [p for p in law.values() if p > 0]
    return len(set(values)) == 1


def check_noise_uniform(s: Scm) -> List[Tuple[Label, bool]]:
    """Por nodo: ¿la ley marginal de ε_i es uniforme en su soporte?"""
    return [(label, is_uniform(s.noise_law(label))) for label in s.nodes]


def _require_arrow(s: Scm, child: Label, parent: Label) -> None:
    if (parent, child) not in s.graph.arrows:
        raise GraphError("{} → {} no es una flecha de G0".format(parent, child))


def arrow_laws_identical(s: Scm, child: Label, parent: Label) -> Verdict:
    """
    Para la flecha j→i: para todo x_an positivo (an = an(i,j)) la ley de
    φ_i(x_pa∖j, x_j, ε_i) es la misma para todo x_j del soporte condicional
    de X_j. Equivale a ⟨i,j|an(i,j)⟩ en la conjunta.

    Raises:
        GraphError: parent → child no es una flecha
    """
    _require_arrow(s, child, parent)
    ancestors = _ordered(s, anc_pair(s.graph, child, parent))
    marginals = MarginalCache(s.joint)
    mechanism = s.mechanisms[child]
    position = mechanism.parents.index(parent)

    by_ancestors: Dict[Assignment, List[Value]] = {}
    for values, p in marginals.get(ancestors + (parent,)).items():
        if p > 0:
            by_ancestors.setdefault(values[:-1], []).append(values[-1])

    for x_an, parent_values in by_ancestors.items():
        fixed = dict(zip(ancestors, x_an))
        laws = {}
        for x_j in parent_values:
            fixed[parent] = x_j
            args = tuple(fixed[p] for p in mechanism.parents)
            laws[x_j] = output_law(s, child, args)
        reference_value, reference = next(iter(laws.items()))
        for x_j, law in laws.items():
            if law != reference:
                witness = {"ancestors": dict(zip(ancestors, x_an)), "values": (reference_value, x_j)}
                return Verdict.fail(witness, "la ley de φ_{} cambia entre x_{}={} y {}".format(
                    child, parent, reference_value, x_j))
    logger.debug(f"🔍 Leyes idénticas para {parent} → {child} (posición {position})")
    return Verdict.ok()


def independent_arrows(s: Scm, model: IndependenceModel) -> List[Tuple[Label, Label]]:
    """Flechas j→i con ⟨i,j|an(i,j)⟩ en el modelo inducido, como (j, i)"""
    arrows = []
    for edge in s.graph.edges():
        if edge.mark is Mark.ARROW:
            parent, child = edge.tail, edge.head
            if model.holds([child], [parent], anc_pair(s.graph, child, parent)):
                arrows.append((parent, child))
    return arrows


def uniform_noise_instances(s: Scm, model: IndependenceModel) -> List[Dict[str, Any]]:
    """
    Para cada flecha independiente: uniformidad de ε_i, |supp ε_i| = |supp X_i|,
    uniformidad condicional de X_i dado an(i,j) y (solo registrada) la de X_j
    """
    table = s.joint
    marginals = MarginalCache(table)
    instances = []
    for parent, child in independent_arrows(s, model):
        ancestors = _ordered(s, anc_pair(s.graph, child, parent))
        conditional_uniform = True
        joint = marginals.get(ancestors + (child,))
        groups: Dict[Assignment, Dict[Value, Fraction]] = {}
        for values, p in joint.items():
            if p > 0:
                groups.setdefault(values[:-1], {})[values[-1]] = p
        for law in groups.values():
            if not is_uniform(law):
                conditional_uniform = False
        instances.append({
            "arrow": (parent, child),
            "noise_uniform": is_uniform(s.noise_law(child)),
            "support_match": len(s.noise_support(child)) == len(table.support(child)),
            "child_conditional_uniform": conditional_uniform,
            "parent_uniform": is_uniform(table.law(parent)),
        })
    return instances


def uniform_noise_obstruction(s: Scm, model: IndependenceModel,
                              instances: Optional[List[Dict[str, Any]]] = None) -> Verdict:
    """
    Si una flecha j→i da ⟨i,j|an(i,j)⟩, ε_i es uniforme con tantos valores
    como X_i y X_i es uniforme condicionalmente a an(i,j). Testigo: la
    primera instancia que no lo cumple.
    """
    instances = uniform_noise_instances(s, model) if instances is None else instances
    for instance in instances:
        if not (instance["noise_uniform"] and instance["support_match"] and instance["child_conditional_uniform"]):
            return Verdict.fail(instance, "flecha {} → {} independiente sin ruido uniforme".format(
                *instance["arrow"]))
    return Verdict.ok("{} flechas independientes, todas con ruido uniforme".format(len(instances)))
