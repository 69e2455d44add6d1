# src/independence/graphicality.py
"""
¿Es el modelo inducido por algún grafo ancestral?
"""

import logging

from common.verdict import Verdict
from independence.model import IndependenceModel
from independence.properties import SINGLETON_TRANSITIVE_COMPOSITIONAL_GRAPHOID, satisfies_all
from independence.relations import is_faithful

logger = logging.getLogger(__name__)


def is_graphical(model: IndependenceModel) -> Verdict:
    """
    Grafoide composicional singleton-transitivo y estable (arriba y abajo)
    respecto de algún orden compatible con el modelo

    Los órdenes mínimos de las orientaciones estables del esqueleto son
    compatibles por construcción, así que basta buscar una orientación
    estable y comprobar la fidelidad. En caso afirmativo el veredicto lleva
    el grafo como `witness`.
    """
    from learning.orientations import stable_orientations

    axioms = satisfies_all(model, SINGLETON_TRANSITIVE_COMPOSITIONAL_GRAPHOID)
    if not axioms:
        return Verdict.fail({"property": axioms.witness}, axioms.message)

    graphs = stable_orientations(model, dag_only=False)
    if not graphs:
        return Verdict.fail({"reason": "no-stable-orientation"},
                            "ninguna orientación del esqueleto es estable")

    graph = graphs[0]
    faithful = is_faithful(model, graph)
    if not faithful:
        return Verdict.fail({"graph": graph, "faithfulness": faithful.witness}, faithful.message)
    logger.debug(f"✅ Modelo gráfico, fiel a {graph}")
    return Verdict(True, graph, "fiel a {}".format(graph))
