"""
Built-in networks for the Networks Application.
Presets live in code so that every analysis can run from a clean checkout.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from .bowtie import BOWTIE_EDGES
from .conf import hetnet_settings
from .core import DirectedGraph, Margins, build_simplex_field
from .exceptions import NetworkError
from .switching import HOUSE_EDGES

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Preset:
    """A named network with coefficient overrides and analysis defaults."""

    name: str
    n: int
    edges: frozenset
    overrides: dict = dataclass_field(default_factory=dict)
    analysis: dict = dataclass_field(default_factory=dict)
    description: str = ""

    def graph(self):
        return DirectedGraph(self.n, self.edges)


KIRK_SILBER = Preset(
    name="kirk-silber",
    n=4,
    edges=frozenset({(1, 2), (2, 3), (3, 1), (2, 4), (4, 1)}),
    # c13 = 2 and e24 = 2 put q1 = 1/2 and q2 = 2
    overrides={(1, 3): Fraction(-2), (2, 4): Fraction(2)},
    analysis={
        "kind": "common-connection",
        "first": 1,
        "second": 2,
        "alpha": 3,
        "a": 4,
        "beta": 3,
        "b": 4,
        "psi": "identity",
    },
    description="Two three-node cycles sharing the connection [1 -> 2]",
)

HOUSE = Preset(
    name="house",
    n=5,
    edges=HOUSE_EDGES,
    overrides={(1, 3): Fraction(-2), (2, 3): Fraction(2)},
    analysis={"kind": "house"},
    description="Cycles 1-2-3 and 1-2-4-5 with different incoming nodes",
)

# delta = -19/5, delta_tilde = -27/20, rho = rho_tilde = 3/2
BOWTIE_TABLE = {
    (1, 2): "1", (1, 3): "-3", (1, 4): "-1/10", (1, 5): "-1/10",
    (2, 1): "-1", (2, 3): "2", (2, 4): "1", (2, 5): "-3/4",
    (3, 1): "2", (3, 2): "-2", (3, 4): "-1/10", (3, 5): "-1/10",
    (4, 1): "-1/10", (4, 2): "-2", (4, 3): "-1/10", (4, 5): "1",
    (5, 1): "-1/10", (5, 2): "2", (5, 3): "-1/10", (5, 4): "-2",
}

BOWTIE = Preset(
    name="bowtie",
    n=5,
    edges=BOWTIE_EDGES,
    overrides={key: Fraction(value) for key, value in BOWTIE_TABLE.items()},
    analysis={"kind": "bowtie", "turns": 3},
    description="R-cycle 1-2-3 and L-cycle 5-2-4 meeting at node 2",
)

PRESETS = {preset.name: preset for preset in (KIRK_SILBER, HOUSE, BOWTIE)}


def get_preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise NetworkError(
            f"unknown preset {name!r}; choose from {', '.join(PRESETS)}"
        ) from None


def build_preset(name, margins=None, overrides=None):
    """Graph and synthesized field of a preset, with extra overrides."""
    preset = get_preset(name)
    margins = margins or Margins(**hetnet_settings.MARGINS)
    merged = {**preset.overrides, **(overrides or {})}
    graph = preset.graph()
    field = build_simplex_field(graph, margins, merged)
    logger.debug("Built preset %s with %d overrides", name, len(merged))
    return graph, field
