"""Access to the bundled data files (diagram and golden regression files)."""

from __future__ import annotations

import json
from importlib.resources import files

from .logic import GreechieDiagram, parse_diagram

FIG1_NAME = "fig1.gdl"
GOLDEN_DISTRIBUTION_NAME = "fig1_distribution.json"
GOLDEN_TALLY_NAME = "fig1_tally_seed42.json"


def _data(name: str) -> str:
    return files("qctx").joinpath("data", name).read_text(encoding="utf-8")


def fig1_text() -> str:
    """GDL source of the bundled pair of interlinked contexts."""
    return _data(FIG1_NAME)


def fig1_diagram() -> GreechieDiagram:
    return parse_diagram(fig1_text())


def golden_distribution() -> dict:
    """Frozen exact joint distribution for labels (1,2,3) / (4,5,6)."""
    return json.loads(_data(GOLDEN_DISTRIBUTION_NAME))


def golden_tally() -> dict:
    """Frozen 10^6-shot tally at seed 42 for the distribution above."""
    return json.loads(_data(GOLDEN_TALLY_NAME))
