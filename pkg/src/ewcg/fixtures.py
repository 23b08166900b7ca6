"""Bundled fixtures: the running five-symbol example and its reference
colorings, each shipped as a data file with a provenance note.

Fixture colorings are frozen search results (see scripts/ for the
generators); loaders re-parse them into typed objects but never re-derive
them, so tests can tell a regression in the library from a stale fixture.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .coloring import FoldedColoring
from .errors import ConfigError
from .graphs import Ewcg, build_bipartite, power_graph, project_ewcg
from .problem import ProblemSpec, spec_from_dict

FIXTURE_NAMES = (
    "weighted_5_2",
    "weighted_6_3",
    "unweighted_5_2",
    "power2_traditional_8_1",
    "power2_unweighted_13_2",
    "power2_weighted_13_2",
)

# Side-1 minimum-entropy traditional classes and the coarsest side-2
# partition that keeps every positive-probability joint color class
# function-constant (f = first, so side 2 needs just enough resolution
# to not merge classes across side-1 boundaries).
EXAMPLE1_SIDE1_CLASSES = ((-2, 1), (-1, 0), (2,))
EXAMPLE1_SIDE2_CLASSES = ((-2, 2), (0, 1), (-1,))


def _load_json(name: str) -> dict:
    ref = resources.files("ewcg.data").joinpath(f"{name}.json")
    try:
        return json.loads(ref.read_text())
    except FileNotFoundError:
        raise ConfigError(f"no bundled fixture named {name!r}")


def example1_spec() -> ProblemSpec:
    """The five-symbol running instance (f = first coordinate)."""
    return spec_from_dict(_load_json("example1"), name="example1")


def example1_graph(side: int = 1, n: int = 1, rule: str = "exact") -> Ewcg:
    """Side projection of the running instance, optionally its n-th power."""
    spec = example1_spec()
    g = project_ewcg(build_bipartite(spec.joint, spec.function), side, rule=rule)
    if n > 1:
        g = power_graph(g, n, spec.joint, spec.function)
    return g


def _parse_vertex(key: str, power: int):
    parts = key.split(",")
    if len(parts) != power:
        raise ConfigError(f"fixture vertex {key!r} does not have {power} coordinates")
    syms = tuple(int(p) for p in parts)
    return syms if power > 1 else syms[0]


@dataclass(frozen=True)
class Fixture:
    """A frozen coloring plus the metadata needed to check it."""

    name: str
    side: int
    power: int
    weighted: bool
    coloring: FoldedColoring
    reference_rate: float
    reference_pmf: tuple[float, ...] | None
    provenance: str

    def graph(self) -> Ewcg:
        g = example1_graph(side=self.side, n=self.power)
        return g if self.weighted else g.unweighted()


def load_fixture(name: str) -> Fixture:
    doc = _load_json(name)
    power = int(doc["power"])
    slots = {
        _parse_vertex(k, power): tuple(v) for k, v in doc["colors"].items()
    }
    coloring = FoldedColoring(int(doc["a"]), int(doc["b"]), slots)
    pmf = doc.get("reference_pmf")
    return Fixture(
        name=doc["name"],
        side=int(doc["side"]),
        power=power,
        weighted=bool(doc["weighted"]),
        coloring=coloring,
        reference_rate=float(doc["reference_rate"]),
        reference_pmf=tuple(pmf) if pmf else None,
        provenance=doc.get("provenance", ""),
    )


def list_fixtures() -> tuple[str, ...]:
    return FIXTURE_NAMES
