"""Synthetic snapshot generation and built-in fixtures.

The generator is seeded and versioned: the same parameters and seed
produce byte-identical bundles on every machine (Mersenne Twister via
random.Random; outputs pinned by golden tests).

Fixtures:
  devnullsoft      -- the worked example: 18 components in three
                      subsidiaries (SWE/DEU/GBR), 17 dependencies.
  casestudy_matrix -- the published 6x6 jurisdiction flow matrix of the
                      large case study (raw edges are not public).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import date

from .classify import JurisdictionFlowMatrix
from .model import (
    UNKNOWN,
    ArchitectureSnapshot,
    Component,
    ComponentKind,
    ComponentStatus,
    DependencyEdge,
    DependencyKind,
    EvidenceSource,
    LocationEvidence,
    Owner,
    OwnerKind,
    OwnershipAssignment,
)

GENERATOR_VERSION = 1

DEFAULT_WEIGHTS = {
    "SWE": 0.30,
    "DEU": 0.25,
    "USA": 0.20,
    "GBR": 0.15,
    "NLD": 0.10,
}


class GenerationError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorParams:
    component_count: int
    team_count: int
    jurisdiction_weights: tuple[tuple[str, float], ...] = tuple(sorted(DEFAULT_WEIGHTS.items()))
    unresolved_rate: float = 0.0
    dependency_density: float = 2.0  # expected edges per component
    seed: int = 0
    taken_at: date = date(2023, 6, 30)

    def __post_init__(self):
        if self.component_count < 1 or self.team_count < 1:
            raise GenerationError("component_count and team_count must be positive")
        if not 0.0 <= self.unresolved_rate <= 1.0:
            raise GenerationError("unresolved_rate must be in [0, 1]")
        if self.dependency_density < 0:
            raise GenerationError("dependency_density must be >= 0")
        total = sum(w for _, w in self.jurisdiction_weights)
        if abs(total - 1.0) > 1e-9:
            raise GenerationError(f"jurisdiction weights must sum to 1, got {total}")


def _weighted_choice(rng: random.Random, weights: tuple[tuple[str, float], ...]) -> str:
    x = rng.random()
    acc = 0.0
    for code, w in weights:
        acc += w
        if x < acc:
            return code
    return weights[-1][0]


def generate(params: GeneratorParams) -> ArchitectureSnapshot:
    """Generate a valid snapshot; identical params and seed give identical output."""
    n = params.component_count
    edge_target = round(params.dependency_density * n)
    capacity = n * (n - 1)
    if edge_target > capacity:
        raise GenerationError(
            f"density {params.dependency_density} needs {edge_target} edges "
            f"but only {capacity} distinct pairs exist"
        )

    rng = random.Random(params.seed)
    components = tuple(
        Component(f"c{i:05d}", f"service-{i}", ComponentKind.MICROSERVICE, ComponentStatus.PRODUCTION)
        for i in range(n)
    )
    owners = []
    for i in range(params.team_count):
        if rng.random() < params.unresolved_rate:
            evidence = ()
        else:
            code = _weighted_choice(rng, params.jurisdiction_weights)
            evidence = (
                LocationEvidence(EvidenceSource.EXPLICIT_ASSIGNMENT, code, params.taken_at),
            )
        owners.append(Owner(f"t{i:04d}", f"team-{i}", OwnerKind.TEAM, evidence))

    ownership = tuple(
        OwnershipAssignment(c.id, f"t{rng.randrange(params.team_count):04d}") for c in components
    )

    pairs: set[tuple[int, int]] = set()
    while len(pairs) < edge_target:
        user = rng.randrange(n)
        used = rng.randrange(n)
        if user != used:
            pairs.add((user, used))
    dependencies = tuple(
        DependencyEdge(f"c{user:05d}", f"c{used:05d}", DependencyKind.USE, 1)
        for user, used in sorted(pairs)
    )

    return ArchitectureSnapshot(
        id=f"generated-s{params.seed}",
        taken_at=params.taken_at,
        components=components,
        dependencies=dependencies,
        owners=tuple(owners),
        ownership=ownership,
    )


# --- devnullsoft fixture -------------------------------------------------
#
# Component grid columns map to owning teams; each team sits in one
# subsidiary. Edge list transcribed from the worked example's diagram.

_DEVNULLSOFT_COLUMNS = {
    0: ("team-ab-platform", "SWE"),
    1: ("team-ab-apps", "SWE"),
    3: ("team-gmbh-core", "DEU"),
    4: ("team-gmbh-data", "DEU"),
    5: ("team-gmbh-integration", "DEU"),
    7: ("team-ltd-commerce", "GBR"),
}

_DEVNULLSOFT_EDGES = [
    ((4, 1), (7, 1)),
    ((3, 2), (1, 1)),
    ((1, 1), (3, 0)),
    ((3, 1), (1, 2)),
    ((3, 1), (4, 0)),
    ((0, 2), (0, 1)),
    ((1, 0), (0, 1)),
    ((1, 0), (3, 0)),
    ((1, 1), (0, 1)),
    ((1, 2), (0, 2)),
    ((5, 2), (7, 2)),
    ((5, 2), (7, 1)),
    ((5, 1), (7, 1)),
    ((5, 0), (7, 1)),
    ((7, 1), (7, 0)),
    ((4, 2), (3, 2)),
    ((4, 2), (5, 2)),
]

_DEVNULLSOFT_DATE = date(2023, 4, 1)


def _devnullsoft() -> ArchitectureSnapshot:
    def cid(x: int, y: int) -> str:
        return f"svc-{x}{y}"

    components = tuple(
        Component(cid(x, y), f"service {x}.{y}", ComponentKind.MICROSERVICE, ComponentStatus.PRODUCTION)
        for x in sorted(_DEVNULLSOFT_COLUMNS)
        for y in range(3)
    )
    owners = tuple(
        Owner(
            team,
            team,
            OwnerKind.TEAM,
            (LocationEvidence(EvidenceSource.EXPLICIT_ASSIGNMENT, code, _DEVNULLSOFT_DATE),),
        )
        for team, code in sorted(_DEVNULLSOFT_COLUMNS.values())
    )
    ownership = tuple(
        OwnershipAssignment(cid(x, y), _DEVNULLSOFT_COLUMNS[x][0])
        for x in sorted(_DEVNULLSOFT_COLUMNS)
        for y in range(3)
    )
    dependencies = tuple(
        DependencyEdge(cid(*user), cid(*used)) for user, used in _DEVNULLSOFT_EDGES
    )
    return ArchitectureSnapshot(
        id="devnullsoft-2023Q2",
        taken_at=_DEVNULLSOFT_DATE,
        components=components,
        dependencies=dependencies,
        owners=owners,
        ownership=ownership,
    )


# --- case-study matrix fixture -------------------------------------------
#
# Published aggregate only; rows are the user jurisdiction, columns the
# owner jurisdiction. The last row/column is the unknown jurisdiction.

_CASESTUDY_CODES = ("DEU", "GBR", "NLD", "FRA", "USA", UNKNOWN)
_CASESTUDY_ROWS = (
    (2, 2, 0, 0, 0, 4),
    (15, 164, 2, 261, 43, 141),
    (3, 6, 19, 11, 5, 8),
    (24, 108, 21, 4069, 850, 1767),
    (14, 24, 15, 1130, 1648, 642),
    (27, 70, 14, 2283, 970, 2171),
)


def _casestudy_matrix() -> JurisdictionFlowMatrix:
    counts = {
        (_CASESTUDY_CODES[i], _CASESTUDY_CODES[j]): value
        for i, row in enumerate(_CASESTUDY_ROWS)
        for j, value in enumerate(row)
    }
    return JurisdictionFlowMatrix.from_counts(counts, snapshot_id="casestudy-2023H1")


FIXTURE_NAMES = ("devnullsoft", "casestudy_matrix")


def fixture(name: str) -> ArchitectureSnapshot | JurisdictionFlowMatrix:
    if name == "devnullsoft":
        return _devnullsoft()
    if name == "casestudy_matrix":
        return _casestudy_matrix()
    raise ValueError(f"unknown fixture {name!r} (available: {', '.join(FIXTURE_NAMES)})")
