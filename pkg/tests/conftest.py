from datetime import date

import pytest

from taxarch.model import (
    ArchitectureSnapshot,
    Component,
    ComponentKind,
    ComponentStatus,
    DependencyEdge,
    EvidenceSource,
    LocationEvidence,
    Owner,
    OwnerKind,
    OwnershipAssignment,
)

TODAY = date(2023, 6, 30)


def make_component(cid, status=ComponentStatus.PRODUCTION, kind=ComponentKind.MICROSERVICE):
    return Component(cid, cid, kind, status)


def make_owner(oid, jurisdiction=None, kind=OwnerKind.TEAM, evidence=None):
    if evidence is None:
        evidence = ()
        if jurisdiction is not None:
            evidence = (LocationEvidence(EvidenceSource.EXPLICIT_ASSIGNMENT, jurisdiction, TODAY),)
    return Owner(oid, oid, kind, tuple(evidence))


def make_snapshot(components, edges, owners, ownership, snapshot_id="test", taken_at=TODAY):
    return ArchitectureSnapshot(
        id=snapshot_id,
        taken_at=taken_at,
        components=tuple(components),
        dependencies=tuple(DependencyEdge(*e) if isinstance(e, tuple) else e for e in edges),
        owners=tuple(owners),
        ownership=tuple(OwnershipAssignment(*a) if isinstance(a, tuple) else a for a in ownership),
    )


@pytest.fixture
def small_snapshot():
    """Two teams in two countries, three components, two edges."""
    return make_snapshot(
        components=[make_component("a"), make_component("b"), make_component("c")],
        edges=[("a", "b"), ("b", "c")],
        owners=[make_owner("t1", "SWE"), make_owner("t2", "DEU")],
        ownership=[("a", "t1"), ("b", "t1"), ("c", "t2")],
    )
