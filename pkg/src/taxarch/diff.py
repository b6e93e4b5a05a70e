"""Structural and jurisdictional comparison of two snapshots.

Regular snapshotting turns the dated view into a series; the delta shows
what moved between two reporting dates, including cell-wise changes in
the jurisdiction flow matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .classify import ScopePolicy, aggregate, apply_scope_filter
from .model import ArchitectureSnapshot
from .resolve import DEFAULT_CASCADE, Resolver, resolve_jurisdictions


@dataclass(frozen=True)
class SnapshotDelta:
    snapshot_a: str
    snapshot_b: str
    components_added: tuple[str, ...]
    components_removed: tuple[str, ...]
    edges_added: tuple[tuple[str, str, str], ...]
    edges_removed: tuple[tuple[str, str, str], ...]
    multiplicity_changes: tuple[tuple[tuple[str, str, str], int], ...]  # edge -> signed delta
    ownership_changes: tuple[tuple[str, str, str], ...]  # (component, old owner, new owner)
    jurisdiction_changes: tuple[tuple[str, str, str], ...]  # (owner, old, new)
    matrix_delta: tuple[tuple[tuple[str, str], int], ...]  # cell -> signed delta
    coupled_change_count: int

    @property
    def empty(self) -> bool:
        return not (
            self.components_added
            or self.components_removed
            or self.edges_added
            or self.edges_removed
            or self.multiplicity_changes
            or self.ownership_changes
            or self.jurisdiction_changes
            or self.matrix_delta
        )

    def to_dict(self) -> dict:
        return {
            "snapshot_a": self.snapshot_a,
            "snapshot_b": self.snapshot_b,
            "components_added": list(self.components_added),
            "components_removed": list(self.components_removed),
            "edges_added": [list(e) for e in self.edges_added],
            "edges_removed": [list(e) for e in self.edges_removed],
            "multiplicity_changes": [
                {"edge": list(edge), "delta": delta} for edge, delta in self.multiplicity_changes
            ],
            "ownership_changes": [
                {"component": c, "old_owner": old, "new_owner": new}
                for c, old, new in self.ownership_changes
            ],
            "jurisdiction_changes": [
                {"owner": o, "old": old, "new": new} for o, old, new in self.jurisdiction_changes
            ],
            "matrix_delta": [
                {"user": user_j, "owner": used_j, "delta": delta}
                for (user_j, used_j), delta in self.matrix_delta
            ],
            "coupled_change_count": self.coupled_change_count,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _edge_map(snapshot: ArchitectureSnapshot) -> dict[tuple[str, str, str], int]:
    return {(e.user, e.owner_component, e.kind.value): e.multiplicity for e in snapshot.dependencies}


def diff_snapshots(
    a: ArchitectureSnapshot,
    b: ArchitectureSnapshot,
    cascade: tuple[Resolver, ...] = DEFAULT_CASCADE,
    policy: ScopePolicy = ScopePolicy(),
) -> SnapshotDelta:
    """Compare two snapshots under one cascade and scope policy."""
    a_components = {c.id for c in a.components}
    b_components = {c.id for c in b.components}

    a_edges = _edge_map(a)
    b_edges = _edge_map(b)
    edges_added = sorted(set(b_edges) - set(a_edges))
    edges_removed = sorted(set(a_edges) - set(b_edges))
    multiplicity_changes = tuple(
        (edge, b_edges[edge] - a_edges[edge])
        for edge in sorted(set(a_edges) & set(b_edges))
        if a_edges[edge] != b_edges[edge]
    )

    a_owner_of = a.owner_of()
    b_owner_of = b.owner_of()
    ownership_changes = tuple(
        (cid, a_owner_of[cid], b_owner_of[cid])
        for cid in sorted(set(a_owner_of) & set(b_owner_of))
        if a_owner_of[cid] != b_owner_of[cid]
    )

    a_juris = {x.owner: x.jurisdiction for x in resolve_jurisdictions(list(a.owners), cascade)}
    b_juris = {x.owner: x.jurisdiction for x in resolve_jurisdictions(list(b.owners), cascade)}
    jurisdiction_changes = tuple(
        (oid, a_juris[oid], b_juris[oid])
        for oid in sorted(set(a_juris) & set(b_juris))
        if a_juris[oid] != b_juris[oid]
    )

    matrix_delta = _matrix_delta(a, b, cascade, policy)

    # A component counts as a coupled change when its owner changed and
    # its incident edge set changed between the two snapshots.
    touched: set[str] = set()
    for user, owner_component, _ in list(edges_added) + list(edges_removed):
        touched.update((user, owner_component))
    for (user, owner_component, _), _delta in multiplicity_changes:
        touched.update((user, owner_component))
    reassigned = {cid for cid, _, _ in ownership_changes}
    coupled = len(reassigned & touched)

    return SnapshotDelta(
        snapshot_a=a.id,
        snapshot_b=b.id,
        components_added=tuple(sorted(b_components - a_components)),
        components_removed=tuple(sorted(a_components - b_components)),
        edges_added=tuple(edges_added),
        edges_removed=tuple(edges_removed),
        multiplicity_changes=multiplicity_changes,
        ownership_changes=ownership_changes,
        jurisdiction_changes=jurisdiction_changes,
        matrix_delta=matrix_delta,
        coupled_change_count=coupled,
    )


def _matrix_delta(
    a: ArchitectureSnapshot,
    b: ArchitectureSnapshot,
    cascade: tuple[Resolver, ...],
    policy: ScopePolicy,
) -> tuple[tuple[tuple[str, str], int], ...]:
    deltas: dict[tuple[str, str], int] = {}
    for snapshot, sign in ((a, -1), (b, +1)):
        scoped, _ = apply_scope_filter(snapshot, policy)
        assignments = resolve_jurisdictions(list(scoped.owners), cascade)
        matrix = aggregate(scoped, assignments)
        for cell, count in matrix.cells:
            deltas[cell] = deltas.get(cell, 0) + sign * count
    return tuple(sorted((cell, d) for cell, d in deltas.items() if d))
