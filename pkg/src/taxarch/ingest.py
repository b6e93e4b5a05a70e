"""Parsing and canonical serialization of snapshot bundles and CSV inputs.

The bundle is a UTF-8 JSON document (schema_version 1). Serialization is
canonical: fixed key order, sorted arrays, 2-space indent, trailing
newline, so equal snapshots always produce byte-identical documents.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import date

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
    is_valid_jurisdiction,
)

SCHEMA_VERSION = 1


class IngestError(ValueError):
    """Base class for bundle/CSV ingestion failures."""


class BundleParseError(IngestError):
    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (byte offset {offset})")
        self.offset = offset


class UnsupportedVersionError(IngestError):
    pass


class SchemaError(IngestError):
    pass


_TOP_LEVEL_KEYS = (
    "schema_version",
    "snapshot_id",
    "taken_at",
    "components",
    "dependencies",
    "owners",
    "ownership",
)


def _require_keys(obj: dict, allowed: tuple[str, ...], required: tuple[str, ...], where: str) -> None:
    unknown = set(obj) - set(allowed)
    if unknown:
        raise SchemaError(f"unknown field(s) {sorted(unknown)} in {where}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise SchemaError(f"missing field(s) {missing} in {where}")


def _parse_enum(enum_cls, value, field: str):
    try:
        return enum_cls(value)
    except ValueError:
        raise SchemaError(f"unknown value {value!r} for field {field!r}") from None


def _parse_date(value, field: str) -> date:
    if not isinstance(value, str):
        raise SchemaError(f"field {field!r} must be an ISO-8601 date string")
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise SchemaError(f"field {field!r} is not a valid ISO-8601 date: {value!r}") from None


def _parse_evidence(obj: dict, where: str) -> LocationEvidence:
    _require_keys(obj, ("source", "payload", "recorded_at"), ("source", "payload", "recorded_at"), where)
    source = _parse_enum(EvidenceSource, obj["source"], f"{where}.source")
    payload = obj["payload"]
    if source is EvidenceSource.MEMBER_LOCATIONS:
        if not isinstance(payload, list) or not all(isinstance(p, str) for p in payload):
            raise SchemaError(f"{where}.payload must be a list of jurisdiction codes")
        payload = tuple(payload)
    elif not isinstance(payload, str):
        raise SchemaError(f"{where}.payload must be a jurisdiction code string")
    return LocationEvidence(source, payload, _parse_date(obj["recorded_at"], f"{where}.recorded_at"))


def parse_bundle(document: bytes | str) -> ArchitectureSnapshot:
    """Parse a snapshot bundle. Raises typed errors, never panics.

    The caller is expected to run validate_snapshot on the result;
    parsing only enforces the document schema.
    """
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise BundleParseError("document is not valid UTF-8", exc.start) from None
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise BundleParseError(f"malformed JSON: {exc.msg}", exc.pos) from None
    if not isinstance(data, dict):
        raise SchemaError("bundle must be a JSON object")
    _require_keys(data, _TOP_LEVEL_KEYS, _TOP_LEVEL_KEYS, "bundle")
    version = data["schema_version"]
    if version != SCHEMA_VERSION:
        raise UnsupportedVersionError(f"unsupported schema_version {version!r} (supported: {SCHEMA_VERSION})")

    components = []
    for i, c in enumerate(data["components"]):
        where = f"components[{i}]"
        _require_keys(c, ("id", "name", "kind", "status"), ("id", "name", "kind", "status"), where)
        components.append(
            Component(
                id=c["id"],
                name=c["name"],
                kind=_parse_enum(ComponentKind, c["kind"], f"{where}.kind"),
                status=_parse_enum(ComponentStatus, c["status"], f"{where}.status"),
            )
        )

    dependencies = []
    for i, e in enumerate(data["dependencies"]):
        where = f"dependencies[{i}]"
        _require_keys(e, ("user", "owner_component", "kind", "multiplicity"), ("user", "owner_component"), where)
        multiplicity = e.get("multiplicity", 1)
        if not isinstance(multiplicity, int) or isinstance(multiplicity, bool) or multiplicity < 1:
            raise SchemaError(f"{where}.multiplicity must be a positive integer")
        dependencies.append(
            DependencyEdge(
                user=e["user"],
                owner_component=e["owner_component"],
                kind=_parse_enum(DependencyKind, e.get("kind", "use"), f"{where}.kind"),
                multiplicity=multiplicity,
            )
        )

    owners = []
    for i, o in enumerate(data["owners"]):
        where = f"owners[{i}]"
        _require_keys(o, ("id", "name", "kind", "location_evidence"), ("id", "name", "kind"), where)
        evidence = tuple(
            _parse_evidence(ev, f"{where}.location_evidence[{j}]")
            for j, ev in enumerate(o.get("location_evidence", []))
        )
        owners.append(
            Owner(
                id=o["id"],
                name=o["name"],
                kind=_parse_enum(OwnerKind, o["kind"], f"{where}.kind"),
                location_evidence=evidence,
            )
        )

    ownership = []
    for i, a in enumerate(data["ownership"]):
        where = f"ownership[{i}]"
        _require_keys(a, ("component", "owner"), ("component", "owner"), where)
        ownership.append(OwnershipAssignment(component=a["component"], owner=a["owner"]))

    return ArchitectureSnapshot(
        id=data["snapshot_id"],
        taken_at=_parse_date(data["taken_at"], "taken_at"),
        components=tuple(components),
        dependencies=tuple(dependencies),
        owners=tuple(owners),
        ownership=tuple(ownership),
    )


def _evidence_to_dict(ev: LocationEvidence) -> dict:
    payload = list(ev.payload) if isinstance(ev.payload, tuple) else ev.payload
    return {"source": ev.source.value, "payload": payload, "recorded_at": ev.recorded_at.isoformat()}


def serialize_bundle(snapshot: ArchitectureSnapshot) -> bytes:
    """Serialize to the canonical bundle form (byte-stable for equal snapshots)."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "snapshot_id": snapshot.id,
        "taken_at": snapshot.taken_at.isoformat(),
        "components": [
            {"id": c.id, "name": c.name, "kind": c.kind.value, "status": c.status.value}
            for c in sorted(snapshot.components, key=lambda c: c.id)
        ],
        "dependencies": [
            {
                "user": e.user,
                "owner_component": e.owner_component,
                "kind": e.kind.value,
                "multiplicity": e.multiplicity,
            }
            for e in sorted(snapshot.dependencies, key=lambda e: (e.user, e.owner_component, e.kind.value))
        ],
        "owners": [
            {
                "id": o.id,
                "name": o.name,
                "kind": o.kind.value,
                "location_evidence": [_evidence_to_dict(ev) for ev in o.location_evidence],
            }
            for o in sorted(snapshot.owners, key=lambda o: o.id)
        ],
        "ownership": [
            {"component": a.component, "owner": a.owner}
            for a in sorted(snapshot.ownership, key=lambda a: (a.component, a.owner))
        ],
    }
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


class CsvError(IngestError):
    pass


def _read_csv(text: str, expected_header: list[str], optional: int, what: str) -> list[list[str]]:
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row]
    if not rows:
        raise CsvError(f"{what}: missing header row")
    header = rows[0]
    mandatory = expected_header[: len(expected_header) - optional]
    if header[: len(mandatory)] != mandatory or header != expected_header[: len(header)]:
        raise CsvError(f"{what}: expected header {','.join(expected_header)!r}, got {','.join(header)!r}")
    width = len(header)
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise CsvError(f"{what}: row {i} has {len(row)} fields, expected {width}")
    return rows[1:]


def assemble_from_csv(
    edges_csv: str,
    ownership_csv: str,
    jurisdictions_csv: str,
    taken_at: date,
    snapshot_id: str = "assembled",
) -> ArchitectureSnapshot:
    """Build a snapshot from the three tabular inputs.

    Components and owners are synthesized from the ids seen in the
    files; kind defaults to `other`, status to `production`. A literal
    `N/A` jurisdiction becomes explicit UNKNOWN evidence.
    """
    edge_rows = _read_csv(edges_csv, ["user", "owner_component", "kind", "multiplicity"], 2, "edges")
    ownership_rows = _read_csv(ownership_csv, ["component", "owner"], 0, "ownership")
    jurisdiction_rows = _read_csv(jurisdictions_csv, ["owner", "jurisdiction"], 0, "jurisdictions")

    dependencies = []
    component_ids: set[str] = set()
    for row in edge_rows:
        user, owner_component = row[0], row[1]
        kind = DependencyKind(row[2]) if len(row) > 2 and row[2] else DependencyKind.USE
        multiplicity = int(row[3]) if len(row) > 3 and row[3] else 1
        dependencies.append(DependencyEdge(user, owner_component, kind, multiplicity))
        component_ids.update((user, owner_component))

    ownership = []
    owner_by_component: dict[str, str] = {}
    owner_ids: set[str] = set()
    for component, owner in ownership_rows:
        previous = owner_by_component.get(component)
        if previous is not None and previous != owner:
            raise CsvError(f"multiple-owners: component {component!r} assigned to both {previous!r} and {owner!r}")
        if previous is None:
            owner_by_component[component] = owner
            ownership.append(OwnershipAssignment(component, owner))
        owner_ids.add(owner)
        component_ids.add(component)

    evidence_by_owner: dict[str, str] = {}
    for owner, jurisdiction in jurisdiction_rows:
        if owner not in owner_ids:
            raise CsvError(f"dangling-reference: jurisdiction row for unknown owner {owner!r}")
        if jurisdiction == "N/A":
            jurisdiction = UNKNOWN
        if not is_valid_jurisdiction(jurisdiction):
            raise SchemaError(f"invalid jurisdiction code {jurisdiction!r} (expected alpha-3 or N/A)")
        evidence_by_owner[owner] = jurisdiction

    components = tuple(
        Component(cid, cid, ComponentKind.OTHER, ComponentStatus.PRODUCTION)
        for cid in sorted(component_ids)
    )
    owners = tuple(
        Owner(
            oid,
            oid,
            OwnerKind.TEAM,
            (LocationEvidence(EvidenceSource.EXPLICIT_ASSIGNMENT, evidence_by_owner[oid], taken_at),)
            if oid in evidence_by_owner
            else (),
        )
        for oid in sorted(owner_ids)
    )
    return ArchitectureSnapshot(
        id=snapshot_id,
        taken_at=taken_at,
        components=components,
        dependencies=tuple(dependencies),
        owners=owners,
        ownership=tuple(ownership),
    )
