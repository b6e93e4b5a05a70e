import json
from datetime import date

import pytest

from taxarch.generate import fixture
from taxarch.ingest import (
    BundleParseError,
    CsvError,
    SchemaError,
    UnsupportedVersionError,
    assemble_from_csv,
    parse_bundle,
    serialize_bundle,
)
from taxarch.model import ArchitectureSnapshot, validate_snapshot

from conftest import TODAY


def test_devnullsoft_round_trip():
    snapshot = fixture("devnullsoft")
    data = serialize_bundle(snapshot)
    parsed = parse_bundle(data)
    assert len(parsed.components) == 18
    assert len(parsed.dependencies) == 17
    assert serialize_bundle(parsed) == data


def test_serialize_is_canonical_under_reordering():
    snapshot = fixture("devnullsoft")
    reordered = ArchitectureSnapshot(
        id=snapshot.id,
        taken_at=snapshot.taken_at,
        components=tuple(reversed(snapshot.components)),
        dependencies=tuple(reversed(snapshot.dependencies)),
        owners=tuple(reversed(snapshot.owners)),
        ownership=tuple(reversed(snapshot.ownership)),
    )
    assert serialize_bundle(snapshot) == serialize_bundle(reordered)


def test_serialize_parse_identity_on_canonical_bytes():
    data = serialize_bundle(fixture("devnullsoft"))
    assert serialize_bundle(parse_bundle(data)) == data


def test_empty_snapshot_serializes_to_empty_arrays():
    snapshot = ArchitectureSnapshot("empty", date(2023, 1, 1), (), (), (), ())
    doc = json.loads(serialize_bundle(snapshot))
    assert doc["components"] == []
    assert doc["dependencies"] == []
    assert doc["owners"] == []
    assert doc["ownership"] == []
    assert serialize_bundle(snapshot).endswith(b"\n")


def test_malformed_json_reports_offset():
    with pytest.raises(BundleParseError) as exc:
        parse_bundle(b'{"schema_version": 1,,}')
    assert exc.value.offset is not None


def test_non_utf8_rejected():
    with pytest.raises(BundleParseError):
        parse_bundle(b"\xff\xfe{}")


def test_unsupported_schema_version():
    doc = json.loads(serialize_bundle(fixture("devnullsoft")))
    doc["schema_version"] = 2
    with pytest.raises(UnsupportedVersionError):
        parse_bundle(json.dumps(doc))


def test_unknown_top_level_field_rejected():
    doc = json.loads(serialize_bundle(fixture("devnullsoft")))
    doc["extra"] = True
    with pytest.raises(SchemaError):
        parse_bundle(json.dumps(doc))


def test_unknown_enum_string_names_field_and_value():
    doc = json.loads(serialize_bundle(fixture("devnullsoft")))
    doc["components"][0]["kind"] = "nanoservice"
    with pytest.raises(SchemaError, match="nanoservice"):
        parse_bundle(json.dumps(doc))


def test_parse_never_panics_on_arbitrary_bytes():
    for blob in (b"", b"[]", b"42", b'"x"', b"\x00\x01", b"{}", b'{"a": }'):
        with pytest.raises((BundleParseError, SchemaError)):
            parse_bundle(blob)


EDGES = "user,owner_component\nbilling,auth\ncatalog,auth\ncatalog,billing\n"
OWNERSHIP = "component,owner\nauth,team-a\nbilling,team-b\ncatalog,team-b\n"
JURISDICTIONS = "owner,jurisdiction\nteam-a,SWE\nteam-b,N/A\n"


def test_assemble_from_csv_basic():
    snapshot = assemble_from_csv(EDGES, OWNERSHIP, JURISDICTIONS, TODAY)
    assert validate_snapshot(snapshot).status == "ok"
    assert len(snapshot.dependencies) == 3
    assert {c.id for c in snapshot.components} == {"auth", "billing", "catalog"}
    assert {c.status.value for c in snapshot.components} == {"production"}
    team_b = snapshot.owner_index()["team-b"]
    assert team_b.location_evidence[0].payload == "UNKNOWN"


def test_assemble_duplicate_ownership_rejected():
    dup = OWNERSHIP + "auth,team-b\n"
    with pytest.raises(CsvError, match="multiple-owners"):
        assemble_from_csv(EDGES, dup, JURISDICTIONS, TODAY)


def test_assemble_dangling_jurisdiction_owner_rejected():
    extra = JURISDICTIONS + "team-ghost,DEU\n"
    with pytest.raises(CsvError, match="dangling-reference"):
        assemble_from_csv(EDGES, OWNERSHIP, extra, TODAY)


def test_assemble_rejects_non_alpha3_code():
    bad = "owner,jurisdiction\nteam-a,SWEDEN\nteam-b,DEU\n"
    with pytest.raises(SchemaError):
        assemble_from_csv(EDGES, OWNERSHIP, bad, TODAY)


def test_assemble_rejects_wrong_header():
    with pytest.raises(CsvError):
        assemble_from_csv("from,to\nx,y\n", OWNERSHIP, JURISDICTIONS, TODAY)
