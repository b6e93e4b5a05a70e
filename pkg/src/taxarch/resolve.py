"""Owner-to-jurisdiction resolution via an ordered resolver cascade.

Every owner receives exactly one jurisdiction. Each decision carries
provenance (which resolver decided, on what evidence) so the assignment
can be defended in an audit. Owners no resolver can decide are UNKNOWN.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from datetime import date

from .model import UNKNOWN, EvidenceSource, LocationEvidence, Owner

DEFAULT_MAJORITY_THRESHOLD = 0.75

# Questionnaire answers are direct statements by the owner and count as
# explicit assignments.
_EXPLICIT_SOURCES = (EvidenceSource.EXPLICIT_ASSIGNMENT, EvidenceSource.QUESTIONNAIRE)


class CascadeConfigError(ValueError):
    pass


class ConflictingEvidenceError(ValueError):
    """Two contradictory evidence records share the latest date.

    Silently picking one would hide the conflict from an audit trail,
    so resolution refuses instead.
    """


@dataclass(frozen=True)
class Resolver:
    name: str  # explicit_assignment | member_majority | manager_location
    threshold: float | None = None

    def __post_init__(self):
        if self.name not in ("explicit_assignment", "member_majority", "manager_location"):
            raise CascadeConfigError(f"unknown resolver {self.name!r}")
        if self.name == "member_majority":
            threshold = DEFAULT_MAJORITY_THRESHOLD if self.threshold is None else self.threshold
            if not 0.5 < threshold <= 1.0:
                raise CascadeConfigError(f"member_majority threshold must be in (0.5, 1], got {threshold}")
            object.__setattr__(self, "threshold", threshold)
        elif self.threshold is not None:
            raise CascadeConfigError(f"resolver {self.name!r} takes no threshold")

    def describe(self) -> str:
        if self.name == "member_majority":
            return f"member_majority({self.threshold:g})"
        return self.name


DEFAULT_CASCADE = (
    Resolver("explicit_assignment"),
    Resolver("member_majority"),
    Resolver("manager_location"),
)


def parse_cascade(text: str) -> tuple[Resolver, ...]:
    """Parse a cascade like 'explicit_assignment,member_majority(0.75)'."""
    resolvers = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if part.endswith(")") and "(" in part:
            name, arg = part[:-1].split("(", 1)
            try:
                threshold = float(arg)
            except ValueError:
                raise CascadeConfigError(f"bad resolver parameter in {part!r}") from None
            resolvers.append(Resolver(name, threshold))
        else:
            resolvers.append(Resolver(part))
    if not resolvers:
        raise CascadeConfigError("cascade must name at least one resolver")
    return tuple(resolvers)


@dataclass(frozen=True)
class JurisdictionAssignment:
    owner: str
    jurisdiction: str
    resolver: str | None  # resolver description, None when unresolved
    evidence: str = ""
    decided_at: date | None = None

    @property
    def resolved(self) -> bool:
        return self.resolver is not None

    @property
    def provenance(self) -> str:
        return self.resolver if self.resolver is not None else "unresolved"


def _latest(evidence: list[LocationEvidence], owner_id: str) -> LocationEvidence:
    latest_date = max(ev.recorded_at for ev in evidence)
    latest = [ev for ev in evidence if ev.recorded_at == latest_date]
    if len({ev.payload for ev in latest}) > 1:
        raise ConflictingEvidenceError(
            f"owner {owner_id!r}: conflicting {latest[0].source.value} evidence dated {latest_date.isoformat()}"
        )
    return latest[0]


def _try_resolver(resolver: Resolver, owner: Owner) -> JurisdictionAssignment | None:
    if resolver.name == "explicit_assignment":
        candidates = [ev for ev in owner.location_evidence if ev.source in _EXPLICIT_SOURCES]
        if not candidates:
            return None
        ev = _latest(candidates, owner.id)
        if ev.payload == UNKNOWN:
            return None
        return JurisdictionAssignment(owner.id, ev.payload, resolver.describe(), ev.source.value, ev.recorded_at)

    if resolver.name == "manager_location":
        candidates = [ev for ev in owner.location_evidence if ev.source is EvidenceSource.MANAGER_LOCATION]
        if not candidates:
            return None
        ev = _latest(candidates, owner.id)
        if ev.payload == UNKNOWN:
            return None
        return JurisdictionAssignment(owner.id, ev.payload, resolver.describe(), ev.source.value, ev.recorded_at)

    # member_majority: most recent membership report wins; a jurisdiction
    # is decisive when its share of member locations reaches the threshold.
    candidates = [ev for ev in owner.location_evidence if ev.source is EvidenceSource.MEMBER_LOCATIONS]
    if not candidates:
        return None
    latest_date = max(ev.recorded_at for ev in candidates)
    latest = [ev for ev in candidates if ev.recorded_at == latest_date]
    members = Counter()
    for ev in latest:
        members.update(ev.payload)
    total = sum(members.values())
    if total == 0:
        return None
    for code, count in sorted(members.items()):
        if code != UNKNOWN and count / total >= resolver.threshold:
            return JurisdictionAssignment(
                owner.id,
                code,
                resolver.describe(),
                f"{count}/{total} members",
                latest_date,
            )
    return None


def resolve_jurisdictions(owners: list[Owner], cascade: tuple[Resolver, ...] = DEFAULT_CASCADE) -> list[JurisdictionAssignment]:
    """Assign one jurisdiction per owner; first decisive resolver wins."""
    if not cascade:
        raise CascadeConfigError("cascade must not be empty")
    assignments = []
    for owner in sorted(owners, key=lambda o: o.id):
        decided = None
        for resolver in cascade:
            decided = _try_resolver(resolver, owner)
            if decided is not None:
                break
        assignments.append(decided if decided is not None else JurisdictionAssignment(owner.id, UNKNOWN, None))
    return assignments


@dataclass(frozen=True)
class ResolutionSummary:
    total: int
    resolved_count: int
    unresolved_count: int
    unresolved_ratio: float
    per_resolver: tuple[tuple[str, int], ...]

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "resolved": self.resolved_count,
            "unresolved": self.unresolved_count,
            "unresolved_ratio": self.unresolved_ratio,
            "per_resolver": dict(self.per_resolver),
        }


def resolution_summary(assignments: list[JurisdictionAssignment]) -> ResolutionSummary:
    total = len(assignments)
    unresolved = sum(1 for a in assignments if not a.resolved)
    counts = Counter(a.resolver for a in assignments if a.resolved)
    return ResolutionSummary(
        total=total,
        resolved_count=total - unresolved,
        unresolved_count=unresolved,
        unresolved_ratio=unresolved / total if total else 0.0,
        per_resolver=tuple(sorted(counts.items())),
    )
