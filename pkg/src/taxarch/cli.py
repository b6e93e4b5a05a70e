"""Command-line front end.

Exit codes: 0 success, 1 domain/validation failure, 2 input or
configuration failure. Standard output carries human summaries; files
carry artifacts.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import date
from pathlib import Path

from . import __version__
from .classify import ScopePolicy, aggregate, apply_scope_filter, compute_stats
from .diff import diff_snapshots
from .generate import FIXTURE_NAMES, GeneratorParams, fixture, generate
from .ingest import IngestError, parse_bundle, serialize_bundle
from .model import ArchitectureSnapshot, ComponentStatus, validate_snapshot
from .resolve import (
    DEFAULT_CASCADE,
    CascadeConfigError,
    ConflictingEvidenceError,
    parse_cascade,
    resolution_summary,
    resolve_jurisdictions,
)
from .views import (
    BucketScheme,
    BucketSchemeError,
    build_registers,
    emit_graph,
    emit_registers,
    emit_report,
    emit_table,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INPUT = 2


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        config = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config {path}: {exc}") from None
    if not isinstance(config, dict):
        raise CliError(f"config {path} must be a JSON object")
    known = {"include_statuses", "keep_individual_owners", "resolvers", "buckets", "format"}
    unknown = set(config) - known
    if unknown:
        raise CliError(f"unknown config key(s): {sorted(unknown)}")
    return config


def _effective(args, config: dict, key: str, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return config.get(key, default)


def _scope_policy(args, config: dict) -> ScopePolicy:
    statuses = _effective(args, config, "include_statuses", None)
    if statuses is None:
        include = frozenset({ComponentStatus.PRODUCTION})
    else:
        if isinstance(statuses, str):
            statuses = [s for s in statuses.split(",") if s]
        try:
            include = frozenset(ComponentStatus(s) for s in statuses)
        except ValueError as exc:
            raise CliError(f"bad --include-statuses: {exc}") from None
    keep = _effective(args, config, "keep_individual_owners", False)
    try:
        return ScopePolicy(include_statuses=include, exclude_individual_owners=not keep)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _cascade(args, config: dict):
    text = _effective(args, config, "resolvers", None)
    if text is None:
        return DEFAULT_CASCADE
    try:
        return parse_cascade(text)
    except CascadeConfigError as exc:
        raise CliError(str(exc)) from None


def _bucket_scheme(args, config: dict) -> BucketScheme | None:
    spec = _effective(args, config, "buckets", "none")
    if spec in (None, "none"):
        return None
    try:
        if spec == "default":
            return BucketScheme()
        boundaries = tuple(int(b) for b in str(spec).split(",") if b)
        return BucketScheme(boundaries)
    except (ValueError, BucketSchemeError) as exc:
        raise CliError(f"bad --buckets: {exc}") from None


def _read_snapshot(path: str) -> ArchitectureSnapshot:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    try:
        return parse_bundle(data)
    except IngestError as exc:
        raise CliError(f"{path}: {exc}") from None


def _load_input(args) -> "ArchitectureSnapshot | object":
    if getattr(args, "fixture", None):
        if args.fixture not in FIXTURE_NAMES:
            raise CliError(f"unknown fixture {args.fixture!r} (available: {', '.join(FIXTURE_NAMES)})")
        return fixture(args.fixture)
    if getattr(args, "bundle", None):
        return _read_snapshot(args.bundle)
    raise CliError("either a bundle path or --fixture is required")


def _require_valid(snapshot: ArchitectureSnapshot) -> None:
    report = validate_snapshot(snapshot)
    if not report.ok:
        for f in report.findings:
            print(f"{f.severity.value}: {f.code}: {f.message}", file=sys.stderr)
        raise CliError("snapshot failed validation", EXIT_DOMAIN)


def _run_pipeline(snapshot: ArchitectureSnapshot, policy: ScopePolicy, cascade):
    _require_valid(snapshot)
    scoped, exclusions = apply_scope_filter(snapshot, policy)
    try:
        assignments = resolve_jurisdictions(list(scoped.owners), cascade)
    except ConflictingEvidenceError as exc:
        raise CliError(str(exc), EXIT_DOMAIN) from None
    matrix = aggregate(scoped, assignments)
    stats = compute_stats(matrix, exclusions, resolution_summary(assignments))
    return scoped, assignments, matrix, stats


def _stats_line(stats) -> str:
    return (
        f"total={stats.total_uses} domestic={stats.domestic_count} "
        f"cross_border={stats.cross_border_count} unresolved={stats.unresolved_count}"
    )


def cmd_validate(args) -> int:
    snapshot = _read_snapshot(args.bundle)
    report = validate_snapshot(snapshot)
    for f in report.findings:
        print(f"{f.severity.value}: {f.code}: {f.message}")
    print(f"status: {report.status}")
    return EXIT_OK if report.ok else EXIT_DOMAIN


def cmd_report(args) -> int:
    config = _load_config(args.config)
    policy = _scope_policy(args, config)
    cascade = _cascade(args, config)
    scheme = _bucket_scheme(args, config)
    table_format = _effective(args, config, "format", "csv")
    if table_format not in ("csv", "markdown"):
        raise CliError(f"unsupported table format {table_format!r} for report")

    loaded = _load_input(args)
    metadata = {
        "tool_version": __version__,
        "scope_policy": policy.to_dict(),
        "cascade": [r.describe() for r in cascade],
        "buckets": list(scheme.boundaries) if scheme else None,
    }

    if isinstance(loaded, ArchitectureSnapshot):
        scoped, assignments, matrix, stats = _run_pipeline(loaded, policy, cascade)
        registers = build_registers(scoped, assignments)
        component_csv, owner_csv = emit_registers(scoped, assignments, "csv")
        metadata["taken_at"] = scoped.taken_at.isoformat()
    else:
        matrix = loaded
        stats = compute_stats(matrix)
        registers = build_registers(
            ArchitectureSnapshot(matrix.snapshot_id or "", date.min, (), (), (), ()), []
        )
        component_csv, owner_csv = "component,owner\n", "owner,jurisdiction,provenance\n"

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "view.dot").write_text(emit_graph(matrix, scheme=scheme), encoding="utf-8")
    (out_dir / "view.csv").write_text(emit_table(matrix, table_format, scheme=scheme), encoding="utf-8")
    (out_dir / "registers.csv").write_text(component_csv + "\n" + owner_csv, encoding="utf-8")
    (out_dir / "report.json").write_text(
        emit_report(stats, matrix, registers, metadata), encoding="utf-8"
    )
    print(_stats_line(stats))
    return EXIT_OK


def cmd_stats(args) -> int:
    config = _load_config(args.config)
    policy = _scope_policy(args, config)
    cascade = _cascade(args, config)
    loaded = _load_input(args)
    if isinstance(loaded, ArchitectureSnapshot):
        _, _, matrix, stats = _run_pipeline(loaded, policy, cascade)
    else:
        stats = compute_stats(loaded)
    print(_stats_line(stats))
    print(
        f"ratios: domestic={stats.domestic_ratio:.4f} "
        f"cross_border={stats.cross_border_ratio:.4f} unresolved={stats.unresolved_ratio:.4f}"
    )
    if stats.resolution is not None:
        r = stats.resolution
        print(f"owners: total={r.total} resolved={r.resolved_count} unresolved={r.unresolved_count}")
    return EXIT_OK


def cmd_diff(args) -> int:
    config = _load_config(args.config)
    policy = _scope_policy(args, config)
    cascade = _cascade(args, config)
    a = _read_snapshot(args.bundle_a)
    b = _read_snapshot(args.bundle_b)
    for snapshot in (a, b):
        _require_valid(snapshot)
    delta = diff_snapshots(a, b, cascade, policy)
    text = delta.to_json()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_gen(args) -> int:
    weights = tuple(sorted(_parse_weights(args.jurisdictions).items())) if args.jurisdictions else None
    kwargs = dict(
        component_count=args.components,
        team_count=args.teams,
        unresolved_rate=args.unresolved_rate,
        dependency_density=args.density,
        seed=args.seed,
    )
    if weights:
        kwargs["jurisdiction_weights"] = weights
    try:
        snapshot = generate(GeneratorParams(**kwargs))
    except ValueError as exc:
        raise CliError(str(exc)) from None
    data = serialize_bundle(snapshot)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


def _parse_weights(text: str) -> dict[str, float]:
    weights = {}
    try:
        for part in text.split(","):
            code, w = part.split(":")
            weights[code.strip()] = float(w)
    except ValueError:
        raise CliError(f"bad --jurisdictions {text!r} (expected CODE:WEIGHT,...)") from None
    return weights


def cmd_fixture(args) -> int:
    if args.name not in FIXTURE_NAMES:
        raise CliError(f"unknown fixture {args.name!r} (available: {', '.join(FIXTURE_NAMES)})")
    loaded = fixture(args.name)
    if isinstance(loaded, ArchitectureSnapshot):
        data = serialize_bundle(loaded)
    else:
        data = emit_table(loaded, "csv").encode("utf-8")
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--include-statuses", dest="include_statuses", help="comma-separated component statuses in scope")
    p.add_argument(
        "--keep-individual-owners",
        dest="keep_individual_owners",
        action="store_const",
        const=True,
        default=None,
        help="keep components owned by individuals in scope",
    )
    p.add_argument("--resolvers", help="resolver cascade, e.g. explicit_assignment,member_majority(0.75)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taxarch",
        description="Jurisdiction-level architecture descriptions for tax compliance.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a snapshot bundle")
    p.add_argument("bundle")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="run the full pipeline and write view artifacts")
    p.add_argument("bundle", nargs="?")
    p.add_argument("--fixture", choices=FIXTURE_NAMES)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--format", choices=["csv", "markdown"], default=None)
    p.add_argument("--buckets", help="'none', 'default', or comma-separated boundaries")
    _add_config_flags(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("stats", help="print compliance statistics")
    p.add_argument("bundle", nargs="?")
    p.add_argument("--fixture", choices=FIXTURE_NAMES)
    _add_config_flags(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("diff", help="compare two snapshot bundles")
    p.add_argument("bundle_a")
    p.add_argument("bundle_b")
    p.add_argument("--out")
    _add_config_flags(p)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("gen", help="generate a synthetic snapshot bundle")
    p.add_argument("--components", type=int, required=True)
    p.add_argument("--teams", type=int, required=True)
    p.add_argument("--density", type=float, default=2.0)
    p.add_argument("--unresolved-rate", dest="unresolved_rate", type=float, default=0.0)
    p.add_argument("--jurisdictions", help="weights as CODE:WEIGHT,... (must sum to 1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fixture", help="write a built-in fixture")
    p.add_argument("name", choices=FIXTURE_NAMES)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fixture)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
