"""The three quality-assurance checks and their aggregated report."""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from tracegen.elements import extract_json_body, json_fence_count
from tracegen.errors import InvalidJson, PointerUnresolvable, SchemaError
from tracegen.graph import TraceGraph, find_by_type
from tracegen.schema import (
    SchemaDoc,
    canonical_text,
    collect_property_paths,
    parse_schema,
    resolve_pointer,
    schemas_equivalent,
    validate_instance,
)
from tracegen.ttim import TtimDefinition

CHECK_METAMODEL = "metamodel"
CHECK_INTERNAL_SCHEMA = "internal_schema"
CHECK_SEMANTIC_EQUIVALENCE = "semantic_equivalence"
CHECK_ORDER = (CHECK_METAMODEL, CHECK_INTERNAL_SCHEMA, CHECK_SEMANTIC_EQUIVALENCE)


@dataclass(frozen=True)
class Violation:
    check_id: str
    severity: str  # "error" | "warning"
    subject_uid: str | None
    message: str
    file: str | None = None
    line: int | None = None


@dataclass
class CheckReport:
    violations: list[Violation]
    counts: dict[str, tuple[int, int]] = field(default_factory=dict)  # id -> (errors, warnings)
    passed: bool = True

    def errors(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "error"]


def _violation(
    check_id: str,
    severity: str,
    graph: TraceGraph,
    uid: str | None,
    message: str,
) -> Violation:
    element = graph.elements.get(uid) if uid else None
    return Violation(
        check_id=check_id,
        severity=severity,
        subject_uid=uid,
        message=message,
        file=element.file if element else None,
        line=element.line if element else None,
    )


def check_metamodel_consistency(graph: TraceGraph, ttim: TtimDefinition) -> list[Violation]:
    """Check 1: the graph instantiates only declared types and declared,
    direction-respecting link types, and carries every required link."""
    out: list[Violation] = []
    declared = ttim.node_type_names()
    for uid in sorted(graph.elements):
        element_type = graph.element_type(uid)
        if element_type not in declared:
            out.append(
                _violation(
                    CHECK_METAMODEL,
                    "error",
                    graph,
                    uid,
                    f"element type {element_type!r} is not declared in the meta-model",
                )
            )
    for source, link_type, target in graph.edges:
        link_def = ttim.link_type(link_type)
        if link_def is None:
            out.append(
                _violation(
                    CHECK_METAMODEL,
                    "error",
                    graph,
                    source,
                    f"link type {link_type!r} is not declared in the meta-model",
                )
            )
            continue
        source_type = graph.element_type(source)
        target_type = graph.element_type(target)
        if source_type not in link_def.source_types:
            out.append(
                _violation(
                    CHECK_METAMODEL,
                    "error",
                    graph,
                    source,
                    f"link {link_type!r} may not start from a {source_type!r} element",
                )
            )
        if target_type not in link_def.target_types:
            out.append(
                _violation(
                    CHECK_METAMODEL,
                    "error",
                    graph,
                    source,
                    f"link {link_type!r} may not point at a {target_type!r} element ({target})",
                )
            )
    for link_def in ttim.link_types:
        if not link_def.required:
            continue
        for uid in sorted(graph.elements):
            if graph.element_type(uid) not in link_def.source_types:
                continue
            if not any(lt == link_def.name for lt, _ in graph.outgoing(uid)):
                out.append(
                    _violation(
                        CHECK_METAMODEL,
                        "error",
                        graph,
                        uid,
                        f"missing required outgoing link of type {link_def.name!r}",
                    )
                )
    return out


def _schema_link_targets(graph: TraceGraph, ttim: TtimDefinition, uid: str) -> list[str]:
    return [t for lt, t in graph.outgoing(uid) if lt == ttim.schema_link]


def check_internal_schema_correctness(
    graph: TraceGraph, ttim: TtimDefinition
) -> list[Violation]:
    """Check 2: every optimizer input's JSON instance validates against the
    schema carried by its linked schema-type element."""
    out: list[Violation] = []
    for oi_uid in find_by_type(graph, ttim.optimizer_input_type):
        targets = _schema_link_targets(graph, ttim, oi_uid)
        if not targets:
            # absence is already a required-link failure in check 1
            continue
        if len(targets) > 1:
            out.append(
                _violation(
                    CHECK_INTERNAL_SCHEMA,
                    "error",
                    graph,
                    oi_uid,
                    f"ambiguous schema link: {len(targets)} {ttim.schema_link!r} edges",
                )
            )
            continue
        schema_element = graph.elements[targets[0]]
        if json_fence_count(schema_element.body) == 0:
            out.append(
                _violation(
                    CHECK_INTERNAL_SCHEMA,
                    "error",
                    graph,
                    schema_element.uid,
                    "schema-type element carries no fenced JSON block",
                )
            )
            continue
        if json_fence_count(schema_element.body) > 1:
            out.append(
                _violation(
                    CHECK_INTERNAL_SCHEMA,
                    "warning",
                    graph,
                    schema_element.uid,
                    "multiple fenced JSON blocks; only the first is used",
                )
            )
        try:
            schema = parse_schema(extract_json_body(schema_element))
        except (InvalidJson, SchemaError) as exc:
            out.append(
                _violation(
                    CHECK_INTERNAL_SCHEMA, "error", graph, schema_element.uid, str(exc)
                )
            )
            continue
        oi_element = graph.elements[oi_uid]
        if json_fence_count(oi_element.body) == 0:
            out.append(
                _violation(
                    CHECK_INTERNAL_SCHEMA,
                    "error",
                    graph,
                    oi_uid,
                    "optimizer input carries no fenced JSON instance",
                )
            )
            continue
        if json_fence_count(oi_element.body) > 1:
            out.append(
                _violation(
                    CHECK_INTERNAL_SCHEMA,
                    "warning",
                    graph,
                    oi_uid,
                    "multiple fenced JSON blocks; only the first is used",
                )
            )
        try:
            instance = extract_json_body(oi_element)
        except InvalidJson as exc:
            out.append(_violation(CHECK_INTERNAL_SCHEMA, "error", graph, oi_uid, str(exc)))
            continue
        for violation in validate_instance(schema, instance):
            out.append(
                _violation(
                    CHECK_INTERNAL_SCHEMA,
                    "error",
                    graph,
                    oi_uid,
                    f"instance violates schema at {violation.pointer or '<root>'}: "
                    f"{violation.keyword}: {violation.message}",
                )
            )
    return out


def check_semantic_equivalence(
    graph: TraceGraph, ttim: TtimDefinition, config_schema: SchemaDoc
) -> list[Violation]:
    """Check 3: each optimizer input's schema matches the configuration-schema
    subschema at its placement pointer."""
    out: list[Violation] = []
    placements: set[str] = set()
    for oi_uid in find_by_type(graph, ttim.optimizer_input_type):
        element = graph.elements[oi_uid]
        if element.placement is None:
            out.append(
                _violation(
                    CHECK_SEMANTIC_EQUIVALENCE,
                    "warning",
                    graph,
                    oi_uid,
                    "optimizer input has no placement pointer",
                )
            )
            continue
        placements.add(element.placement)
        try:
            config_sub = resolve_pointer(config_schema, element.placement)
        except PointerUnresolvable as exc:
            out.append(
                _violation(CHECK_SEMANTIC_EQUIVALENCE, "error", graph, oi_uid, str(exc))
            )
            continue
        targets = _schema_link_targets(graph, ttim, oi_uid)
        if len(targets) != 1:
            continue  # checks 1/2 own that failure
        schema_element = graph.elements[targets[0]]
        try:
            oi_schema = parse_schema(extract_json_body(schema_element))
        except (InvalidJson, SchemaError, TypeError):
            continue  # check 2 owns that failure
        if not schemas_equivalent(config_sub, oi_schema):
            out.append(
                _violation(
                    CHECK_SEMANTIC_EQUIVALENCE,
                    "error",
                    graph,
                    oi_uid,
                    "schema mismatch at placement "
                    f"{element.placement}: configuration has {canonical_text(config_sub)} "
                    f"but requirement has {canonical_text(oi_schema)}",
                )
            )
    for pointer, _ in collect_property_paths(config_schema):
        if pointer == "":
            continue
        targeted = pointer in placements or any(
            p.startswith(pointer + "/") for p in placements
        )
        if not targeted:
            out.append(
                Violation(
                    check_id=CHECK_SEMANTIC_EQUIVALENCE,
                    severity="warning",
                    subject_uid=None,
                    message=f"configuration property {pointer} not derived from requirements",
                )
            )
    return out


def run_all_checks(
    graph: TraceGraph, ttim: TtimDefinition, config_schema: SchemaDoc
) -> CheckReport:
    """Run the three checks in order and aggregate a sorted report."""
    violations = (
        check_metamodel_consistency(graph, ttim)
        + check_internal_schema_correctness(graph, ttim)
        + check_semantic_equivalence(graph, ttim, config_schema)
    )
    violations.sort(
        key=lambda v: (
            CHECK_ORDER.index(v.check_id),
            v.file or "",
            v.line or 0,
            v.subject_uid or "",
            v.message,
        )
    )
    counts = {
        check_id: (
            sum(1 for v in violations if v.check_id == check_id and v.severity == "error"),
            sum(1 for v in violations if v.check_id == check_id and v.severity == "warning"),
        )
        for check_id in CHECK_ORDER
    }
    passed = all(errors == 0 for errors, _ in counts.values())
    return CheckReport(violations=violations, counts=counts, passed=passed)


def report_to_yaml(report: CheckReport) -> str:
    """Serialize a report for the --report flag."""
    data = {
        "passed": report.passed,
        "counts": {
            check_id: {"errors": errors, "warnings": warnings}
            for check_id, (errors, warnings) in report.counts.items()
        },
        "violations": [
            {
                "check_id": v.check_id,
                "severity": v.severity,
                "subject_uid": v.subject_uid,
                "message": v.message,
                "file": v.file,
                "line": v.line,
            }
            for v in report.violations
        ],
    }
    return yaml.safe_dump(data, sort_keys=True, default_flow_style=False)
