import json

from tracegen.checks import (
    CHECK_INTERNAL_SCHEMA,
    CHECK_METAMODEL,
    CHECK_SEMANTIC_EQUIVALENCE,
    check_internal_schema_correctness,
    check_metamodel_consistency,
    check_semantic_equivalence,
    report_to_yaml,
    run_all_checks,
)
from tracegen.graph import build_graph
from tracegen.ttim import default_extended_framework

from conftest import mk_element
from test_traversal import fig_graph, schema_body

TTIM = default_extended_framework()

CONFIG = {
    "type": "object",
    "properties": {
        "ethernet_latency": {"type": "number"},
        "model_latency": {"type": "number"},
    },
}


def errors(violations):
    return [v for v in violations if v.severity == "error"]


class TestMetamodel:
    def test_clean_fixture(self):
        assert check_metamodel_consistency(fig_graph(), TTIM) == []

    def test_undeclared_element_type(self):
        graph = fig_graph([mk_element("BAD", "reqirement", line=20)])
        (v,) = check_metamodel_consistency(graph, TTIM)
        assert v.subject_uid == "BAD"
        assert "reqirement" in v.message

    def test_undeclared_link_type(self):
        graph = fig_graph([mk_element("D1", "design-decision",
                                      links=[("colors", "RS1")], line=20)])
        out = check_metamodel_consistency(graph, TTIM)
        assert any("colors" in v.message for v in errors(out))

    def test_source_type_violation(self):
        # describedBy may only start from an OptimizerInput
        graph = fig_graph([mk_element("R9", "requirement",
                                      links=[("describedBy", "ST_ETH")], line=20)])
        out = check_metamodel_consistency(graph, TTIM)
        assert any("may not start" in v.message for v in errors(out))

    def test_target_type_violation(self):
        graph = fig_graph([mk_element("R9", "requirement",
                                      links=[("realizes", "REQ_ETH")], line=20)])
        out = check_metamodel_consistency(graph, TTIM)
        assert any("may not point" in v.message for v in errors(out))

    def test_missing_required_link(self):
        graph = fig_graph([mk_element("OI_LONE", "OptimizerInput",
                                      body=schema_body(1), line=20)])
        out = check_metamodel_consistency(graph, TTIM)
        assert any(v.subject_uid == "OI_LONE" and "required" in v.message for v in out)

    def test_monotonicity_of_conforming_addition(self):
        extra = [
            mk_element("REQ_NEW", "requirement", links=[("refines", "REQ_ETH")], line=20),
        ]
        assert check_metamodel_consistency(fig_graph(extra), TTIM) == []


class TestInternalSchema:
    def test_clean_fixture(self):
        assert check_internal_schema_correctness(fig_graph(), TTIM) == []

    def test_instance_violation(self):
        graph = fig_graph()
        elements = [
            mk_element("OI_ETH", "OptimizerInput", links=[("describedBy", "ST_ETH")],
                       body=schema_body("fast"), placement="/properties/ethernet_latency",
                       line=5)
            if e.uid == "OI_ETH" else e
            for e in graph.elements.values()
        ]
        graph, _ = build_graph(elements)
        out = check_internal_schema_correctness(graph, TTIM)
        (v,) = errors(out)
        assert v.subject_uid == "OI_ETH"
        assert v.check_id == CHECK_INTERNAL_SCHEMA
        assert "type" in v.message

    def test_unparseable_schema_type_body(self):
        graph = fig_graph()
        elements = [
            mk_element("ST_ETH", "schema-type",
                       body=schema_body({"type": "number", "oneOf": []}), line=7)
            if e.uid == "ST_ETH" else e
            for e in graph.elements.values()
        ]
        graph, _ = build_graph(elements)
        out = errors(check_internal_schema_correctness(graph, TTIM))
        assert len(out) == 1
        assert out[0].subject_uid == "ST_ETH"

    def test_schema_type_without_body(self):
        graph = fig_graph()
        elements = [
            mk_element("ST_ETH", "schema-type", body="prose only", line=7)
            if e.uid == "ST_ETH" else e
            for e in graph.elements.values()
        ]
        graph, _ = build_graph(elements)
        out = errors(check_internal_schema_correctness(graph, TTIM))
        assert "no fenced JSON" in out[0].message

    def test_missing_instance_body(self):
        graph = fig_graph()
        elements = [
            mk_element("OI_ETH", "OptimizerInput", links=[("describedBy", "ST_ETH")],
                       body="", placement="/properties/ethernet_latency", line=5)
            if e.uid == "OI_ETH" else e
            for e in graph.elements.values()
        ]
        graph, _ = build_graph(elements)
        out = errors(check_internal_schema_correctness(graph, TTIM))
        assert out[0].subject_uid == "OI_ETH"

    def test_ambiguous_schema_link_flagged(self):
        graph = fig_graph()
        elements = [
            mk_element("OI_ETH", "OptimizerInput",
                       links=[("describedBy", "ST_ETH"), ("describedBy", "ST_MODEL")],
                       body=schema_body(20), placement="/properties/ethernet_latency", line=5)
            if e.uid == "OI_ETH" else e
            for e in graph.elements.values()
        ]
        graph, _ = build_graph(elements)
        out = errors(check_internal_schema_correctness(graph, TTIM))
        assert "ambiguous" in out[0].message


class TestSemanticEquivalence:
    def test_clean_fixture(self):
        out = check_semantic_equivalence(fig_graph(), TTIM, CONFIG)
        assert errors(out) == []

    def test_equivalent_despite_annotations(self):
        config = {
            "type": "object",
            "properties": {
                "ethernet_latency": {"description": "net budget", "type": "number"},
                "model_latency": {"type": "number", "description": "model budget"},
            },
        }
        assert errors(check_semantic_equivalence(fig_graph(), TTIM, config)) == []

    def test_constraint_mismatch(self):
        config = {
            "type": "object",
            "properties": {
                "ethernet_latency": {"type": "number", "minimum": 0},
                "model_latency": {"type": "number"},
            },
        }
        out = errors(check_semantic_equivalence(fig_graph(), TTIM, config))
        assert len(out) == 1
        assert out[0].subject_uid == "OI_ETH"
        assert "minimum" in out[0].message  # quotes both canonical forms

    def test_unresolvable_placement(self):
        config = {"type": "object", "properties": {"model_latency": {"type": "number"}}}
        out = errors(check_semantic_equivalence(fig_graph(), TTIM, config))
        assert len(out) == 1
        assert "unresolvable" in out[0].message

    def test_missing_placement_warns(self):
        graph = fig_graph()
        elements = [
            mk_element("OI_ETH", "OptimizerInput", links=[("describedBy", "ST_ETH")],
                       body=schema_body(20), line=5)
            if e.uid == "OI_ETH" else e
            for e in graph.elements.values()
        ]
        graph, _ = build_graph(elements)
        out = check_semantic_equivalence(graph, TTIM, CONFIG)
        warnings = [v for v in out if v.severity == "warning"]
        assert any(v.subject_uid == "OI_ETH" and "placement" in v.message for v in warnings)

    def test_unreferenced_config_property_warns(self):
        config = {
            "type": "object",
            "properties": {
                "ethernet_latency": {"type": "number"},
                "model_latency": {"type": "number"},
                "gpu_memory": {"type": "number"},
            },
        }
        out = check_semantic_equivalence(fig_graph(), TTIM, config)
        warnings = [v for v in out if v.severity == "warning"]
        assert any("gpu_memory" in v.message for v in warnings)
        assert errors(out) == []


class TestRunAll:
    def test_clean_report(self):
        report = run_all_checks(fig_graph(), TTIM, CONFIG)
        assert report.passed
        assert all(count == (0, 0) for count in report.counts.values())

    def test_one_violation_per_check(self):
        graph = fig_graph([mk_element("BAD", "reqirement", line=20)])
        elements = [
            mk_element("OI_MODEL", "OptimizerInput", links=[("describedBy", "ST_MODEL")],
                       body=schema_body("slow"), placement="/properties/model_latency", line=6)
            if e.uid == "OI_MODEL" else e
            for e in graph.elements.values()
        ]
        graph, _ = build_graph(elements)
        config = json.loads(json.dumps(CONFIG))
        config["properties"]["ethernet_latency"]["minimum"] = 0
        report = run_all_checks(graph, TTIM, config)
        assert not report.passed
        assert report.counts[CHECK_METAMODEL][0] == 1
        assert report.counts[CHECK_INTERNAL_SCHEMA][0] == 1
        assert report.counts[CHECK_SEMANTIC_EQUIVALENCE][0] == 1

    def test_sorting_stable(self):
        graph = fig_graph([mk_element("BAD", "reqirement", line=20)])
        a = run_all_checks(graph, TTIM, CONFIG)
        b = run_all_checks(graph, TTIM, CONFIG)
        assert a.violations == b.violations

    def test_check_independence(self):
        # a metamodel failure elsewhere leaves checks 2 and 3 untouched
        dirty = fig_graph([mk_element("BAD", "reqirement", line=20)])
        clean = fig_graph()
        assert check_internal_schema_correctness(dirty, TTIM) == \
            check_internal_schema_correctness(clean, TTIM)
        assert check_semantic_equivalence(dirty, TTIM, CONFIG) == \
            check_semantic_equivalence(clean, TTIM, CONFIG)

    def test_report_yaml_serializes(self):
        report = run_all_checks(fig_graph(), TTIM, CONFIG)
        text = report_to_yaml(report)
        assert "passed: true" in text
