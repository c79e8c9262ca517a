"""Command-line entry point: parse, build, check, traverse, emit.

Exit codes: 0 success, 1 check failures, 2 usage/IO/parse-fatal errors.
Standard output carries only the requested artifact; diagnostics go to
standard error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from tracegen import checks as checks_mod
from tracegen import elements as elements_mod
from tracegen.elements import DEFAULT_GLOBS, ParseDiagnostic
from tracegen.emit import IntermediaryDocument, emit_plantuml, emit_yaml
from tracegen.errors import TracegenError
from tracegen.graph import TraceGraph, build_graph
from tracegen.schema import SchemaDoc, parse_schema
from tracegen.traversal import (
    DEFAULT_MAX_PATHS,
    collect_optimizer_inputs,
    find_runtime_scenarios,
    traverse_from_scenario,
)
from tracegen.ttim import TtimDefinition, default_extended_framework, load_ttim

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_OPERATIONAL = 2


def _warn(message: str) -> None:
    click.echo(message, err=True)


def _print_diagnostics(diagnostics: list[ParseDiagnostic]) -> None:
    for diag in diagnostics:
        _warn(f"{diag.severity}: {diag.file}:{diag.line}: {diag.message}")


def _load_pipeline(
    repo_root: str,
    ttim_path: str | None,
    config_schema_path: str,
    globs: tuple[str, ...],
    reverse_links: bool = False,
) -> tuple[TraceGraph, TtimDefinition, SchemaDoc]:
    """Shared front half of every subcommand; raises TracegenError on fatal
    input problems (mapped to exit 2 by the callers)."""
    ttim = load_ttim(ttim_path) if ttim_path else default_extended_framework()
    try:
        config_doc = json.loads(Path(config_schema_path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise TracegenError(f"config schema is not valid JSON: {exc}") from exc
    config_schema = parse_schema(config_doc)

    include = globs if globs else DEFAULT_GLOBS
    files, diagnostics = elements_mod.scan_repository(repo_root, include)
    all_elements = []
    for file in files:
        parsed, file_diags = elements_mod.parse_file(file)
        all_elements.extend(parsed)
        diagnostics.extend(file_diags)
    graph, build_diags = build_graph(all_elements)
    diagnostics.extend(build_diags)
    _print_diagnostics(diagnostics)
    if reverse_links:
        graph = graph.reversed()
    return graph, ttim, config_schema


def _common_options(func):
    func = click.option(
        "--reverse-links",
        is_flag=True,
        help="Flip every trace-link direction before checking and traversal "
        "(for repositories whose links point upward).",
    )(func)
    func = click.option(
        "--glob",
        "globs",
        multiple=True,
        help="Include glob pattern, repeatable (default: **/*.md and **/*.txt).",
    )(func)
    func = click.option(
        "--config-schema",
        "config_schema_path",
        required=True,
        type=click.Path(exists=True, dir_okay=False),
        help="JSON schema of the target system configuration.",
    )(func)
    func = click.option(
        "--ttim",
        "ttim_path",
        type=click.Path(exists=True, dir_okay=False),
        help="TTIM meta-model YAML file (default: built-in extended framework).",
    )(func)
    func = click.argument("repo_root", type=click.Path(exists=True, file_okay=False))(func)
    return func


@click.group()
def cli() -> None:
    """Extract traceable runtime-configuration specifications from textual
    requirements."""


@cli.command("check")
@_common_options
@click.option("--report", "report_path", type=click.Path(dir_okay=False), help="Write the check report as YAML.")
def cmd_check(repo_root, ttim_path, config_schema_path, globs, reverse_links, report_path) -> None:
    """Run the three quality-assurance checks."""
    try:
        graph, ttim, config_schema = _load_pipeline(
            repo_root, ttim_path, config_schema_path, globs, reverse_links
        )
    except (TracegenError, OSError) as exc:
        _warn(f"fatal: {exc}")
        sys.exit(EXIT_OPERATIONAL)
    report = checks_mod.run_all_checks(graph, ttim, config_schema)
    for violation in report.violations:
        location = f"{violation.file}:{violation.line}" if violation.file else "-"
        _warn(f"{violation.severity}: {violation.check_id}: {location}: {violation.message}")
    if report_path:
        Path(report_path).write_text(checks_mod.report_to_yaml(report), encoding="utf-8")
    sys.exit(EXIT_OK if report.passed else EXIT_CHECK_FAILED)


@cli.command("generate")
@_common_options
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["yaml", "plantuml"]),
    default="yaml",
    show_default=True,
)
@click.option("--out", "output_path", type=click.Path(dir_okay=False), help="Output file (default: stdout).")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), help="Write the check report as YAML.")
@click.option(
    "--max-paths-per-scenario",
    default=DEFAULT_MAX_PATHS,
    show_default=True,
    help="Abort when one scenario produces more trace paths than this.",
)
def cmd_generate(
    repo_root,
    ttim_path,
    config_schema_path,
    globs,
    reverse_links,
    output_format,
    output_path,
    report_path,
    max_paths_per_scenario,
) -> None:
    """Emit the intermediary YAML document or the PlantUML overview."""
    try:
        graph, ttim, config_schema = _load_pipeline(
            repo_root, ttim_path, config_schema_path, globs, reverse_links
        )
    except (TracegenError, OSError) as exc:
        _warn(f"fatal: {exc}")
        sys.exit(EXIT_OPERATIONAL)

    report = checks_mod.run_all_checks(graph, ttim, config_schema)
    if report_path:
        Path(report_path).write_text(checks_mod.report_to_yaml(report), encoding="utf-8")
    if not report.passed:
        _warn("checks failed; run check for details")
        sys.exit(EXIT_CHECK_FAILED)

    scenarios = find_runtime_scenarios(graph, ttim)
    if not scenarios:
        _warn("warning: no runtime scenarios found")
    try:
        results = [
            traverse_from_scenario(graph, ttim, uid, max_paths_per_scenario)
            for uid in scenarios
        ]
        for result in results:
            _print_diagnostics(result.diagnostics)
        records = collect_optimizer_inputs(results, graph, ttim)
    except TracegenError as exc:
        _warn(f"error: {exc}")
        sys.exit(EXIT_CHECK_FAILED)

    doc = IntermediaryDocument(config_schema=config_schema, optimizer_inputs=records)
    text = emit_yaml(doc) if output_format == "yaml" else emit_plantuml(doc, graph)
    if output_path:
        try:
            Path(output_path).write_text(text, encoding="utf-8")
        except OSError as exc:
            _warn(f"fatal: {exc}")
            sys.exit(EXIT_OPERATIONAL)
    else:
        click.echo(text, nl=False)
    sys.exit(EXIT_OK)


@cli.command("list-scenarios")
@_common_options
@click.option(
    "--max-paths-per-scenario", default=DEFAULT_MAX_PATHS, show_default=True
)
def cmd_list_scenarios(
    repo_root, ttim_path, config_schema_path, globs, reverse_links, max_paths_per_scenario
) -> None:
    """List runtime scenarios with their reachable trace-path counts."""
    try:
        graph, ttim, _ = _load_pipeline(
            repo_root, ttim_path, config_schema_path, globs, reverse_links
        )
    except (TracegenError, OSError) as exc:
        _warn(f"fatal: {exc}")
        sys.exit(EXIT_OPERATIONAL)
    for uid in find_runtime_scenarios(graph, ttim):
        try:
            result = traverse_from_scenario(graph, ttim, uid, max_paths_per_scenario)
        except TracegenError as exc:
            _warn(f"error: {exc}")
            sys.exit(EXIT_CHECK_FAILED)
        label = graph.elements[uid].label or ""
        click.echo(f"{uid}\t{label}\t{len(result.paths)}")
    sys.exit(EXIT_OK)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
