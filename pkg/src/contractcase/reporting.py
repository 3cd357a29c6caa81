"""Command orchestration and report rendering.

Each ``run_*`` function performs one tool command on in-memory sources and
returns a :class:`CommandResult` holding the findings, the exit code, the
human-readable text, and a JSON-ready payload. The HTTP service and the CLI
are both thin shells over these functions, so their findings are the
library's findings by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import casefiles, dsl
from .case_model import CaseSet, check_module_coverage, check_module_wellformed, link_away_claims
from .confidence import (
    ConfidenceDiff,
    ConfidenceError,
    ConfidenceReport,
    TriValue,
    propagate,
    weakest_links,
    what_if,
)
from .diagnostics import Diagnostic, Severity, SourceText, error, finalize, has_errors
from .dotexport import export_dot
from .model import SpecificationStructure, coarsen
from .risk import RiskRegister, coverage, generate_checklist, trace_safety_requirements, validate_register_targets
from .validator import StructureStats, ValidationReport, validate_all


@dataclass(frozen=True)
class RunOptions:
    coarse: bool = False
    tolerate_cycles: bool = False
    allow_multi_discharge: bool = False


@dataclass
class CommandResult:
    command: str
    findings: list[Diagnostic] = field(default_factory=list)
    text: str = ""
    payload: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 1 if has_errors(self.findings) else 0


def finding_to_dict(diag: Diagnostic) -> dict:
    loc = diag.location
    return {
        "severity": diag.severity.value,
        "code": diag.code,
        "message": diag.message,
        "file": loc.file if loc else None,
        "line": loc.line if loc else None,
        "column": loc.column if loc else None,
    }


def findings_payload(findings: list[Diagnostic]) -> list[dict]:
    return [finding_to_dict(d) for d in findings]


def render_findings(findings: list[Diagnostic]) -> list[str]:
    if not findings:
        return ["no findings"]
    lines = [d.render() for d in findings]
    errors = sum(1 for d in findings if d.severity is Severity.ERROR)
    warnings = sum(1 for d in findings if d.severity is Severity.WARNING)
    lines.append(f"{errors} error(s), {warnings} warning(s)")
    return lines


def stats_to_dict(stats: StructureStats) -> dict:
    return {
        "components": stats.components,
        "contracts": stats.contracts,
        "assumptions": stats.assumptions,
        "refinements": stats.refinements,
        "bindings": stats.bindings,
        "environmental": stats.environmental,
    }


def render_stats(stats: StructureStats) -> str:
    return (
        f"{stats.components} components, {stats.contracts} contracts, "
        f"{stats.assumptions} assumptions ({stats.environmental} environmental), "
        f"{stats.refinements} refinements, {stats.bindings} bindings"
    )


def _parse_structure(
    spec: SourceText, options: RunOptions
) -> tuple[SpecificationStructure | None, list[Diagnostic]]:
    structure, diags = dsl.parse_spec(spec)
    if structure is not None and options.coarse:
        structure = coarsen(structure)
    return structure, diags


def run_check(spec: SourceText, options: RunOptions = RunOptions()) -> CommandResult:
    """Parse the specification and enforce all structure constraints."""
    result = CommandResult("check")
    structure, diags = _parse_structure(spec, options)
    if structure is None:
        result.findings = diags
        result.payload = {"findings": findings_payload(diags), "stats": None, "ok": False}
        result.text = "\n".join(render_findings(diags)) + "\n"
        return result
    report: ValidationReport = validate_all(
        structure, options.allow_multi_discharge, options.tolerate_cycles
    )
    result.findings = list(report.findings)
    result.payload = {
        "findings": findings_payload(result.findings),
        "stats": stats_to_dict(report.stats),
        "ok": report.ok,
    }
    result.text = "\n".join([render_stats(report.stats)] + render_findings(result.findings)) + "\n"
    return result


def run_risks(
    spec: SourceText, register: SourceText | None = None, options: RunOptions = RunOptions()
) -> CommandResult:
    """Print the modular risk checklist; with a register, score its coverage."""
    result = CommandResult("risks")
    structure, diags = _parse_structure(spec, options)
    if structure is None:
        result.findings = diags
        result.payload = {"findings": findings_payload(diags), "prompts": [], "coverage": None}
        result.text = "\n".join(render_findings(diags)) + "\n"
        return result
    prompts = generate_checklist(structure)
    payload_prompts = [{"target": p.target, "kind": p.kind, "text": p.text} for p in prompts]
    lines = [p.text for p in prompts]
    coverage_payload = None
    if register is not None:
        parsed, reg_diags = casefiles.parse_register(register)
        result.findings += reg_diags
        if parsed is not None:
            metrics, target_diags = coverage(structure, parsed)
            result.findings += target_diags
            coverage_payload = {
                "covered": metrics.covered,
                "total": metrics.total,
                "uncovered": list(metrics.uncovered),
                "by_status": metrics.by_status,
            }
            lines.append(f"coverage {metrics.covered}/{metrics.total}")
            by_status = ", ".join(f"{k} {v}" for k, v in metrics.by_status.items())
            lines.append(f"status counts: {by_status}")
            if metrics.uncovered:
                lines.append("uncovered: " + ", ".join(metrics.uncovered))
    if result.findings:
        lines += render_findings(result.findings)
    result.payload = {
        "findings": findings_payload(result.findings),
        "prompts": payload_prompts,
        "coverage": coverage_payload,
    }
    result.text = "\n".join(lines) + "\n" if lines else ""
    return result


def _load_cases(
    case_sources: list[SourceText],
) -> tuple[CaseSet | None, list[Diagnostic]]:
    if not case_sources:
        return CaseSet(()), []
    return casefiles.load_case_set(case_sources)


def _case_checks(
    structure: SpecificationStructure,
    cases: CaseSet,
    register: RiskRegister | None,
    options: RunOptions,
) -> tuple[list[Diagnostic], dict]:
    findings: list[Diagnostic] = []
    findings += check_module_coverage(structure, cases)
    for module in cases.modules:
        findings += check_module_wellformed(module)
    graph_payload: dict = {"nodes": [], "edges": []}
    if not has_errors(findings):
        graph, link_diags = link_away_claims(structure, cases, options.tolerate_cycles)
        findings += link_diags
        graph_payload = {
            "nodes": list(graph.nodes),
            "edges": [[e.source_module, e.away_node, e.target_module] for e in graph.edges],
        }
    if register is not None:
        findings += validate_register_targets(structure, register)
        findings += trace_safety_requirements(register, list(cases.modules))
    return finalize(findings), graph_payload


def run_case(
    spec: SourceText,
    case_sources: list[SourceText],
    register: SourceText | None = None,
    options: RunOptions = RunOptions(),
) -> CommandResult:
    """Structural checks over the assurance case set."""
    result = CommandResult("case")
    structure, diags = _parse_structure(spec, options)
    if structure is None:
        result.findings = diags
        result.payload = {"findings": findings_payload(diags), "modules": 0, "graph": None}
        result.text = "\n".join(render_findings(diags)) + "\n"
        return result
    cases, case_diags = _load_cases(case_sources)
    if cases is None:
        result.findings = case_diags
        result.payload = {"findings": findings_payload(case_diags), "modules": 0, "graph": None}
        result.text = "\n".join(render_findings(case_diags)) + "\n"
        return result
    parsed_register: RiskRegister | None = None
    if register is not None:
        parsed_register, reg_diags = casefiles.parse_register(register)
        result.findings += reg_diags
    findings, graph_payload = _case_checks(structure, cases, parsed_register, options)
    result.findings = finalize(result.findings + findings)
    summary = f"{len(cases.modules)} modules, {len(graph_payload['edges'])} away edges"
    result.payload = {
        "findings": findings_payload(result.findings),
        "modules": len(cases.modules),
        "graph": graph_payload,
    }
    result.text = "\n".join([summary] + render_findings(result.findings)) + "\n"
    return result


def _confidence_payload(report: ConfidenceReport) -> dict:
    return {
        "guarantees": {k: v.label for k, v in report.guarantees.items()},
        "modules": {k: v.label for k, v in report.modules.items()},
        "nodes": {k: v.label for k, v in report.nodes.items()},
        "sccs": [list(scc) for scc in report.sccs],
    }


def _diff_payload(diff: ConfidenceDiff) -> dict:
    def pairs(entries: dict[str, tuple[TriValue, TriValue]]) -> dict:
        return {k: [a.label, b.label] for k, (a, b) in entries.items()}

    return {
        "guarantees": pairs(diff.guarantees),
        "modules": pairs(diff.modules),
        "nodes": pairs(diff.nodes),
    }


def run_confidence(
    spec: SourceText,
    case_sources: list[SourceText],
    assessment: SourceText | None = None,
    what_if_overrides: dict[str, str] | None = None,
    weakest: str | None = None,
    options: RunOptions = RunOptions(),
) -> CommandResult:
    """Propagate assessed confidence; optionally answer what-if and weakest-link."""
    result = CommandResult("confidence")
    empty_payload = {
        "findings": [],
        "guarantees": None,
        "modules": None,
        "nodes": None,
        "sccs": None,
        "diff": None,
        "weakest": None,
    }

    def fail(findings: list[Diagnostic]) -> CommandResult:
        result.findings = finalize(findings)
        result.payload = dict(empty_payload, findings=findings_payload(result.findings))
        result.text = "\n".join(render_findings(result.findings)) + "\n"
        return result

    structure, diags = _parse_structure(spec, options)
    if structure is None:
        return fail(diags)
    cases, case_diags = _load_cases(case_sources)
    if cases is None:
        return fail(case_diags)

    assessment_map = {}
    if assessment is not None:
        parsed, assess_diags = casefiles.parse_assessment(assessment)
        if parsed is None:
            return fail(assess_diags)
        assessment_map = parsed

    overrides: dict[str, TriValue] = {}
    for key, token in (what_if_overrides or {}).items():
        value = TriValue.from_token(token)
        if value is None:
            return fail(
                [error("E400", f"unknown value token {token!r} for {key} (use supported|unknown|contradicted)")]
            )
        overrides[key] = value

    validation = validate_all(structure, options.allow_multi_discharge, options.tolerate_cycles)
    case_findings, _graph = _case_checks(structure, cases, None, options)
    findings = finalize(list(validation.findings) + case_findings)
    if has_errors(findings):
        return fail(findings)

    try:
        report = propagate(
            structure, cases, assessment_map, options.tolerate_cycles, options.allow_multi_discharge
        )
        diff = None
        if overrides:
            diff = what_if(
                structure,
                cases,
                assessment_map,
                overrides,
                options.tolerate_cycles,
                options.allow_multi_discharge,
            )
        weak = None
        if weakest is not None:
            weak = weakest_links(
                structure,
                cases,
                assessment_map,
                weakest,
                options.tolerate_cycles,
                options.allow_multi_discharge,
            )
    except ConfidenceError as exc:
        return fail(findings + [error(exc.code, str(exc))])

    result.findings = findings
    lines = [f"{qid}: {value.label}" for qid, value in report.guarantees.items()]
    for scc in report.sccs:
        lines.append("cycle capped at Unknown: " + ", ".join(scc))
    payload = dict(empty_payload, findings=findings_payload(findings), **_confidence_payload(report))
    if diff is not None:
        payload["diff"] = _diff_payload(diff)
        if diff.empty:
            lines.append("what-if: no changes")
        else:
            lines.append("what-if changes:")
            for name, (before, after) in sorted(diff.guarantees.items()):
                lines.append(f"  {name}: {before.label} -> {after.label}")
            for name, (before, after) in sorted(diff.modules.items()):
                lines.append(f"  module {name}: {before.label} -> {after.label}")
    if weak is not None:
        payload["weakest"] = weak
        if weak:
            lines.append(f"weakest links for {weakest}: " + ", ".join(weak))
        else:
            lines.append(f"weakest links for {weakest}: none")
    if findings:
        lines += render_findings(findings)
    result.payload = payload
    result.text = "\n".join(lines) + "\n" if lines else ""
    return result


def run_export_dot(spec: SourceText, options: RunOptions = RunOptions(), by_component: bool = False) -> CommandResult:
    result = CommandResult("export-dot")
    structure, diags = _parse_structure(spec, options)
    if structure is None:
        result.findings = diags
        result.payload = {"findings": findings_payload(diags), "dot": None}
        result.text = "\n".join(render_findings(diags)) + "\n"
        return result
    dot = export_dot(structure, by_component=by_component)
    result.payload = {"findings": [], "dot": dot}
    result.text = dot
    return result


def run_report(
    spec: SourceText,
    case_sources: list[SourceText] | None = None,
    assessment: SourceText | None = None,
    register: SourceText | None = None,
    options: RunOptions = RunOptions(),
) -> CommandResult:
    """Combined document: stats, validation, risk coverage, case, confidence."""
    result = CommandResult("report")
    sections: dict[str, dict | None] = {
        "stats": None,
        "validation": None,
        "risks": None,
        "case": None,
        "confidence": None,
    }
    findings: list[Diagnostic] = []

    structure, diags = _parse_structure(spec, options)
    if structure is None:
        findings += diags
        sections["validation"] = {"findings": findings_payload(diags)}
    else:
        check = run_check(spec, options)
        findings += check.findings
        sections["stats"] = check.payload["stats"]
        sections["validation"] = {"findings": check.payload["findings"]}
        if register is not None:
            risks = run_risks(spec, register, options)
            findings += risks.findings
            sections["risks"] = {
                "prompts": risks.payload["prompts"],
                "coverage": risks.payload["coverage"],
                "findings": risks.payload["findings"],
            }
        if case_sources is not None:
            case = run_case(spec, case_sources, register, options)
            findings += case.findings
            sections["case"] = {
                "findings": case.payload["findings"],
                "modules": case.payload["modules"],
            }
            confidence = run_confidence(spec, case_sources, assessment, None, None, options)
            findings += confidence.findings
            sections["confidence"] = {
                "guarantees": confidence.payload["guarantees"],
                "sccs": confidence.payload["sccs"],
                "findings": confidence.payload["findings"],
            }

    result.findings = finalize(findings)
    result.payload = dict(sections)
    result.text = _render_report_markdown(sections)
    return result


def _render_report_markdown(sections: dict[str, dict | None]) -> str:
    lines = ["# Assurance report", ""]

    lines.append("## Structure")
    stats = sections["stats"]
    if stats is None:
        lines.append("not provided")
    else:
        for key in ("components", "contracts", "assumptions", "refinements", "bindings", "environmental"):
            lines.append(f"- {key}: {stats[key]}")
    lines.append("")

    lines.append("## Validation")
    validation = sections["validation"]
    if validation is None:
        lines.append("not provided")
    elif not validation["findings"]:
        lines.append("no findings")
    else:
        for f in validation["findings"]:
            lines.append(f"- {f['severity']} {f['code']}: {f['message']}")
    lines.append("")

    lines.append("## Risk coverage")
    risks = sections["risks"]
    if risks is None:
        lines.append("not provided")
    else:
        cov = risks["coverage"]
        lines.append(f"- checklist size: {len(risks['prompts'])}")
        if cov is not None:
            lines.append(f"- coverage: {cov['covered']}/{cov['total']}")
            if cov["uncovered"]:
                lines.append("- uncovered: " + ", ".join(cov["uncovered"]))
        for f in risks["findings"]:
            lines.append(f"- {f['severity']} {f['code']}: {f['message']}")
    lines.append("")

    lines.append("## Assurance case")
    case = sections["case"]
    if case is None:
        lines.append("not provided")
    else:
        lines.append(f"- modules: {case['modules']}")
        if not case["findings"]:
            lines.append("- no findings")
        else:
            for f in case["findings"]:
                lines.append(f"- {f['severity']} {f['code']}: {f['message']}")
    lines.append("")

    lines.append("## Confidence")
    confidence = sections["confidence"]
    if confidence is None:
        lines.append("not provided")
    elif confidence["guarantees"] is None:
        lines.append("not evaluated (prerequisites failed)")
        for f in confidence["findings"]:
            lines.append(f"- {f['severity']} {f['code']}: {f['message']}")
    else:
        for qid, label in confidence["guarantees"].items():
            lines.append(f"- {qid}: {label}")
        for scc in confidence["sccs"]:
            lines.append("- cycle capped at Unknown: " + ", ".join(scc))
    lines.append("")
    return "\n".join(lines)
