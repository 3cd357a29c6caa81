"""Structure-level risk constraint checks.

The specification structure is treated as a set of constraints to enforce:
every dependent assumption gets discharged exactly once, support chains stay
well-founded, refinements stay within their integration level, and inherited
responsibility points up the component tree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import Diagnostic, Severity, error, finalize, warning
from .model import SpecificationStructure, support_graph
from .scc import nontrivial_components


@dataclass(frozen=True)
class StructureStats:
    components: int
    contracts: int
    assumptions: int
    refinements: int
    bindings: int
    environmental: int


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Diagnostic, ...]
    stats: StructureStats

    @property
    def ok(self) -> bool:
        return not any(f.severity is Severity.ERROR for f in self.findings)


def compute_stats(structure: SpecificationStructure) -> StructureStats:
    assumptions = [a for _, a in structure.assumptions()]
    return StructureStats(
        components=len(structure.components),
        contracts=sum(1 for _ in structure.contracts()),
        assumptions=len(assumptions),
        refinements=len(structure.refinements),
        bindings=sum(len(r.bindings) for r in structure.refinements),
        environmental=sum(1 for a in assumptions if a.environmental),
    )


def check_discharge(
    structure: SpecificationStructure, allow_multi_discharge: bool = False
) -> list[Diagnostic]:
    """Every non-environmental assumption is discharged by exactly one binding."""
    incoming: dict[str, int] = {}
    for ref in structure.refinements:
        for binding in ref.bindings:
            incoming[binding.target.text] = incoming.get(binding.target.text, 0) + 1
    diags: list[Diagnostic] = []
    for comp, assumption in structure.assumptions():
        if assumption.environmental:
            continue
        qid = f"{comp.name}.{assumption.id}"
        count = incoming.get(qid, 0)
        if count == 0:
            diags.append(error("V201", f"undischarged assumption {qid}"))
        elif count > 1:
            make = warning if allow_multi_discharge else error
            diags.append(make("V202", f"assumption {qid} is multiply discharged ({count} bindings)"))
    return finalize(diags)


def check_cycles(
    structure: SpecificationStructure, tolerate_cycles: bool = False
) -> list[Diagnostic]:
    """Support chains must be well-founded so modules can be assured independently."""
    graph_model = support_graph(structure)
    adjacency: dict[tuple[str, str], list[tuple[str, str]]] = {
        (q.text, q.kind): [] for q in graph_model.nodes
    }
    for edge in graph_model.edges:
        adjacency[(edge.source.text, edge.source.kind)].append((edge.target.text, edge.target.kind))
    diags: list[Diagnostic] = []
    make = warning if tolerate_cycles else error
    for component in nontrivial_components(adjacency):
        members = ", ".join(sorted(text for text, _kind in component))
        diags.append(make("V301", f"circular support among {members}"))
    return finalize(diags)


def check_allocation(structure: SpecificationStructure) -> list[Diagnostic]:
    """Refinement endpoints must belong to the allocated component or its direct children."""
    diags: list[Diagnostic] = []
    for ref in structure.refinements:
        scope = {ref.allocated_to} | {c.name for c in structure.children_of(ref.allocated_to)}
        for binding in ref.bindings:
            outside = sorted(
                {q.component for q in (binding.source, binding.target) if q.component not in scope}
            )
            if outside:
                diags.append(
                    error(
                        "V401",
                        f"refinement {ref.id} (allocated to {ref.allocated_to}) binds "
                        f"{binding.source} -> {binding.target} outside its scope "
                        f"(components {', '.join(outside)})",
                    )
                )
    return finalize(diags)


def check_inheritance(structure: SpecificationStructure) -> list[Diagnostic]:
    """Inherited responsibility must point to an ancestor, without cycles."""
    diags: list[Diagnostic] = []
    inherits_graph: dict[str, list[str]] = {}
    for comp, contract in structure.contracts():
        qid = f"{comp.name}.{contract.id}"
        inherits_graph[qid] = []
        if contract.inherits is None:
            continue
        target = contract.inherits
        inherits_graph[qid].append(target.text)
        if target.component not in structure.ancestors_of(comp.name):
            diags.append(
                error(
                    "V501",
                    f"contract {qid} inherits {target}, which is not on an ancestor component",
                )
            )
    for component in nontrivial_components(inherits_graph):
        members = ", ".join(sorted(component))
        diags.append(error("V502", f"inheritance cycle among {members}"))
    return finalize(diags)


def validate_all(
    structure: SpecificationStructure,
    allow_multi_discharge: bool = False,
    tolerate_cycles: bool = False,
) -> ValidationReport:
    """Run all structure checks and assemble the deduplicated report."""
    findings: list[Diagnostic] = []
    findings += check_discharge(structure, allow_multi_discharge)
    findings += check_cycles(structure, tolerate_cycles)
    findings += check_allocation(structure)
    findings += check_inheritance(structure)
    return ValidationReport(tuple(finalize(findings)), compute_stats(structure))
