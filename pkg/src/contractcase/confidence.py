"""Three-valued confidence propagation from evidence to guarantees.

Values live on the total order Contradicted < Unknown < Supported. Joint
premises combine with min (one bad input spoils the step) and alternative
argument legs combine with max (one good leg carries the claim). There is no
numeric weighting; the point is to trace where confidence comes from, not to
score it.

End-to-end confidence in a guarantee combines three things: the value of its
own assurance module, the values of the assumptions it relies on, and, for
each discharged assumption, the value of the refinement module and of the
supplying guarantee. Away-claims citing a contract's module import that
contract's end-to-end value; citing a refinement's module imports the module
value. Environmental assumptions default to Supported but can be overridden
in the assessment.

Circular support never earns confidence: every member of a dependency cycle
is capped at Unknown and lowered further only by values flowing into the
cycle from outside.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from .case_model import (
    AWAY,
    EVIDENCE,
    INFERENCE,
    TARGET_CONTRACT,
    TARGET_REFINEMENT,
    AssuranceModule,
    CaseSet,
    check_module_coverage,
    check_module_wellformed,
    link_away_claims,
)
from .diagnostics import has_errors
from .model import SpecificationStructure
from .scc import condensation_order
from .validator import validate_all


class TriValue(IntEnum):
    CONTRADICTED = 0
    UNKNOWN = 1
    SUPPORTED = 2

    @property
    def label(self) -> str:
        return _LABELS[self]

    @property
    def token(self) -> str:
        return _LABELS[self].lower()

    @classmethod
    def from_token(cls, token: str) -> TriValue | None:
        return _FROM_TOKEN.get(token)


_LABELS = {
    TriValue.CONTRADICTED: "Contradicted",
    TriValue.UNKNOWN: "Unknown",
    TriValue.SUPPORTED: "Supported",
}
_FROM_TOKEN = {v.token: v for v in TriValue}

# AssessmentMap: leaf id -> TriValue. Evidence leaves are addressed as
# "<module id>.<node id>"; environmental assumptions as "<Component>.<Id>".
AssessmentMap = dict[str, TriValue]


class ConfidenceError(Exception):
    """Raised when propagation inputs do not meet their prerequisites."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


@dataclass(frozen=True)
class ConfidenceReport:
    """Deterministic valuation of every argument node, module, and guarantee."""

    nodes: dict[str, TriValue]
    modules: dict[str, TriValue]
    guarantees: dict[str, TriValue]
    sccs: tuple[tuple[str, ...], ...] = ()


@dataclass(frozen=True)
class ConfidenceDiff:
    """Changed entries between two reports, as (before, after) pairs."""

    nodes: dict[str, tuple[TriValue, TriValue]]
    modules: dict[str, tuple[TriValue, TriValue]]
    guarantees: dict[str, tuple[TriValue, TriValue]]

    @property
    def empty(self) -> bool:
        return not (self.nodes or self.modules or self.guarantees)


def evaluate_module(
    module: AssuranceModule,
    assessment: AssessmentMap,
    away_values: dict[str, TriValue] | None = None,
) -> dict[str, TriValue]:
    """Value every node of one well-formed module.

    Evidence reads the assessment (default Unknown), away nodes read the
    supplied per-module values (default Unknown), inferences take the min of
    their children, claims take the max of their legs; a childless claim is
    Unknown.
    """
    away_values = away_values or {}
    nodes = module.node_map()
    values: dict[str, TriValue] = {}
    in_progress: set[str] = set()

    def value_of(node_id: str) -> TriValue:
        if node_id in values:
            return values[node_id]
        node = nodes.get(node_id)
        if node is None or node_id in in_progress:
            return TriValue.UNKNOWN
        in_progress.add(node_id)
        if node.kind == EVIDENCE:
            result = assessment.get(f"{module.id}.{node.id}", TriValue.UNKNOWN)
        elif node.kind == AWAY:
            result = away_values.get(node.away_target or "", TriValue.UNKNOWN)
        else:
            child_values = [value_of(c) for c in node.children]
            if not child_values:
                result = TriValue.UNKNOWN
            elif node.kind == INFERENCE:
                result = min(child_values)
            else:
                result = max(child_values)
        in_progress.discard(node_id)
        values[node_id] = result
        return result

    for node in module.nodes:
        value_of(node.id)
    return values


def assessment_key_universe(
    structure: SpecificationStructure, cases: CaseSet
) -> tuple[set[str], set[str]]:
    """All addressable leaves: evidence keys and environmental assumption keys."""
    evidence = {
        f"{module.id}.{node.id}"
        for module in cases.modules
        for node in module.nodes
        if node.kind == EVIDENCE
    }
    environmental = {
        f"{comp.name}.{assumption.id}"
        for comp, assumption in structure.assumptions()
        if assumption.environmental
    }
    return evidence, environmental


def _check_assessment_keys(
    structure: SpecificationStructure, cases: CaseSet, assessment: AssessmentMap, code: str
) -> None:
    evidence, environmental = assessment_key_universe(structure, cases)
    ambiguous = sorted(k for k in assessment if k in evidence and k in environmental)
    if ambiguous:
        raise ConfidenceError(
            code, f"assessment keys are ambiguous (both evidence and assumption): {', '.join(ambiguous)}"
        )
    unknown = sorted(k for k in assessment if k not in evidence and k not in environmental)
    if unknown:
        raise ConfidenceError(code, f"assessment keys do not resolve: {', '.join(unknown)}")


def propagate(
    structure: SpecificationStructure,
    cases: CaseSet,
    assessment: AssessmentMap,
    tolerate_cycles: bool = False,
    allow_multi_discharge: bool = False,
) -> ConfidenceReport:
    """Propagate assessed confidence through the case set and the structure.

    Prerequisites (enforced here, code E501): the structure validates, every
    target has exactly one well-formed module, away-claims resolve, and all
    assessment keys address real leaves. Dependency cycles are rejected
    unless ``tolerate_cycles`` is set, in which case every cycle member is
    capped at Unknown.
    """
    validation = validate_all(structure, allow_multi_discharge, tolerate_cycles)
    if not validation.ok:
        codes = sorted({f.code for f in validation.findings})
        raise ConfidenceError("E501", f"structure does not validate ({', '.join(codes)})")
    coverage_diags = check_module_coverage(structure, cases)
    if has_errors(coverage_diags):
        raise ConfidenceError("E501", "case set does not cover the structure")
    for module in cases.modules:
        if has_errors(check_module_wellformed(module)):
            raise ConfidenceError("E501", f"module {module.id} is not well-formed")
    _, link_diags = link_away_claims(structure, cases, tolerate_cycles)
    if has_errors(link_diags):
        raise ConfidenceError("E501", "away-claims do not link cleanly")
    _check_assessment_keys(structure, cases, assessment, "E501")

    module_of_target: dict[tuple[str, str], AssuranceModule] = {
        (m.target.kind, m.target.ref): m for m in cases.modules
    }

    def away_dep(target_module: AssuranceModule) -> tuple[str, str]:
        if target_module.target.kind == TARGET_CONTRACT:
            return ("g", target_module.target.ref)
        return ("m", target_module.id)

    # Dependency graph, edges pointing from each node to its inputs.
    deps: dict[tuple[str, str], list[tuple[str, str]]] = {}
    bindings_by_target: dict[str, list[tuple[str, str]]] = {}
    for ref in structure.refinements:
        ref_module = module_of_target[(TARGET_REFINEMENT, ref.id)]
        for binding in ref.bindings:
            bindings_by_target.setdefault(binding.target.text, []).append(
                (ref_module.id, binding.source.text)
            )

    env_of: dict[str, bool] = {}
    for comp, assumption in structure.assumptions():
        qid = f"{comp.name}.{assumption.id}"
        env_of[qid] = assumption.environmental
        if assumption.environmental:
            deps[("a", qid)] = []
        else:
            deps[("a", qid)] = [
                dep
                for mod_id, source in bindings_by_target.get(qid, [])
                for dep in (("m", mod_id), ("g", source))
            ]

    guarantee_meta: dict[str, tuple[str, tuple[str, ...]]] = {}
    for comp, contract in structure.contracts():
        qid = f"{comp.name}.{contract.id}"
        module = module_of_target[(TARGET_CONTRACT, qid)]
        assumed = tuple(f"{comp.name}.{aid}" for aid in contract.assumes)
        guarantee_meta[qid] = (module.id, assumed)
        deps[("g", qid)] = [("m", module.id)] + [("a", a) for a in assumed]

    for module in cases.modules:
        inputs: list[tuple[str, str]] = []
        for node in module.nodes:
            if node.kind != AWAY:
                continue
            target = cases.by_id(node.away_target or "")
            if target is not None:
                inputs.append(away_dep(target))
        deps[("m", module.id)] = inputs

    components, membership = condensation_order(deps)
    nontrivial = [
        comp for comp in components if len(comp) > 1 or comp[0] in deps.get(comp[0], [])
    ]
    if nontrivial and not tolerate_cycles:
        members = "; ".join(", ".join(sorted(label for _, label in comp)) for comp in nontrivial)
        raise ConfidenceError("E501", f"circular confidence dependencies ({members})")

    values: dict[tuple[str, str], TriValue] = {}
    node_values: dict[str, TriValue] = {}
    module_values: dict[str, TriValue] = {}
    scc_listing: list[tuple[str, ...]] = []

    def away_values_for(module: AssuranceModule) -> dict[str, TriValue]:
        out: dict[str, TriValue] = {}
        for node in module.nodes:
            if node.kind != AWAY:
                continue
            target = cases.by_id(node.away_target or "")
            if target is not None:
                out[target.id] = values[away_dep(target)]
        return out

    def eval_module_node(module_id: str, cap: TriValue | None = None) -> TriValue:
        module = cases.by_id(module_id)
        assert module is not None
        per_node = evaluate_module(module, assessment, away_values_for(module))
        top_value = per_node.get(module.top, TriValue.UNKNOWN)
        if cap is not None and cap < top_value:
            top_value = cap
            per_node[module.top] = cap
        for nid, val in per_node.items():
            node_values[f"{module.id}.{nid}"] = val
        module_values[module.id] = top_value
        return top_value

    for component in components:
        is_cycle = len(component) > 1 or component[0] in deps.get(component[0], [])
        if not is_cycle:
            kind, name = component[0]
            if kind == "a":
                if env_of[name]:
                    value = assessment.get(name, TriValue.SUPPORTED)
                else:
                    legs = [
                        min(values[("m", mod_id)], values[("g", source)])
                        for mod_id, source in bindings_by_target.get(name, [])
                    ]
                    value = max(legs) if legs else TriValue.UNKNOWN
            elif kind == "g":
                module_id, assumed = guarantee_meta[name]
                value = min(
                    [values[("m", module_id)]] + [values[("a", a)] for a in assumed]
                )
            else:
                value = eval_module_node(name)
            values[component[0]] = value
            continue

        # Cycle: every member takes min(Unknown, external inflows).
        comp_index = membership[component[0]]
        external = [
            values[dep]
            for member in component
            for dep in deps[member]
            if membership[dep] != comp_index
        ]
        scc_value = min([TriValue.UNKNOWN, *external])
        for member in component:
            values[member] = scc_value
        for member in component:
            kind, name = member
            if kind == "m":
                eval_module_node(name, cap=scc_value)
                values[member] = scc_value
                module_values[name] = scc_value
        scc_listing.append(tuple(sorted(label for _, label in component)))

    guarantees = {qid: values[("g", qid)] for qid in sorted(guarantee_meta)}
    return ConfidenceReport(
        nodes=dict(sorted(node_values.items())),
        modules=dict(sorted(module_values.items())),
        guarantees=guarantees,
        sccs=tuple(sorted(scc_listing)),
    )


def diff_reports(base: ConfidenceReport, other: ConfidenceReport) -> ConfidenceDiff:
    def changed(a: dict[str, TriValue], b: dict[str, TriValue]) -> dict[str, tuple[TriValue, TriValue]]:
        return {k: (a[k], b[k]) for k in sorted(a) if b.get(k) is not None and a[k] != b[k]}

    return ConfidenceDiff(
        nodes=changed(base.nodes, other.nodes),
        modules=changed(base.modules, other.modules),
        guarantees=changed(base.guarantees, other.guarantees),
    )


def what_if(
    structure: SpecificationStructure,
    cases: CaseSet,
    assessment: AssessmentMap,
    overrides: AssessmentMap,
    tolerate_cycles: bool = False,
    allow_multi_discharge: bool = False,
) -> ConfidenceDiff:
    """Diff of a propagation run with the given overrides applied on top."""
    evidence, environmental = assessment_key_universe(structure, cases)
    unknown = sorted(k for k in overrides if k not in evidence and k not in environmental)
    if unknown:
        raise ConfidenceError("E601", f"override keys do not resolve: {', '.join(unknown)}")
    base = propagate(structure, cases, assessment, tolerate_cycles, allow_multi_discharge)
    merged = dict(assessment)
    merged.update(overrides)
    revised = propagate(structure, cases, merged, tolerate_cycles, allow_multi_discharge)
    return diff_reports(base, revised)


def weakest_links(
    structure: SpecificationStructure,
    cases: CaseSet,
    assessment: AssessmentMap,
    guarantee: str,
    tolerate_cycles: bool = False,
    allow_multi_discharge: bool = False,
) -> list[str]:
    """Leaves whose single-handed improvement to Supported raises the guarantee.

    Leaves already Supported cannot strictly raise anything and are skipped;
    each remaining candidate is re-evaluated with just that leaf raised.
    """
    base = propagate(structure, cases, assessment, tolerate_cycles, allow_multi_discharge)
    if guarantee not in base.guarantees:
        raise ConfidenceError("E602", f"unknown guarantee {guarantee!r}")
    baseline = base.guarantees[guarantee]
    if baseline == TriValue.SUPPORTED:
        return []
    evidence, environmental = assessment_key_universe(structure, cases)
    results: list[str] = []
    for key in sorted(evidence | environmental):
        default = TriValue.SUPPORTED if key in environmental else TriValue.UNKNOWN
        if assessment.get(key, default) == TriValue.SUPPORTED:
            continue
        merged = dict(assessment)
        merged[key] = TriValue.SUPPORTED
        revised = propagate(structure, cases, merged, tolerate_cycles, allow_multi_discharge)
        if revised.guarantees[guarantee] > baseline:
            results.append(key)
    return results
