"""Modular risk checklist, risk register, and safety-requirement tracing.

Risk assessment stays human work: the tool generates the per-contract and
per-refinement questions, keeps score of which targets have been assessed,
and checks that every recorded safety requirement is argued in the module
that covers its contract or refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .case_model import CLAIM, TARGET_CONTRACT, TARGET_REFINEMENT, AssuranceModule
from .diagnostics import Diagnostic, error, finalize
from .model import SpecificationStructure

CONTRACT_QUESTION = "Is there any way that the guarantee could not hold even if all assumptions are true?"
REFINEMENT_QUESTION = (
    "Is there any way that the refinement could be invalid, i.e. that the independent guarantee "
    "or assumption can be true while at the same time the dependent assumption is not?"
)

STATUS_OPEN = "open"
STATUS_MITIGATED = "mitigated"
STATUS_ACCEPTED = "accepted"
STATUS_NO_RISK_FOUND = "no_risk_found"
STATUSES = (STATUS_OPEN, STATUS_MITIGATED, STATUS_ACCEPTED, STATUS_NO_RISK_FOUND)


@dataclass(frozen=True)
class RiskPrompt:
    target: str  # contract qid or refinement id
    kind: str  # "contract_question" or "refinement_question"
    text: str


@dataclass(frozen=True)
class RiskItem:
    id: str
    target: str  # contract qid or refinement id
    description: str
    status: str
    mitigations: tuple[str, ...] = ()


@dataclass(frozen=True)
class SafetyRequirement:
    id: str
    text: str
    concerns: str  # contract qid or refinement id


@dataclass(frozen=True)
class RiskRegister:
    items: tuple[RiskItem, ...] = ()
    requirements: tuple[SafetyRequirement, ...] = ()


@dataclass(frozen=True)
class CoverageMetrics:
    covered: int
    total: int
    uncovered: tuple[str, ...]
    by_status: dict[str, int] = field(default_factory=dict)

    @property
    def fraction(self) -> float:
        return self.covered / self.total if self.total else 1.0


def _targets(structure: SpecificationStructure) -> tuple[list[str], list[str]]:
    contracts = sorted(f"{comp.name}.{c.id}" for comp, c in structure.contracts())
    refinements = sorted(ref.id for ref in structure.refinements)
    return contracts, refinements


def target_kind(target: str) -> str:
    """Contract targets are qualified (dotted); refinement ids are bare."""
    return TARGET_CONTRACT if "." in target else TARGET_REFINEMENT


def generate_checklist(structure: SpecificationStructure) -> list[RiskPrompt]:
    """One question per contract, then one per refinement, in stable order."""
    contracts, refinements = _targets(structure)
    prompts = [
        RiskPrompt(qid, "contract_question", f"Contract {qid}: {CONTRACT_QUESTION}") for qid in contracts
    ]
    prompts += [
        RiskPrompt(rid, "refinement_question", f"Refinement {rid}: {REFINEMENT_QUESTION}") for rid in refinements
    ]
    return prompts


def validate_register_targets(structure: SpecificationStructure, register: RiskRegister) -> list[Diagnostic]:
    contracts, refinements = _targets(structure)
    valid = set(contracts) | set(refinements)
    diags = [
        error("R101", f"risk item {item.id} targets unknown {item.target!r}")
        for item in register.items
        if item.target not in valid
    ]
    diags += [
        error("R101", f"safety requirement {req.id} concerns unknown {req.concerns!r}")
        for req in register.requirements
        if req.concerns not in valid
    ]
    return finalize(diags)


def coverage(
    structure: SpecificationStructure, register: RiskRegister
) -> tuple[CoverageMetrics, list[Diagnostic]]:
    """How much of the checklist has been assessed, any status counting."""
    diags = validate_register_targets(structure, register)
    contracts, refinements = _targets(structure)
    targets = contracts + refinements
    assessed = {item.target for item in register.items}
    uncovered = tuple(t for t in targets if t not in assessed)
    by_status = {status: 0 for status in STATUSES}
    for item in register.items:
        if item.status in by_status:
            by_status[item.status] += 1
    metrics = CoverageMetrics(len(targets) - len(uncovered), len(targets), uncovered, by_status)
    return metrics, diags


def trace_safety_requirements(
    register: RiskRegister, modules: list[AssuranceModule]
) -> list[Diagnostic]:
    """Each requirement must be claimed, via its tag, in the covering module."""
    diags: list[Diagnostic] = []
    by_target = {(m.target.kind, m.target.ref): m for m in modules}
    for req in register.requirements:
        module = by_target.get((target_kind(req.concerns), req.concerns))
        if module is None:
            diags.append(error("R201", f"no module targets {req.concerns} for safety requirement {req.id}"))
            continue
        tagged = any(n.kind == CLAIM and req.id in n.requirement_tags for n in module.nodes)
        if not tagged:
            diags.append(
                error("R201", f"safety requirement {req.id} has no tagged claim in module {module.id}")
            )
    return finalize(diags)
