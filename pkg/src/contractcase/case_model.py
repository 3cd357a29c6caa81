"""Modular assurance cases: one module per contract and one per refinement.

A module is a Toulmin-style argument tree of claims, inferences, and
evidence. Away nodes are leaves that cite another module's top claim; they
are the only interface between modules.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import Diagnostic, error, finalize, warning
from .model import SpecificationStructure
from .scc import nontrivial_components

CLAIM = "claim"
INFERENCE = "inference"
EVIDENCE = "evidence"
AWAY = "away"

NODE_KINDS = (CLAIM, INFERENCE, EVIDENCE, AWAY)

# Which child kinds each parent kind admits. Evidence and away nodes are
# leaves; a claim is argued by inferences (or directly by evidence/away),
# never directly by another claim.
_ALLOWED_CHILDREN = {
    CLAIM: {INFERENCE, EVIDENCE, AWAY},
    INFERENCE: {CLAIM, EVIDENCE, AWAY},
}

TARGET_CONTRACT = "contract"
TARGET_REFINEMENT = "refinement"


@dataclass(frozen=True)
class CaseTarget:
    """What a module argues for: a contract qid or a refinement id."""

    kind: str  # TARGET_CONTRACT or TARGET_REFINEMENT
    ref: str  # "Component.Id" for contracts, refinement id otherwise

    def __str__(self) -> str:
        return f"{self.kind} {self.ref}"


@dataclass(frozen=True)
class ArgumentNode:
    id: str
    kind: str
    text: str = ""
    children: tuple[str, ...] = ()
    away_target: str | None = None
    requirement_tags: tuple[str, ...] = ()
    undeveloped: bool = False


@dataclass(frozen=True)
class AssuranceModule:
    id: str
    target: CaseTarget
    nodes: tuple[ArgumentNode, ...]
    top: str

    def node_map(self) -> dict[str, ArgumentNode]:
        return {n.id: n for n in self.nodes}


@dataclass(frozen=True)
class CaseSet:
    modules: tuple[AssuranceModule, ...]

    def by_id(self, module_id: str) -> AssuranceModule | None:
        for module in self.modules:
            if module.id == module_id:
                return module
        return None

    def index(self) -> dict[CaseTarget, AssuranceModule]:
        """Target -> module map; meaningful once coverage has passed."""
        return {m.target: m for m in self.modules}


@dataclass(frozen=True)
class AwayEdge:
    source_module: str
    away_node: str
    target_module: str


@dataclass(frozen=True)
class ModuleGraph:
    """Inter-module dependency graph: one node per module, one edge per away node."""

    nodes: tuple[str, ...]
    edges: tuple[AwayEdge, ...]


def _structure_targets(structure: SpecificationStructure) -> list[CaseTarget]:
    targets = [
        CaseTarget(TARGET_CONTRACT, f"{comp.name}.{contract.id}") for comp, contract in structure.contracts()
    ]
    targets += [CaseTarget(TARGET_REFINEMENT, ref.id) for ref in structure.refinements]
    return targets


def check_module_coverage(structure: SpecificationStructure, cases: CaseSet) -> list[Diagnostic]:
    """Every contract and refinement needs exactly one module."""
    diags: list[Diagnostic] = []
    wanted = _structure_targets(structure)
    wanted_set = set(wanted)
    seen: dict[CaseTarget, str] = {}
    for module in cases.modules:
        if module.target not in wanted_set:
            diags.append(error("C102", f"module {module.id} targets unknown {module.target}"))
        elif module.target in seen:
            diags.append(
                error("C103", f"modules {seen[module.target]} and {module.id} both target {module.target}")
            )
        else:
            seen[module.target] = module.id
    for target in wanted:
        if target not in seen:
            diags.append(error("C101", f"no module targets {target}"))
    return finalize(diags)


def check_module_wellformed(module: AssuranceModule, strict: bool = False) -> list[Diagnostic]:
    """Structural rules on one module's argument tree.

    With ``strict`` set, claims may not cite evidence directly: every piece
    of evidence must sit under an explicit inference step.
    """
    diags: list[Diagnostic] = []
    nodes = module.node_map()
    where = f"in module {module.id}"

    top = nodes.get(module.top)
    if top is None or top.kind != CLAIM:
        diags.append(error("C205", f"top node {module.top} is not a claim {where}"))

    for node in module.nodes:
        if node.kind in (EVIDENCE, AWAY) and node.children:
            diags.append(error("C204", f"{node.kind} node {node.id} has children {where}"))
        if node.kind == CLAIM and not node.children and not node.undeveloped:
            diags.append(error("C203", f"claim {node.id} has no support and is not marked undeveloped {where}"))
        allowed = _ALLOWED_CHILDREN.get(node.kind)
        if allowed is None:
            continue
        if strict and node.kind == CLAIM:
            allowed = allowed - {EVIDENCE}
        for child_id in node.children:
            child = nodes.get(child_id)
            if child is not None and child.kind not in allowed:
                diags.append(
                    error("C206", f"{node.kind} node {node.id} has {child.kind} child {child_id} {where}")
                )

    # Cycle detection over intra-module children references.
    graph = {n.id: [c for c in n.children if c in nodes] for n in module.nodes}
    for component in nontrivial_components(graph):
        members = ", ".join(sorted(component))
        diags.append(error("C201", f"argument nodes form a cycle ({members}) {where}"))

    # Reachability from the top claim.
    reachable: set[str] = set()
    frontier = [module.top] if module.top in nodes else []
    while frontier:
        nid = frontier.pop()
        if nid in reachable:
            continue
        reachable.add(nid)
        frontier.extend(graph.get(nid, []))
    for node in module.nodes:
        if node.id not in reachable:
            diags.append(error("C202", f"node {node.id} is unreachable from the top claim {where}"))

    return finalize(diags)


def link_away_claims(
    structure: SpecificationStructure,
    cases: CaseSet,
    tolerate_cycles: bool = False,
) -> tuple[ModuleGraph, list[Diagnostic]]:
    """Resolve away-claims into the inter-module dependency graph.

    Also enforces the delegation rule: when a contract inherits another, the
    inherited contract's module must cite the inheriting contract's module
    through an away-claim (the responsibility is discharged there).
    """
    diags: list[Diagnostic] = []
    known = {m.id for m in cases.modules}
    edges: list[AwayEdge] = []
    for module in cases.modules:
        for node in module.nodes:
            if node.kind != AWAY:
                continue
            target = node.away_target or ""
            if target not in known:
                diags.append(error("C301", f"away node {node.id} in module {module.id} targets unknown module {target!r}"))
                continue
            edges.append(AwayEdge(module.id, node.id, target))

    index = cases.index()
    for comp, contract in structure.contracts():
        if contract.inherits is None:
            continue
        inheriting = index.get(CaseTarget(TARGET_CONTRACT, f"{comp.name}.{contract.id}"))
        inherited = index.get(CaseTarget(TARGET_CONTRACT, contract.inherits.text))
        if inheriting is None or inherited is None:
            continue  # coverage findings already name the missing module
        cited = any(e.source_module == inherited.id and e.target_module == inheriting.id for e in edges)
        if not cited:
            diags.append(
                error(
                    "C302",
                    f"module {inherited.id} must contain an away-claim to {inheriting.id} "
                    f"(contract {comp.name}.{contract.id} inherits {contract.inherits})",
                )
            )

    adjacency: dict[str, list[str]] = {m.id: [] for m in cases.modules}
    for edge in edges:
        adjacency[edge.source_module].append(edge.target_module)
    for component in nontrivial_components(adjacency):
        members = ", ".join(sorted(component))
        make = warning if tolerate_cycles else error
        diags.append(make("C303", f"assurance modules form a cycle ({members})"))

    graph = ModuleGraph(
        tuple(sorted(known)),
        tuple(sorted(edges, key=lambda e: (e.source_module, e.away_node, e.target_module))),
    )
    return graph, finalize(diags)
