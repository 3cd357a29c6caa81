"""In-memory model of a contract-based specification structure.

A structure is a set of components, each carrying assumptions and contracts
(a guarantee plus the assumptions it relies on), together with refinements
that bind supporting guarantees to dependent assumptions. Everything is
immutable after construction; operations are pure functions.
"""

from __future__ import annotations

import difflib
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass

from .diagnostics import Diagnostic, Location, error, finalize

CONTRACT = "contract"
ASSUMPTION = "assumption"

# Support graph edge kinds.
EDGE_ASSUMES = "assumes"
EDGE_BINDING = "binding"
EDGE_DELEGATION = "delegation"


@dataclass(frozen=True)
class QualifiedId:
    """A component-qualified reference to a contract or assumption."""

    component: str
    local: str
    kind: str  # CONTRACT or ASSUMPTION

    def __str__(self) -> str:
        return f"{self.component}.{self.local}"

    @property
    def text(self) -> str:
        return f"{self.component}.{self.local}"


@dataclass(frozen=True)
class Assumption:
    id: str
    statement: str
    environmental: bool = False


@dataclass(frozen=True)
class Contract:
    """One guarantee together with the local assumptions it relies on."""

    id: str
    guarantee_statement: str
    assumes: tuple[str, ...] = ()
    inherits: QualifiedId | None = None
    uncertainty_note: str | None = None


@dataclass(frozen=True)
class Binding:
    """One refinement arrow: a supporting guarantee discharges an assumption."""

    source: QualifiedId
    target: QualifiedId


@dataclass(frozen=True)
class Refinement:
    id: str
    allocated_to: str
    bindings: tuple[Binding, ...]


@dataclass(frozen=True)
class ComponentDecl:
    name: str
    description: str = ""
    parent: str | None = None
    assumptions: tuple[Assumption, ...] = ()
    contracts: tuple[Contract, ...] = ()


class ResolutionError(LookupError):
    """Raised when a qualified id does not resolve in a structure."""

    def __init__(self, qid: QualifiedId, suggestion: str | None):
        self.qid = qid
        self.suggestion = suggestion
        msg = f"{qid.kind} {qid} not found"
        if suggestion:
            msg += f" (did you mean {suggestion}?)"
        super().__init__(msg)


@dataclass(frozen=True)
class SpecificationStructure:
    """A validated set of components and refinements."""

    components: tuple[ComponentDecl, ...] = ()
    refinements: tuple[Refinement, ...] = ()

    def component(self, name: str) -> ComponentDecl | None:
        for comp in self.components:
            if comp.name == name:
                return comp
        return None

    def children_of(self, name: str) -> list[ComponentDecl]:
        return [c for c in self.components if c.parent == name]

    def ancestors_of(self, name: str) -> list[str]:
        chain: list[str] = []
        comp = self.component(name)
        while comp is not None and comp.parent is not None:
            chain.append(comp.parent)
            comp = self.component(comp.parent)
        return chain

    def contracts(self) -> Iterator[tuple[ComponentDecl, Contract]]:
        for comp in self.components:
            for contract in comp.contracts:
                yield comp, contract

    def assumptions(self) -> Iterator[tuple[ComponentDecl, Assumption]]:
        for comp in self.components:
            for assumption in comp.assumptions:
                yield comp, assumption

    def refinement(self, rid: str) -> Refinement | None:
        for ref in self.refinements:
            if ref.id == rid:
                return ref
        return None

    def contract_qids(self) -> list[QualifiedId]:
        return [QualifiedId(c.name, k.id, CONTRACT) for c, k in self.contracts()]

    def assumption_qids(self) -> list[QualifiedId]:
        return [QualifiedId(c.name, a.id, ASSUMPTION) for c, a in self.assumptions()]


@dataclass(frozen=True)
class SupportEdge:
    source: QualifiedId
    target: QualifiedId
    kind: str  # EDGE_ASSUMES, EDGE_BINDING, or EDGE_DELEGATION


@dataclass(frozen=True)
class SupportGraph:
    """Directed support relation between contracts and assumptions.

    Edges: assumption -> contract that assumes it, binding source contract ->
    target assumption, and a dashed delegation edge from an inherited contract
    to the contract inheriting it. Node and edge order is lexicographic, so
    the graph is a pure function of the structure.
    """

    nodes: tuple[QualifiedId, ...]
    edges: tuple[SupportEdge, ...]

    def edges_of_kind(self, kind: str) -> list[SupportEdge]:
        return [e for e in self.edges if e.kind == kind]


Locator = Callable[[tuple], "Location | None"]


def _no_location(_addr: tuple) -> Location | None:
    return None


def build_structure(
    components: Sequence[ComponentDecl],
    refinements: Sequence[Refinement],
    locate: Locator = _no_location,
) -> tuple[SpecificationStructure | None, list[Diagnostic]]:
    """Assemble a structure, checking every construction invariant.

    Returns ``(structure, [])`` when all invariants hold, otherwise
    ``(None, diagnostics)`` with the full list of violations. ``locate`` maps
    positional addresses (supplied by the parser) to source locations so that
    file-derived diagnostics carry line and column.
    """
    diags: list[Diagnostic] = []
    components = tuple(components)
    refinements = tuple(refinements)

    comp_names: dict[str, int] = {}
    for i, comp in enumerate(components):
        if comp.name in comp_names:
            diags.append(error("E200", f"duplicate component {comp.name}", locate(("component", i))))
        else:
            comp_names[comp.name] = i

    assumption_index: dict[tuple[str, str], Assumption] = {}
    contract_index: dict[tuple[str, str], Contract] = {}
    for i, comp in enumerate(components):
        seen_a: set[str] = set()
        for j, assumption in enumerate(comp.assumptions):
            if assumption.id in seen_a:
                diags.append(
                    error("E201", f"duplicate assumption id {comp.name}.{assumption.id}", locate(("assumption", i, j)))
                )
            seen_a.add(assumption.id)
            assumption_index[(comp.name, assumption.id)] = assumption
            if not assumption.statement.strip():
                diags.append(
                    error("E230", f"empty statement on assumption {comp.name}.{assumption.id}", locate(("assumption", i, j)))
                )
        seen_c: set[str] = set()
        for j, contract in enumerate(comp.contracts):
            if contract.id in seen_c:
                diags.append(
                    error("E202", f"duplicate contract id {comp.name}.{contract.id}", locate(("contract", i, j)))
                )
            seen_c.add(contract.id)
            contract_index[(comp.name, contract.id)] = contract
            if not contract.guarantee_statement.strip():
                diags.append(
                    error("E230", f"empty statement on contract {comp.name}.{contract.id}", locate(("contract", i, j)))
                )

    for i, comp in enumerate(components):
        if comp.parent is not None and comp.parent not in comp_names:
            diags.append(error("E210", f"dangling parent reference {comp.parent} on component {comp.name}", locate(("parent", i))))

    # Parent links must form a forest. Walk up from every component; a repeat
    # visit within one walk is a cycle.
    for i, comp in enumerate(components):
        seen: set[str] = {comp.name}
        cursor = comp.parent
        while cursor is not None and cursor in comp_names:
            if cursor in seen:
                diags.append(error("E211", f"parent cycle through component {comp.name}", locate(("parent", i))))
                break
            seen.add(cursor)
            cursor = components[comp_names[cursor]].parent

    for i, comp in enumerate(components):
        local_assumptions = {a.id for a in comp.assumptions}
        for j, contract in enumerate(comp.contracts):
            for k, aid in enumerate(contract.assumes):
                if aid not in local_assumptions:
                    diags.append(
                        error("E212", f"dangling assumes reference {comp.name}.{aid}", locate(("assumes", i, j, k)))
                    )
            if contract.inherits is not None:
                target = contract.inherits
                if (target.component, target.local) not in contract_index:
                    diags.append(
                        error("E213", f"dangling inherits reference {target}", locate(("inherits", i, j)))
                    )
                elif target.component == comp.name:
                    diags.append(
                        error(
                            "E214",
                            f"contract {comp.name}.{contract.id} inherits {target} on its own component",
                            locate(("inherits", i, j)),
                        )
                    )

    seen_r: set[str] = set()
    for r, ref in enumerate(refinements):
        if ref.id in seen_r:
            diags.append(error("E203", f"duplicate refinement id {ref.id}", locate(("refinement", r))))
        seen_r.add(ref.id)
        if ref.allocated_to not in comp_names:
            diags.append(
                error("E217", f"refinement {ref.id} allocated to unknown component {ref.allocated_to}", locate(("allocated", r)))
            )
        if not ref.bindings:
            diags.append(error("E221", f"refinement {ref.id} has an empty bindings list", locate(("refinement", r))))
        for b, binding in enumerate(ref.bindings):
            src = binding.source
            if (src.component, src.local) not in contract_index:
                diags.append(
                    error("E215", f"binding source {src} in refinement {ref.id} is not a contract", locate(("binding", r, b)))
                )
            tgt = binding.target
            target_assumption = assumption_index.get((tgt.component, tgt.local))
            if target_assumption is None:
                diags.append(
                    error("E216", f"binding target {tgt} in refinement {ref.id} is not an assumption", locate(("binding_target", r, b)))
                )
            elif target_assumption.environmental:
                diags.append(
                    error(
                        "E220",
                        f"binding in refinement {ref.id} targets environmental assumption {tgt}",
                        locate(("binding_target", r, b)),
                    )
                )

    if diags:
        return None, finalize(diags)
    return SpecificationStructure(components, refinements), []


def resolve(structure: SpecificationStructure, qid: QualifiedId) -> Contract | Assumption:
    """Look up a contract or assumption; raises :class:`ResolutionError`."""
    comp = structure.component(qid.component)
    if comp is not None:
        pool: Iterable = comp.contracts if qid.kind == CONTRACT else comp.assumptions
        for element in pool:
            if element.id == qid.local:
                return element
    candidates = [str(q) for q in (structure.contract_qids() if qid.kind == CONTRACT else structure.assumption_qids())]
    matches = difflib.get_close_matches(str(qid), candidates, n=1)
    raise ResolutionError(qid, matches[0] if matches else None)


def support_graph(structure: SpecificationStructure) -> SupportGraph:
    """Materialize the support relation of a valid structure."""
    nodes = structure.contract_qids() + structure.assumption_qids()
    edges: list[SupportEdge] = []
    for comp, contract in structure.contracts():
        contract_qid = QualifiedId(comp.name, contract.id, CONTRACT)
        for aid in contract.assumes:
            edges.append(SupportEdge(QualifiedId(comp.name, aid, ASSUMPTION), contract_qid, EDGE_ASSUMES))
        if contract.inherits is not None:
            edges.append(SupportEdge(contract.inherits, contract_qid, EDGE_DELEGATION))
    for ref in structure.refinements:
        for binding in ref.bindings:
            edges.append(SupportEdge(binding.source, binding.target, EDGE_BINDING))

    def node_key(q: QualifiedId) -> tuple:
        return (q.text, q.kind)

    def edge_key(e: SupportEdge) -> tuple:
        return (e.source.text, e.source.kind, e.target.text, e.target.kind, e.kind)

    return SupportGraph(tuple(sorted(nodes, key=node_key)), tuple(sorted(edges, key=edge_key)))


def coarsen(structure: SpecificationStructure) -> SpecificationStructure:
    """Attach every component assumption to every contract of that component.

    This reproduces a reading in which assumption lists are kept per component
    rather than per guarantee; useful for comparing against the fine-grained
    form, at the cost of coarser (possibly circular) support chains.
    """
    components = []
    for comp in structure.components:
        all_ids = tuple(a.id for a in comp.assumptions)
        contracts = tuple(
            Contract(c.id, c.guarantee_statement, all_ids, c.inherits, c.uncertainty_note) for c in comp.contracts
        )
        components.append(
            ComponentDecl(comp.name, comp.description, comp.parent, comp.assumptions, contracts)
        )
    return SpecificationStructure(tuple(components), structure.refinements)
