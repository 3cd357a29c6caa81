"""Graphviz export of the specification structure.

One box per contract, clustered by component; solid edges follow refinement
bindings from the supporting guarantee to every contract relying on the bound
assumption, labeled with the assumption id; dashed edges mark inherited
responsibility. Output ordering is fully sorted, so identical structures
produce byte-identical text.
"""

from __future__ import annotations

from .model import SpecificationStructure

LABEL_WIDTH = 60


def _truncate(text: str) -> str:
    if len(text) <= LABEL_WIDTH:
        return text
    return text[: LABEL_WIDTH - 3] + "..."


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _solid_edges(structure: SpecificationStructure) -> list[tuple[str, str, str]]:
    """(source contract, target contract, assumption id) per binding fan-out."""
    edges: list[tuple[str, str, str]] = []
    for ref in structure.refinements:
        for binding in ref.bindings:
            target_comp = structure.component(binding.target.component)
            if target_comp is None:
                continue
            for contract in target_comp.contracts:
                if binding.target.local in contract.assumes:
                    edges.append(
                        (binding.source.text, f"{target_comp.name}.{contract.id}", binding.target.local)
                    )
    return sorted(edges)


def _dashed_edges(structure: SpecificationStructure) -> list[tuple[str, str]]:
    edges = [
        (contract.inherits.text, f"{comp.name}.{contract.id}")
        for comp, contract in structure.contracts()
        if contract.inherits is not None
    ]
    return sorted(edges)


def export_dot(structure: SpecificationStructure, by_component: bool = False) -> str:
    if by_component:
        return _export_components(structure)
    lines = ["digraph specification_structure {", "  rankdir=LR;", "  node [shape=box];"]
    for comp in sorted(structure.components, key=lambda c: c.name):
        lines.append(f"  subgraph cluster_{comp.name} {{")
        lines.append(f"    label={_quote(comp.name)};")
        for contract in sorted(comp.contracts, key=lambda c: c.id):
            qid = f"{comp.name}.{contract.id}"
            label = f"{qid}: {_truncate(contract.guarantee_statement)}"
            lines.append(f"    {_quote(qid)} [label={_quote(label)}];")
        lines.append("  }")
    for source, target, assumption_id in _solid_edges(structure):
        lines.append(f"  {_quote(source)} -> {_quote(target)} [label={_quote(assumption_id)}];")
    for source, target in _dashed_edges(structure):
        lines.append(f"  {_quote(source)} -> {_quote(target)} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _export_components(structure: SpecificationStructure) -> str:
    """Rollup view: one box per component, edges aggregated across bindings."""
    lines = ["digraph specification_structure {", "  rankdir=LR;", "  node [shape=box];"]
    for comp in sorted(structure.components, key=lambda c: c.name):
        lines.append(f"  {_quote(comp.name)};")
    solid: dict[tuple[str, str], set[str]] = {}
    for source, target, assumption_id in _solid_edges(structure):
        key = (source.split(".")[0], target.split(".")[0])
        solid.setdefault(key, set()).add(assumption_id)
    for (source, target), labels in sorted(solid.items()):
        label = ", ".join(sorted(labels))
        lines.append(f"  {_quote(source)} -> {_quote(target)} [label={_quote(label)}];")
    dashed = sorted({(s.split(".")[0], t.split(".")[0]) for s, t in _dashed_edges(structure)})
    for source, target in dashed:
        lines.append(f"  {_quote(source)} -> {_quote(target)} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
