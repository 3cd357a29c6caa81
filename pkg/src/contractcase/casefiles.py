"""Loaders for the JSON artifact files: assurance cases, assessments, registers.

These are tool-to-tool formats, so they use plain JSON rather than a second
bespoke grammar. Parsing is strict: unknown keys, wrong shapes, and unknown
tokens are errors, because a silently dropped field in an assurance artifact
is worse than a loud one. Documented examples of each format ship in the
repository.
"""

from __future__ import annotations

import json
from typing import Any

from .case_model import AWAY, CLAIM, NODE_KINDS, ArgumentNode, AssuranceModule, CaseSet, CaseTarget
from .confidence import AssessmentMap, TriValue
from .diagnostics import Diagnostic, Location, SourceText, error, has_errors
from .risk import STATUSES, RiskItem, RiskRegister, SafetyRequirement

_TARGET_KINDS = ("contract", "refinement")


def _top_location(source: SourceText) -> Location:
    return Location(source.path, 1, 1)


def _load_json(
    source: SourceText, malformed_code: str, pairs_hook=None
) -> tuple[Any, list[Diagnostic]]:
    try:
        return json.loads(source.content, object_pairs_hook=pairs_hook), []
    except json.JSONDecodeError as exc:
        loc = Location(source.path, exc.lineno, exc.colno)
        return None, [error(malformed_code, f"malformed document: {exc.msg}", loc)]


def _require(condition: bool, diags: list[Diagnostic], code: str, message: str, loc: Location) -> bool:
    if not condition:
        diags.append(error(code, message, loc))
    return condition


_NODE_KEYS = {"id", "kind", "text", "children", "target", "requirement_tags", "undeveloped"}
_MODULE_KEYS = {"id", "target", "top", "nodes"}


def _parse_node(raw: Any, module_id: str, loc: Location, diags: list[Diagnostic]) -> ArgumentNode | None:
    if not isinstance(raw, dict):
        diags.append(error("E300", f"node in module {module_id} is not an object", loc))
        return None
    unknown = sorted(set(raw) - _NODE_KEYS)
    if unknown:
        diags.append(error("E300", f"node in module {module_id} has unknown keys: {', '.join(unknown)}", loc))
        return None
    node_id = raw.get("id")
    kind = raw.get("kind")
    if not isinstance(node_id, str) or not node_id or "." in node_id:
        diags.append(error("E300", f"node in module {module_id} needs a dot-free string id", loc))
        return None
    if kind not in NODE_KINDS:
        diags.append(error("E303", f"unknown node kind {kind!r} on node {node_id} in module {module_id}", loc))
        return None
    text = raw.get("text", "")
    children = raw.get("children", [])
    ok = _require(isinstance(text, str), diags, "E300", f"node {node_id}: text must be a string", loc)
    ok &= _require(
        isinstance(children, list) and all(isinstance(c, str) for c in children),
        diags,
        "E300",
        f"node {node_id}: children must be a list of node ids",
        loc,
    )
    away_target = raw.get("target")
    if kind == AWAY:
        ok &= _require(
            isinstance(away_target, str) and bool(away_target),
            diags,
            "E300",
            f"away node {node_id} in module {module_id} needs a target module id",
            loc,
        )
    else:
        ok &= _require(
            away_target is None,
            diags,
            "E300",
            f"{kind} node {node_id} in module {module_id} must not carry a target",
            loc,
        )
    tags = raw.get("requirement_tags", [])
    undeveloped = raw.get("undeveloped", False)
    if kind == CLAIM:
        ok &= _require(
            isinstance(tags, list) and all(isinstance(t, str) for t in tags),
            diags,
            "E300",
            f"claim {node_id}: requirement_tags must be a list of strings",
            loc,
        )
        ok &= _require(
            isinstance(undeveloped, bool),
            diags,
            "E300",
            f"claim {node_id}: undeveloped must be a boolean",
            loc,
        )
    else:
        ok &= _require(
            "requirement_tags" not in raw and "undeveloped" not in raw,
            diags,
            "E300",
            f"{kind} node {node_id}: requirement_tags/undeveloped apply to claims only",
            loc,
        )
    if not ok:
        return None
    return ArgumentNode(
        id=node_id,
        kind=kind,
        text=text,
        children=tuple(children),
        away_target=away_target if kind == AWAY else None,
        requirement_tags=tuple(tags) if kind == CLAIM else (),
        undeveloped=bool(undeveloped) if kind == CLAIM else False,
    )


def parse_case_file(source: SourceText) -> tuple[list[AssuranceModule] | None, list[Diagnostic]]:
    """Parse one case file into assurance modules.

    Away-claim targets are kept as written; whether they resolve is a case
    set question answered later by the away-link check.
    """
    loc = _top_location(source)
    doc, diags = _load_json(source, "E300")
    if diags:
        return None, diags
    if not isinstance(doc, dict) or set(doc) != {"modules"} or not isinstance(doc["modules"], list):
        return None, [error("E300", 'case file must be an object with a single "modules" list', loc)]

    modules: list[AssuranceModule] = []
    for raw in doc["modules"]:
        before = len(diags)
        if not isinstance(raw, dict):
            diags.append(error("E300", "module entry is not an object", loc))
            continue
        unknown = sorted(set(raw) - _MODULE_KEYS)
        if unknown:
            diags.append(error("E300", f"module has unknown keys: {', '.join(unknown)}", loc))
            continue
        module_id = raw.get("id")
        if not isinstance(module_id, str) or not module_id or "." in module_id:
            diags.append(error("E300", "module needs a dot-free string id", loc))
            continue
        target_raw = raw.get("target")
        if (
            not isinstance(target_raw, dict)
            or set(target_raw) != {"kind", "ref"}
            or target_raw.get("kind") not in _TARGET_KINDS
            or not isinstance(target_raw.get("ref"), str)
        ):
            diags.append(
                error("E300", f'module {module_id} needs a target {{"kind", "ref"}} object', loc)
            )
            continue
        nodes_raw = raw.get("nodes")
        if not isinstance(nodes_raw, list) or not nodes_raw:
            diags.append(error("E300", f"module {module_id} needs a non-empty nodes list", loc))
            continue
        nodes: list[ArgumentNode] = []
        seen: set[str] = set()
        bad = False
        for node_raw in nodes_raw:
            node = _parse_node(node_raw, module_id, loc, diags)
            if node is None:
                bad = True
                continue
            if node.id in seen:
                diags.append(error("E301", f"duplicate node id {node.id} in module {module_id}", loc))
                bad = True
                continue
            seen.add(node.id)
            nodes.append(node)
        if bad:
            continue
        for node in nodes:
            for child in node.children:
                if child not in seen:
                    diags.append(
                        error("E302", f"node {node.id} in module {module_id} cites missing node {child}", loc)
                    )
        top = raw.get("top", nodes[0].id)
        if not isinstance(top, str) or top not in seen:
            diags.append(error("E302", f"module {module_id} cites missing top node {top!r}", loc))
        if len(diags) > before:
            continue
        modules.append(
            AssuranceModule(
                id=module_id,
                target=CaseTarget(target_raw["kind"], target_raw["ref"]),
                nodes=tuple(nodes),
                top=top,
            )
        )
    if has_errors(diags):
        return None, diags
    return modules, []


def load_case_set(sources: list[SourceText]) -> tuple[CaseSet | None, list[Diagnostic]]:
    """Assemble a case set from several files, rejecting duplicate module ids."""
    diags: list[Diagnostic] = []
    modules: list[AssuranceModule] = []
    seen: dict[str, str] = {}
    for source in sources:
        parsed, file_diags = parse_case_file(source)
        diags += file_diags
        if parsed is None:
            continue
        for module in parsed:
            if module.id in seen:
                diags.append(
                    error(
                        "E301",
                        f"duplicate module id {module.id} (also in {seen[module.id]})",
                        _top_location(source),
                    )
                )
                continue
            seen[module.id] = source.path
            modules.append(module)
    if has_errors(diags):
        return None, diags
    return CaseSet(tuple(modules)), diags


def parse_assessment(source: SourceText) -> tuple[AssessmentMap | None, list[Diagnostic]]:
    """Parse a flat JSON object mapping leaf ids to confidence tokens."""
    loc = _top_location(source)
    diags: list[Diagnostic] = []

    def pairs_hook(pairs):
        keys: set[str] = set()
        for key, _value in pairs:
            if key in keys:
                diags.append(error("E401", f"duplicate key {key}", loc))
            keys.add(key)
        return dict(pairs)

    doc, load_diags = _load_json(source, "E402", pairs_hook)
    if load_diags:
        return None, load_diags
    if not isinstance(doc, dict):
        return None, [error("E402", "assessment must be a JSON object", loc)]
    entries: dict[str, TriValue] = {}
    for key, token in doc.items():
        value = TriValue.from_token(token) if isinstance(token, str) else None
        if value is None:
            diags.append(
                error("E400", f"unknown value token {token!r} for {key} (use supported|unknown|contradicted)", loc)
            )
            continue
        entries[key] = value
    if has_errors(diags):
        return None, diags
    return entries, []


_ITEM_KEYS = {"id", "target", "description", "status", "mitigations"}
_REQ_KEYS = {"id", "text", "concerns"}


def parse_register(source: SourceText) -> tuple[RiskRegister | None, list[Diagnostic]]:
    """Parse a risk register: assessed risk items plus safety requirements."""
    loc = _top_location(source)
    doc, diags = _load_json(source, "R001")
    if diags:
        return None, diags
    if not isinstance(doc, dict) or not set(doc) <= {"items", "requirements"}:
        return None, [error("R001", 'register must be an object with "items" and/or "requirements"', loc)]

    requirements: list[SafetyRequirement] = []
    req_ids: set[str] = set()
    for raw in doc.get("requirements", []):
        if not isinstance(raw, dict) or set(raw) != _REQ_KEYS or not all(
            isinstance(raw[k], str) and raw[k] for k in _REQ_KEYS
        ):
            diags.append(error("R001", "requirement entries need string id, text, and concerns", loc))
            continue
        if raw["id"] in req_ids:
            diags.append(error("R003", f"duplicate requirement id {raw['id']}", loc))
            continue
        req_ids.add(raw["id"])
        requirements.append(SafetyRequirement(raw["id"], raw["text"], raw["concerns"]))

    items: list[RiskItem] = []
    item_ids: set[str] = set()
    for raw in doc.get("items", []):
        if not isinstance(raw, dict) or not {"id", "target", "status"} <= set(raw) or not set(raw) <= _ITEM_KEYS:
            diags.append(error("R001", "risk items need id, target, and status", loc))
            continue
        item_id = raw["id"]
        if not isinstance(item_id, str) or not item_id:
            diags.append(error("R001", "risk item id must be a non-empty string", loc))
            continue
        if item_id in item_ids:
            diags.append(error("R003", f"duplicate risk item id {item_id}", loc))
            continue
        item_ids.add(item_id)
        status = raw["status"]
        if status not in STATUSES:
            diags.append(
                error("R002", f"risk item {item_id} has invalid status {status!r} (use {'|'.join(STATUSES)})", loc)
            )
            continue
        mitigations = raw.get("mitigations", [])
        if not isinstance(mitigations, list) or not all(isinstance(m, str) for m in mitigations):
            diags.append(error("R001", f"risk item {item_id}: mitigations must be a list of requirement ids", loc))
            continue
        for mid in mitigations:
            if mid not in req_ids:
                diags.append(error("R102", f"risk item {item_id} cites unknown requirement {mid}", loc))
        if status == "mitigated" and not mitigations:
            diags.append(error("R103", f"risk item {item_id} is mitigated but lists no mitigations", loc))
        target = raw.get("target")
        description = raw.get("description", "")
        if not isinstance(target, str) or not isinstance(description, str):
            diags.append(error("R001", f"risk item {item_id}: target and description must be strings", loc))
            continue
        items.append(RiskItem(item_id, target, description, status, tuple(mitigations)))

    if has_errors(diags):
        return None, diags
    return RiskRegister(tuple(items), tuple(requirements)), []
