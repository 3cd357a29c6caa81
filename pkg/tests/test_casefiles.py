from __future__ import annotations

import json

import pytest

import contractcase as cc


def parse_case(doc) -> tuple:
    return cc.parse_case_file(cc.SourceText("case.json", json.dumps(doc)))


def minimal_module(mid="MPCS-G2-case", ref="MPCS.G2", extra_nodes=(), children=("e1",)):
    return {
        "id": mid,
        "target": {"kind": "contract", "ref": ref},
        "top": "c1",
        "nodes": [
            {"id": "c1", "kind": "claim", "text": "fulfilled", "children": list(children)},
            {"id": "e1", "kind": "evidence", "text": "test report"},
            *extra_nodes,
        ],
    }


def test_minimal_module_parses():
    modules, diags = parse_case({"modules": [minimal_module()]})
    assert diags == []
    assert len(modules) == 1
    module = modules[0]
    assert module.target == cc.CaseTarget("contract", "MPCS.G2")
    assert module.top == "c1"
    assert module.node_map()["e1"].kind == "evidence"


def test_ferry_corpus_parses_12_modules(ferry_cases, ferry_structure):
    expected = sum(1 for _ in ferry_structure.contracts()) + len(ferry_structure.refinements)
    assert len(ferry_cases.modules) == expected == 12


def test_missing_child_is_e302():
    doc = {"modules": [minimal_module(children=("e1", "n7"))]}
    modules, diags = parse_case(doc)
    assert modules is None
    assert {d.code for d in diags} == {"E302"}


def test_missing_top_is_e302():
    doc = {"modules": [dict(minimal_module(), top="zz")]}
    modules, diags = parse_case(doc)
    assert modules is None
    assert {d.code for d in diags} == {"E302"}


def test_top_defaults_to_first_node():
    module = minimal_module()
    del module["top"]
    modules, diags = parse_case({"modules": [module]})
    assert diags == []
    assert modules[0].top == "c1"


def test_duplicate_node_id_is_e301():
    doc = {"modules": [minimal_module(extra_nodes=[{"id": "e1", "kind": "evidence", "text": "again"}])]}
    modules, diags = parse_case(doc)
    assert modules is None
    assert "E301" in {d.code for d in diags}


def test_unknown_node_kind_is_e303():
    doc = {"modules": [minimal_module(extra_nodes=[{"id": "x1", "kind": "belief", "text": "?"}])]}
    modules, diags = parse_case(doc)
    assert modules is None
    assert "E303" in {d.code for d in diags}


@pytest.mark.parametrize(
    "breaker",
    [
        lambda m: m.pop("target"),
        lambda m: m.__setitem__("nodes", []),
        lambda m: m.__setitem__("surprise", 1),
        lambda m: m["nodes"].append({"id": "a1", "kind": "away", "text": "no target"}),
        lambda m: m["nodes"].append({"id": "e2", "kind": "evidence", "text": "x", "target": "m2"}),
        lambda m: m["nodes"].append({"id": "e3", "kind": "evidence", "text": "x", "undeveloped": True}),
        lambda m: m.__setitem__("id", "dotted.id"),
    ],
)
def test_shape_violations_are_e300(breaker):
    module = minimal_module()
    breaker(module)
    modules, diags = parse_case({"modules": [module]})
    assert modules is None
    assert "E300" in {d.code for d in diags}


def test_malformed_json_is_e300_with_position():
    modules, diags = cc.parse_case_file(cc.SourceText("case.json", "{not json"))
    assert modules is None
    assert diags[0].code == "E300"
    assert diags[0].location.line == 1


def test_duplicate_module_id_across_files_is_e301():
    a = cc.SourceText("a.json", json.dumps({"modules": [minimal_module()]}))
    b = cc.SourceText("b.json", json.dumps({"modules": [minimal_module()]}))
    cases, diags = cc.load_case_set([a, b])
    assert cases is None
    assert [d.code for d in diags] == ["E301"]
    assert "a.json" in diags[0].message


def parse_assess(doc_text: str):
    return cc.parse_assessment(cc.SourceText("assess.json", doc_text))


def test_assessment_single_entry():
    assessment, diags = parse_assess('{"MPCS-G2-case.ev1": "supported"}')
    assert diags == []
    assert assessment == {"MPCS-G2-case.ev1": cc.TriValue.SUPPORTED}


def test_assessment_unknown_token_is_e400():
    assessment, diags = parse_assess('{"MPCS-G2-case.ev1": "probably"}')
    assert assessment is None
    assert [d.code for d in diags] == ["E400"]


def test_assessment_duplicate_key_is_e401():
    assessment, diags = parse_assess('{"k.e1": "supported", "k.e1": "unknown"}')
    assert assessment is None
    assert "E401" in {d.code for d in diags}


def test_assessment_environmental_key_parses():
    assessment, diags = parse_assess('{"SITAW.A1": "unknown"}')
    assert diags == []
    assert assessment == {"SITAW.A1": cc.TriValue.UNKNOWN}


def test_assessment_must_be_object():
    assessment, diags = parse_assess("[1, 2]")
    assert assessment is None
    assert [d.code for d in diags] == ["E402"]


def parse_reg(doc) -> tuple:
    return cc.parse_register(cc.SourceText("register.json", json.dumps(doc)))


def test_register_fixture_parses():
    source, diags = cc.load_source("fixtures/ferry/register.json")
    assert diags == []
    register, reg_diags = cc.parse_register(source)
    assert reg_diags == []
    assert len(register.items) == 12
    assert len(register.requirements) == 2


def test_register_invalid_status_is_r002():
    register, diags = parse_reg({"items": [{"id": "RI1", "target": "X.G1", "status": "fine"}]})
    assert register is None
    assert [d.code for d in diags] == ["R002"]


def test_register_duplicate_id_is_r003():
    register, diags = parse_reg(
        {
            "items": [
                {"id": "RI1", "target": "X.G1", "status": "open"},
                {"id": "RI1", "target": "X.G2", "status": "open"},
            ]
        }
    )
    assert register is None
    assert "R003" in {d.code for d in diags}


def test_register_unknown_mitigation_is_r102():
    register, diags = parse_reg(
        {"items": [{"id": "RI1", "target": "X.G1", "status": "mitigated", "mitigations": ["SR9"]}]}
    )
    assert register is None
    assert "R102" in {d.code for d in diags}


def test_register_mitigated_without_mitigations_is_r103():
    register, diags = parse_reg({"items": [{"id": "RI1", "target": "X.G1", "status": "mitigated"}]})
    assert register is None
    assert "R103" in {d.code for d in diags}


def test_register_malformed_is_r001():
    register, diags = parse_reg({"items": ["not an object"]})
    assert register is None
    assert "R001" in {d.code for d in diags}
