from __future__ import annotations

import contractcase as cc
from contractcase.diagnostics import Severity


def parse(text: str):
    return cc.parse_spec(cc.SourceText("test.cbd", text))


def test_ferry_fixture_counts(ferry_structure):
    assert len(ferry_structure.components) == 5
    assert sum(1 for _ in ferry_structure.contracts()) == 7
    assert len(ferry_structure.refinements) == 5


def test_empty_file_is_empty_structure():
    structure, diags = parse("")
    assert diags == []
    assert structure == cc.SpecificationStructure()


def test_comment_only_file():
    structure, _ = parse("# nothing here\n   # still nothing\n")
    assert structure == cc.SpecificationStructure()


def test_unclosed_brace_reports_e101_at_opening_brace():
    text = 'component X {\n  assumption A1 "present"\n'
    structure, diags = parse(text)
    assert structure is None
    e101 = [d for d in diags if d.code == "E101"]
    assert len(e101) == 1
    assert e101[0].location.line == 1
    assert e101[0].location.column == text.index("{") + 1


def test_two_syntax_errors_give_two_diagnostics():
    text = 'component X {\n  assumption "missing id"\n}\ncomponent Y {\n  contract "missing id"\n}\n'
    structure, diags = parse(text)
    assert structure is None
    assert len([d for d in diags if d.severity is Severity.ERROR]) >= 2


def test_diagnostics_are_deterministic():
    text = 'component X {\n  contract {\n}\nrefinement R allocated {\n}\n'
    _, first = parse(text)
    _, second = parse(text)
    assert first == second


def test_round_trip_ferry(ferry_structure):
    text = cc.serialize_spec(ferry_structure)
    reparsed, diags = parse(text)
    assert diags == []
    assert reparsed == ferry_structure
    # canonical form is a fixpoint
    assert cc.serialize_spec(reparsed) == text


def test_serialize_empty_structure_is_empty_text():
    assert cc.serialize_spec(cc.SpecificationStructure()) == ""


def test_serialize_single_contract_component():
    structure, _ = cc.build_structure(
        [cc.ComponentDecl("X", contracts=(cc.Contract("G1", "does the thing"),))], []
    )
    assert cc.serialize_spec(structure) == 'component X {\n  contract G1 "does the thing"\n}\n'


def test_string_escapes_round_trip():
    stmt = 'say "hi"\\twice\nplease\ttabbed'
    structure, _ = cc.build_structure(
        [cc.ComponentDecl("X", contracts=(cc.Contract("G1", stmt),))], []
    )
    text = cc.serialize_spec(structure)
    reparsed, diags = parse(text)
    assert diags == []
    assert next(reparsed.contracts())[1].guarantee_statement == stmt


def test_unterminated_string_is_e102():
    structure, diags = parse('component X {\n  contract G1 "no closing\n}\n')
    assert structure is None
    assert "E102" in {d.code for d in diags}


def test_invalid_character_is_e103():
    structure, diags = parse("component X { contract G1 $ }")
    assert structure is None
    assert "E103" in {d.code for d in diags}


def test_keywords_are_reserved():
    structure, diags = parse("component component {\n}\n")
    assert structure is None
    assert any(d.code == "E100" for d in diags)


def test_uncertainty_note_round_trips():
    text = 'component X {\n  contract G1 "acts" uncertainty "emergent property"\n}\n'
    structure, diags = parse(text)
    assert diags == []
    contract = next(structure.contracts())[1]
    assert contract.uncertainty_note == "emergent property"
    assert cc.serialize_spec(structure) == text


def test_qid_with_spaces_rejected_in_canonical_but_parsed():
    # whitespace around the dot is tolerated on input
    text = 'component X {\n  assumption A1 "in"\n  contract G1 "out"\n}\nrefinement R allocated X {\n  bind X . G1 -> X.A1\n}\n'
    structure, diags = parse(text)
    assert diags == []
    assert structure.refinements[0].bindings[0].source == cc.QualifiedId("X", "G1", "contract")


def test_binding_environmental_assumption_is_e220():
    text = (
        'component X {\n  assumption A1 "world" environmental\n  contract G1 "acts"\n}\n'
        "refinement R allocated X {\n  bind X.G1 -> X.A1\n}\n"
    )
    structure, diags = parse(text)
    assert structure is None
    assert {d.code for d in diags} == {"E220"}
    assert all(d.location is not None for d in diags)


def test_structural_diagnostics_carry_locations():
    text = 'component X {\n  contract G1 "acts" assumes [A9]\n}\n'
    structure, diags = parse(text)
    assert structure is None
    assert diags[0].code == "E212"
    assert diags[0].location.line == 2


def test_load_source_rejects_invalid_utf8(tmp_path):
    path = tmp_path / "bad.cbd"
    path.write_bytes(b"component X {\xff}\n")
    source, diags = cc.load_source(path)
    assert source is None
    assert [d.code for d in diags] == ["E000"]
