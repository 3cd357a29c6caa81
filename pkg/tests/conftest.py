from __future__ import annotations

from pathlib import Path

import pytest

import contractcase as cc

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "ferry"
FERRY_SPEC = FIXTURES / "ferry.cbd"
FERRY_CASES = FIXTURES / "cases"
FERRY_REGISTER = FIXTURES / "register.json"
ASSESS_ALL_SUPPORTED = FIXTURES / "assessments" / "all_supported.json"
ASSESS_CONTRADICTED = FIXTURES / "assessments" / "sitaw_contradicted.json"


def read_source(path: Path) -> cc.SourceText:
    source, diags = cc.load_source(path)
    assert source is not None, diags
    return source


@pytest.fixture(scope="session")
def ferry_text() -> str:
    return FERRY_SPEC.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def ferry_structure() -> cc.SpecificationStructure:
    structure, diags = cc.parse_spec(read_source(FERRY_SPEC))
    assert structure is not None, [d.render() for d in diags]
    return structure


@pytest.fixture(scope="session")
def ferry_cases() -> cc.CaseSet:
    sources = [read_source(p) for p in sorted(FERRY_CASES.glob("*.json"))]
    cases, diags = cc.load_case_set(sources)
    assert cases is not None, [d.render() for d in diags]
    return cases


def load_assessment(path: Path) -> dict[str, cc.TriValue]:
    assessment, diags = cc.parse_assessment(read_source(path))
    assert assessment is not None, [d.render() for d in diags]
    return assessment


@pytest.fixture(scope="session")
def all_supported() -> dict[str, cc.TriValue]:
    return load_assessment(ASSESS_ALL_SUPPORTED)


@pytest.fixture(scope="session")
def sitaw_contradicted() -> dict[str, cc.TriValue]:
    return load_assessment(ASSESS_CONTRADICTED)


def run_cli(argv: list[str]) -> int:
    from contractcase.cli import main

    return main(argv)


# Single-edit variants of the ferry fixture, each tripping exactly one rule.
# Every entry: (name, text mutator, command, extra CLI flags, expected codes).
def _remove_refinement_r1(text: str) -> str:
    block = "refinement R1 allocated Ferry {\n  bind FerryDeployer.G1 -> MPCS.A1\n}\n"
    assert block in text
    return text.replace(block, "")


def _duplicate_binding(text: str) -> str:
    old = "refinement R2 allocated Ferry {\n  bind SITAW.G1 -> MPCS.A2\n}"
    new = "refinement R2 allocated Ferry {\n  bind SITAW.G1 -> MPCS.A2\n  bind SITAW.G1 -> MPCS.A2\n}"
    assert old in text
    return text.replace(old, new)


def _dangling_assumes(text: str) -> str:
    old = "assumes [A1, A2, A3]\n"
    new = "assumes [A1, A2, A9]\n"
    assert old in text
    return text.replace(old, new)


def _misallocated_refinement(text: str) -> str:
    old = "refinement R4 allocated Ferry"
    new = "refinement R4 allocated SITAW"
    assert old in text
    return text.replace(old, new)


def _sibling_inheritance(text: str) -> str:
    old = '  contract G1 "Maneuvers the ferry into desired vessel state." assumes [A1]\n'
    new = '  contract G1 "Maneuvers the ferry into desired vessel state." assumes [A1] inherits SITAW.G1\n'
    assert old in text
    return text.replace(old, new)


def _inheritance_cycle(text: str) -> str:
    old = 'contract G1 "Keeps a safe minimum separation distance to obstacles." assumes [Ai] uncertainty'
    new = 'contract G1 "Keeps a safe minimum separation distance to obstacles." assumes [Ai] inherits MPCS.G1 uncertainty'
    assert old in text
    return text.replace(old, new)


SEEDED_DEFECTS = [
    ("remove_discharger", _remove_refinement_r1, "check", [], {"V201"}),
    ("duplicate_binding", _duplicate_binding, "check", [], {"V202"}),
    ("dangling_reference", _dangling_assumes, "check", [], {"E212"}),
    ("misallocated_refinement", _misallocated_refinement, "check", [], {"V401"}),
    ("sibling_inheritance", _sibling_inheritance, "check", [], {"V501"}),
    # mutual inheritance also closes a delegation loop in the support graph
    ("inheritance_cycle", _inheritance_cycle, "check", [], {"V301", "V501", "V502"}),
    ("support_cycle_coarse", None, "check", ["--coarse"], {"V301"}),
    ("missing_module", None, "case", [], {"C101"}),
]
