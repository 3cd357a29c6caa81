from __future__ import annotations

import contractcase as cc
from contractcase.diagnostics import Severity


def rebuild(structure: cc.SpecificationStructure, components=None, refinements=None):
    rebuilt, diags = cc.build_structure(
        components if components is not None else structure.components,
        refinements if refinements is not None else structure.refinements,
    )
    assert rebuilt is not None, [d.render() for d in diags]
    return rebuilt


def without_refinement(structure, rid):
    return rebuild(structure, refinements=[r for r in structure.refinements if r.id != rid])


def with_extra_binding(structure, rid, source, target):
    refinements = []
    for ref in structure.refinements:
        if ref.id == rid:
            binding = cc.Binding(
                cc.QualifiedId(*source, "contract"), cc.QualifiedId(*target, "assumption")
            )
            ref = cc.Refinement(ref.id, ref.allocated_to, ref.bindings + (binding,))
        refinements.append(ref)
    return rebuild(structure, refinements=refinements)


def test_ferry_discharges_cleanly(ferry_structure):
    assert cc.check_discharge(ferry_structure) == []


def test_removed_discharger_yields_v201(ferry_structure):
    # dropping FerryDeployer and its refinement leaves MPCS.A1 undischarged
    mutated = rebuild(
        ferry_structure,
        components=[c for c in ferry_structure.components if c.name != "FerryDeployer"],
        refinements=[r for r in ferry_structure.refinements if r.id != "R1"],
    )
    findings = cc.check_discharge(mutated)
    assert [d.code for d in findings] == ["V201"]
    assert "MPCS.A1" in findings[0].message


def test_duplicate_binding_yields_v202(ferry_structure):
    mutated = with_extra_binding(ferry_structure, "R2", ("SITAW", "G1"), ("MPCS", "A2"))
    findings = cc.check_discharge(mutated)
    assert [d.code for d in findings] == ["V202"]
    assert "MPCS.A2" in findings[0].message
    assert findings[0].severity is Severity.ERROR
    relaxed = cc.check_discharge(mutated, allow_multi_discharge=True)
    assert [d.severity for d in relaxed] == [Severity.WARNING]


def test_fine_grained_ferry_has_no_cycles(ferry_structure):
    assert cc.check_cycles(ferry_structure) == []


def test_coarse_ferry_has_the_known_cycle(ferry_structure):
    findings = cc.check_cycles(cc.coarsen(ferry_structure))
    assert [d.code for d in findings] == ["V301"]
    assert "DP.A1, DP.G1, MPCS.A4, MPCS.G2" in findings[0].message
    tolerated = cc.check_cycles(cc.coarsen(ferry_structure), tolerate_cycles=True)
    assert [d.severity for d in tolerated] == [Severity.WARNING]


def test_self_support_is_a_cycle():
    structure, _ = cc.build_structure(
        [
            cc.ComponentDecl(
                "X",
                assumptions=(cc.Assumption("A1", "loop in"),),
                contracts=(cc.Contract("G1", "loop out", assumes=("A1",)),),
            )
        ],
        [
            cc.Refinement(
                "R1", "X", (cc.Binding(cc.QualifiedId("X", "G1", "contract"), cc.QualifiedId("X", "A1", "assumption")),)
            )
        ],
    )
    findings = cc.check_cycles(structure)
    assert [d.code for d in findings] == ["V301"]
    assert "X.A1, X.G1" in findings[0].message


def test_ferry_allocation_is_clean(ferry_structure):
    assert cc.check_allocation(ferry_structure) == []


def test_misallocated_refinement_yields_v401(ferry_structure):
    refinements = [
        cc.Refinement(r.id, "SITAW", r.bindings) if r.id == "R4" else r for r in ferry_structure.refinements
    ]
    mutated = rebuild(ferry_structure, refinements=refinements)
    findings = cc.check_allocation(mutated)
    assert [d.code for d in findings] == ["V401"]
    assert "R4" in findings[0].message


def test_parent_plus_child_binding_is_allowed(ferry_structure):
    # an extra refinement binding the parent's own guarantee to a child assumption
    binding = cc.Binding(cc.QualifiedId("Ferry", "G1", "contract"), cc.QualifiedId("MPCS", "A1", "assumption"))
    mutated = rebuild(
        ferry_structure,
        refinements=list(ferry_structure.refinements) + [cc.Refinement("R6", "Ferry", (binding,))],
    )
    assert cc.check_allocation(mutated) == []  # discharge check complains, allocation must not


def test_ferry_inheritance_is_clean(ferry_structure):
    assert cc.check_inheritance(ferry_structure) == []


def test_sibling_inheritance_yields_v501():
    components = [
        cc.ComponentDecl("P"),
        cc.ComponentDecl("A", parent="P", contracts=(cc.Contract("G1", "left"),)),
        cc.ComponentDecl(
            "B", parent="P", contracts=(cc.Contract("G1", "right", inherits=cc.QualifiedId("A", "G1", "contract")),)
        ),
    ]
    structure, _ = cc.build_structure(components, [])
    findings = cc.check_inheritance(structure)
    assert [d.code for d in findings] == ["V501"]


def test_inheritance_cycle_yields_v502():
    components = [
        cc.ComponentDecl("A", contracts=(cc.Contract("G1", "left", inherits=cc.QualifiedId("B", "G1", "contract")),)),
        cc.ComponentDecl("B", contracts=(cc.Contract("G1", "right", inherits=cc.QualifiedId("A", "G1", "contract")),)),
    ]
    structure, _ = cc.build_structure(components, [])
    codes = {d.code for d in cc.check_inheritance(structure)}
    assert "V502" in codes
    assert "V501" in codes  # neither is an ancestor of the other


def test_validate_all_ferry(ferry_structure):
    report = cc.validate_all(ferry_structure)
    assert report.ok
    assert report.findings == ()
    assert report.stats == cc.StructureStats(
        components=5, contracts=7, assumptions=7, refinements=5, bindings=5, environmental=2
    )


def test_validate_all_empty_structure():
    report = cc.validate_all(cc.SpecificationStructure())
    assert report.ok
    assert report.stats == cc.StructureStats(0, 0, 0, 0, 0, 0)


def test_validate_all_two_seeded_defects_two_errors(ferry_structure):
    mutated = with_extra_binding(
        without_refinement(ferry_structure, "R1"), "R2", ("SITAW", "G1"), ("MPCS", "A2")
    )
    report = cc.validate_all(mutated)
    errors = [d for d in report.findings if d.severity is Severity.ERROR]
    assert sorted(d.code for d in errors) == ["V201", "V202"]


def test_checks_are_independent(ferry_structure):
    # a discharge defect must not change allocation or inheritance findings
    mutated = without_refinement(ferry_structure, "R1")
    assert cc.check_allocation(mutated) == cc.check_allocation(ferry_structure)
    assert cc.check_inheritance(mutated) == cc.check_inheritance(ferry_structure)
    assert cc.check_cycles(mutated) == cc.check_cycles(ferry_structure)


def test_defects_add_findings_monotonically(ferry_structure):
    base = set(cc.validate_all(ferry_structure).findings)
    for mutated in (
        without_refinement(ferry_structure, "R1"),
        with_extra_binding(ferry_structure, "R2", ("SITAW", "G1"), ("MPCS", "A2")),
        cc.coarsen(ferry_structure),
    ):
        found = set(cc.validate_all(mutated).findings)
        assert base <= found
        assert len(found) > len(base)
