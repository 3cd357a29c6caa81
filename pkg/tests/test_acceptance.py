"""Acceptance suite.

Each test enforces one release criterion at its stated volume and tolerance
(all exact) and prints one PASS/FAIL line; run with ``pytest -s`` to see the
lines as they complete.
"""

from __future__ import annotations

import functools
import json
import random

import contractcase as cc
from contractcase.confidence import TriValue
from contractcase.risk import CONTRACT_QUESTION, REFINEMENT_QUESTION

from conftest import ASSESS_CONTRADICTED, FERRY_CASES, FERRY_SPEC, SEEDED_DEFECTS, run_cli
from genstructs import gen_instance, gen_structure, leaf_universe, raise_assessment
from test_dot import BOX, CLUSTER, DASHED_EDGE, FERRY_SOLID_EDGES, SOLID_EDGE

S, U, C = TriValue.SUPPORTED, TriValue.UNKNOWN, TriValue.CONTRADICTED


def criterion(number: int, title: str):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"criterion {number} ({title}): FAIL")
                raise
            print(f"criterion {number} ({title}): PASS")

        return wrapper

    return decorate


@criterion(1, "fixture reproduction")
def test_criterion_1_fixture_reproduction(ferry_structure):
    report = cc.validate_all(ferry_structure)
    assert report.ok and report.findings == ()
    assert report.stats == cc.StructureStats(5, 7, 7, 5, 5, 2)

    dot = cc.export_dot(ferry_structure)
    assert len(BOX.findall(dot)) == 7
    assert len(CLUSTER.findall(dot)) == 5
    solid = SOLID_EDGE.findall(dot)
    assert set(solid) == FERRY_SOLID_EDGES and len(solid) == len(FERRY_SOLID_EDGES)
    # every binding pair of the fixture appears with its assumption label
    for ref in ferry_structure.refinements:
        for binding in ref.bindings:
            assert any(e[0] == str(binding.source) and e[2] == binding.target.local for e in solid)
    assert DASHED_EDGE.findall(dot) == [("Ferry.G1", "MPCS.G1")]


@criterion(2, "seeded-defect suite")
def test_criterion_2_seeded_defects(tmp_path, capsys, ferry_text):
    assert len(SEEDED_DEFECTS) >= 8
    for name, mutate, command, flags, expected in SEEDED_DEFECTS:
        if name == "missing_module":
            pruned = tmp_path / "cases"
            pruned.mkdir(exist_ok=True)
            for case_file in FERRY_CASES.glob("*.json"):
                if case_file.stem != "R2-case":
                    (pruned / case_file.name).write_text(
                        case_file.read_text(encoding="utf-8"), encoding="utf-8"
                    )
            argv = ["case", str(FERRY_SPEC), str(pruned), "--format", "json"]
        else:
            text = mutate(ferry_text) if mutate else ferry_text
            spec_file = tmp_path / f"{name}.cbd"
            spec_file.write_text(text, encoding="utf-8")
            argv = [command, str(spec_file), *flags, "--format", "json"]
        assert run_cli(argv) == 1, name
        payload = json.loads(capsys.readouterr().out)
        errors = {f["code"] for f in payload["findings"] if f["severity"] == "error"}
        assert errors == expected, (name, errors)


@criterion(3, "round-trip property, 500 structures")
def test_criterion_3_round_trip():
    for seed in range(500):
        structure = gen_structure(random.Random(seed))
        text = cc.serialize_spec(structure)
        reparsed, diags = cc.parse_spec(cc.SourceText("gen.cbd", text))
        assert diags == [], (seed, diags)
        assert reparsed == structure, seed


def _report_leq(a: cc.ConfidenceReport, b: cc.ConfidenceReport) -> bool:
    return (
        all(a.nodes[k] <= b.nodes[k] for k in a.nodes)
        and all(a.modules[k] <= b.modules[k] for k in a.modules)
        and all(a.guarantees[k] <= b.guarantees[k] for k in a.guarantees)
    )


@criterion(4, "propagation properties, 1000 instances each")
def test_criterion_4_propagation_properties():
    # monotonicity + boundedness on shared instances
    for seed in range(1000):
        rng = random.Random(seed)
        structure, cases, low = gen_instance(rng)
        high = raise_assessment(rng, low)
        report_low = cc.propagate(structure, cases, low)
        report_high = cc.propagate(structure, cases, high)
        assert _report_leq(report_low, report_high), seed
        for comp, contract in structure.contracts():
            qid = f"{comp.name}.{contract.id}"
            module_id = f"{comp.name}-{contract.id}-case"
            assert report_low.guarantees[qid] <= report_low.modules[module_id], seed

    # all-Supported totality
    for seed in range(1000):
        rng = random.Random(10_000_000 + seed)
        structure, cases, _ = gen_instance(rng, allow_undeveloped=False)
        assessment = {k: S for k in leaf_universe(structure, cases)}
        report = cc.propagate(structure, cases, assessment)
        assert report.sccs == (), seed
        for pool in (report.nodes, report.modules, report.guarantees):
            assert set(pool.values()) <= {S}, seed

    # cycle members capped at Unknown
    for seed in range(1000):
        rng = random.Random(20_000_000 + seed)
        structure, cases, assessment = gen_instance(rng, cyclic=True)
        report = cc.propagate(structure, cases, assessment, tolerate_cycles=True)
        assert report.sccs, seed
        for scc in report.sccs:
            for label in scc:
                for pool in (report.guarantees, report.modules):
                    if label in pool:
                        assert pool[label] <= U, (seed, label)


@criterion(5, "oracle equivalence, 100 instances each")
def test_criterion_5_oracle_equivalence():
    # what-if diff equals a fresh propagation with the merged assessment
    for seed in range(100):
        rng = random.Random(30_000_000 + seed)
        structure, cases, assessment = gen_instance(rng)
        universe = leaf_universe(structure, cases)
        overrides = {k: rng.choice(list(TriValue)) for k in universe if rng.random() < 0.3}
        diff = cc.what_if(structure, cases, assessment, overrides)
        merged = dict(assessment)
        merged.update(overrides)
        base = cc.propagate(structure, cases, assessment)
        target = cc.propagate(structure, cases, merged)
        for name in ("nodes", "modules", "guarantees"):
            patched = dict(getattr(base, name))
            for key, (before, after) in getattr(diff, name).items():
                assert patched[key] == before, seed
                assert before != after, seed
                patched[key] = after
            assert patched == getattr(target, name), seed

    # weakest links equal exhaustive single-override re-evaluation
    for seed in range(100):
        rng = random.Random(40_000_000 + seed)
        structure, cases, assessment = gen_instance(rng)
        guarantees = sorted(f"{c.name}.{k.id}" for c, k in structure.contracts())
        target = rng.choice(guarantees)
        baseline = cc.propagate(structure, cases, assessment).guarantees[target]
        expected = []
        for leaf in leaf_universe(structure, cases):
            merged = dict(assessment)
            merged[leaf] = S
            if cc.propagate(structure, cases, merged).guarantees[target] > baseline:
                expected.append(leaf)
        assert cc.weakest_links(structure, cases, assessment, target) == expected, seed


@criterion(6, "end-to-end chain check")
def test_criterion_6_end_to_end_chain(
    ferry_structure, ferry_cases, sitaw_contradicted, capsys
):
    # Hand-traced oracle: contradicting SITAW-G1-case.ev1 contradicts
    # SITAW.G1; refinement R2 carries that into MPCS.A2, sinking MPCS.G1 and
    # MPCS.G2; R5/R4 carry MPCS.G2 through DP.G1 into MPCS.A4; the away-claim
    # in Ferry-G1-case imports MPCS.G1, so Ferry.G1 ends Contradicted.
    report = cc.propagate(ferry_structure, ferry_cases, sitaw_contradicted)
    assert report.guarantees["SITAW.G1"] == C
    assert report.guarantees["MPCS.G1"] == C
    assert report.guarantees["Ferry.G1"] == C
    diff = cc.what_if(ferry_structure, ferry_cases, sitaw_contradicted, {"SITAW-G1-case.ev1": S})
    assert diff.guarantees["Ferry.G1"] == (C, S)

    # the CLI agrees end to end
    code = run_cli(
        [
            "confidence",
            str(FERRY_SPEC),
            str(FERRY_CASES),
            str(ASSESS_CONTRADICTED),
            "--what-if",
            "SITAW-G1-case.ev1=supported",
            "--format",
            "json",
        ]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["guarantees"]["Ferry.G1"] == "Contradicted"
    assert payload["diff"]["guarantees"]["Ferry.G1"] == ["Contradicted", "Supported"]


@criterion(7, "checklist arithmetic, 200 structures")
def test_criterion_7_checklist_arithmetic(ferry_structure):
    for seed in range(200):
        structure = gen_structure(random.Random(50_000_000 + seed))
        prompts = cc.generate_checklist(structure)
        expected = sum(1 for _ in structure.contracts()) + len(structure.refinements)
        assert len(prompts) == expected, seed

    prompts = cc.generate_checklist(ferry_structure)
    assert len(prompts) == 12
    for prompt in prompts:
        if prompt.kind == "contract_question":
            assert CONTRACT_QUESTION in prompt.text
            assert "guarantee could not hold even if all assumptions are true" in prompt.text
        else:
            assert REFINEMENT_QUESTION in prompt.text
            assert "refinement could be invalid" in prompt.text
