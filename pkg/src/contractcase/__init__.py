"""contractcase: contract-based specification structures as checkable risk constraints.

The library parses a textual specification language into an immutable
structure of components, contracts, and refinements; validates it (discharge,
cycles, allocation, inheritance); generates the modular risk checklist;
checks modular assurance cases; and propagates three-valued confidence from
evidence assessments to end-to-end guarantee confidence.
"""

from .case_model import (
    ArgumentNode,
    AssuranceModule,
    AwayEdge,
    CaseSet,
    CaseTarget,
    ModuleGraph,
    check_module_coverage,
    check_module_wellformed,
    link_away_claims,
)
from .casefiles import load_case_set, parse_assessment, parse_case_file, parse_register
from .confidence import (
    AssessmentMap,
    ConfidenceDiff,
    ConfidenceError,
    ConfidenceReport,
    TriValue,
    evaluate_module,
    propagate,
    weakest_links,
    what_if,
)
from .diagnostics import Diagnostic, Location, Severity, SourceText
from .dotexport import export_dot
from .dsl import load_source, parse_spec, serialize_spec
from .model import (
    Assumption,
    Binding,
    ComponentDecl,
    Contract,
    QualifiedId,
    Refinement,
    ResolutionError,
    SpecificationStructure,
    SupportEdge,
    SupportGraph,
    build_structure,
    coarsen,
    resolve,
    support_graph,
)
from .risk import (
    CoverageMetrics,
    RiskItem,
    RiskPrompt,
    RiskRegister,
    SafetyRequirement,
    coverage,
    generate_checklist,
    trace_safety_requirements,
)
from .validator import (
    StructureStats,
    ValidationReport,
    check_allocation,
    check_cycles,
    check_discharge,
    check_inheritance,
    compute_stats,
    validate_all,
)

__all__ = [
    "ArgumentNode",
    "AssessmentMap",
    "AssuranceModule",
    "Assumption",
    "AwayEdge",
    "Binding",
    "CaseSet",
    "CaseTarget",
    "ComponentDecl",
    "ConfidenceDiff",
    "ConfidenceError",
    "ConfidenceReport",
    "Contract",
    "CoverageMetrics",
    "Diagnostic",
    "Location",
    "ModuleGraph",
    "QualifiedId",
    "Refinement",
    "ResolutionError",
    "RiskItem",
    "RiskPrompt",
    "RiskRegister",
    "SafetyRequirement",
    "Severity",
    "SourceText",
    "SpecificationStructure",
    "StructureStats",
    "SupportEdge",
    "SupportGraph",
    "TriValue",
    "ValidationReport",
    "build_structure",
    "check_allocation",
    "check_cycles",
    "check_discharge",
    "check_inheritance",
    "check_module_coverage",
    "check_module_wellformed",
    "coarsen",
    "compute_stats",
    "coverage",
    "evaluate_module",
    "export_dot",
    "generate_checklist",
    "link_away_claims",
    "load_case_set",
    "load_source",
    "parse_assessment",
    "parse_case_file",
    "parse_register",
    "parse_spec",
    "propagate",
    "resolve",
    "serialize_spec",
    "support_graph",
    "trace_safety_requirements",
    "validate_all",
    "weakest_links",
    "what_if",
]
