"""FastAPI application wrapping the core operations."""

from __future__ import annotations

from importlib.metadata import PackageNotFoundError, version

from fastapi import FastAPI

from ..diagnostics import SourceText
from ..reporting import (
    CommandResult,
    RunOptions,
    run_case,
    run_check,
    run_confidence,
    run_export_dot,
    run_report,
    run_risks,
)
from .schemas import (
    CaseRequest,
    CheckRequest,
    CommandResponse,
    ConfidenceRequest,
    ExportDotRequest,
    HealthResponse,
    NamedText,
    OptionFlags,
    ReportRequest,
    RisksRequest,
)


def _source(named: NamedText) -> SourceText:
    return SourceText(named.name, named.text)


def _optional_source(named: NamedText | None) -> SourceText | None:
    return None if named is None else _source(named)


def _options(flags: OptionFlags) -> RunOptions:
    return RunOptions(
        coarse=flags.coarse,
        tolerate_cycles=flags.tolerate_cycles,
        allow_multi_discharge=flags.allow_multi_discharge,
    )


def _respond(result: CommandResult) -> CommandResponse:
    return CommandResponse(
        command=result.command,
        exit_code=result.exit_code,
        text=result.text,
        payload=result.payload,
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="contractcase",
        description="Specification structure checking, modular risk checklists, "
        "assurance case analysis, and three-valued confidence propagation.",
    )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        try:
            pkg_version = version("contractcase")
        except PackageNotFoundError:
            pkg_version = "unknown"
        return HealthResponse(status="ok", version=pkg_version)

    @app.post("/v1/check", response_model=CommandResponse)
    def check(request: CheckRequest) -> CommandResponse:
        return _respond(run_check(_source(request.spec), _options(request.options)))

    @app.post("/v1/risks", response_model=CommandResponse)
    def risks(request: RisksRequest) -> CommandResponse:
        return _respond(
            run_risks(_source(request.spec), _optional_source(request.risk_register), _options(request.options))
        )

    @app.post("/v1/case", response_model=CommandResponse)
    def case(request: CaseRequest) -> CommandResponse:
        return _respond(
            run_case(
                _source(request.spec),
                [_source(s) for s in request.cases],
                _optional_source(request.risk_register),
                _options(request.options),
            )
        )

    @app.post("/v1/confidence", response_model=CommandResponse)
    def confidence(request: ConfidenceRequest) -> CommandResponse:
        return _respond(
            run_confidence(
                _source(request.spec),
                [_source(s) for s in request.cases],
                _optional_source(request.assessment),
                request.what_if or None,
                request.weakest,
                _options(request.options),
            )
        )

    @app.post("/v1/export-dot", response_model=CommandResponse)
    def export_dot(request: ExportDotRequest) -> CommandResponse:
        return _respond(
            run_export_dot(_source(request.spec), _options(request.options), request.by_component)
        )

    @app.post("/v1/report", response_model=CommandResponse)
    def report(request: ReportRequest) -> CommandResponse:
        return _respond(
            run_report(
                _source(request.spec),
                None if request.cases is None else [_source(s) for s in request.cases],
                _optional_source(request.assessment),
                _optional_source(request.risk_register),
                _options(request.options),
            )
        )

    return app


app = create_app()
