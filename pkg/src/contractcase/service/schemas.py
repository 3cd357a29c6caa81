"""Request and response models for the HTTP API.

File contents travel in the request body as named texts; the service never
touches the filesystem, which keeps it safe to run for many clients at once.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class NamedText(BaseModel):
    """One input file: a display name (used in diagnostics) and its content."""

    name: str
    text: str


class OptionFlags(BaseModel):
    coarse: bool = False
    tolerate_cycles: bool = False
    allow_multi_discharge: bool = False


class CheckRequest(BaseModel):
    spec: NamedText
    options: OptionFlags = OptionFlags()


class RisksRequest(BaseModel):
    spec: NamedText
    risk_register: NamedText | None = None
    options: OptionFlags = OptionFlags()


class CaseRequest(BaseModel):
    spec: NamedText
    cases: list[NamedText] = Field(default_factory=list)
    risk_register: NamedText | None = None
    options: OptionFlags = OptionFlags()


class ConfidenceRequest(BaseModel):
    spec: NamedText
    cases: list[NamedText] = Field(default_factory=list)
    assessment: NamedText | None = None
    what_if: dict[str, str] = Field(default_factory=dict)
    weakest: str | None = None
    options: OptionFlags = OptionFlags()


class ExportDotRequest(BaseModel):
    spec: NamedText
    by_component: bool = False
    options: OptionFlags = OptionFlags()


class ReportRequest(BaseModel):
    spec: NamedText
    cases: list[NamedText] | None = None
    assessment: NamedText | None = None
    risk_register: NamedText | None = None
    options: OptionFlags = OptionFlags()


class CommandResponse(BaseModel):
    """Uniform command outcome.

    ``exit_code`` is 0 when no error findings exist, 1 otherwise; ``text`` is
    the rendered human report and ``payload`` the stable machine-readable
    document (the same object the CLI emits with ``--format json``).
    """

    command: str
    exit_code: int
    text: str
    payload: dict


class HealthResponse(BaseModel):
    status: str
    version: str
