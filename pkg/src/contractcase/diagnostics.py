"""Diagnostics shared by the parser, validator, and case checks.

Every check in the toolchain reports findings as :class:`Diagnostic` values
with a short stable code. Codes never change meaning between releases; new
checks get new codes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Location:
    """1-based position in a source file."""

    file: str
    line: int
    column: int


@dataclass(frozen=True)
class Diagnostic:
    """One finding: severity, stable code, optional location, message."""

    severity: Severity
    code: str
    message: str
    location: Location | None = None

    def render(self) -> str:
        if self.location is not None:
            prefix = f"{self.location.file}:{self.location.line}:{self.location.column}: "
        else:
            prefix = ""
        return f"{prefix}{self.severity} {self.code}: {self.message}"


@dataclass(frozen=True)
class SourceText:
    """A named piece of UTF-8 text, usually the contents of one file."""

    path: str
    content: str


def error(code: str, message: str, location: Location | None = None) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, location)


def warning(code: str, message: str, location: Location | None = None) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, message, location)


def info(code: str, message: str, location: Location | None = None) -> Diagnostic:
    return Diagnostic(Severity.INFO, code, message, location)


def sort_key(diag: Diagnostic) -> tuple:
    loc = diag.location
    return (
        loc.file if loc else "",
        loc.line if loc else 0,
        loc.column if loc else 0,
        diag.code,
        diag.message,
    )


def finalize(diags: list[Diagnostic]) -> list[Diagnostic]:
    """Deduplicate and sort findings into the canonical report order."""
    return sorted(set(diags), key=sort_key)


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diags)
