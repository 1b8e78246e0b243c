"""Shared diagnostic types: source spans, error/warning records, formatting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"


@dataclass(frozen=True)
class SourceSpan:
    """Region of source text. Lines and columns are 1-based, end-inclusive."""

    start_line: int
    start_col: int
    end_line: int
    end_col: int
    start_offset: int = 0
    end_offset: int = 0

    def __post_init__(self) -> None:
        if (self.start_line, self.start_col) > (self.end_line, self.end_col):
            raise ValueError("span start must not exceed span end")
        if self.start_line < 1 or self.start_col < 1:
            raise ValueError("lines and columns are 1-based")

    def covers_line(self, line: int) -> bool:
        return self.start_line <= line <= self.end_line

    def merge(self, other: "SourceSpan") -> "SourceSpan":
        """Smallest span covering both operands."""
        a, b = self, other
        start = min((a.start_line, a.start_col, a.start_offset),
                    (b.start_line, b.start_col, b.start_offset))
        end = max((a.end_line, a.end_col, a.end_offset),
                  (b.end_line, b.end_col, b.end_offset))
        return SourceSpan(start[0], start[1], end[0], end[1], start[2], end[2])


@dataclass(frozen=True)
class Diagnostic:
    """One validation or parse finding.

    ``path`` addresses the offending element in document terms
    (e.g. ``activities[2].service.slos[0].unit``); ``span`` locates it in
    source text when the document came from text.  ``expected`` is only
    populated by the token-level parser.
    """

    code: str
    message: str
    severity: str = SEVERITY_ERROR
    path: str | None = None
    span: SourceSpan | None = None
    expected: tuple[str, ...] = ()

    def with_span(self, span: SourceSpan | None) -> "Diagnostic":
        if span is None:
            return self
        return Diagnostic(self.code, self.message, self.severity,
                          self.path, span, self.expected)

    def with_path(self, path: str) -> "Diagnostic":
        return Diagnostic(self.code, self.message, self.severity,
                          path, self.span, self.expected)

    def to_dict(self) -> dict:
        out: dict = {"severity": self.severity, "code": self.code, "message": self.message}
        if self.path is not None:
            out["path"] = self.path
        if self.span is not None:
            out["line"] = self.span.start_line
            out["col"] = self.span.start_col
        return out


def error(code: str, message: str, *, path: str | None = None,
          span: SourceSpan | None = None,
          expected: tuple[str, ...] = ()) -> Diagnostic:
    return Diagnostic(code, message, SEVERITY_ERROR, path, span, expected)


def warning(code: str, message: str, *, path: str | None = None,
            span: SourceSpan | None = None) -> Diagnostic:
    return Diagnostic(code, message, SEVERITY_WARNING, path, span)


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.severity == SEVERITY_ERROR for d in diagnostics)


def format_diagnostic(filename: str, diag: Diagnostic) -> str:
    """Render one diagnostic as ``file:line:col: severity: message``.

    Diagnostics without a source span (e.g. from the JSON codec) drop the
    position part; a document path, when known, is appended to the message.
    """
    msg = diag.message
    if diag.path and diag.path not in msg:
        msg = f"{msg} (at {diag.path})"
    if diag.span is not None:
        return f"{filename}:{diag.span.start_line}:{diag.span.start_col}: {diag.severity}: {msg}"
    return f"{filename}: {diag.severity}: {msg}"
