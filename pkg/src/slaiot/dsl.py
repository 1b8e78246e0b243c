"""Concrete textual syntax for SLA documents (`.slaiot` files).

Normative grammar (strings are double-quoted with backslash escapes, ``#``
starts a line comment, whitespace is insignificant, keywords lowercase)::

    document   = "sla" STRING "type" ("offer" | "request") "{"
                    ["name" STRING]
                    "description" STRING
                    "application" STRING
                    "start" DATE "end" DATE
                    party* slo* activity*
                 "}"
    party      = "party" STRING "id" STRING "roles" "[" [STRING ("," STRING)*] "]"
    slo        = "slo" STRING ["priority" ("high"|"medium"|"low")]
                    comparator value [unit]
    config     = "config" STRING comparator value [unit]
    activity   = "activity" STRING ["name" STRING] ["after" STRING ("," STRING)*]
                 "{" service resource "}"
    service    = "service" IDENT "{" (slo | config)* "}"
    resource   = "resource" IDENT "{" (slo | config)* "}"
    comparator = "gt" | "gte" | "eq" | "neq" | "lt" | "lte"
    value      = NUMBER | "true" | "false" | STRING
    unit       = "%" | IDENT          (a registered unit symbol)
    DATE       = YYYY-MM-DD

The printer emits the unique canonical form: 2-space indentation, LF line
endings, sections in the order above, ``start``/``end`` on one line, and
numbers without trailing zeros.  ``parse_text(print_text(doc)) == doc`` for
every valid document; units are preserved verbatim, never normalized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Any

from .diagnostics import Diagnostic, SourceSpan, error, has_errors
from .model import COMPARATORS, PRIORITIES, SlaDocument, build_document
from .vocabulary import VocabularyRegistry

# Words the parser claims for structure; a unit symbol may not shadow them.
RESERVED = frozenset({
    "sla", "type", "offer", "request", "name", "description", "application",
    "start", "end", "party", "id", "roles", "slo", "config", "priority",
    "high", "medium", "low", "gt", "gte", "eq", "neq", "lt", "lte",
    "activity", "after", "service", "resource", "true", "false",
    "sensing", "networking", "ingestion", "stream_processing",
    "batch_processing", "machine_learning", "database_sql", "database_nosql",
    "iot_device", "edge", "cloud",
})

_TOKEN_NAMES = {
    "{": "'{'", "}": "'}'", "[": "'['", "]": "']'", ",": "','",
    "STRING": "string", "NUMBER": "number", "DATE": "date", "IDENT": "identifier",
    "%": "'%'", "EOF": "end of input",
}

_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}")
_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*")

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}
_UNESCAPES = {"\n": "\\n", "\t": "\\t", "\r": "\\r", '"': '\\"', "\\": "\\\\"}


@dataclass(frozen=True)
class Token:
    kind: str      # one of the punctuation literals, STRING/NUMBER/DATE/IDENT, EOF
    value: Any
    span: SourceSpan

    @property
    def shown(self) -> str:
        if self.kind == "IDENT":
            return f"'{self.value}'"
        if self.kind == "STRING":
            return "string"
        return _TOKEN_NAMES.get(self.kind, self.kind)


class _LexError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def _lex(source: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, col = 0, 1, 1
    n = len(source)

    def span_from(start_pos: int, start_line: int, start_col: int) -> SourceSpan:
        return SourceSpan(start_line, start_col, line, max(col - 1, start_col),
                          start_pos, pos)

    while pos < n:
        ch = source[pos]
        if ch == "\n":
            pos += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            pos += 1
            col += 1
            continue
        if ch == "#":
            while pos < n and source[pos] != "\n":
                pos += 1
                col += 1
            continue
        start = (pos, line, col)
        if ch in "{}[],%":
            pos += 1
            col += 1
            tokens.append(Token(ch, ch, span_from(*start)))
            continue
        if ch == '"':
            pos += 1
            col += 1
            out: list[str] = []
            closed = False
            while pos < n:
                c = source[pos]
                if c == '"':
                    pos += 1
                    col += 1
                    closed = True
                    break
                if c == "\n":
                    break
                if c == "\\":
                    if pos + 1 >= n:
                        break
                    esc = source[pos + 1]
                    if esc in _ESCAPES:
                        out.append(_ESCAPES[esc])
                        pos += 2
                        col += 2
                        continue
                    if esc == "u" and pos + 5 < n:
                        hexa = source[pos + 2:pos + 6]
                        try:
                            out.append(chr(int(hexa, 16)))
                        except ValueError:
                            raise _LexError(error(
                                "lexical-error",
                                f"bad unicode escape '\\u{hexa}'",
                                span=span_from(*start)))
                        pos += 6
                        col += 6
                        continue
                    raise _LexError(error("lexical-error",
                                          f"unknown escape '\\{esc}'",
                                          span=span_from(*start)))
                out.append(c)
                pos += 1
                col += 1
            if not closed:
                raise _LexError(error("lexical-error", "unterminated string",
                                      span=span_from(*start)))
            tokens.append(Token("STRING", "".join(out), span_from(*start)))
            continue
        m = _DATE_RE.match(source, pos)
        if m:
            pos = m.end()
            col += len(m.group())
            tokens.append(Token("DATE", m.group(), span_from(*start)))
            continue
        m = _NUMBER_RE.match(source, pos)
        if m:
            text = m.group()
            pos = m.end()
            col += len(text)
            value: int | float = float(text) if "." in text else int(text)
            tokens.append(Token("NUMBER", value, span_from(*start)))
            continue
        m = _IDENT_RE.match(source, pos)
        if m:
            pos = m.end()
            col += len(m.group())
            tokens.append(Token("IDENT", m.group(), span_from(*start)))
            continue
        raise _LexError(error("lexical-error", f"illegal character {ch!r}",
                              span=SourceSpan(line, col, line, col, pos, pos + 1)))
    eof_span = SourceSpan(line, max(col, 1), line, max(col, 1), pos, pos)
    tokens.append(Token("EOF", None, eof_span))
    return tokens


class _SyntaxError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class _Parser:
    """Single-pass recursive descent producing document parts plus a table
    mapping document paths to source spans (used to locate invariant errors
    reported later by the model builder)."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.spans: dict[str, SourceSpan] = {}
        self.last_end: tuple[int, int, int] | None = None  # line, col, offset

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        self.last_end = (tok.span.end_line, tok.span.end_col, tok.span.end_offset)
        return tok

    def fail(self, expected: tuple[str, ...]) -> _SyntaxError:
        # Span runs from the end of the last consumed token through the
        # offending one, so a deleted token is always inside the span.
        tok = self.peek()
        span = tok.span
        if self.last_end is not None:
            line, col, off = self.last_end
            if (line, col) <= (tok.span.end_line, tok.span.end_col):
                span = SourceSpan(line, col, tok.span.end_line,
                                  tok.span.end_col, off, tok.span.end_offset)
        names = tuple(_TOKEN_NAMES.get(e, f"'{e}'") for e in expected)
        msg = f"expected {' or '.join(names)}, got {tok.shown}"
        return _SyntaxError(error("syntax-error", msg, span=span, expected=expected))

    def expect(self, kind: str) -> Token:
        if self.peek().kind != kind:
            raise self.fail((kind,))
        return self.advance()

    def keyword(self, *words: str) -> Token:
        tok = self.peek()
        if tok.kind != "IDENT" or tok.value not in words:
            raise self.fail(words)
        return self.advance()

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "IDENT" and tok.value in words

    def string(self, path: str | None = None) -> str:
        tok = self.expect("STRING")
        if path:
            self.spans[path] = tok.span
        return tok.value

    # grammar productions -------------------------------------------------

    def document(self) -> dict:
        kw = self.keyword("sla")
        parts: dict[str, Any] = {"id": self.string("id")}
        self.keyword("type")
        type_tok = self.keyword("offer", "request")
        parts["sla_type"] = type_tok.value
        self.spans["sla_type"] = type_tok.span
        open_brace = self.expect("{")
        block_span = kw.span.merge(open_brace.span)
        for whole in ("slos", "activities", "parties"):
            self.spans[whole] = block_span
        if self.at_keyword("name"):
            self.advance()
            parts["name"] = self.string("name")
        self.keyword("description")
        parts["description"] = self.string("description")
        self.keyword("application")
        parts["application_type"] = self.string("application_type")
        self.keyword("start")
        start_tok = self.expect("DATE")
        parts["start_date"] = start_tok.value
        self.spans["start_date"] = start_tok.span
        self.keyword("end")
        end_tok = self.expect("DATE")
        parts["end_date"] = end_tok.value
        self.spans["end_date"] = end_tok.span

        parties = []
        while self.at_keyword("party"):
            parties.append(self.party(f"parties[{len(parties)}]"))
        parts["parties"] = parties
        slos = []
        while self.at_keyword("slo"):
            slos.append(self.constraint("slo", f"slos[{len(slos)}]"))
        parts["slos"] = slos
        activities = []
        while self.at_keyword("activity"):
            activities.append(self.activity(f"activities[{len(activities)}]"))
        parts["activities"] = activities
        self.expect("}")
        self.expect("EOF")
        return parts

    def party(self, path: str) -> dict:
        kw = self.keyword("party")
        name = self.string(f"{path}.name")
        self.keyword("id")
        pid = self.string(f"{path}.id")
        roles_kw = self.keyword("roles")
        self.spans[f"{path}.roles"] = roles_kw.span
        self.expect("[")
        roles: list[str] = []
        if self.peek().kind != "]":
            roles.append(self.string(f"{path}.roles[0]"))
            while self.peek().kind == ",":
                self.advance()
                roles.append(self.string(f"{path}.roles[{len(roles)}]"))
        close = self.expect("]")
        self.spans[path] = kw.span.merge(close.span)
        return {"name": name, "id": pid, "roles": roles}

    def constraint(self, lead: str, path: str) -> dict:
        kw = self.keyword(lead)
        part: dict[str, Any] = {"metric": self.string(f"{path}.metric")}
        self.spans[f"{path}.kind"] = self.spans[f"{path}.metric"]
        if lead == "slo" and self.at_keyword("priority"):
            self.advance()
            prio = self.keyword(*PRIORITIES)
            part["priority"] = prio.value
            self.spans[f"{path}.priority"] = prio.span
        comp = self.keyword(*COMPARATORS)
        part["comparator"] = comp.value
        self.spans[f"{path}.comparator"] = comp.span
        tok = self.peek()
        if tok.kind == "NUMBER":
            part["value"] = self.advance().value
        elif tok.kind == "STRING":
            part["value"] = self.advance().value
        elif tok.kind == "IDENT" and tok.value in ("true", "false"):
            part["value"] = self.advance().value == "true"
        else:
            raise self.fail(("NUMBER", "STRING", "true", "false"))
        self.spans[f"{path}.value"] = tok.span
        end_span = tok.span
        nxt = self.peek()
        if nxt.kind == "%" or (nxt.kind == "IDENT" and nxt.value not in RESERVED):
            unit_tok = self.advance()
            part["unit"] = unit_tok.value
            self.spans[f"{path}.unit"] = unit_tok.span
            end_span = unit_tok.span
        self.spans[path] = kw.span.merge(end_span)
        return part

    def activity(self, path: str) -> dict:
        kw = self.keyword("activity")
        aid = self.string(f"{path}.id")
        part: dict[str, Any] = {"id": aid, "name": aid}
        self.spans[f"{path}.name"] = self.spans[f"{path}.id"]
        if self.at_keyword("name"):
            self.advance()
            part["name"] = self.string(f"{path}.name")
        depends: list[str] = []
        if self.at_keyword("after"):
            self.advance()
            depends.append(self.string(f"{path}.depends_on[0]"))
            while self.peek().kind == ",":
                self.advance()
                depends.append(self.string(f"{path}.depends_on[{len(depends)}]"))
        part["depends_on"] = depends
        self.expect("{")
        part["service"] = self.component("service", f"{path}.service")
        part["resource"] = self.component("resource", f"{path}.resource")
        close = self.expect("}")
        self.spans[path] = kw.span.merge(close.span)
        return part

    def component(self, which: str, path: str) -> dict:
        self.keyword(which)
        kind_tok = self.expect("IDENT")
        self.spans[f"{path}.kind"] = kind_tok.span
        self.spans[path] = kind_tok.span
        self.expect("{")
        slos: list[dict] = []
        config: list[dict] = []
        while True:
            if self.at_keyword("slo"):
                slos.append(self.constraint("slo", f"{path}.slos[{len(slos)}]"))
            elif self.at_keyword("config"):
                config.append(self.constraint(
                    "config", f"{path}.configuration[{len(config)}]"))
            elif self.peek().kind == "}":
                self.advance()
                break
            else:
                raise self.fail(("slo", "config", "}"))
        return {"kind": kind_tok.value, "slos": slos, "configuration": config}


_SEGMENT_RE = re.compile(r"(\.[A-Za-z_]+|\[\d+\])$")


def _span_for(spans: dict[str, SourceSpan], path: str | None) -> SourceSpan | None:
    """Longest recorded prefix of ``path`` (paths get coarser, never lost)."""
    while path:
        if path in spans:
            return spans[path]
        m = _SEGMENT_RE.search(path)
        if not m:
            return None
        path = path[:m.start()]
    return None


def parse_text(source: str, registry: VocabularyRegistry,
               ) -> tuple[SlaDocument | None, list[Diagnostic]]:
    """Parse DSL text into a validated document.

    Vocabulary and invariant violations found by the model builder are
    located back to source spans through the parser's path table, so every
    diagnostic carries a span.
    """
    try:
        tokens = _lex(source)
    except _LexError as exc:
        return None, [exc.diagnostic]
    parser = _Parser(tokens)
    try:
        parts = parser.document()
    except _SyntaxError as exc:
        return None, [exc.diagnostic]
    doc, diags = build_document(parts, registry)
    located = [d.with_span(_span_for(parser.spans, d.path)) for d in diags]
    return doc, located


def format_number(value: int | float) -> str:
    """Shortest exact decimal form, no exponent (the lexer takes none)."""
    if isinstance(value, int):
        return str(value)
    text = repr(value)
    if "e" in text or "E" in text:
        text = format(Decimal(text), "f")
    return text


def _quote(text: str) -> str:
    out = ['"']
    for ch in text:
        if ch in _UNESCAPES:
            out.append(_UNESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _format_constraint(lead: str, c) -> str:
    parts = [lead, _quote(c.metric)]
    if c.priority is not None:
        parts += ["priority", c.priority]
    parts.append(c.comparator)
    if isinstance(c.value, bool):
        parts.append("true" if c.value else "false")
    elif isinstance(c.value, str):
        parts.append(_quote(c.value))
    else:
        parts.append(format_number(c.value))
    if c.unit is not None:
        parts.append(c.unit)
    return " ".join(parts)


def print_text(doc: SlaDocument) -> str:
    """Canonical DSL text for a valid document (deterministic, LF, 2-space)."""
    lines: list[str] = []
    lines.append(f"sla {_quote(doc.id)} type {doc.sla_type} {{")
    if doc.name is not None:
        lines.append(f"  name {_quote(doc.name)}")
    lines.append(f"  description {_quote(doc.description)}")
    lines.append(f"  application {_quote(doc.application_type)}")
    lines.append(f"  start {doc.start_date.isoformat()} end {doc.end_date.isoformat()}")
    for p in doc.parties:
        roles = ", ".join(_quote(r) for r in p.roles)
        lines.append(f"  party {_quote(p.name)} id {_quote(p.id)} roles [{roles}]")
    for c in doc.application_slos:
        lines.append("  " + _format_constraint("slo", c))
    for a in doc.activities:
        header = f"  activity {_quote(a.id)}"
        if a.name != a.id:
            header += f" name {_quote(a.name)}"
        if a.depends_on:
            header += " after " + ", ".join(_quote(d) for d in a.depends_on)
        lines.append(header + " {")
        for which, spec in (("service", a.service), ("resource", a.resource)):
            if not spec.slos and not spec.configuration:
                lines.append(f"    {which} {spec.kind} {{}}")
                continue
            lines.append(f"    {which} {spec.kind} {{")
            for c in spec.slos:
                lines.append("      " + _format_constraint("slo", c))
            for c in spec.configuration:
                lines.append("      " + _format_constraint("config", c))
            lines.append("    }")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
