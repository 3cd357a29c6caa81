"""Parser and serializer for the textual specification language.

The language is line-oriented and block-structured:

    component Ferry {
      assumption Ai "Assumptions about the environment" environmental
      contract G1 "Keeps a safe minimum separation distance to obstacles." assumes [Ai]
    }
    refinement R2 allocated Ferry {
      bind SITAW.G1 -> MPCS.A2
    }

Comments run from ``#`` to end of line. Strings are double-quoted with
backslash escapes. The parser recovers at declaration boundaries so several
independent syntax errors surface in one run; diagnostics carry 1-based
line/column positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .diagnostics import Diagnostic, Location, SourceText, error, has_errors
from .model import (
    ASSUMPTION,
    CONTRACT,
    Assumption,
    Binding,
    ComponentDecl,
    Contract,
    QualifiedId,
    Refinement,
    SpecificationStructure,
    build_structure,
)

KEYWORDS = frozenset(
    {
        "component",
        "parent",
        "assumption",
        "environmental",
        "contract",
        "assumes",
        "inherits",
        "uncertainty",
        "refinement",
        "allocated",
        "bind",
    }
)

_PUNCT = {"{", "}", "[", "]", ",", "."}
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}
_UNESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


@dataclass(frozen=True)
class Token:
    kind: str  # "kw", "ident", "string", "punct", "arrow", "eof"
    value: str
    line: int
    col: int


def load_source(path: str | Path) -> tuple[SourceText | None, list[Diagnostic]]:
    """Read a file as UTF-8; a decode failure is the single E000 diagnostic."""
    raw = Path(path).read_bytes()
    try:
        content = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        diag = error("E000", f"not valid UTF-8: {exc.reason} at byte {exc.start}", Location(str(path), 1, 1))
        return None, [diag]
    return SourceText(str(path), content), []


def tokenize(source: SourceText) -> tuple[list[Token], list[Diagnostic]]:
    text = source.content
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    i = 0
    line = 1
    col = 1

    def loc() -> Location:
        return Location(source.path, line, col)

    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(Token("arrow", "->", line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            tokens.append(Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        if ch == '"':
            start = loc()
            i += 1
            col += 1
            parts: list[str] = []
            closed = False
            while i < n:
                ch = text[i]
                if ch == '"':
                    i += 1
                    col += 1
                    closed = True
                    break
                if ch == "\n":
                    break
                if ch == "\\":
                    if i + 1 < n and text[i + 1] in _ESCAPES:
                        parts.append(_ESCAPES[text[i + 1]])
                        i += 2
                        col += 2
                        continue
                    diags.append(
                        error("E103", f"invalid escape sequence \\{text[i + 1] if i + 1 < n else ''}", loc())
                    )
                    i += 1
                    col += 1
                    continue
                parts.append(ch)
                i += 1
                col += 1
            if not closed:
                diags.append(error("E102", "unterminated string literal", start))
            tokens.append(Token("string", "".join(parts), start.line, start.column))
            continue
        if ch.isalpha():
            start_line, start_col = line, col
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            col += j - i
            i = j
            kind = "kw" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, start_line, start_col))
            continue
        diags.append(error("E103", f"invalid character {ch!r}", loc()))
        i += 1
        col += 1
    tokens.append(Token("eof", "", line, col))
    return tokens, diags


class _Parser:
    """Recursive-descent parser with panic-mode recovery.

    Declarations are collected together with a positional location table so
    that structural diagnostics (duplicates, dangling references) point at
    the offending source line.
    """

    def __init__(self, source: SourceText):
        self.path = source.path
        self.tokens, self.diags = tokenize(source)
        self.pos = 0
        self.components: list[ComponentDecl] = []
        self.refinements: list[Refinement] = []
        self.locations: dict[tuple, Location] = {}

    # Token helpers

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at_kw(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "kw" and tok.value == word

    def at_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.value == ch

    def tok_loc(self, tok: Token) -> Location:
        return Location(self.path, tok.line, tok.col)

    def syntax_error(self, expected: str) -> None:
        tok = self.peek()
        found = tok.value if tok.kind != "eof" else "end of file"
        self.diags.append(error("E100", f"expected {expected}, found {found!r}", self.tok_loc(tok)))

    def skip_to(self, *words: str) -> None:
        """Advance until one of the given keywords, '}' or end of file."""
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return
            if tok.kind == "kw" and tok.value in words:
                return
            if tok.kind == "punct" and tok.value == "}":
                return
            self.advance()

    def expect_ident(self, what: str) -> Token | None:
        tok = self.peek()
        if tok.kind == "ident":
            return self.advance()
        self.syntax_error(f"{what} identifier")
        return None

    def expect_string(self, what: str) -> Token | None:
        tok = self.peek()
        if tok.kind == "string":
            return self.advance()
        self.syntax_error(f"{what} string")
        return None

    def expect_punct(self, ch: str) -> Token | None:
        if self.at_punct(ch):
            return self.advance()
        self.syntax_error(f"'{ch}'")
        return None

    def parse_qid(self, kind: str) -> QualifiedId | None:
        comp = self.expect_ident("component")
        if comp is None:
            return None
        if not self.at_punct("."):
            self.syntax_error("'.'")
            return None
        self.advance()
        local = self.expect_ident("local")
        if local is None:
            return None
        return QualifiedId(comp.value, local.value, kind)

    # Grammar productions

    def parse(self) -> None:
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return
            if self.at_kw("component"):
                self.parse_component()
            elif self.at_kw("refinement"):
                self.parse_refinement()
            else:
                self.syntax_error("'component' or 'refinement'")
                self.advance()
                self.skip_to("component", "refinement")
                if self.at_punct("}"):
                    self.advance()

    def open_block(self) -> Token | None:
        tok = self.expect_punct("{")
        return tok

    def block_unclosed(self, brace: Token) -> None:
        self.diags.append(error("E101", "unclosed '{'", self.tok_loc(brace)))

    def parse_component(self) -> None:
        self.advance()  # component
        ci = len(self.components)
        name = self.expect_ident("component")
        if name is None:
            self.skip_to("component", "refinement")
            return
        self.locations[("component", ci)] = self.tok_loc(name)
        parent: str | None = None
        if self.at_kw("parent"):
            parent_kw = self.advance()
            parent_tok = self.expect_ident("parent component")
            if parent_tok is None:
                self.skip_to("component", "refinement")
                return
            parent = parent_tok.value
            self.locations[("parent", ci)] = self.tok_loc(parent_kw)
        brace = self.open_block()
        if brace is None:
            self.skip_to("component", "refinement")
            return
        assumptions: list[Assumption] = []
        contracts: list[Contract] = []
        while True:
            tok = self.peek()
            if self.at_punct("}"):
                self.advance()
                break
            if tok.kind == "eof" or (tok.kind == "kw" and tok.value in ("component", "refinement")):
                self.block_unclosed(brace)
                break
            if self.at_kw("assumption"):
                self.parse_assumption(ci, assumptions)
            elif self.at_kw("contract"):
                self.parse_contract(ci, contracts)
            else:
                self.syntax_error("'assumption', 'contract' or '}'")
                self.advance()
                self.skip_to("assumption", "contract", "component", "refinement")
        self.components.append(
            ComponentDecl(name.value, "", parent, tuple(assumptions), tuple(contracts))
        )

    def parse_assumption(self, ci: int, out: list[Assumption]) -> None:
        self.advance()  # assumption
        ident = self.expect_ident("assumption")
        if ident is None:
            self.skip_to("assumption", "contract", "component", "refinement")
            return
        stmt = self.expect_string("statement")
        if stmt is None:
            self.skip_to("assumption", "contract", "component", "refinement")
            return
        environmental = False
        if self.at_kw("environmental"):
            self.advance()
            environmental = True
        self.locations[("assumption", ci, len(out))] = self.tok_loc(ident)
        out.append(Assumption(ident.value, stmt.value, environmental))

    def parse_contract(self, ci: int, out: list[Contract]) -> None:
        self.advance()  # contract
        ident = self.expect_ident("contract")
        if ident is None:
            self.skip_to("assumption", "contract", "component", "refinement")
            return
        stmt = self.expect_string("statement")
        if stmt is None:
            self.skip_to("assumption", "contract", "component", "refinement")
            return
        cj = len(out)
        assumes: list[str] = []
        inherits: QualifiedId | None = None
        uncertainty: str | None = None
        ok = True
        if self.at_kw("assumes"):
            self.advance()
            if self.expect_punct("[") is None:
                ok = False
            else:
                while True:
                    aid = self.expect_ident("assumption")
                    if aid is None:
                        ok = False
                        break
                    self.locations[("assumes", ci, cj, len(assumes))] = self.tok_loc(aid)
                    assumes.append(aid.value)
                    if self.at_punct(","):
                        self.advance()
                        continue
                    if self.expect_punct("]") is None:
                        ok = False
                    break
        if ok and self.at_kw("inherits"):
            kw = self.advance()
            self.locations[("inherits", ci, cj)] = self.tok_loc(kw)
            inherits = self.parse_qid(CONTRACT)
            ok = inherits is not None
        if ok and self.at_kw("uncertainty"):
            self.advance()
            note = self.expect_string("uncertainty note")
            if note is None:
                ok = False
            else:
                uncertainty = note.value
        if not ok:
            self.skip_to("assumption", "contract", "component", "refinement")
        self.locations[("contract", ci, cj)] = self.tok_loc(ident)
        out.append(Contract(ident.value, stmt.value, tuple(assumes), inherits, uncertainty))

    def parse_refinement(self) -> None:
        self.advance()  # refinement
        ri = len(self.refinements)
        ident = self.expect_ident("refinement")
        if ident is None:
            self.skip_to("component", "refinement")
            return
        self.locations[("refinement", ri)] = self.tok_loc(ident)
        if not self.at_kw("allocated"):
            self.syntax_error("'allocated'")
            self.skip_to("component", "refinement")
            return
        self.advance()
        alloc = self.expect_ident("allocated component")
        if alloc is None:
            self.skip_to("component", "refinement")
            return
        self.locations[("allocated", ri)] = self.tok_loc(alloc)
        brace = self.open_block()
        if brace is None:
            self.skip_to("component", "refinement")
            return
        bindings: list[Binding] = []
        while True:
            tok = self.peek()
            if self.at_punct("}"):
                self.advance()
                break
            if tok.kind == "eof" or (tok.kind == "kw" and tok.value in ("component", "refinement")):
                self.block_unclosed(brace)
                break
            if self.at_kw("bind"):
                kw = self.advance()
                source = self.parse_qid(CONTRACT)
                if source is None:
                    self.skip_to("bind", "component", "refinement")
                    continue
                if self.peek().kind != "arrow":
                    self.syntax_error("'->'")
                    self.skip_to("bind", "component", "refinement")
                    continue
                self.advance()
                target_tok = self.peek()
                target = self.parse_qid(ASSUMPTION)
                if target is None:
                    self.skip_to("bind", "component", "refinement")
                    continue
                self.locations[("binding", ri, len(bindings))] = self.tok_loc(kw)
                self.locations[("binding_target", ri, len(bindings))] = self.tok_loc(target_tok)
                bindings.append(Binding(source, target))
            else:
                self.syntax_error("'bind' or '}'")
                self.advance()
                self.skip_to("bind", "component", "refinement")
        self.refinements.append(Refinement(ident.value, alloc.value, tuple(bindings)))


def parse_spec(source: SourceText) -> tuple[SpecificationStructure | None, list[Diagnostic]]:
    """Parse specification text into a validated structure.

    Returns ``(structure, [])`` on success. On failure the structure is None
    and the diagnostics carry every syntax error found during recovery; when
    the syntax is clean, structural invariant violations are reported with
    source locations instead.
    """
    parser = _Parser(source)
    parser.parse()
    if has_errors(parser.diags):
        return None, sorted(parser.diags, key=lambda d: (d.location.line, d.location.column, d.code) if d.location else (0, 0, d.code))
    locations = parser.locations
    return build_structure(parser.components, parser.refinements, locations.get)


def _escape(text: str) -> str:
    return "".join(_UNESCAPES.get(ch, ch) for ch in text)


def serialize_spec(structure: SpecificationStructure) -> str:
    """Render the canonical text form; parsing it back yields an equal structure."""
    lines: list[str] = []
    for comp in structure.components:
        head = f"component {comp.name}"
        if comp.parent is not None:
            head += f" parent {comp.parent}"
        lines.append(head + " {")
        for a in comp.assumptions:
            line = f'  assumption {a.id} "{_escape(a.statement)}"'
            if a.environmental:
                line += " environmental"
            lines.append(line)
        for c in comp.contracts:
            line = f'  contract {c.id} "{_escape(c.guarantee_statement)}"'
            if c.assumes:
                line += " assumes [" + ", ".join(c.assumes) + "]"
            if c.inherits is not None:
                line += f" inherits {c.inherits.text}"
            if c.uncertainty_note is not None:
                line += f' uncertainty "{_escape(c.uncertainty_note)}"'
            lines.append(line)
        lines.append("}")
    for ref in structure.refinements:
        lines.append(f"refinement {ref.id} allocated {ref.allocated_to} {{")
        for b in ref.bindings:
            lines.append(f"  bind {b.source.text} -> {b.target.text}")
        lines.append("}")
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
