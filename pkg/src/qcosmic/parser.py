"""Tokenizer and parser for the ``.qcm`` model language.

The language is line-oriented only by convention; whitespace and newlines are
interchangeable. ``//`` starts a comment running to end of line. Strings are
double-quoted with backslash escapes. Grammar sketch::

    model      := "system" STRING "{" header* decl* "}"
    header     := ("purpose" | "scope") STRING
    decl       := layer | user | storage | datagroup | process
    layer      := "layer" nature STRING
    user       := "user" nature STRING
    storage    := "storage" nature STRING
    nature     := "classical" | "quantum"
    datagroup  := "datagroup" STRING "{" attr* "}"
    attr       := "attr" IDENT ":" nature
    process    := "process" STRING "in" "layer" STRING
                  ("uses" STRING ("," STRING)*)? "{" movement* "}"
    movement   := mkind STRING endpoint conv?
    mkind      := "entry" | "exit" | "read" | "write"
                | "qentry" | "qexit" | "qread" | "qwrite"
    endpoint   := ("from" | "to") ("user" | "storage" | "process" | "layer") STRING
    conv       := "via" ("prepare" | "measure")

The parser recovers at statement boundaries so a single run reports multiple
errors. A model is only returned when no error-severity diagnostic was
produced; in particular every reference in a returned model resolves.

Diagnostic codes: L1 lexical error, S1 syntax error, S2 duplicate
declaration, S3 unresolved reference, W1 empty system (warning).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .diagnostics import Diagnostic, Severity, Span, has_errors
from .model import (
    Attribute,
    Conversion,
    DataGroup,
    DataMovement,
    Endpoint,
    EndpointKind,
    FunctionalProcess,
    FunctionalUser,
    Layer,
    Model,
    MovementKind,
    Nature,
    PersistentStorage,
)

__all__ = [
    "MOVEMENT_KEYWORDS",
    "ParseResult",
    "Token",
    "TokenKind",
    "parse_model",
    "tokenize",
]


class TokenKind(enum.Enum):
    KEYWORD = "keyword"
    IDENT = "identifier"
    STRING = "string"
    PUNCT = "punctuation"
    EOI = "end-of-input"


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    span: Span


KEYWORDS = frozenset(
    {
        "system", "purpose", "scope",
        "layer", "user", "storage", "datagroup", "attr", "process",
        "classical", "quantum",
        "in", "uses", "from", "to", "via", "prepare", "measure",
        "entry", "exit", "read", "write",
        "qentry", "qexit", "qread", "qwrite",
    }
)

MOVEMENT_KEYWORDS = {
    "entry": MovementKind.E,
    "exit": MovementKind.X,
    "read": MovementKind.R,
    "write": MovementKind.W,
    "qentry": MovementKind.QE,
    "qexit": MovementKind.QX,
    "qread": MovementKind.QR,
    "qwrite": MovementKind.QW,
}

_DECL_KEYWORDS = frozenset({"layer", "user", "storage", "datagroup", "process"})
_NATURES = {"classical": Nature.CLASSICAL, "quantum": Nature.QUANTUM}
_ENDPOINT_KINDS = {
    "user": EndpointKind.USER,
    "storage": EndpointKind.STORAGE,
    "process": EndpointKind.PROCESS,
    "layer": EndpointKind.LAYER,
}
_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}
_PUNCT = "{}:,"


def tokenize(text: str, file: str = "<input>") -> tuple[list[Token], list[Diagnostic]]:
    """Lex source text into tokens plus any lexical diagnostics.

    Always finishes with an end-of-input token. Lexing continues past
    errors so one run reports every offending character.
    """
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    pos, line, col = 0, 1, 1
    n = len(text)

    def error(message: str, eline: int, ecol: int, length: int = 1) -> None:
        diagnostics.append(
            Diagnostic(Severity.ERROR, "L1", message, span=Span(file, eline, ecol, length))
        )

    while pos < n:
        ch = text[pos]
        if ch == "\n":
            pos += 1
            line += 1
            col = 1
            continue
        if ch == "\r":
            pos += 1
            if pos < n and text[pos] == "\n":
                pos += 1
            line += 1
            col = 1
            continue
        if ch in " \t":
            pos += 1
            col += 1
            continue
        if ch == "/" and pos + 1 < n and text[pos + 1] == "/":
            while pos < n and text[pos] not in "\r\n":
                pos += 1
            continue
        if ch in _PUNCT:
            tokens.append(Token(TokenKind.PUNCT, ch, Span(file, line, col, 1)))
            pos += 1
            col += 1
            continue
        if ch == '"':
            start_line, start_col, start_pos = line, col, pos
            pos += 1
            col += 1
            value: list[str] = []
            closed = False
            while pos < n:
                c = text[pos]
                if c == '"':
                    pos += 1
                    col += 1
                    closed = True
                    break
                if c in "\r\n":
                    break
                if c == "\\" and pos + 1 < n and text[pos + 1] not in "\r\n":
                    value.append(_ESCAPES.get(text[pos + 1], text[pos + 1]))
                    pos += 2
                    col += 2
                    continue
                value.append(c)
                pos += 1
                col += 1
            if not closed:
                error("unterminated string literal", start_line, start_col, pos - start_pos)
                continue
            tokens.append(
                Token(TokenKind.STRING, "".join(value), Span(file, start_line, start_col, pos - start_pos))
            )
            continue
        if ch.isascii() and (ch.isalpha()):
            start_col, start_pos = col, pos
            while pos < n and text[pos].isascii() and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
                col += 1
            word = text[start_pos:pos]
            kind = TokenKind.KEYWORD if word in KEYWORDS else TokenKind.IDENT
            tokens.append(Token(kind, word, Span(file, line, start_col, len(word))))
            continue
        error(f"illegal character {ch!r}", line, col)
        pos += 1
        col += 1

    tokens.append(Token(TokenKind.EOI, "", Span(file, line, col, 0)))
    return tokens, diagnostics


@dataclass
class ParseResult:
    """Outcome of a parse: a model when clean, diagnostics always.

    ``model`` is None whenever any error-severity diagnostic was produced;
    warnings do not block.
    """

    model: Model | None
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.model is not None


def parse_model(text: str, file: str = "<input>") -> ParseResult:
    """Parse ``.qcm`` source into a fully resolved model."""
    tokens, diagnostics = tokenize(text, file)
    parser = _Parser(tokens, file)
    model = parser.parse()
    diagnostics.extend(parser.diagnostics)
    if model is not None:
        _check_references(model, parser, diagnostics)
    if has_errors(diagnostics):
        return ParseResult(None, diagnostics)
    return ParseResult(model, diagnostics)


class _Parser:
    """Recursive-descent parser with statement-level error recovery."""

    def __init__(self, tokens: list[Token], file: str):
        self.tokens = tokens
        self.file = file
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []
        # spans of referencing tokens, used for resolution errors
        self.reference_spans: dict[tuple[str, str, int], Span] = {}
        self._ref_counter = 0

    # -- token helpers ------------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind is not TokenKind.EOI:
            self.pos += 1
        return token

    def at_keyword(self, *words: str) -> bool:
        tok = self.current
        return tok.kind is TokenKind.KEYWORD and tok.text in words

    def at_punct(self, ch: str) -> bool:
        tok = self.current
        return tok.kind is TokenKind.PUNCT and tok.text == ch

    def error(self, message: str, span: Span | None = None, subject: str = "") -> None:
        self.diagnostics.append(
            Diagnostic(Severity.ERROR, "S1", message, subject=subject, span=span or self.current.span)
        )

    def duplicate(self, category: str, name: str, span: Span) -> None:
        self.diagnostics.append(
            Diagnostic(
                Severity.ERROR,
                "S2",
                f"duplicate {category} name {name!r}",
                subject=name,
                span=span,
            )
        )

    def _describe(self, token: Token) -> str:
        if token.kind is TokenKind.EOI:
            return "end of input"
        if token.kind is TokenKind.STRING:
            return f'string "{token.text}"'
        return f"{token.text!r}"

    def expect_keyword(self, word: str) -> Token | None:
        if self.at_keyword(word):
            return self.advance()
        self.error(f"expected {word!r}, found {self._describe(self.current)}")
        return None

    def expect_punct(self, ch: str) -> Token | None:
        if self.at_punct(ch):
            return self.advance()
        self.error(f"expected {ch!r}, found {self._describe(self.current)}")
        return None

    def expect_string(self, what: str) -> Token | None:
        if self.current.kind is TokenKind.STRING:
            return self.advance()
        self.error(f"expected {what} string, found {self._describe(self.current)}")
        return None

    def expect_nature(self) -> Nature | None:
        if self.at_keyword("classical", "quantum"):
            return _NATURES[self.advance().text]
        self.error(f"expected 'classical' or 'quantum', found {self._describe(self.current)}")
        return None

    def record_reference(self, category: str, name: str, span: Span) -> None:
        self._ref_counter += 1
        self.reference_spans[(category, name, self._ref_counter)] = span

    # -- grammar ------------------------------------------------------------

    def parse(self) -> Model | None:
        if self.expect_keyword("system") is None:
            return None
        name_tok = self.expect_string("system name")
        if name_tok is None:
            return None
        if self.expect_punct("{") is None:
            return None

        purpose, scope = self._parse_headers()
        layers: list[Layer] = []
        users: list[FunctionalUser] = []
        storages: list[PersistentStorage] = []
        data_groups: list[DataGroup] = []
        processes: list[FunctionalProcess] = []

        while not self.at_punct("}") and self.current.kind is not TokenKind.EOI:
            tok = self.current
            if tok.kind is TokenKind.KEYWORD and tok.text in ("layer", "user", "storage"):
                self._parse_simple_decl(tok.text, layers, users, storages)
            elif self.at_keyword("datagroup"):
                self._parse_datagroup(data_groups)
            elif self.at_keyword("process"):
                self._parse_process(processes)
            elif self.at_keyword("purpose", "scope"):
                self.error(f"{tok.text!r} must appear before declarations")
                self.advance()
                if self.current.kind is TokenKind.STRING:
                    self.advance()
            else:
                self.error(f"expected a declaration, found {self._describe(tok)}")
                self._sync_top_level()

        if self.current.kind is TokenKind.EOI:
            self.error("expected '}' to close the system block")
        else:
            self.advance()
            if self.current.kind is not TokenKind.EOI:
                self.error(f"unexpected content after system block: {self._describe(self.current)}")

        model = Model(
            name=name_tok.text,
            purpose=purpose,
            scope=scope,
            layers=tuple(layers),
            users=tuple(users),
            storages=tuple(storages),
            data_groups=tuple(data_groups),
            processes=tuple(processes),
        )
        if model.is_empty():
            self.diagnostics.append(
                Diagnostic(
                    Severity.WARNING,
                    "W1",
                    "empty system: no declarations",
                    subject=model.name,
                    span=name_tok.span,
                )
            )
        return model

    def _parse_headers(self) -> tuple[str, str]:
        purpose: str | None = None
        scope: str | None = None
        while self.at_keyword("purpose", "scope"):
            word = self.advance().text
            value_tok = self.expect_string(word)
            if value_tok is None:
                self._sync_top_level()
                continue
            if word == "purpose":
                if purpose is not None:
                    self.duplicate("purpose header", word, value_tok.span)
                purpose = value_tok.text
            else:
                if scope is not None:
                    self.duplicate("scope header", word, value_tok.span)
                scope = value_tok.text
        return purpose or "", scope or ""

    def _parse_simple_decl(self, category, layers, users, storages) -> None:
        self.advance()
        nature = self.expect_nature()
        name_tok = self.expect_string(f"{category} name") if nature is not None else None
        if nature is None or name_tok is None:
            self._sync_top_level()
            return
        name, span = name_tok.text, name_tok.span
        if category == "layer":
            if any(d.name == name for d in layers):
                self.duplicate("layer", name, span)
            else:
                layers.append(Layer(name, nature, span=span))
        elif category == "user":
            if any(d.name == name for d in users):
                self.duplicate("user", name, span)
            else:
                users.append(FunctionalUser(name, nature, span=span))
        else:
            if any(d.name == name for d in storages):
                self.duplicate("storage", name, span)
            else:
                storages.append(PersistentStorage(name, nature, span=span))

    def _parse_datagroup(self, data_groups: list[DataGroup]) -> None:
        self.advance()
        name_tok = self.expect_string("datagroup name")
        if name_tok is None or self.expect_punct("{") is None:
            self._sync_top_level()
            return
        attributes: list[Attribute] = []
        while not self.at_punct("}") and self.current.kind is not TokenKind.EOI:
            if not self.at_keyword("attr"):
                self.error(f"expected 'attr' or '}}', found {self._describe(self.current)}")
                if not self._sync_body({"attr"}):
                    return
                continue
            self.advance()
            attr_tok = self.current
            if attr_tok.kind not in (TokenKind.IDENT, TokenKind.KEYWORD):
                self.error(f"expected attribute name, found {self._describe(attr_tok)}")
                if not self._sync_body({"attr"}):
                    return
                continue
            self.advance()
            if self.expect_punct(":") is None:
                if not self._sync_body({"attr"}):
                    return
                continue
            nature = self.expect_nature()
            if nature is None:
                if not self._sync_body({"attr"}):
                    return
                continue
            if any(a.name == attr_tok.text for a in attributes):
                self.duplicate("attribute", attr_tok.text, attr_tok.span)
            else:
                attributes.append(Attribute(attr_tok.text, nature))
        if self.at_punct("}"):
            self.advance()
        else:
            self.error("expected '}' to close the datagroup block")
        name, span = name_tok.text, name_tok.span
        if any(g.name == name for g in data_groups):
            self.duplicate("datagroup", name, span)
        else:
            data_groups.append(DataGroup(name, tuple(attributes), span=span))

    def _parse_process(self, processes: list[FunctionalProcess]) -> None:
        self.advance()
        name_tok = self.expect_string("process name")
        if name_tok is None:
            self._sync_top_level()
            return
        if self.expect_keyword("in") is None or self.expect_keyword("layer") is None:
            self._sync_top_level()
            return
        layer_tok = self.expect_string("layer name")
        if layer_tok is None:
            self._sync_top_level()
            return
        self.record_reference("layer", layer_tok.text, layer_tok.span)

        uses: list[str] = []
        if self.at_keyword("uses"):
            self.advance()
            while True:
                used_tok = self.expect_string("process name")
                if used_tok is None:
                    self._sync_top_level()
                    return
                uses.append(used_tok.text)
                self.record_reference("process", used_tok.text, used_tok.span)
                if self.at_punct(","):
                    self.advance()
                    continue
                break

        if self.expect_punct("{") is None:
            self._sync_top_level()
            return
        movements: list[DataMovement] = []
        while not self.at_punct("}") and self.current.kind is not TokenKind.EOI:
            tok = self.current
            if tok.kind is TokenKind.KEYWORD and tok.text in MOVEMENT_KEYWORDS:
                movement = self._parse_movement()
                if movement is not None:
                    movements.append(movement)
            elif tok.kind is TokenKind.KEYWORD and tok.text in _DECL_KEYWORDS:
                # a declaration keyword here means the closing brace is missing
                self.error("expected '}' to close the process block before this declaration")
                break
            else:
                self.error(f"expected a movement or '}}', found {self._describe(tok)}")
                if not self._sync_body(set(MOVEMENT_KEYWORDS)):
                    return
        if self.at_punct("}"):
            self.advance()

        name, span = name_tok.text, name_tok.span
        if any(p.name == name for p in processes):
            self.duplicate("process", name, span)
        else:
            processes.append(
                FunctionalProcess(
                    name,
                    layer_tok.text,
                    movements=tuple(movements),
                    uses=tuple(uses),
                    span=span,
                )
            )

    def _parse_movement(self) -> DataMovement | None:
        kind_tok = self.advance()
        kind = MOVEMENT_KEYWORDS[kind_tok.text]
        group_tok = self.expect_string("data group")
        if group_tok is None:
            return None
        if not self.at_keyword("from", "to"):
            self.error(f"expected 'from' or 'to', found {self._describe(self.current)}")
            return None
        self.advance()
        if not self.at_keyword(*_ENDPOINT_KINDS):
            self.error(
                f"expected 'user', 'storage', 'process', or 'layer', found {self._describe(self.current)}"
            )
            return None
        endpoint_kind = _ENDPOINT_KINDS[self.advance().text]
        endpoint_tok = self.expect_string("endpoint name")
        if endpoint_tok is None:
            return None
        conversion = Conversion.NONE
        if self.at_keyword("via"):
            self.advance()
            if not self.at_keyword("prepare", "measure"):
                self.error(f"expected 'prepare' or 'measure', found {self._describe(self.current)}")
                return None
            conversion = Conversion.PREPARE if self.advance().text == "prepare" else Conversion.MEASURE
        self.record_reference("datagroup", group_tok.text, group_tok.span)
        self.record_reference(endpoint_kind.value, endpoint_tok.text, endpoint_tok.span)
        return DataMovement(
            kind=kind,
            data_group=group_tok.text,
            counterpart=Endpoint(endpoint_kind, endpoint_tok.text),
            conversion=conversion,
            span=kind_tok.span,
        )

    # -- recovery -----------------------------------------------------------

    def _sync_top_level(self) -> None:
        """Skip to the next top-level statement boundary."""
        while self.current.kind is not TokenKind.EOI:
            tok = self.current
            if tok.kind is TokenKind.KEYWORD and tok.text in _DECL_KEYWORDS | {"purpose", "scope"}:
                return
            if self.at_punct("}"):
                return
            self.advance()

    def _sync_body(self, starters: set[str]) -> bool:
        """Skip within a block body; False when the block was abandoned."""
        while self.current.kind is not TokenKind.EOI:
            tok = self.current
            if tok.kind is TokenKind.KEYWORD and tok.text in starters:
                return True
            if self.at_punct("}"):
                self.advance()
                return False
            if tok.kind is TokenKind.KEYWORD and tok.text in _DECL_KEYWORDS:
                return False
            self.advance()
        return False


def _check_references(model: Model, parser: _Parser, diagnostics: list[Diagnostic]) -> None:
    """Report S3 for every reference that names no declaration."""
    declared = {
        "layer": {d.name for d in model.layers},
        "user": {d.name for d in model.users},
        "storage": {d.name for d in model.storages},
        "datagroup": {d.name for d in model.data_groups},
        "process": {d.name for d in model.processes},
    }
    for (category, name, _), span in parser.reference_spans.items():
        if name not in declared[category]:
            diagnostics.append(
                Diagnostic(
                    Severity.ERROR,
                    "S3",
                    f"unresolved {category} reference {name!r}",
                    subject=name,
                    span=span,
                )
            )
