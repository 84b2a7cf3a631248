"""Tokenizer and parser for Universal Decimal Classification notation.

UDC notation combines decimal class numbers with common auxiliaries --
place ``(1...)``, form ``(0...)``, time ``"..."``, language ``=...`` --
special auxiliaries introduced by ``-``, ``.0`` and ``'``, the connector
operations ``+ / : ::``, and square-bracket subgrouping.  Strings found in
catalogue exports additionally carry non-UDC notation: ``<...>`` spans and
``*``-introduced runs, which are kept in the tree but flagged ignorable.

Parsing preserves the input exactly: every term and connector records the
slice of the raw string it covers, so ``render(parse(s))`` reproduces ``s``
(after trimming outer whitespace) for every accepted string.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Union


class TokenKind(Enum):
    DIGITS = "digits"
    DOT = "dot"
    COLON = "colon"
    DOUBLE_COLON = "double-colon"
    PLUS = "plus"
    STROKE = "stroke"
    OPEN_SQUARE = "open-square"
    CLOSE_SQUARE = "close-square"
    OPEN_PAREN = "open-paren"
    CLOSE_PAREN = "close-paren"
    QUOTE = "quote"
    EQUALS = "equals"
    HYPHEN = "hyphen"
    APOSTROPHE = "apostrophe"
    ASTERISK = "asterisk"
    ANGLE_SPAN = "angle-span"
    ALPHA_SPAN = "alpha-span"
    WHITESPACE = "whitespace"
    OTHER = "other"


@dataclass(frozen=True, slots=True)
class Token:
    """One lexed span; offsets are 0-based positions in the input string."""

    kind: TokenKind
    lexeme: str
    offset: int


_SINGLE_CHAR_KINDS = {
    "+": TokenKind.PLUS,
    "/": TokenKind.STROKE,
    "[": TokenKind.OPEN_SQUARE,
    "]": TokenKind.CLOSE_SQUARE,
    "(": TokenKind.OPEN_PAREN,
    ")": TokenKind.CLOSE_PAREN,
    '"': TokenKind.QUOTE,
    "=": TokenKind.EQUALS,
    "-": TokenKind.HYPHEN,
    "'": TokenKind.APOSTROPHE,
    "*": TokenKind.ASTERISK,
}


def tokenize(raw: str) -> list[Token]:
    """Lex ``raw`` into tokens.  Total: unknown characters become ``other``
    tokens and the concatenated lexemes always reproduce the input."""
    tokens: list[Token] = []
    append = tokens.append
    i = 0
    n = len(raw)
    while i < n:
        ch = raw[i]
        if "0" <= ch <= "9":
            j = i + 1
            while j < n and "0" <= raw[j] <= "9":
                j += 1
            append(Token(TokenKind.DIGITS, raw[i:j], i))
            i = j
            continue
        if ch == ".":
            append(Token(TokenKind.DOT, ".", i))
            i += 1
            continue
        if ch == ":":
            # ``::`` lexes greedily; it must never come out as two colons.
            if i + 1 < n and raw[i + 1] == ":":
                append(Token(TokenKind.DOUBLE_COLON, "::", i))
                i += 2
            else:
                append(Token(TokenKind.COLON, ":", i))
                i += 1
            continue
        kind = _SINGLE_CHAR_KINDS.get(ch)
        if kind is not None:
            append(Token(kind, ch, i))
            i += 1
            continue
        if ch == "<":
            # A full <...> region is one token; an unclosed '<' is just noise.
            end = raw.find(">", i + 1)
            if end != -1:
                append(Token(TokenKind.ANGLE_SPAN, raw[i : end + 1], i))
                i = end + 1
            else:
                append(Token(TokenKind.OTHER, ch, i))
                i += 1
            continue
        if ch.isalpha():
            # A '/' flanked by letters belongs to an A/Z alphabetical span,
            # not to the stroke operation.
            j = i + 1
            while j < n:
                if raw[j].isalpha():
                    j += 1
                elif raw[j] == "/" and j + 1 < n and raw[j + 1].isalpha():
                    j += 2
                else:
                    break
            append(Token(TokenKind.ALPHA_SPAN, raw[i:j], i))
            i = j
            continue
        if ch.isspace():
            j = i + 1
            while j < n and raw[j].isspace():
                j += 1
            append(Token(TokenKind.WHITESPACE, raw[i:j], i))
            i = j
            continue
        append(Token(TokenKind.OTHER, ch, i))
        i += 1
    return tokens


class ConnectorKind(Enum):
    PLUS = "plus"
    STROKE = "stroke"
    COLON = "colon"
    DOUBLE_COLON = "double-colon"


CONNECTOR_SYMBOLS = {
    ConnectorKind.PLUS: "+",
    ConnectorKind.STROKE: "/",
    ConnectorKind.COLON: ":",
    ConnectorKind.DOUBLE_COLON: "::",
}

_CONNECTOR_OF_TOKEN = {
    TokenKind.PLUS: ConnectorKind.PLUS,
    TokenKind.STROKE: ConnectorKind.STROKE,
    TokenKind.COLON: ConnectorKind.COLON,
    TokenKind.DOUBLE_COLON: ConnectorKind.DOUBLE_COLON,
}


class AuxKind(Enum):
    PLACE = "place"
    FORM = "form"
    TIME = "time"
    LANGUAGE = "language"
    SPECIAL_HYPHEN = "special-hyphen"
    SPECIAL_POINT_ZERO = "special-point-zero"
    SPECIAL_APOSTROPHE = "special-apostrophe"
    ALPHABETIC_EXTENSION = "alphabetic-extension"
    NON_UDC_ASTERISK = "non-udc-asterisk"
    IGNORED_ANGLE = "ignored-angle"


#: Auxiliary kinds that analytics skip entirely.
IGNORABLE_AUX_KINDS = frozenset({AuxKind.NON_UDC_ASTERISK, AuxKind.IGNORED_ANGLE})


class ParseError(ValueError):
    """Raised when a string is not parseable UDC notation.

    ``reason`` is one of ``unbalanced-bracket``, ``empty-expression``,
    ``dangling-connector`` or ``malformed-auxiliary``; ``offset`` points at
    the offending position in the trimmed input.
    """

    def __init__(self, reason: str, offset: int, message: str):
        super().__init__(f"{reason} at offset {offset}: {message}")
        self.reason = reason
        self.offset = offset
        self.message = message


@dataclass(frozen=True, slots=True)
class InnerConnector:
    """A connector found inside an auxiliary payload (never a class link)."""

    kind: ConnectorKind
    position: int  # offset within the payload text


@dataclass(frozen=True, slots=True)
class InnerRange:
    """A stroke absorbed as a range over auxiliaries/extensions of one term."""

    kind: ConnectorKind
    offset: int  # offset in the trimmed input


@dataclass(frozen=True, slots=True)
class Auxiliary:
    kind: AuxKind
    payload: str  # text between the delimiters, delimiters excluded
    raw: str  # exact source slice, delimiters included
    offset: int
    inner_connectors: tuple[InnerConnector, ...] = ()


@dataclass(frozen=True, slots=True)
class Connector:
    kind: ConnectorKind
    offset: int
    raw: str  # source slice: the operator plus trailing whitespace, if any

    @property
    def symbol(self) -> str:
        return CONNECTOR_SYMBOLS[self.kind]


@dataclass(frozen=True, slots=True)
class SimpleTerm:
    """One class number with its attached auxiliaries and extensions.

    ``class_digits`` is the leading dotted number with the dots removed;
    it is empty for auxiliary-only terms (a bare time auxiliary ``"18"``,
    a bare form auxiliary ``(043)``, ...).
    """

    class_digits: str
    auxiliaries: tuple[Auxiliary, ...]
    extensions: tuple[str, ...]
    inner_ranges: tuple[InnerRange, ...]
    raw: str
    offset: int


@dataclass(frozen=True)
class GroupTerm:
    """A ``[...]`` subgroup; its bracketed content is a full expression."""

    inner: "UdcExpression"
    raw: str
    offset: int

    @property
    def members(self) -> list[tuple["Term", Connector | None]]:
        """Group members paired with their preceding connector (None first)."""
        out: list[tuple[Term, Connector | None]] = []
        for i, term in enumerate(self.inner.terms):
            out.append((term, self.inner.connectors[i - 1] if i > 0 else None))
        return out


Term = Union[SimpleTerm, GroupTerm]


@dataclass(frozen=True)
class UdcExpression:
    """Alternating terms and connectors: len(connectors) == len(terms) - 1."""

    terms: tuple[Term, ...]
    connectors: tuple[Connector, ...]
    raw: str


_CONNECTOR_TOKEN_KINDS = frozenset(_CONNECTOR_OF_TOKEN)

_TERM_START_KINDS = frozenset(
    {
        TokenKind.DIGITS,
        TokenKind.OPEN_PAREN,
        TokenKind.QUOTE,
        TokenKind.EQUALS,
        TokenKind.HYPHEN,
        TokenKind.APOSTROPHE,
        TokenKind.ALPHA_SPAN,
        TokenKind.ANGLE_SPAN,
        TokenKind.ASTERISK,
    }
)


@dataclass
class _SimpleProto:
    start: int
    class_digits: str = ""
    auxiliaries: list[Auxiliary] = field(default_factory=list)
    extensions: list[str] = field(default_factory=list)
    inner_ranges: list[InnerRange] = field(default_factory=list)


@dataclass
class _GroupProto:
    start: int
    inner: UdcExpression


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token cursor -------------------------------------------------

    def _peek(self, ahead: int = 0) -> Token | None:
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def _advance(self) -> None:
        self.pos += 1

    def _skip_ws(self) -> None:
        tok = self._peek()
        while tok is not None and tok.kind is TokenKind.WHITESPACE:
            self._advance()
            tok = self._peek()

    # -- grammar ------------------------------------------------------

    def parse_top(self) -> UdcExpression:
        expr = self._expression(region_start=0)
        tok = self._peek()
        if tok is not None:  # only a stray ']' can be left over
            raise ParseError("unbalanced-bracket", tok.offset, "unmatched ']'")
        return expr

    def _expression(self, region_start: int) -> UdcExpression:
        self._skip_ws()
        tok = self._peek()
        if tok is None or tok.kind is TokenKind.CLOSE_SQUARE:
            raise ParseError("empty-expression", region_start, "expression has no terms")
        if tok.kind in _CONNECTOR_TOKEN_KINDS:
            raise ParseError(
                "dangling-connector", tok.offset, "connector has no preceding term"
            )
        term_protos: list[_SimpleProto | _GroupProto] = [self._term()]
        conn_tokens: list[Token] = []
        while True:
            self._skip_ws()
            tok = self._peek()
            if tok is None or tok.kind is TokenKind.CLOSE_SQUARE:
                break
            if tok.kind in _CONNECTOR_TOKEN_KINDS:
                self._advance()
                self._skip_ws()
                nxt = self._peek()
                if nxt is None or nxt.kind is TokenKind.CLOSE_SQUARE:
                    raise ParseError(
                        "dangling-connector", tok.offset, "connector has no following term"
                    )
                if nxt.kind in _CONNECTOR_TOKEN_KINDS:
                    raise ParseError(
                        "dangling-connector", nxt.offset, "consecutive connectors"
                    )
                conn_tokens.append(tok)
                term_protos.append(self._term())
            else:
                raise ParseError(
                    "malformed-auxiliary",
                    tok.offset,
                    f"expected a connector before {tok.lexeme!r}",
                )
        end_tok = self._peek()
        region_end = end_tok.offset if end_tok is not None else len(self.text)
        return self._finalize(term_protos, conn_tokens, region_start, region_end)

    def _finalize(
        self,
        term_protos: list[_SimpleProto | _GroupProto],
        conn_tokens: list[Token],
        region_start: int,
        region_end: int,
    ) -> UdcExpression:
        # Interleave pieces and slice the source so that term/connector raws
        # partition [region_start, region_end): whitespace between pieces
        # rides along with the piece it follows, keeping renders exact.
        pieces: list[tuple[str, object]] = [("term", term_protos[0])]
        for conn, proto in zip(conn_tokens, term_protos[1:]):
            pieces.append(("conn", conn))
            pieces.append(("term", proto))
        starts = [region_start]
        for _, piece in pieces[1:]:
            starts.append(piece.offset if isinstance(piece, Token) else piece.start)
        starts.append(region_end)

        terms: list[Term] = []
        connectors: list[Connector] = []
        for (tag, piece), lo, hi in zip(pieces, starts, starts[1:]):
            raw = self.text[lo:hi]
            if tag == "conn":
                assert isinstance(piece, Token)
                connectors.append(
                    Connector(_CONNECTOR_OF_TOKEN[piece.kind], piece.offset, raw)
                )
            elif isinstance(piece, _GroupProto):
                terms.append(GroupTerm(piece.inner, raw, piece.start))
            else:
                assert isinstance(piece, _SimpleProto)
                terms.append(
                    SimpleTerm(
                        piece.class_digits,
                        tuple(piece.auxiliaries),
                        tuple(piece.extensions),
                        tuple(piece.inner_ranges),
                        raw,
                        piece.start,
                    )
                )
        return UdcExpression(
            tuple(terms), tuple(connectors), self.text[region_start:region_end]
        )

    def _term(self) -> _SimpleProto | _GroupProto:
        tok = self._peek()
        assert tok is not None
        if tok.kind is TokenKind.OPEN_SQUARE:
            return self._group()
        if tok.kind in _TERM_START_KINDS:
            return self._simple()
        if tok.kind is TokenKind.CLOSE_PAREN:
            raise ParseError("unbalanced-bracket", tok.offset, "unmatched ')'")
        if tok.kind is TokenKind.DOT:
            raise ParseError(
                "malformed-auxiliary", tok.offset, "a term may not start with '.'"
            )
        raise ParseError(
            "malformed-auxiliary", tok.offset, f"unexpected {tok.lexeme!r}"
        )

    def _group(self) -> _GroupProto:
        open_tok = self._peek()
        assert open_tok is not None
        self._advance()
        inner = self._expression(region_start=open_tok.offset + 1)
        close = self._peek()
        if close is None:
            raise ParseError("unbalanced-bracket", open_tok.offset, "unterminated '['")
        self._advance()
        return _GroupProto(start=open_tok.offset, inner=inner)

    def _simple(self) -> _SimpleProto:
        first = self._peek()
        assert first is not None
        proto = _SimpleProto(start=first.offset)
        while True:
            tok = self._peek()
            if tok is None:
                break
            kind = tok.kind
            if kind is TokenKind.WHITESPACE:
                self._advance()
                continue
            if kind is TokenKind.DIGITS:
                self._advance()
                if not (
                    proto.class_digits
                    or proto.auxiliaries
                    or proto.extensions
                    or proto.inner_ranges
                ):
                    proto.class_digits = tok.lexeme
                else:
                    proto.extensions.append(tok.lexeme)
                continue
            if kind is TokenKind.DOT:
                nxt = self._peek(1)
                if nxt is None or nxt.kind is not TokenKind.DIGITS:
                    raise ParseError(
                        "malformed-auxiliary", tok.offset, "'.' must be followed by digits"
                    )
                self._advance()
                self._advance()
                if nxt.lexeme[0] == "0":
                    # .0 introduces a special auxiliary, never more class digits.
                    proto.auxiliaries.append(
                        Auxiliary(
                            AuxKind.SPECIAL_POINT_ZERO,
                            nxt.lexeme[1:],
                            "." + nxt.lexeme,
                            tok.offset,
                        )
                    )
                elif proto.class_digits and not (
                    proto.auxiliaries or proto.extensions or proto.inner_ranges
                ):
                    proto.class_digits += nxt.lexeme
                else:
                    proto.extensions.append(nxt.lexeme)
                continue
            if kind is TokenKind.OPEN_PAREN:
                proto.auxiliaries.append(self._paren_aux())
                continue
            if kind is TokenKind.QUOTE:
                proto.auxiliaries.append(self._time_aux())
                continue
            if kind is TokenKind.EQUALS:
                proto.auxiliaries.append(self._language_aux())
                continue
            if kind is TokenKind.HYPHEN:
                nxt = self._peek(1)
                if nxt is None or nxt.kind is not TokenKind.DIGITS:
                    raise ParseError(
                        "malformed-auxiliary", tok.offset, "'-' must introduce a digit run"
                    )
                self._advance()
                self._advance()
                proto.auxiliaries.append(
                    Auxiliary(
                        AuxKind.SPECIAL_HYPHEN, nxt.lexeme, "-" + nxt.lexeme, tok.offset
                    )
                )
                continue
            if kind is TokenKind.APOSTROPHE:
                nxt = self._peek(1)
                if nxt is None or nxt.kind is not TokenKind.DIGITS:
                    raise ParseError(
                        "malformed-auxiliary", tok.offset, "''' must introduce a digit run"
                    )
                self._advance()
                self._advance()
                proto.auxiliaries.append(
                    Auxiliary(
                        AuxKind.SPECIAL_APOSTROPHE,
                        nxt.lexeme,
                        "'" + nxt.lexeme,
                        tok.offset,
                    )
                )
                continue
            if kind is TokenKind.ALPHA_SPAN:
                proto.auxiliaries.append(self._alpha_extension())
                continue
            if kind is TokenKind.ANGLE_SPAN:
                self._advance()
                proto.auxiliaries.append(
                    Auxiliary(AuxKind.IGNORED_ANGLE, tok.lexeme[1:-1], tok.lexeme, tok.offset)
                )
                continue
            if kind is TokenKind.ASTERISK:
                proto.auxiliaries.append(self._asterisk_aux())
                continue
            if kind is TokenKind.STROKE:
                nxt = self._peek(1)
                nxt2 = self._peek(2)
                if (
                    nxt is not None
                    and nxt2 is not None
                    and nxt.kind in (TokenKind.HYPHEN, TokenKind.DOT)
                    and nxt2.kind is TokenKind.DIGITS
                ):
                    # A stroke whose right side starts with '-' or '.' ranges
                    # over auxiliaries/extensions of this term; it is not a
                    # class-to-class operation.
                    proto.inner_ranges.append(
                        InnerRange(ConnectorKind.STROKE, tok.offset)
                    )
                    self._advance()
                    continue
                break
            if kind in _CONNECTOR_TOKEN_KINDS or kind in (
                TokenKind.OPEN_SQUARE,
                TokenKind.CLOSE_SQUARE,
            ):
                break
            if kind is TokenKind.CLOSE_PAREN:
                raise ParseError("unbalanced-bracket", tok.offset, "unmatched ')'")
            raise ParseError(
                "malformed-auxiliary", tok.offset, f"unexpected {tok.lexeme!r}"
            )
        if not (proto.class_digits or proto.auxiliaries or proto.extensions):
            raise ParseError("malformed-auxiliary", proto.start, "empty term")
        return proto

    # -- auxiliaries ----------------------------------------------------

    def _paren_aux(self) -> Auxiliary:
        open_tok = self._peek()
        assert open_tok is not None
        self._advance()
        payload_start = open_tok.offset + 1
        pieces: list[str] = []
        inner: list[InnerConnector] = []
        depth = 1
        while True:
            tok = self._peek()
            if tok is None:
                raise ParseError(
                    "unbalanced-bracket", open_tok.offset, "unterminated '('"
                )
            if tok.kind is TokenKind.OPEN_PAREN:
                depth += 1
            elif tok.kind is TokenKind.CLOSE_PAREN:
                depth -= 1
                if depth == 0:
                    close = tok
                    self._advance()
                    break
            if tok.kind in _CONNECTOR_TOKEN_KINDS:
                inner.append(
                    InnerConnector(
                        _CONNECTOR_OF_TOKEN[tok.kind], tok.offset - payload_start
                    )
                )
            pieces.append(tok.lexeme)
            self._advance()
        payload = "".join(pieces)
        if not payload:
            raise ParseError(
                "malformed-auxiliary", open_tok.offset, "empty '()' auxiliary"
            )
        lead = payload[0]
        if lead == "0":
            kind = AuxKind.FORM
        elif "1" <= lead <= "9":
            kind = AuxKind.PLACE
        else:
            raise ParseError(
                "malformed-auxiliary",
                payload_start,
                "a '(...)' auxiliary must start with a digit",
            )
        raw = self.text[open_tok.offset : close.offset + 1]
        return Auxiliary(kind, payload, raw, open_tok.offset, tuple(inner))

    def _time_aux(self) -> Auxiliary:
        open_tok = self._peek()
        assert open_tok is not None
        self._advance()
        payload_start = open_tok.offset + 1
        pieces: list[str] = []
        inner: list[InnerConnector] = []
        while True:
            tok = self._peek()
            if tok is None:
                raise ParseError(
                    "unbalanced-bracket", open_tok.offset, "unterminated '\"'"
                )
            if tok.kind is TokenKind.QUOTE:
                close = tok
                self._advance()
                break
            if tok.kind in _CONNECTOR_TOKEN_KINDS:
                inner.append(
                    InnerConnector(
                        _CONNECTOR_OF_TOKEN[tok.kind], tok.offset - payload_start
                    )
                )
            pieces.append(tok.lexeme)
            self._advance()
        raw = self.text[open_tok.offset : close.offset + 1]
        return Auxiliary(
            AuxKind.TIME, "".join(pieces), raw, open_tok.offset, tuple(inner)
        )

    def _language_aux(self) -> Auxiliary:
        eq = self._peek()
        assert eq is not None
        self._advance()
        tok = self._peek()
        if tok is None or tok.kind is not TokenKind.DIGITS:
            raise ParseError(
                "malformed-auxiliary", eq.offset, "'=' must introduce a digit run"
            )
        payload_start = eq.offset + 1
        pieces: list[str] = []
        inner: list[InnerConnector] = []

        def take_run() -> None:
            run = self._peek()
            assert run is not None
            pieces.append(run.lexeme)
            self._advance()
            while True:
                sep = self._peek()
                nxt = self._peek(1)
                if (
                    sep is not None
                    and nxt is not None
                    and sep.kind in (TokenKind.DOT, TokenKind.APOSTROPHE)
                    and nxt.kind is TokenKind.DIGITS
                ):
                    pieces.append(sep.lexeme)
                    pieces.append(nxt.lexeme)
                    self._advance()
                    self._advance()
                else:
                    break

        take_run()
        # ``+`` or ``/`` immediately followed by another '=' run chains
        # language auxiliaries; the connector stays inside the payload.
        while True:
            conn = self._peek()
            nxt = self._peek(1)
            nxt2 = self._peek(2)
            if (
                conn is not None
                and nxt is not None
                and nxt2 is not None
                and conn.kind in (TokenKind.PLUS, TokenKind.STROKE)
                and nxt.kind is TokenKind.EQUALS
                and nxt2.kind is TokenKind.DIGITS
            ):
                inner.append(
                    InnerConnector(
                        _CONNECTOR_OF_TOKEN[conn.kind], conn.offset - payload_start
                    )
                )
                pieces.append(conn.lexeme)
                pieces.append(nxt.lexeme)
                self._advance()
                self._advance()
                take_run()
            else:
                break
        payload = "".join(pieces)
        return Auxiliary(
            AuxKind.LANGUAGE, payload, "=" + payload, eq.offset, tuple(inner)
        )

    def _alpha_extension(self) -> Auxiliary:
        first = self._peek()
        assert first is not None
        self._advance()
        pieces = [first.lexeme]
        while True:
            tok = self._peek()
            if tok is not None and tok.kind in (TokenKind.ALPHA_SPAN, TokenKind.DIGITS):
                pieces.append(tok.lexeme)
                self._advance()
            else:
                break
        payload = "".join(pieces)
        return Auxiliary(AuxKind.ALPHABETIC_EXTENSION, payload, payload, first.offset)

    def _asterisk_aux(self) -> Auxiliary:
        star = self._peek()
        assert star is not None
        self._advance()
        pieces: list[str] = []
        while True:
            tok = self._peek()
            if tok is not None and tok.kind in (
                TokenKind.DIGITS,
                TokenKind.DOT,
                TokenKind.ALPHA_SPAN,
            ):
                pieces.append(tok.lexeme)
                self._advance()
            else:
                break
        payload = "".join(pieces)
        return Auxiliary(
            AuxKind.NON_UDC_ASTERISK, payload, "*" + payload, star.offset
        )


def parse(raw: str) -> UdcExpression:
    """Parse ``raw`` into an expression tree.

    Raises :class:`ParseError` when the string is not UDC notation.
    """
    text = raw.strip()
    if not text:
        raise ParseError("empty-expression", 0, "empty after trimming whitespace")
    return _Parser(text).parse_top()


def render(expr: UdcExpression) -> str:
    """Reassemble the original (trimmed) string from the tree pieces."""
    parts: list[str] = []
    for i, term in enumerate(expr.terms):
        parts.append(term.raw)
        if i < len(expr.connectors):
            parts.append(expr.connectors[i].raw)
    return "".join(parts)


@dataclass(frozen=True)
class Classification:
    """Outcome of :func:`classify`: usable UDC notation or not, and why not."""

    valid: bool
    reason: str | None = None
    detail: str | None = None
    expression: UdcExpression | None = None


_QUALIFYING_FIRST_CHARS = frozenset("0123456789(\"=[")


def _first_significant_char(text: str) -> str | None:
    """First character of ``text`` outside whitespace and ``<...>`` spans."""
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "<":
            end = text.find(">", i + 1)
            if end != -1:
                i = end + 1
                continue
        return ch
    return None


def classify(raw: str) -> Classification:
    """Decide whether a candidate string is usable UDC notation.

    A candidate is valid when it parses and at least one of its terms starts
    (outside ignorable spans) with a digit or one of the auxiliary/group
    delimiters ``(  "  =  [``.  Everything else -- free text, ``*``-only
    notation, unparseable strings -- is dismissed with a reason.
    """
    try:
        expr = parse(raw)
    except ParseError as exc:
        return Classification(False, exc.reason, exc.message)
    for term in expr.terms:
        ch = _first_significant_char(term.raw)
        if ch is not None and ch in _QUALIFYING_FIRST_CHARS:
            return Classification(True, expression=expr)
    return Classification(
        False,
        "shape-rejection",
        "no term starts with a digit or a recognised auxiliary delimiter",
    )


def main_class_of(term: SimpleTerm) -> int | None:
    """Main class (leading digit) of a simple term; None when auxiliary-only."""
    if isinstance(term, GroupTerm):
        raise TypeError("main_class_of expects a simple term, not a group")
    return int(term.class_digits[0]) if term.class_digits else None


def iter_simple_terms(expr: UdcExpression) -> Iterator[SimpleTerm]:
    """All simple terms in document order, descending into groups."""
    for term in expr.terms:
        if isinstance(term, GroupTerm):
            yield from iter_simple_terms(term.inner)
        else:
            yield term


def leading_class(expr: UdcExpression) -> int | None:
    """Class of the first class-bearing term, or None if there is none."""
    for term in iter_simple_terms(expr):
        if term.class_digits:
            return int(term.class_digits[0])
    return None


def all_classes(expr: UdcExpression) -> list[int]:
    """Class of every class-bearing term, in order, including group members.

    Digits inside auxiliary payloads and extensions never contribute.
    """
    return [int(t.class_digits[0]) for t in iter_simple_terms(expr) if t.class_digits]


LENGTH_METRICS = ("chars", "digits")


def string_length(raw: str, metric: str = "chars") -> int:
    """Length of a string: non-whitespace characters or decimal digits."""
    if metric == "chars":
        return sum(1 for ch in raw if not ch.isspace())
    if metric == "digits":
        return sum(1 for ch in raw if "0" <= ch <= "9")
    raise ValueError(f"unknown length metric: {metric!r}")


def dump_tree(expr: UdcExpression) -> str:
    """Debug dump: one node per line, children indented two spaces."""
    lines: list[str] = []
    _dump_expression(expr, 0, lines)
    return "\n".join(lines)


def _dump_expression(expr: UdcExpression, depth: int, lines: list[str]) -> None:
    pad = "  " * depth
    lines.append(f"{pad}expression {expr.raw!r}")
    for i, term in enumerate(expr.terms):
        if i > 0:
            conn = expr.connectors[i - 1]
            lines.append(f"{pad}  connector {conn.kind.value}")
        _dump_term(term, depth + 1, lines)


def _dump_term(term: Term, depth: int, lines: list[str]) -> None:
    pad = "  " * depth
    if isinstance(term, GroupTerm):
        lines.append(f"{pad}term group")
        _dump_expression(term.inner, depth + 1, lines)
        return
    main = main_class_of(term)
    head = f"{pad}term class_digits={term.class_digits or '-'}"
    if main is not None:
        head += f" main_class={main}"
    lines.append(head)
    for aux in term.auxiliaries:
        entry = f"{pad}  auxiliary {aux.kind.value} payload={aux.payload!r}"
        if aux.inner_connectors:
            marks = ",".join(
                f"{ic.kind.value}@{ic.position}" for ic in aux.inner_connectors
            )
            entry += f" inner=[{marks}]"
        lines.append(entry)
    for ext in term.extensions:
        lines.append(f"{pad}  extension {ext}")
    for rng in term.inner_ranges:
        lines.append(f"{pad}  range {rng.kind.value}")
