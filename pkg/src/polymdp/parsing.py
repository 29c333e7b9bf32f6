"""Tokenizer and recursive-descent parsers for the textual formats.

This module knows nothing about diagram stores; it turns text into plain
syntax values (polynomials, condition atoms, nested case trees) that
`domlang` and the diagram store assemble into diagrams.  Every parse failure
raises `ParseError` carrying a `SourceSpan`, and the tokenizer rejects
unknown bytes the same way, so arbitrary input can never escalate past a
parse error.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .poly import Polynomial

RELS = ("<=", ">=", "<", ">")


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    col: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


class ParseError(Exception):
    """Syntax or local semantic error, located by a SourceSpan."""

    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


@dataclass(frozen=True)
class Token:
    kind: str  # ident | num | rel | punct | eof
    text: str
    span: SourceSpan
    value: Optional[Fraction] = None


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+\.\d+|\.\d+|\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'?)
  | (?P<rel><=|>=|<|>)
  | (?P<punct>[()\[\]{}+\-*/^=~,:;&!]|⊤|∧|¬)
    """,
    re.VERBOSE,
)


def tokenize(text: str, filename: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(filename, line, pos - line_start + 1, pos - line_start + 2)
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        lexeme = m.group()
        col = pos - line_start + 1
        span = SourceSpan(filename, line, col, col + len(lexeme))
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "num":
            tokens.append(Token("num", lexeme, span, Fraction(lexeme)))
        elif kind in ("ident", "rel", "punct"):
            tokens.append(Token(kind, lexeme, span))
        pos = m.end()
    eof_col = pos - line_start + 1
    tokens.append(Token("eof", "", SourceSpan(filename, line, eof_col, eof_col)))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self._tokens[min(self._pos + ahead, len(self._tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self._pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind != "eof"

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str, what: str = "") -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "eof":
            hint = f" in {what}" if what else ""
            got = repr(tok.text) if tok.kind != "eof" else "end of input"
            raise ParseError(f"expected {text!r}{hint}, got {got}", tok.span)
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            got = repr(tok.text) if tok.kind != "eof" else "end of input"
            raise ParseError(f"expected {what}, got {got}", tok.span)
        return self.next()

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.peek().span)


# -- condition / case syntax values -----------------------------------------


@dataclass(frozen=True)
class BoolAtom:
    """Condition on a boolean variable, possibly negated."""

    symbol: str
    negated: bool
    span: SourceSpan


@dataclass(frozen=True)
class CmpAtom:
    lhs: Polynomial
    op: str
    rhs: Polynomial
    span: SourceSpan


@dataclass(frozen=True)
class TrueAtom:
    span: SourceSpan


CondAtom = Union[BoolAtom, CmpAtom, TrueAtom]


@dataclass(frozen=True)
class CaseLeaf:
    poly: Polynomial
    span: SourceSpan


@dataclass(frozen=True)
class CaseBranch:
    cond: CondAtom
    high: "CaseTree"
    low: "CaseTree"
    span: SourceSpan


CaseTree = Union[CaseLeaf, CaseBranch]

#: Optional hook validating a variable use inside a polynomial; raises ParseError.
VarCheck = Callable[[str, SourceSpan], None]


# -- polynomial expressions --------------------------------------------------
#
# expr   := term (("+" | "-") term)*
# term   := unary ("*" unary)*
# unary  := "-" unary | power
# power  := atom ("^" INT)?
# atom   := NUM ("/" NUM)? | IDENT | "(" expr ")"


def parse_poly_expr(ts: TokenStream, var_check: VarCheck | None = None) -> Polynomial:
    result = _parse_term(ts, var_check)
    while True:
        if ts.accept("+"):
            result = result + _parse_term(ts, var_check)
        elif ts.accept("-"):
            result = result - _parse_term(ts, var_check)
        else:
            return result


def _parse_term(ts: TokenStream, var_check: VarCheck | None) -> Polynomial:
    result = _parse_unary(ts, var_check)
    while ts.accept("*"):
        result = result * _parse_unary(ts, var_check)
    return result


def _parse_unary(ts: TokenStream, var_check: VarCheck | None) -> Polynomial:
    if ts.accept("-"):
        return -_parse_unary(ts, var_check)
    return _parse_power(ts, var_check)


def _parse_power(ts: TokenStream, var_check: VarCheck | None) -> Polynomial:
    base = _parse_atom(ts, var_check)
    if ts.accept("^"):
        tok = ts.expect_kind("num", "integer exponent")
        if tok.value is None or tok.value.denominator != 1 or tok.value < 1:
            raise ParseError("exponent must be a positive integer", tok.span)
        return base ** int(tok.value)
    return base


def _parse_atom(ts: TokenStream, var_check: VarCheck | None) -> Polynomial:
    tok = ts.peek()
    if tok.kind == "num":
        ts.next()
        value = tok.value
        if ts.accept("/"):
            den = ts.expect_kind("num", "denominator")
            if den.value is None or den.value == 0 or den.value.denominator != 1:
                raise ParseError("denominator must be a non-zero integer", den.span)
            value = value / den.value
        return Polynomial.const(value)
    if tok.kind == "ident":
        ts.next()
        if var_check is not None:
            var_check(tok.text, tok.span)
        return Polynomial.var(tok.text)
    if tok.text == "(":
        ts.next()
        inner = parse_poly_expr(ts, var_check)
        ts.expect(")", "parenthesized expression")
        return inner
    raise ts.error(f"expected a number, variable or '(', got {tok.text!r}")


def parse_polynomial(text: str, filename: str = "<poly>",
                     var_check: VarCheck | None = None) -> Polynomial:
    ts = TokenStream(tokenize(text, filename))
    p = parse_poly_expr(ts, var_check)
    tok = ts.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected trailing input {tok.text!r}", tok.span)
    return p


# -- conditions ---------------------------------------------------------------


def parse_condition(ts: TokenStream, var_check: VarCheck | None = None,
                    bool_check: VarCheck | None = None) -> CondAtom:
    """Parse `poly REL poly` or a bare (possibly primed) boolean variable."""
    start = ts.peek()
    if start.kind == "ident" and ts.peek(1).kind not in ("rel",) \
            and ts.peek(1).text not in ("+", "-", "*", "^", "/"):
        ts.next()
        if bool_check is not None:
            bool_check(start.text, start.span)
        return BoolAtom(start.text, negated=False, span=start.span)
    lhs = parse_poly_expr(ts, var_check)
    tok = ts.peek()
    if tok.kind != "rel":
        raise ParseError(
            f"expected one of {', '.join(RELS)} in condition, got {tok.text!r}", tok.span
        )
    ts.next()
    rhs = parse_poly_expr(ts, var_check)
    return CmpAtom(lhs, tok.text, rhs, start.span)


# -- nested case trees --------------------------------------------------------
#
# case := "(" "[" cond "]" case case ")" | "(" poly ")" | poly


def parse_case_tree(ts: TokenStream, var_check: VarCheck | None = None,
                    bool_check: VarCheck | None = None) -> CaseTree:
    start = ts.peek()
    if start.text == "(" and ts.peek(1).text == "[":
        ts.next()
        ts.next()
        cond = parse_condition(ts, var_check, bool_check)
        ts.expect("]", "condition")
        high = parse_case_tree(ts, var_check, bool_check)
        low = parse_case_tree(ts, var_check, bool_check)
        ts.expect(")", "case branch")
        return CaseBranch(cond, high, low, start.span)
    poly = parse_poly_expr(ts, var_check)
    return CaseLeaf(poly, start.span)


# -- flat case statements -----------------------------------------------------
#
# One partition per line (or ';'-separated): `cond (& cond)* : poly`.
# `⊤`, `T` or `true` stands for the unconditional partition; `~b` negates a
# boolean variable.  Unicode ∧ and ¬ are accepted as aliases of & and ~.

_TOP_WORDS = ("⊤", "T", "true", "top")
_NEG_WORDS = ("~", "!", "¬")
_AND_WORDS = ("&", "∧", "and")


def parse_flat_partitions(text: str, filename: str = "<case>"
                          ) -> list[tuple[list[CondAtom], Polynomial, SourceSpan]]:
    partitions: list[tuple[list[CondAtom], Polynomial, SourceSpan]] = []
    for line, offset in _split_partitions(text):
        if not line.strip() or line.strip().startswith("#"):
            continue
        ts = TokenStream(tokenize(line, filename))
        # patch line numbers so errors point into the original text
        ts._tokens = [
            Token(t.kind, t.text, SourceSpan(filename, offset, t.span.col, t.span.end_col), t.value)
            for t in ts._tokens
        ]
        span = ts.peek().span
        atoms = [_parse_flat_atom(ts)]
        while ts.peek().text in _AND_WORDS:
            ts.next()
            atoms.append(_parse_flat_atom(ts))
        ts.expect(":", "partition")
        poly = parse_poly_expr(ts)
        tok = ts.peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.span)
        partitions.append((atoms, poly, span))
    return partitions


def _split_partitions(text: str) -> list[tuple[str, int]]:
    pieces: list[tuple[str, int]] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        for piece in line.split(";"):
            pieces.append((piece, lineno))
    return pieces


def _parse_flat_atom(ts: TokenStream) -> CondAtom:
    tok = ts.peek()
    if tok.text in _TOP_WORDS:
        ts.next()
        return TrueAtom(tok.span)
    if tok.text in _NEG_WORDS:
        ts.next()
        name = ts.expect_kind("ident", "boolean variable after negation")
        return BoolAtom(name.text, negated=True, span=name.span)
    return parse_condition(ts)
