"""Concrete syntax: a tokenizer, a recursive descent parser, and printing.

Grammar sketch, loosest binding first::

    formula  := or_expr ('->' formula)?          right-associative
    or_expr  := and_expr ('|' or_expr)?
    and_expr := unary ('&' and_expr)?
    unary    := ('~' | '[]' | '<>' | 'prf') unary
              | ('forall' | 'exists') VAR '.' formula
              | primary
    primary  := 'bot' | '(' formula ')'
              | UPPER_IDENT '(' terms? ')'
              | term ('=' term)?                 a bare lowercase ident is an atom
    term     := IDENT ('(' term (',' term)* ')')?

A quantifier scopes to the right as far as possible.  `~A` is sugar for
`A -> bot` and `<>A` for `~[]~A`; both parse to the underlying shape and the
printer restores them.  In term position an identifier starting with one of
u v w x y z is a variable, anything else a constant; quantifiers must bind
variable-convention names so that printing and reparsing agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .syntax import (
    App,
    Atom,
    BOT,
    Box,
    Const,
    Eq,
    Formula,
    Prf,
    Term,
    Var,
    diamond,
    neg,
)
from .syntax import Exists, Forall, Implies, And, Or

_KEYWORDS = frozenset({"bot", "forall", "exists", "prf"})
_VAR_START = "uvwxyz"


@dataclass
class ParseError(Exception):
    """Syntax error with the byte offset of the first offending token."""

    position: int
    expected: str
    found: str

    def __str__(self) -> str:
        return f"parse error at offset {self.position}: expected {self.expected}, found {self.found}"


class _Token(NamedTuple):
    kind: str  # one of the punctuation strings, "ident", "uident", "eof"
    text: str
    pos: int


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch.isalpha():
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "uident" if ch.isupper() else "ident"
            tokens.append(_Token(kind, word, i))
            i = j
            continue
        if ch in "(),.=~&|":
            tokens.append(_Token(ch, ch, i))
            i += 1
            continue
        if ch == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(_Token("->", "->", i))
            i += 2
            continue
        if ch == "[" and i + 1 < n and text[i + 1] == "]":
            tokens.append(_Token("[]", "[]", i))
            i += 2
            continue
        if ch == "<" and i + 1 < n and text[i + 1] == ">":
            tokens.append(_Token("<>", "<>", i))
            i += 2
            continue
        raise ParseError(i, "a token", repr(ch))
    tokens.append(_Token("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = _lex(text)
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect(self, kind: str, expected: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(expected, tok)
        return self.advance()

    def fail(self, expected: str, tok: _Token | None = None) -> None:
        tok = tok or self.peek()
        found = repr(tok.text) if tok.kind != "eof" else "end of input"
        raise ParseError(tok.pos, expected, found)

    # formula level

    def formula(self) -> Formula:
        lhs = self.or_expr()
        if self.peek().kind == "->":
            self.advance()
            return Implies(lhs, self.formula())
        return lhs

    def or_expr(self) -> Formula:
        lhs = self.and_expr()
        if self.peek().kind == "|":
            self.advance()
            return Or(lhs, self.or_expr())
        return lhs

    def and_expr(self) -> Formula:
        lhs = self.unary()
        if self.peek().kind == "&":
            self.advance()
            return And(lhs, self.and_expr())
        return lhs

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "~":
            self.advance()
            return neg(self.unary())
        if tok.kind == "[]":
            self.advance()
            return Box(self.unary())
        if tok.kind == "<>":
            self.advance()
            return diamond(self.unary())
        if tok.kind == "ident" and tok.text == "prf":
            self.advance()
            return Prf(self.unary())
        if tok.kind == "ident" and tok.text in ("forall", "exists"):
            self.advance()
            var = self.peek()
            if var.kind != "ident" or var.text in _KEYWORDS or var.text[0] not in _VAR_START:
                self.fail("a variable name (starting with one of u v w x y z)")
            self.advance()
            self.expect(".", "'.'")
            body = self.formula()
            return Forall(var.text, body) if tok.text == "forall" else Exists(var.text, body)
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "bot":
            self.advance()
            return BOT
        if tok.kind == "(":
            self.advance()
            inner = self.formula()
            self.expect(")", "')'")
            return inner
        if tok.kind == "uident":
            self.advance()
            self.expect("(", "'('")
            args: list[Term] = []
            if self.peek().kind != ")":
                args.append(self.term())
                while self.peek().kind == ",":
                    self.advance()
                    args.append(self.term())
            self.expect(")", "')'")
            return Atom(tok.text, tuple(args))
        if tok.kind == "ident" and tok.text not in _KEYWORDS:
            start = self.index
            lhs = self.term()
            if self.peek().kind == "=":
                self.advance()
                return Eq(lhs, self.term())
            if isinstance(lhs, App):
                self.fail("'=' after a function application")
            # plain propositional atom; rewind is unnecessary, the term was one token
            del start
            return Atom(tok.text)
        self.fail("a formula")
        raise AssertionError("unreachable")

    # term level

    def term(self) -> Term:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in _KEYWORDS:
            self.fail("a term")
        self.advance()
        if self.peek().kind == "(":
            self.advance()
            args = [self.term()]
            while self.peek().kind == ",":
                self.advance()
                args.append(self.term())
            self.expect(")", "')'")
            return App(tok.text, tuple(args))
        if tok.text[0] in _VAR_START:
            return Var(tok.text)
        return Const(tok.text)


def parse(text: str) -> Formula:
    """Parse one formula; raise ParseError on malformed input."""
    parser = _Parser(text)
    result = parser.formula()
    tok = parser.peek()
    if tok.kind != "eof":
        parser.fail("end of input", tok)
    return result


def format_formula(f: Formula) -> str:
    """Render with minimal parentheses; parse(format_formula(f)) == f."""
    return str(f)


def parse_lines(text: str) -> Iterator[Formula]:
    """Parse a corpus: one formula per line, '#' lines and blank lines skipped."""
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield parse(stripped)
