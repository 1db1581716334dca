"""Recursive-descent parser for metric-component expressions.

Grammar (whitespace insignificant):

    expr   := ('+'|'-')? term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' nat)?
    base   := name | nat | '(' expr ')'

A '/' divisor must evaluate to a nonzero constant, so rational literals are
just constant division ("1/2") and "t/2" divides a term by 2; division by
anything non-constant is rejected.  Exponents are nonnegative integer
literals.  Parsing is total on this grammar and rejects everything else with
a position-annotated error.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import ParseError, UnknownVariableError
from .poly import PolyExpr


class _Token(NamedTuple):
    kind: str   # "name" | "int" | "op" | "end"
    text: str
    pos: int


_OPS = set("+-*/^()")


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and (source[j] == "." or source[j].isalpha() or source[j] == "_"):
                raise ParseError("malformed number", source, j)
            tokens.append(_Token("int", source[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("name", source[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", source, i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str, variables: Sequence[str]):
        self.source = source
        self.variables = tuple(variables)
        self.tokens = _tokenize(source)
        self.idx = 0

    def peek(self) -> _Token:
        return self.tokens[self.idx]

    def advance(self) -> _Token:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, self.source, tok.pos)

    def parse(self) -> PolyExpr:
        result = self.expr()
        tail = self.peek()
        if tail.kind != "end":
            self.error(f"unexpected {tail.text!r}", tail)
        return result

    def expr(self) -> PolyExpr:
        negate = False
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.advance()
            negate = tok.text == "-"
        result = self.term()
        if negate:
            result = -result
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "+-":
                self.advance()
                rhs = self.term()
                result = result + rhs if tok.text == "+" else result - rhs
            else:
                return result

    def term(self) -> PolyExpr:
        result = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "*/":
                self.advance()
                rhs_pos = self.peek().pos
                rhs = self.factor()
                if tok.text == "*":
                    result = result * rhs
                else:
                    if not rhs.is_constant():
                        raise ParseError("divisor must be a nonzero constant",
                                         self.source, rhs_pos)
                    value = rhs.constant_value()
                    if value == 0:
                        raise ParseError("division by zero", self.source, rhs_pos)
                    result = result.scale_inverse(value)
            else:
                return result

    def factor(self) -> PolyExpr:
        base = self.base()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            exp_tok = self.peek()
            if exp_tok.kind == "op" and exp_tok.text == "-":
                raise ParseError("negative exponent", self.source, exp_tok.pos)
            if exp_tok.kind != "int":
                raise ParseError("exponent must be a nonnegative integer",
                                 self.source, exp_tok.pos)
            self.advance()
            return base ** int(exp_tok.text)
        return base

    def base(self) -> PolyExpr:
        tok = self.advance()
        if tok.kind == "int":
            return PolyExpr.constant(self.variables, Fraction(int(tok.text)))
        if tok.kind == "name":
            if tok.text not in self.variables:
                raise UnknownVariableError(tok.text, self.source, tok.pos)
            return PolyExpr.variable(self.variables, tok.text)
        if tok.kind == "op" and tok.text == "(":
            inner = self.expr()
            close = self.advance()
            if not (close.kind == "op" and close.text == ")"):
                raise ParseError("expected ')'", self.source, close.pos)
            return inner
        if tok.kind == "end":
            raise ParseError("unexpected end of expression", self.source, tok.pos)
        raise ParseError(f"unexpected {tok.text!r}", self.source, tok.pos)


def parse_expr(source: str, variables: Sequence[str]) -> PolyExpr:
    """Parse an expression string into a canonical PolyExpr."""
    return _Parser(source, variables).parse()
