"""Recursive-descent parser for the expression grammar.

Grammar (whitespace insignificant, ``x`` reserved for the variable)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' integer)?
    base   := number | ident | '(' expr ')' | 'exp' '(' expr ')' | '-' factor
    number := integer ('/' integer)?
    ident  := letter (letter|digit)*
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from ..errors import ExprSyntaxError, UnknownSymbolError
from .expr import Add, Expr, ExpFn, Mul, Pow, Quot, Rat, Sym


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> tuple[str, str, int]:
        """(kind, value, position) of the next token without consuming it."""
        self._skip_ws()
        i = self.pos
        if i >= len(self.text):
            return ("end", "", i)
        ch = self.text[i]
        if ch.isdigit():
            j = i
            while j < len(self.text) and self.text[j].isdigit():
                j += 1
            return ("int", self.text[i:j], i)
        if ch.isalpha():
            j = i
            while j < len(self.text) and (self.text[j].isalnum()):
                j += 1
            return ("ident", self.text[i:j], i)
        if ch in "+-*/^()":
            return ("op", ch, i)
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)

    def take(self) -> tuple[str, str, int]:
        kind, value, pos = self.peek()
        self.pos = pos + len(value) if kind != "end" else pos
        return kind, value, pos


def parse_expr(text: str, params: Iterable[str] = ()) -> Expr:
    """Parse text into an expression tree.

    Every identifier other than ``x`` and the ``exp`` keyword must appear in
    params, otherwise an unknown-symbol error names the offending token.
    """
    allowed = set(params)
    if "x" in allowed:
        raise ValueError("'x' is reserved for the independent variable")
    toks = _Tokens(text)
    tree = _parse_sum(toks, allowed)
    kind, value, pos = toks.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected trailing input {value!r}", pos)
    return tree


def _parse_sum(toks: _Tokens, allowed: set[str]) -> Expr:
    terms = [_parse_term(toks, allowed)]
    while True:
        kind, value, _ = toks.peek()
        if kind == "op" and value in "+-":
            toks.take()
            rhs = _parse_term(toks, allowed)
            terms.append(rhs if value == "+" else Mul((Rat(Fraction(-1)), rhs)))
        else:
            break
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


def _parse_term(toks: _Tokens, allowed: set[str]) -> Expr:
    result = _parse_factor(toks, allowed)
    while True:
        kind, value, _ = toks.peek()
        if kind == "op" and value in "*/":
            toks.take()
            rhs = _parse_factor(toks, allowed)
            result = Mul((result, rhs)) if value == "*" else Quot(result, rhs)
        else:
            break
    return result


def _parse_factor(toks: _Tokens, allowed: set[str]) -> Expr:
    base = _parse_base(toks, allowed)
    kind, value, _ = toks.peek()
    if kind == "op" and value == "^":
        toks.take()
        base = Pow(base, _parse_exponent(toks))
    return base


def _parse_exponent(toks: _Tokens) -> int:
    sign = 1
    kind, value, pos = toks.peek()
    if kind == "op" and value == "-":
        toks.take()
        sign = -1
        kind, value, pos = toks.peek()
    if kind != "int":
        raise ExprSyntaxError("expected integer exponent after '^'", pos)
    toks.take()
    return sign * int(value)


def _parse_base(toks: _Tokens, allowed: set[str]) -> Expr:
    kind, value, pos = toks.take()
    if kind == "int":
        return Rat(Fraction(int(value)))
    if kind == "ident":
        if value == "exp":
            k2, v2, p2 = toks.take()
            if not (k2 == "op" and v2 == "("):
                raise ExprSyntaxError("expected '(' after exp", p2)
            arg = _parse_sum(toks, allowed)
            k3, v3, p3 = toks.take()
            if not (k3 == "op" and v3 == ")"):
                raise ExprSyntaxError("expected ')' closing exp(...)", p3)
            return ExpFn(arg)
        if value == "x":
            return Sym("x")
        if value in allowed:
            return Sym(value)
        raise UnknownSymbolError(value, pos)
    if kind == "op" and value == "(":
        inner = _parse_sum(toks, allowed)
        k2, v2, p2 = toks.take()
        if not (k2 == "op" and v2 == ")"):
            raise ExprSyntaxError("expected closing ')'", p2)
        return inner
    if kind == "op" and value == "-":
        return Mul((Rat(Fraction(-1)), _parse_factor(toks, allowed)))
    raise ExprSyntaxError("expected a number, identifier or '('", pos)
