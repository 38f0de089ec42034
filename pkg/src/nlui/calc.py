"""Arithmetic expression evaluator for the calculator application.

Grammar (left-associative, usual precedence):

    expr    := term  (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := NUMBER | '(' expr ')'
    NUMBER  := ['$'] digits ['.' digits]

Evaluation is exact rational arithmetic; results render as decimal strings
with up to 10 significant digits, trailing fractional zeros trimmed. The
'$' prefix is presentation only and is discarded before evaluating.
"""
from __future__ import annotations

import decimal
import re
from fractions import Fraction

from .errors import DivisionByZero, ParseError

SIGNIFICANT_DIGITS = 10

_TOKEN_RE = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|(\$)|([()+\-*/])|(\S))")


def _lex(expr: str) -> list[str]:
    tokens: list[str] = []
    pos = 0
    while pos < len(expr):
        match = _TOKEN_RE.match(expr, pos)
        if match is None:
            break
        number, dollar, op, junk = match.groups()
        if junk is not None:
            raise ParseError(f"unexpected character {junk!r} at position {match.start(4)}")
        if dollar is not None:
            pos = match.end()
            continue
        tokens.append(number if number is not None else op)
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        token = self.peek()
        if token is None:
            raise ParseError("unexpected end of expression")
        self.pos += 1
        return token

    def expr(self) -> Fraction:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            right = self.term()
            value = value + right if op == "+" else value - right
        return value

    def term(self) -> Fraction:
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            right = self.factor()
            if op == "*":
                value = value * right
            else:
                if right == 0:
                    raise DivisionByZero("division by zero")
                value = value / right
        return value

    def factor(self) -> Fraction:
        token = self.take()
        if token == "(":
            value = self.expr()
            if self.peek() != ")":
                raise ParseError("missing closing parenthesis")
            self.take()
            return value
        if token[0].isdigit():
            return Fraction(token)
        raise ParseError(f"expected a number or '(', got {token!r}")


def eval_to_fraction(expr: str) -> Fraction:
    tokens = _lex(expr)
    if not tokens:
        raise ParseError("empty expression")
    parser = _Parser(tokens)
    value = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"unexpected trailing input {parser.peek()!r}")
    return value


def render_fraction(value: Fraction, significant_digits: int = SIGNIFICANT_DIGITS) -> str:
    with decimal.localcontext() as ctx:
        ctx.prec = significant_digits
        quotient = decimal.Decimal(value.numerator) / decimal.Decimal(value.denominator)
    text = format(quotient, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text if text not in ("-0", "") else "0"


def eval_expression(expr: str) -> str:
    """Parse and evaluate, returning the rendered decimal string."""
    return render_fraction(eval_to_fraction(expr))
