"""Tiny recursive-descent parser for scalar expressions.

Grammar (whitespace ignored, ``−`` accepted as minus)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary | <implicit *> power)*
    unary := ('+' | '-') unary | power
    power := atom ('^' ['-'] INT)?
    atom  := INT | DECIMAL | NAME | '(' expr ')'

Evaluation is delegated to callbacks so the same parser serves every field.
"""

from __future__ import annotations

import re
from typing import Callable

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*(?:[eE][-+]?\d+)?|\d+[eE][-+]?\d+)|(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class ExprError(ValueError):
    pass


def tokenize(text: str) -> list[tuple[str, str]]:
    text = text.replace("−", "-").strip()
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        dec, integer, name, op = m.groups()
        if dec is not None:
            out.append(("dec", dec))
        elif integer is not None:
            out.append(("int", integer))
        elif name is not None:
            out.append(("name", name))
        elif op is not None and not op.isspace():
            if op not in "+-*/^()":
                raise ExprError(f"unexpected character {op!r} in {text!r}")
            out.append(("op", op))
    return out


class _Parser:
    def __init__(self, tokens, ops):
        self.toks = tokens
        self.i = 0
        self.ops = ops

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ExprError(f"expected {op!r}")

    def expr(self):
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            val = self.ops["add"](val, rhs) if op == "+" else self.ops["sub"](val, rhs)
        return val

    def term(self):
        val = self.unary()
        while True:
            kind, tok = self.peek()
            if kind == "op" and tok in "*/":
                self.take()
                rhs = self.unary()
                val = self.ops["mul"](val, rhs) if tok == "*" else self.ops["div"](val, rhs)
            elif kind in ("int", "dec", "name") or (kind == "op" and tok == "("):
                val = self.ops["mul"](val, self.power())
            else:
                return val

    def unary(self):
        kind, tok = self.peek()
        if kind == "op" and tok in "+-":
            self.take()
            val = self.unary()
            return self.ops["neg"](val) if tok == "-" else val
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, tok = self.take()
            if kind != "int":
                raise ExprError("exponent must be an integer")
            return self.ops["pow"](base, sign * int(tok))
        return base

    def atom(self):
        kind, tok = self.take()
        if kind == "int":
            return self.ops["int"](int(tok))
        if kind == "dec":
            return self.ops["dec"](tok)
        if kind == "name":
            return self.ops["name"](tok)
        if kind == "op" and tok == "(":
            val = self.expr()
            self.expect(")")
            return val
        raise ExprError(f"unexpected token {tok!r}")


def evaluate(text: str, ops: dict[str, Callable]) -> object:
    """Parse ``text`` and fold it with ``ops``.

    ``ops`` maps add, sub, mul, div, neg, pow, int, dec, name to callables.
    """
    tokens = tokenize(text)
    if not tokens:
        raise ExprError("empty expression")
    p = _Parser(tokens, ops)
    val = p.expr()
    if p.i != len(tokens):
        raise ExprError(f"trailing input in {text!r}")
    return val
