"""Infix polynomial expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | base ('^' uint)?
    base   := uint | var | '(' expr ')'

Multiplication is always explicit; ``2x`` is a syntax error.  Unary minus
binds looser than ``^``, so ``-x^2`` means ``-(x^2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import ParseError
from .mpoly import MultiPoly, PolyRing


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "ExprAst"


@dataclass(frozen=True)
class Add:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Sub:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Mul:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Pow:
    base: "ExprAst"
    exp: int


ExprAst = Union[Num, Var, Neg, Add, Sub, Mul, Pow]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))", re.S)


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int", "name", "op", "end"
    text: str
    line: int
    col: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    line_starts = [0] + [i + 1 for i, ch in enumerate(src) if ch == "\n"]

    def where(i):
        ln = max(k for k, s in enumerate(line_starts) if s <= i)
        return ln + 1, i - line_starts[ln] + 1

    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        ln, col = where(start)
        if m.group(1):
            toks.append(_Tok("int", m.group(1), ln, col))
        elif m.group(2):
            toks.append(_Tok("name", m.group(2), ln, col))
        else:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise ParseError(f"unexpected character {ch!r}", ln, col)
            toks.append(_Tok("op", ch, ln, col))
        pos = m.end()
    ln, col = where(len(src)) if src else (1, 1)
    toks.append(_Tok("end", "", ln, col))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str):
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"{msg}, found {found}", t.line, t.col)

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == op:
            self.i += 1
            return True
        return False

    def parse(self) -> ExprAst:
        node = self.expr()
        if self.tok.kind != "end":
            self.error("expected an operator")
        return node

    def expr(self) -> ExprAst:
        node = self.term()
        while True:
            if self.accept("+"):
                node = Add(node, self.term())
            elif self.accept("-"):
                node = Sub(node, self.term())
            else:
                return node

    def term(self) -> ExprAst:
        node = self.factor()
        while self.accept("*"):
            node = Mul(node, self.factor())
        return node

    def factor(self) -> ExprAst:
        if self.accept("-"):
            return Neg(self.factor())
        node = self.base()
        if self.accept("^"):
            if self.tok.kind != "int":
                self.error("expected a nonnegative integer exponent")
            node = Pow(node, int(self.tok.text))
            self.i += 1
        return node

    def base(self) -> ExprAst:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Num(int(t.text))
        if t.kind == "name":
            self.i += 1
            return Var(t.text)
        if self.accept("("):
            node = self.expr()
            if not self.accept(")"):
                self.error("expected ')'")
            return node
        self.error("expected a number, a variable or '('")


def parse_expr(src: str) -> ExprAst:
    return _Parser(src).parse()


def _variables(node: ExprAst, acc: list):
    if isinstance(node, Var):
        acc.append(node.name)
    elif isinstance(node, (Neg,)):
        _variables(node.arg, acc)
    elif isinstance(node, Pow):
        _variables(node.base, acc)
    elif isinstance(node, (Add, Sub, Mul)):
        _variables(node.left, acc)
        _variables(node.right, acc)


def evaluate(node: ExprAst, ring: PolyRing) -> MultiPoly:
    if isinstance(node, Num):
        return ring.const(node.value)
    if isinstance(node, Var):
        return ring.var(node.name)
    if isinstance(node, Neg):
        return -evaluate(node.arg, ring)
    if isinstance(node, Add):
        return evaluate(node.left, ring) + evaluate(node.right, ring)
    if isinstance(node, Sub):
        return evaluate(node.left, ring) - evaluate(node.right, ring)
    if isinstance(node, Mul):
        return evaluate(node.left, ring) * evaluate(node.right, ring)
    if isinstance(node, Pow):
        return evaluate(node.base, ring) ** node.exp
    raise TypeError(f"not an expression node: {node!r}")


def parse_poly(src: str, ring: PolyRing) -> MultiPoly:
    """Parse ``src`` into a polynomial of ``ring``; coefficients reduced mod p."""
    node = parse_expr(src)
    names = []
    _variables(node, names)
    for name in names:
        if name not in ring.vars:
            pos = src.find(name)
            line = src.count("\n", 0, max(pos, 0)) + 1
            col = max(pos, 0) - (src.rfind("\n", 0, max(pos, 0)) + 1) + 1
            raise ParseError(f"undeclared variable {name!r}", line, col)
    return evaluate(node, ring)
