"""Univariate function mini-language: parsing, evaluation, symbolic derivatives.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' factor)?
    base   := number | 'x' | '(' expr ')' | func '(' expr ')'
    func   := exp | log | sin | cos

``^`` is right-associative and binds tighter than unary minus, so ``-x^2``
is ``-(x^2)``.

Trees are immutable and compare structurally.  No simplification is done;
derivative trees are checked by evaluating them.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import ClassVar

from .errors import DomainError, ParseError, UnknownIdentifierError

__all__ = [
    "Expression", "Const", "Var", "Add", "Sub", "Mul", "Div", "Pow", "Neg",
    "Exp", "Log", "Sin", "Cos",
    "parse", "differentiate", "evaluate", "to_text", "depends_on_x",
]


class Expression:
    """Base node. Subclasses are frozen dataclasses."""

    kind: ClassVar[str] = ""

    @property
    def children(self) -> tuple[Expression, ...]:
        return ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(Expression):
    value: float
    kind: ClassVar[str] = "constant"

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True)
class Var(Expression):
    kind: ClassVar[str] = "variable"


@dataclass(frozen=True)
class _Binary(Expression):
    left: Expression
    right: Expression

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class _Unary(Expression):
    arg: Expression

    @property
    def children(self):
        return (self.arg,)


class Add(_Binary):
    kind = "add"


class Sub(_Binary):
    kind = "sub"


class Mul(_Binary):
    kind = "mul"


class Div(_Binary):
    kind = "div"


class Pow(_Binary):
    kind = "pow"


class Neg(_Unary):
    kind = "neg"


class Exp(_Unary):
    kind = "exp"


class Log(_Unary):
    kind = "log"


class Sin(_Unary):
    kind = "sin"


class Cos(_Unary):
    kind = "cos"


FUNCTIONS = {"exp": Exp, "log": Log, "sin": Sin, "cos": Cos}

ZERO = Const(0.0)
ONE = Const(1.0)


# ---------------------------------------------------------------------------
# evaluation

def _pow(base: float, exponent: float) -> float:
    # integral exponents use repeated-multiplication semantics (negative bases ok)
    try:
        if exponent.is_integer() and abs(exponent) <= 2**53:
            if base == 0.0 and exponent < 0:
                raise DomainError("zero raised to a negative power")
            return base ** int(exponent)
        if base < 0.0:
            raise DomainError(f"negative base {base!r} with non-integer exponent {exponent!r}")
        if base == 0.0 and exponent < 0:
            raise DomainError("zero raised to a negative power")
        return base ** exponent
    except OverflowError as exc:
        raise DomainError("overflow in power") from exc


def evaluate(e: Expression, x: float) -> float:
    """Evaluate ``e`` at ``x`` in double precision.

    Raises :class:`DomainError` for log of a non-positive number, division by
    zero, invalid powers, or overflow.
    """
    x = float(x)
    return _eval(e, x)


def _eval(e, x):
    t = type(e)
    if t is Var:
        return x
    if t is Const:
        return e.value
    if t is Add:
        return _eval(e.left, x) + _eval(e.right, x)
    if t is Sub:
        return _eval(e.left, x) - _eval(e.right, x)
    if t is Mul:
        return _eval(e.left, x) * _eval(e.right, x)
    if t is Div:
        den = _eval(e.right, x)
        if den == 0.0:
            raise DomainError(f"division by zero at x={x!r}")
        return _eval(e.left, x) / den
    if t is Pow:
        return _pow(_eval(e.left, x), _eval(e.right, x))
    if t is Neg:
        return -_eval(e.arg, x)
    if t is Exp:
        try:
            return math.exp(_eval(e.arg, x))
        except OverflowError as exc:
            raise DomainError(f"exp overflow at x={x!r}") from exc
    if t is Log:
        u = _eval(e.arg, x)
        if not u > 0.0:
            raise DomainError(f"log of non-positive value {u!r} at x={x!r}")
        return math.log(u)
    if t is Sin:
        return math.sin(_eval(e.arg, x))
    if t is Cos:
        return math.cos(_eval(e.arg, x))
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# differentiation

def depends_on_x(e: Expression) -> bool:
    if isinstance(e, Var):
        return True
    return any(depends_on_x(c) for c in e.children)


def _chain(outer: Expression, inner: Expression) -> Expression:
    du = differentiate(inner)
    return outer if du == ONE else Mul(outer, du)


def differentiate(e: Expression) -> Expression:
    """Symbolic d/dx of ``e`` by the sum, product, quotient and chain rules."""
    t = type(e)
    if t is Const:
        return ZERO
    if t is Var:
        return ONE
    if t is Add:
        return Add(differentiate(e.left), differentiate(e.right))
    if t is Sub:
        return Sub(differentiate(e.left), differentiate(e.right))
    if t is Mul:
        return Add(Mul(differentiate(e.left), e.right), Mul(e.left, differentiate(e.right)))
    if t is Div:
        num = Sub(Mul(differentiate(e.left), e.right), Mul(e.left, differentiate(e.right)))
        return Div(num, Pow(e.right, Const(2)))
    if t is Neg:
        return Neg(differentiate(e.arg))
    if t is Exp:
        return _chain(e, e.arg)
    if t is Log:
        return _chain(Div(ONE, e.arg), e.arg)
    if t is Sin:
        return _chain(Cos(e.arg), e.arg)
    if t is Cos:
        return _chain(Neg(Sin(e.arg)), e.arg)
    if t is Pow:
        f, g = e.left, e.right
        if not depends_on_x(g):
            lowered = Const(g.value - 1.0) if isinstance(g, Const) else Sub(g, ONE)
            return _chain(Mul(g, Pow(f, lowered)), f)
        # f^g = exp(g log f)
        inner = Add(Mul(differentiate(g), Log(f)), Div(Mul(g, differentiate(f)), f))
        return Mul(e, inner)
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}
_ATOM = 5
_SYMBOL = {Add: "+", Sub: "-", Mul: "*", Div: "/", Pow: "^"}


def _prec(e):
    if isinstance(e, Const) and (e.value < 0 or math.copysign(1.0, e.value) < 0):
        return 0
    return _PREC.get(type(e), _ATOM)


def _wrap(e, min_prec):
    s = to_text(e)
    return f"({s})" if _prec(e) < min_prec else s


def _number(value):
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value)) if value != 0 or math.copysign(1.0, value) > 0 else "-0"
    return repr(value)


def to_text(e: Expression) -> str:
    """Render ``e`` in the mini-language with minimal parentheses."""
    t = type(e)
    if t is Const:
        return _number(e.value)
    if t is Var:
        return "x"
    if t in (Add, Sub, Mul, Div):
        p = _PREC[t]
        # left-associative: the right operand needs a strictly tighter binding
        right_min = p + 1 if p == 1 else 3
        return f"{_wrap(e.left, p)} {_SYMBOL[t]} {_wrap(e.right, right_min)}"
    if t is Pow:
        return f"{_wrap(e.left, _ATOM)}^{_wrap(e.right, 3)}"
    if t is Neg:
        return f"-{_wrap(e.arg, 3)}"
    if t in (Exp, Log, Sin, Cos):
        return f"{t.kind}({to_text(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _byte_offset(self, index):
        return len(self.text[:index].encode("utf-8"))

    def _tokenize(self, text):
        tokens = []
        i = 0
        n = len(text)
        while True:
            while i < n and text[i].isspace():
                i += 1
            if i >= n:
                break
            m = _TOKEN.match(text, i)
            if m is None or m.end() == i or m.lastgroup is None:
                raise ParseError(f"unexpected character {text[i]!r}", self._byte_offset(i))
            kind = m.lastgroup
            start = m.start(kind)
            tokens.append((kind, m.group(kind), self._byte_offset(start)))
            i = m.end()
        tokens.append(("eof", "", self._byte_offset(n)))
        return tokens

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value):
        kind, text, offset = self.advance()
        if text != value or kind != "op":
            found = "end of input" if kind == "eof" else repr(text)
            raise ParseError(f"expected {value!r}, found {found}", offset)

    def parse(self):
        e = self.expr()
        kind, text, offset = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected {text!r}", offset)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            e = (Add if op == "+" else Sub)(e, self.term())
        return e

    def term(self):
        e = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            e = (Mul if op == "*" else Div)(e, self.factor())
        return e

    def factor(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.factor())
        base = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            return Pow(base, self.factor())
        return base

    def base(self):
        kind, text, offset = self.advance()
        if kind == "num":
            return Const(float(text))
        if kind == "ident":
            if text == "x":
                return Var()
            if text not in FUNCTIONS:
                raise UnknownIdentifierError(text, offset)
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return FUNCTIONS[text](arg)
        if kind == "op" and text == "(":
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if kind == "eof" else repr(text)
        raise ParseError(f"unexpected {found}", offset)


def parse(text: str) -> Expression:
    """Parse function text into an expression tree.

    >>> parse("x^2/2")
    Div(left=Pow(left=Var(), right=Const(value=2.0)), right=Const(value=2.0))
    """
    return _Parser(text).parse()
