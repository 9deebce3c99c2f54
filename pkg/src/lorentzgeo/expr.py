"""Closed-form scalar expressions over chart coordinates.

Expressions are immutable trees of constants, named symbols, the binary
operations ``+ - * / ^``, and the unary functions ``sin cos tan exp log
sqrt abs``.  They support exact tree-level differentiation (no numeric
approximation anywhere) and deterministic pointwise evaluation, which is
what makes second metric derivatives clean enough for curvature work.

The text grammar is plain infix arithmetic with ``^`` for powers and
function-call syntax like ``sin(2*pi*x)``.  Implicit multiplication is
not accepted.  ``pi`` is a built-in constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "abs")
RESERVED = FUNCTIONS + ("pi",)

_MATH_FN = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
}


class ExprError(ValueError):
    """Base class for expression failures."""


class ParseError(ExprError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UndeclaredNameError(ParseError):
    def __init__(self, name: str, position: int):
        super().__init__(f"undeclared name '{name}'", position)
        self.name = name


class EvalError(ExprError):
    """Evaluation failure, carrying the offending subtree in printed form."""

    def __init__(self, message: str, subtree: "Expr"):
        super().__init__(f"{message} in '{to_text(subtree)}'")
        self.subtree = subtree


class MissingBindingError(EvalError):
    def __init__(self, name: str, subtree: "Expr"):
        super().__init__(f"no binding for '{name}'", subtree)
        self.name = name


@dataclass(frozen=True)
class Expr:
    """Base node.  All concrete nodes are frozen dataclasses."""

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr


ZERO = Const(0.0)
ONE = Const(1.0)


def _is_const(e: Expr, value: float | None = None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


# Smart constructors.  Only light simplification happens here: constant
# folding and 0/1 identities.  Correctness is defined by evaluation, not
# by tree shape, so nothing fancier is attempted.

def add(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return BinOp("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return neg(b)
    return BinOp("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if _is_const(a, -1.0):
        return neg(b)
    if _is_const(b, -1.0):
        return neg(a)
    return BinOp("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0) and not _is_const(b, 0.0):
        return ZERO
    if _is_const(b, 1.0):
        return a
    if _is_const(a) and _is_const(b) and b.value != 0.0:
        return Const(a.value / b.value)
    return BinOp("/", a, b)


def pow_(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 1.0):
        return a
    if _is_const(b, 0.0):
        return ONE
    if _is_const(a) and _is_const(b):
        try:
            return Const(_eval_pow(a.value, b.value, BinOp("^", a, b)))
        except EvalError:
            pass
    return BinOp("^", a, b)


def neg(a: Expr) -> Expr:
    if _is_const(a):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def call(fn: str, a: Expr) -> Expr:
    if fn not in _MATH_FN:
        raise ExprError(f"unknown function '{fn}'")
    if _is_const(a):
        try:
            return Const(_MATH_FN[fn](a.value))
        except (ValueError, OverflowError):
            pass
    return Call(fn, a)


# ---------------------------------------------------------------------------
# Parsing: hand-rolled recursive descent over a small token stream.
#
#   expression := term (('+' | '-') term)*
#   term       := factor (('*' | '/') factor)*
#   factor     := ('-' | '+') factor | power
#   power      := atom ('^' factor)?
#   atom       := NUMBER | NAME '(' expression ')' | NAME | '(' expression ')'
# ---------------------------------------------------------------------------

class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "+-*/^()":
            tokens.append(_Token(c, c, i))
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            try:
                float(text[i:j])
            except ValueError:
                raise ParseError(f"malformed number '{text[i:j]}'", i)
            tokens.append(_Token("num", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character '{c}'", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], declared: frozenset[str]):
        self.tokens = tokens
        self.declared = declared
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected '{kind}', found '{tok.text or 'end of input'}'", tok.pos)
        return self.advance()

    def expression(self) -> Expr:
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.term()
            node = add(node, rhs) if op == "+" else sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.advance().kind
            rhs = self.factor()
            node = mul(node, rhs) if op == "*" else div(node, rhs)
        return node

    def factor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "-":
            self.advance()
            return neg(self.factor())
        if tok.kind == "+":
            self.advance()
            return self.factor()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek().kind == "^":
            self.advance()
            return pow_(base, self.factor())
        return base

    def atom(self) -> Expr:
        tok = self.advance()
        if tok.kind == "num":
            return Const(float(tok.text))
        if tok.kind == "(":
            node = self.expression()
            self.expect(")")
            return node
        if tok.kind == "name":
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expression()
                self.expect(")")
                return call(tok.text, arg)
            if tok.text == "pi":
                return Const(math.pi)
            if tok.text not in self.declared:
                raise UndeclaredNameError(tok.text, tok.pos)
            if self.peek().kind == "(":
                raise ParseError(f"'{tok.text}' is not a function", tok.pos)
            return Var(tok.text)
        raise ParseError(f"unexpected '{tok.text or 'end of input'}'", tok.pos)


def parse_expression(text: str, declared) -> Expr:
    """Parse ``text`` into an expression tree.

    Every free name must appear in ``declared`` (coordinates plus
    parameters of the owning chart); anything else raises
    :class:`UndeclaredNameError` with its position.
    """
    declared = frozenset(declared)
    clash = declared & set(RESERVED)
    if clash:
        raise ExprError(f"declared names shadow reserved words: {sorted(clash)}")
    parser = _Parser(_tokenize(text), declared)
    node = parser.expression()
    parser.expect("end")
    return node


# ---------------------------------------------------------------------------
# Differentiation: exact at the tree level.
# ---------------------------------------------------------------------------

def differentiate(e: Expr, var: str) -> Expr:
    """Exact partial derivative of ``e`` with respect to ``var``."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == var else ZERO
    if isinstance(e, Neg):
        return neg(differentiate(e.arg, var))
    if isinstance(e, BinOp):
        da = differentiate(e.left, var)
        db = differentiate(e.right, var)
        if e.op == "+":
            return add(da, db)
        if e.op == "-":
            return sub(da, db)
        if e.op == "*":
            return add(mul(da, e.right), mul(e.left, db))
        if e.op == "/":
            return div(sub(mul(da, e.right), mul(e.left, db)), pow_(e.right, Const(2.0)))
        if e.op == "^":
            u, v = e.left, e.right
            if _is_const(v):
                # power rule; exponent is constant
                return mul(mul(v, pow_(u, Const(v.value - 1.0))), da)
            # general u^v = exp(v*log u)
            return mul(e, add(mul(db, call("log", u)), div(mul(v, da), u)))
        raise ExprError(f"unknown operator '{e.op}'")
    if isinstance(e, Call):
        da = differentiate(e.arg, var)
        u = e.arg
        if e.fn == "sin":
            return mul(call("cos", u), da)
        if e.fn == "cos":
            return neg(mul(call("sin", u), da))
        if e.fn == "tan":
            return div(da, pow_(call("cos", u), Const(2.0)))
        if e.fn == "exp":
            return mul(e, da)
        if e.fn == "log":
            return div(da, u)
        if e.fn == "sqrt":
            return div(da, mul(Const(2.0), e))
        if e.fn == "abs":
            # d|u| = u/|u| * du; evaluation at u = 0 reports division by zero
            return div(mul(u, da), e)
        raise ExprError(f"unknown function '{e.fn}'")
    raise ExprError(f"cannot differentiate node {e!r}")


# ---------------------------------------------------------------------------
# Evaluation: ordinary real arithmetic with non-finite results reported,
# never silently propagated.
# ---------------------------------------------------------------------------

def _check_finite(value: float, node: Expr) -> float:
    if not math.isfinite(value):
        raise EvalError("non-finite value", node)
    return value


def _eval_pow(base: float, exponent: float, node: Expr) -> float:
    if exponent == int(exponent):
        if base == 0.0 and exponent < 0:
            raise EvalError("zero raised to a negative power", node)
        try:
            return _check_finite(float(base ** int(exponent)), node)
        except OverflowError:
            raise EvalError("overflow", node)
    if base <= 0.0:
        # non-integer exponents are defined only for positive bases
        raise EvalError("non-integer power of a non-positive base", node)
    try:
        return _check_finite(base ** exponent, node)
    except OverflowError:
        raise EvalError("overflow", node)


def evaluate(e: Expr, bindings: dict[str, float]) -> float:
    """Evaluate ``e`` with the given name bindings.

    Raises :class:`MissingBindingError` for unbound names and
    :class:`EvalError` naming the offending subtree for division by
    zero, logarithms of non-positive numbers, and similar poles.
    """
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        try:
            return bindings[e.name]
        except KeyError:
            raise MissingBindingError(e.name, e)
    if isinstance(e, Neg):
        return -evaluate(e.arg, bindings)
    if isinstance(e, BinOp):
        a = evaluate(e.left, bindings)
        b = evaluate(e.right, bindings)
        if e.op == "+":
            return _check_finite(a + b, e)
        if e.op == "-":
            return _check_finite(a - b, e)
        if e.op == "*":
            return _check_finite(a * b, e)
        if e.op == "/":
            if b == 0.0:
                raise EvalError("division by zero", e)
            return _check_finite(a / b, e)
        if e.op == "^":
            return _eval_pow(a, b, e)
        raise ExprError(f"unknown operator '{e.op}'")
    if isinstance(e, Call):
        a = evaluate(e.arg, bindings)
        if e.fn == "log" and a <= 0.0:
            raise EvalError("logarithm of a non-positive number", e)
        if e.fn == "sqrt" and a < 0.0:
            raise EvalError("square root of a negative number", e)
        try:
            return _check_finite(_MATH_FN[e.fn](a), e)
        except (ValueError, OverflowError):
            raise EvalError("domain error", e)
    raise ExprError(f"cannot evaluate node {e!r}")


def free_names(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Neg):
        return free_names(e.arg)
    if isinstance(e, Call):
        return free_names(e.arg)
    if isinstance(e, BinOp):
        return free_names(e.left) | free_names(e.right)
    return set()


# ---------------------------------------------------------------------------
# Canonical printer.  parse_expression(to_text(e)) reproduces a tree with
# identical evaluation, and printing is a fixpoint.
# ---------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Const) and e.value < 0:
        return 3
    return 9


def _fmt_const(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def to_text(e: Expr) -> str:
    """Render ``e`` in the canonical text grammar."""
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}({to_text(e.arg)})"
    if isinstance(e, Neg):
        inner = to_text(e.arg)
        if _prec(e.arg) < 3:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        left, right = to_text(e.left), to_text(e.right)
        if e.op == "^":
            # power bases must be atoms; exponents re-enter at factor level
            if _prec(e.left) <= 4:
                left = f"({left})"
            if _prec(e.right) < 3:
                right = f"({right})"
        else:
            if _prec(e.left) < p:
                left = f"({left})"
            # the grammar is left-associative, so a right operand at the
            # same precedence must keep its parentheses to round-trip
            if _prec(e.right) <= p:
                right = f"({right})"
        return f"{left}{e.op}{right}"
    raise ExprError(f"cannot print node {e!r}")
