"""Scalar math expressions over named real variables.

Supports parsing from text, exact evaluation at a point, symbolic
differentiation, and unparsing back to text. The grammar:

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := "-" factor | power
    power  := atom ("^" factor)?
    atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"

`^` is right-associative and binds tighter than unary minus, so
``-x^2`` means ``-(x^2)``. Whitespace is insignificant. Known unary
functions: sin, cos, tan, exp, log (natural), sqrt, abs, tanh, sign.
``sign`` returns -1, 0 or 1 and exists mainly so that the derivative
of ``abs`` stays expressible inside the grammar.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Union

__all__ = [
    "ExprError",
    "ParseError",
    "EvaluationError",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "ExprAst",
    "parse",
    "evaluate",
    "differentiate",
    "syntactic_support",
    "unparse",
    "FUNCTION_NAMES",
]


class ExprError(Exception):
    """Base class for expression errors."""


class ParseError(ExprError):
    """Malformed expression text; carries the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EvaluationError(ExprError):
    """Evaluation produced a non-finite value or lacked a variable binding."""


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "ExprAst"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "ExprAst"


ExprAst = Union[Num, Var, Neg, BinOp, Call]

FUNCTION_NAMES = ("sin", "cos", "tan", "exp", "log", "sqrt", "abs", "tanh", "sign")


def _sign(x: float) -> float:
    if x == 0.0:
        return 0.0
    return math.copysign(1.0, x)


_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
    "tanh": math.tanh,
    "sign": _sign,
}


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<NUMBER>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
  | (?P<IDENT>[A-Za-z][A-Za-z0-9_]*)
  | (?P<OP>[-+*/^()])
  | (?P<WS>\s+)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # NUMBER | IDENT | OP | END
    text: str
    pos: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos)
        kind = match.lastgroup
        if kind != "WS":
            tokens.append(_Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(_Token("END", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect_op(self, op: str) -> None:
        token = self.peek()
        if token.kind != "OP" or token.text != op:
            raise ParseError(f"expected {op!r}, found {token.text or 'end of input'!r}", token.pos)
        self.advance()

    def parse_expr(self) -> ExprAst:
        node = self.parse_term()
        while self.peek().kind == "OP" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> ExprAst:
        node = self.parse_factor()
        while self.peek().kind == "OP" and self.peek().text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.parse_factor())
        return node

    def parse_factor(self) -> ExprAst:
        if self.peek().kind == "OP" and self.peek().text == "-":
            self.advance()
            return Neg(self.parse_factor())
        return self.parse_power()

    def parse_power(self) -> ExprAst:
        base = self.parse_atom()
        if self.peek().kind == "OP" and self.peek().text == "^":
            self.advance()
            return BinOp("^", base, self.parse_factor())
        return base

    def parse_atom(self) -> ExprAst:
        token = self.peek()
        if token.kind == "NUMBER":
            self.advance()
            return Num(float(token.text))
        if token.kind == "IDENT":
            self.advance()
            if self.peek().kind == "OP" and self.peek().text == "(":
                if token.text not in _FUNCTIONS:
                    raise ParseError(f"unknown function {token.text!r}", token.pos)
                self.advance()
                arg = self.parse_expr()
                self.expect_op(")")
                return Call(token.text, arg)
            return Var(token.text)
        if token.kind == "OP" and token.text == "(":
            self.advance()
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ParseError(f"expected a value, found {token.text or 'end of input'!r}", token.pos)


def parse(source: str) -> ExprAst:
    """Parse expression text into an immutable AST.

    Raises ParseError on empty input, unknown function names, or any
    syntax error, with the offending character position.
    """
    if not isinstance(source, str) or not source.strip():
        raise ParseError("empty expression", 0)
    parser = _Parser(_tokenize(source))
    node = parser.parse_expr()
    trailing = parser.peek()
    if trailing.kind != "END":
        raise ParseError(f"unexpected trailing input {trailing.text!r}", trailing.pos)
    return node


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def evaluate(ast: ExprAst, point: Mapping[str, float]) -> float:
    """Evaluate the AST at a variable assignment.

    Non-finite results (division by zero, log of a non-positive value,
    overflow, invalid powers) raise EvaluationError instead of
    propagating inf/nan.
    """
    if isinstance(ast, Num):
        return ast.value
    if isinstance(ast, Var):
        try:
            value = point[ast.name]
        except KeyError:
            raise EvaluationError(f"no binding for variable {ast.name!r}") from None
        if not math.isfinite(value):
            raise EvaluationError(f"non-finite binding for variable {ast.name!r}: {value!r}")
        return float(value)
    if isinstance(ast, Neg):
        return -evaluate(ast.operand, point)
    if isinstance(ast, BinOp):
        left = evaluate(ast.left, point)
        right = evaluate(ast.right, point)
        return _apply_binop(ast, left, right)
    if isinstance(ast, Call):
        arg = evaluate(ast.arg, point)
        return _apply_call(ast, arg)
    raise TypeError(f"not an expression node: {ast!r}")


def _apply_binop(node: BinOp, left: float, right: float) -> float:
    op = node.op
    try:
        if op == "+":
            result = left + right
        elif op == "-":
            result = left - right
        elif op == "*":
            result = left * right
        elif op == "/":
            if right == 0.0:
                raise EvaluationError(f"division by zero in {unparse(node)!r}")
            result = left / right
        elif op == "^":
            result = math.pow(left, right)
        else:  # pragma: no cover - parser only emits the five ops
            raise TypeError(f"unknown operator {op!r}")
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise EvaluationError(f"invalid {op!r} of ({left!r}, {right!r}) in {unparse(node)!r}") from exc
    if not math.isfinite(result):
        raise EvaluationError(f"non-finite result from {unparse(node)!r}")
    return result


def _apply_call(node: Call, arg: float) -> float:
    func = node.func
    if func == "log" and arg <= 0.0:
        raise EvaluationError(f"log of non-positive value {arg!r} in {unparse(node)!r}")
    if func == "sqrt" and arg < 0.0:
        raise EvaluationError(f"sqrt of negative value {arg!r} in {unparse(node)!r}")
    try:
        result = _FUNCTIONS[func](arg)
    except (ValueError, OverflowError) as exc:
        raise EvaluationError(f"invalid {func}({arg!r}) in {unparse(node)!r}") from exc
    if not math.isfinite(result):
        raise EvaluationError(f"non-finite result from {unparse(node)!r}")
    return result


# ---------------------------------------------------------------------------
# Differentiation
# ---------------------------------------------------------------------------

_ZERO = Num(0.0)
_ONE = Num(1.0)


def _num(value: float) -> ExprAst:
    # keep literals non-negative so unparsed text re-parses to the same tree
    if value < 0:
        return Neg(Num(-value))
    return Num(float(value))


def _is_const(node: ExprAst, value: float | None = None) -> bool:
    if isinstance(node, Num):
        return value is None or node.value == value
    if isinstance(node, Neg) and isinstance(node.operand, Num):
        return value is None or -node.operand.value == value
    return False


def _const_value(node: ExprAst) -> float:
    if isinstance(node, Num):
        return node.value
    return -node.operand.value  # Neg(Num)


def _fold(op: str, a: float, b: float) -> ExprAst | None:
    try:
        if op == "+":
            result = a + b
        elif op == "-":
            result = a - b
        elif op == "*":
            result = a * b
        elif op == "/":
            if b == 0.0:
                return None
            result = a / b
        else:
            result = math.pow(a, b)
    except (ValueError, OverflowError):
        return None
    if not math.isfinite(result):
        return None
    return _num(result)


def _add(a: ExprAst, b: ExprAst) -> ExprAst:
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    if _is_const(a) and _is_const(b):
        folded = _fold("+", _const_value(a), _const_value(b))
        if folded is not None:
            return folded
    return BinOp("+", a, b)


def _sub(a: ExprAst, b: ExprAst) -> ExprAst:
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return _neg(b)
    if _is_const(a) and _is_const(b):
        folded = _fold("-", _const_value(a), _const_value(b))
        if folded is not None:
            return folded
    return BinOp("-", a, b)


def _mul(a: ExprAst, b: ExprAst) -> ExprAst:
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return _ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if _is_const(a) and _is_const(b):
        folded = _fold("*", _const_value(a), _const_value(b))
        if folded is not None:
            return folded
    return BinOp("*", a, b)


def _div(a: ExprAst, b: ExprAst) -> ExprAst:
    if _is_const(a, 0.0):
        return _ZERO
    if _is_const(b, 1.0):
        return a
    if _is_const(a) and _is_const(b):
        folded = _fold("/", _const_value(a), _const_value(b))
        if folded is not None:
            return folded
    return BinOp("/", a, b)


def _pow(a: ExprAst, b: ExprAst) -> ExprAst:
    if _is_const(b, 1.0):
        return a
    if _is_const(b, 0.0):
        return _ONE
    if _is_const(a) and _is_const(b):
        folded = _fold("^", _const_value(a), _const_value(b))
        if folded is not None:
            return folded
    return BinOp("^", a, b)


def _neg(a: ExprAst) -> ExprAst:
    if isinstance(a, Num):
        return _num(-a.value)
    if isinstance(a, Neg):
        return a.operand
    return Neg(a)


def differentiate(ast: ExprAst, var: str) -> ExprAst:
    """Symbolic partial derivative with light constant folding.

    The derivative of abs(u) is sign(u)*u' with sign(0) = 0, which keeps
    gradients defined everywhere. The derivative of sign itself is 0.
    """
    if isinstance(ast, Num):
        return _ZERO
    if isinstance(ast, Var):
        return _ONE if ast.name == var else _ZERO
    if isinstance(ast, Neg):
        return _neg(differentiate(ast.operand, var))
    if isinstance(ast, BinOp):
        u, v = ast.left, ast.right
        du = differentiate(u, var)
        dv = differentiate(v, var)
        if ast.op == "+":
            return _add(du, dv)
        if ast.op == "-":
            return _sub(du, dv)
        if ast.op == "*":
            return _add(_mul(du, v), _mul(u, dv))
        if ast.op == "/":
            return _div(_sub(_mul(du, v), _mul(u, dv)), _pow(v, Num(2.0)))
        # power: use the plain rule for constant exponent / base, else the
        # general form u^v * (v'*log(u) + v*u'/u)
        if _is_const(v):
            c = _const_value(v)
            return _mul(_mul(_num(c), _pow(u, _num(c - 1.0))), du)
        if _is_const(u):
            return _mul(_mul(_pow(u, v), Call("log", u)), dv)
        return _mul(
            _pow(u, v),
            _add(_mul(dv, Call("log", u)), _mul(v, _div(du, u))),
        )
    if isinstance(ast, Call):
        u = ast.arg
        du = differentiate(u, var)
        if ast.func == "sin":
            outer = Call("cos", u)
        elif ast.func == "cos":
            outer = _neg(Call("sin", u))
        elif ast.func == "tan":
            outer = _div(_ONE, _pow(Call("cos", u), Num(2.0)))
        elif ast.func == "exp":
            outer = Call("exp", u)
        elif ast.func == "log":
            outer = _div(_ONE, u)
        elif ast.func == "sqrt":
            outer = _div(_ONE, _mul(Num(2.0), Call("sqrt", u)))
        elif ast.func == "abs":
            outer = Call("sign", u)
        elif ast.func == "tanh":
            outer = _sub(_ONE, _pow(Call("tanh", u), Num(2.0)))
        elif ast.func == "sign":
            return _ZERO
        else:  # pragma: no cover - parser validates names
            raise TypeError(f"unknown function {ast.func!r}")
        return _mul(outer, du)
    raise TypeError(f"not an expression node: {ast!r}")


# ---------------------------------------------------------------------------
# Introspection / unparsing
# ---------------------------------------------------------------------------


def syntactic_support(ast: ExprAst) -> frozenset[str]:
    """Variable names appearing as leaves anywhere in the tree."""
    names: set[str] = set()
    stack = [ast]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            names.add(node.name)
        elif isinstance(node, Neg):
            stack.append(node.operand)
        elif isinstance(node, BinOp):
            stack.append(node.left)
            stack.append(node.right)
        elif isinstance(node, Call):
            stack.append(node.arg)
    return frozenset(names)


_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


def _prec(node: ExprAst) -> int:
    if isinstance(node, Num):
        # negative literals never come out of parse(); render defensively
        return _PREC_ATOM if node.value >= 0 else _PREC_NEG
    if isinstance(node, (Var, Call)):
        return _PREC_ATOM
    if isinstance(node, Neg):
        return _PREC_NEG
    if node.op in "+-":
        return _PREC_ADD
    if node.op in "*/":
        return _PREC_MUL
    return _PREC_POW


def _render(node: ExprAst, min_prec: int) -> str:
    prec = _prec(node)
    if isinstance(node, Num):
        text = repr(node.value)
    elif isinstance(node, Var):
        text = node.name
    elif isinstance(node, Call):
        text = f"{node.func}({_render(node.arg, 0)})"
    elif isinstance(node, Neg):
        text = "-" + _render(node.operand, _PREC_NEG)
    elif node.op == "^":
        # left operand must be an atom; the exponent admits unary minus
        text = _render(node.left, _PREC_POW + 1) + "^" + _render(node.right, _PREC_NEG)
    else:
        own = _prec(node)
        text = _render(node.left, own) + node.op + _render(node.right, own + 1)
    if prec < min_prec:
        return "(" + text + ")"
    return text


def unparse(ast: ExprAst) -> str:
    """Render the AST back to grammar-conformant text.

    Parentheses are inserted so that parse(unparse(a)) is structurally
    equal to a for any parsed tree.
    """
    return _render(ast, 0)
