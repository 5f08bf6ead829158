"""Evaluation of expressions over a flat valuation."""

from __future__ import annotations

from typing import Callable, Mapping

from stverif.frontend import ast as A

Evaluator = Callable[[Mapping[str, object]], object]


def _div(a: int, b: int) -> int:
    # truncating division; x / 0 is defined as 0 to keep evaluation total
    if b == 0:
        return 0
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


_BINARY = {
    "AND": lambda a, b: a and b,
    "OR": lambda a, b: a or b,
    "XOR": lambda a, b: a != b,
    "-->": lambda a, b: (not a) or b,
    "=": lambda a, b: a == b,
    "<>": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
}


def apply_binary(op: str, a, b):
    return _BINARY[op](a, b)


def name_key(n: A.Name) -> str:
    return ".".join(n.parts)


def compile_expr(e: A.Expr) -> Evaluator:
    """Turn ``e`` into a closure reading names (joined with dots) from a dict."""
    if isinstance(e, A.Literal):
        v = e.value
        return lambda env: v
    if isinstance(e, A.Name):
        key = name_key(e)
        return lambda env: env[key]
    if isinstance(e, A.Unary):
        f = compile_expr(e.operand)
        if e.op == "NOT":
            return lambda env: not f(env)
        return lambda env: -f(env)
    lf, rf = compile_expr(e.left), compile_expr(e.right)
    op = e.op
    if op == "AND":
        return lambda env: lf(env) and rf(env)
    if op == "OR":
        return lambda env: lf(env) or rf(env)
    if op == "-->":
        return lambda env: (not lf(env)) or rf(env)
    fn = _BINARY[op]
    return lambda env: fn(lf(env), rf(env))


def evaluate(e: A.Expr, env: Mapping[str, object]):
    return compile_expr(e)(env)
