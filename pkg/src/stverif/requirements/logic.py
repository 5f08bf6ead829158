"""Logic diagrams written as prefix gate expressions.

A file holds ``Out_1 = AND(OR(In_1, In_2), In_3)``; one diagram per line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Tuple, Union

from stverif.errors import RequirementError
from stverif.frontend import ast as A

GATES = ("AND", "OR", "NOT")
_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([(),]))")


@dataclass(frozen=True)
class Gate:
    op: str
    children: Tuple["Tree", ...]


Tree = Union[Gate, str]


@dataclass(frozen=True)
class LogicDiagram:
    output: str
    tree: Tree


def _tokens(text: str) -> List[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise RequirementError(f"unexpected character {text[pos]!r} in gate expression")
        out.append(m.group(1) or m.group(2))
        pos = m.end()
    return out


def parse_gate_tree(text: str) -> Tree:
    toks = _tokens(text)
    pos = 0

    def node() -> Tree:
        nonlocal pos
        if pos >= len(toks):
            raise RequirementError("gate expression ends early")
        tok = toks[pos]
        pos += 1
        if tok in "(),":
            raise RequirementError(f"unexpected {tok!r}")
        if tok.upper() not in GATES or pos >= len(toks) or toks[pos] != "(":
            return tok
        op = tok.upper()
        pos += 1
        kids = [node()]
        while pos < len(toks) and toks[pos] == ",":
            pos += 1
            kids.append(node())
        if pos >= len(toks) or toks[pos] != ")":
            raise RequirementError(f"missing ')' after {op} arguments")
        pos += 1
        if op == "NOT" and len(kids) != 1:
            raise RequirementError("NOT takes exactly one argument")
        return Gate(op, tuple(kids))

    tree = node()
    if pos != len(toks):
        raise RequirementError(f"trailing text after gate expression: {' '.join(toks[pos:])}")
    return tree


def parse_logic_diagrams(text: str) -> List[LogicDiagram]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, sep, rhs = line.partition("=")
        if not sep or not lhs.strip().isidentifier():
            raise RequirementError(f"line {lineno}: expected '<output> = <gates>'")
        out.append(LogicDiagram(lhs.strip(), parse_gate_tree(rhs)))
    if not out:
        raise RequirementError("no logic diagram found")
    return out


def compile_logic_diagram(d: LogicDiagram) -> Tuple[str, A.Expr]:
    def expr(t: Tree) -> A.Expr:
        if isinstance(t, str):
            return A.var(t)
        kids = [expr(c) for c in t.children]
        if t.op == "NOT":
            return A.not_(kids[0])
        return A.and_(*kids) if t.op == "AND" else A.or_(*kids)

    return d.output, expr(d.tree)


def evaluate_tree(t: Tree, env: Dict[str, bool]) -> bool:
    """Gate-by-gate evaluation, independent of the compiled expression."""
    if isinstance(t, str):
        return env[t]
    vals = [evaluate_tree(c, env) for c in t.children]
    if t.op == "NOT":
        return not vals[0]
    return all(vals) if t.op == "AND" else any(vals)


def tree_inputs(t: Tree) -> List[str]:
    if isinstance(t, str):
        return [t]
    out: List[str] = []
    for c in t.children:
        out += [n for n in tree_inputs(c) if n not in out]
    return out
