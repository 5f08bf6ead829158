"""Syntax tree for the Structured Text subset.

Nodes are frozen dataclasses. Source positions are excluded from equality so
two trees compare equal when they are structurally identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

Pos = Tuple[int, int]
NOPOS: Pos = (0, 0)

BOOL = "BOOL"
INT = "INT"
TIME = "TIME"
SCALAR_TYPES = (BOOL, INT, TIME)


# expressions


@dataclass(frozen=True)
class Literal:
    value: Union[bool, int]
    type: str
    pos: Pos = field(default=NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class Name:
    """A (possibly dotted) variable reference; quoting is already stripped."""

    parts: Tuple[str, ...]
    pos: Pos = field(default=NOPOS, compare=False, repr=False)

    @property
    def dotted(self) -> str:
        return ".".join(self.parts)


@dataclass(frozen=True)
class Unary:
    op: str  # "NOT" or "-"
    operand: "Expr"
    pos: Pos = field(default=NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    pos: Pos = field(default=NOPOS, compare=False, repr=False)


Expr = Union[Literal, Name, Unary, Binary]

TRUE = Literal(True, BOOL)
FALSE = Literal(False, BOOL)


def var(*parts: str) -> Name:
    return Name(tuple(parts))


def not_(e: Expr) -> Expr:
    return Unary("NOT", e)


def and_(*es: Expr) -> Expr:
    return _fold("AND", es, TRUE)


def or_(*es: Expr) -> Expr:
    return _fold("OR", es, FALSE)


def _fold(op: str, es, unit: Expr) -> Expr:
    es = list(es)
    if not es:
        return unit
    out = es[0]
    for e in es[1:]:
        out = Binary(op, out, e)
    return out


def eq(a: Expr, b: Expr) -> Expr:
    return Binary("=", a, b)


def implies(a: Expr, b: Expr) -> Expr:
    return Binary("-->", a, b)


def names_in(e: Expr):
    """Yield every Name in ``e`` (left to right)."""
    if isinstance(e, Name):
        yield e
    elif isinstance(e, Unary):
        yield from names_in(e.operand)
    elif isinstance(e, Binary):
        yield from names_in(e.left)
        yield from names_in(e.right)


def rename(e: Expr, fn) -> Expr:
    """Rebuild ``e`` with every Name replaced by ``fn(name)``."""
    if isinstance(e, Name):
        return fn(e)
    if isinstance(e, Unary):
        return Unary(e.op, rename(e.operand, fn), e.pos)
    if isinstance(e, Binary):
        return Binary(e.op, rename(e.left, fn), rename(e.right, fn), e.pos)
    return e


# statements


@dataclass(frozen=True)
class Assign:
    target: Name
    value: Expr
    pos: Pos = field(default=NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class If:
    """IF/ELSIF chains are right-nested: an ELSIF is an If in ``orelse``."""

    cond: Expr
    body: Tuple["Stmt", ...]
    orelse: Tuple["Stmt", ...] = ()
    pos: Pos = field(default=NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    """``inst(a := e)`` or ``FbType."inst"()``."""

    callee: Name
    args: Tuple[Tuple[str, Expr], ...] = ()
    pos: Pos = field(default=NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class PragmaStmt:
    kind: str  # "Assert" or "Assume"
    name: str
    expr: Expr
    pos: Pos = field(default=NOPOS, compare=False, repr=False)


Stmt = Union[Assign, If, Call, PragmaStmt]


# declarations


@dataclass(frozen=True)
class VarDecl:
    name: str
    type_name: str
    section: str  # "input", "var" or "output"
    init: Optional[Expr] = None
    pos: Pos = field(default=NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class RangePragma:
    var: str
    lo: int
    hi: int
    pos: Pos = field(default=NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class FunctionBlockDecl:
    name: str
    vars: Tuple[VarDecl, ...]
    body: Tuple[Stmt, ...]
    ranges: Tuple[RangePragma, ...] = ()
    pos: Pos = field(default=NOPOS, compare=False, repr=False)
    path: str = field(default="<string>", compare=False, repr=False)

    def var(self, name: str) -> Optional[VarDecl]:
        for v in self.vars:
            if v.name == name:
                return v
        return None

    def section(self, section: str) -> Tuple[VarDecl, ...]:
        return tuple(v for v in self.vars if v.section == section)

    @property
    def inputs(self):
        return self.section("input")

    @property
    def outputs(self):
        return self.section("output")


@dataclass(frozen=True)
class DataBlockDecl:
    """A global instance: ``DATA_BLOCK "inst" FbType``."""

    name: str
    fb_type: str
    inits: Tuple[Assign, ...] = ()
    pos: Pos = field(default=NOPOS, compare=False, repr=False)
    path: str = field(default="<string>", compare=False, repr=False)


@dataclass(frozen=True)
class SourceUnit:
    path: str
    text: str
    kind: str  # "FunctionBlock", "DataBlock" or "Mixed"
    blocks: Tuple[FunctionBlockDecl, ...] = ()
    data_blocks: Tuple[DataBlockDecl, ...] = ()


def walk_stmts(stmts):
    """Yield every statement, descending into IF branches."""
    for s in stmts:
        yield s
        if isinstance(s, If):
            yield from walk_stmts(s.body)
            yield from walk_stmts(s.orelse)
