"""Name resolution and type checking over a set of parsed source units."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

from stverif.errors import (
    DuplicateDeclaration,
    TypeMismatch,
    UnknownInstance,
    UnresolvedIdentifier,
)
from stverif.frontend import ast as A

DEFAULT_INT_RANGE = (0, 255)

# name -> {field: (type, section)}
BUILTIN_FBS: Dict[str, Dict[str, Tuple[str, str]]] = {
    "TON": {
        "IN": (A.BOOL, "input"),
        "PT": (A.TIME, "input"),
        "Q": (A.BOOL, "output"),
        "ET": (A.TIME, "output"),
    },
    "CTUD": {
        "CU": (A.BOOL, "input"),
        "CD": (A.BOOL, "input"),
        "R": (A.BOOL, "input"),
        "LD": (A.BOOL, "input"),
        "PV": (A.INT, "input"),
        "QU": (A.BOOL, "output"),
        "QD": (A.BOOL, "output"),
        "CV": (A.INT, "output"),
    },
}

NUMERIC = (A.INT, A.TIME)


@dataclass(frozen=True)
class Pragma:
    kind: str  # Assert or Assume
    name: str
    expr: A.Expr
    block: str
    location: int  # index in the enclosing statement list
    pos: A.Pos = field(default=A.NOPOS, compare=False)


@dataclass(frozen=True)
class Ref:
    """A resolved designator.

    ``root`` is "local" (a variable of the enclosing block) or "global" (a
    data-block instance). ``type`` is a scalar type or an FB type name.
    """

    root: str
    path: Tuple[str, ...]
    type: str
    section: str
    owner: str  # FB type declaring the last path element

    @property
    def is_instance(self) -> bool:
        return self.type not in A.SCALAR_TYPES


@dataclass(frozen=True)
class TypedProgram:
    blocks: Tuple[A.FunctionBlockDecl, ...]
    instances: Tuple[A.DataBlockDecl, ...]
    pragmas: Tuple[Pragma, ...]
    ranges: Dict[Tuple[str, str], Tuple[int, int]] = field(default_factory=dict, compare=False)

    def block(self, name: str) -> Optional[A.FunctionBlockDecl]:
        for b in self.blocks:
            if b.name == name:
                return b
        return None

    def instance(self, name: str) -> Optional[A.DataBlockDecl]:
        for d in self.instances:
            if d.name == name:
                return d
        return None

    def is_fb_type(self, name: str) -> bool:
        return name in BUILTIN_FBS or self.block(name) is not None

    def fields(self, fb_type: str) -> Dict[str, Tuple[str, str]]:
        if fb_type in BUILTIN_FBS:
            return BUILTIN_FBS[fb_type]
        return {v.name: (v.type_name, v.section) for v in self.block(fb_type).vars}

    def int_range(self, block: str, var: str) -> Tuple[int, int]:
        return self.ranges.get((block, var), DEFAULT_INT_RANGE)

    def has_range(self, block: str, var: str) -> bool:
        return (block, var) in self.ranges

    @property
    def entry_candidates(self) -> Tuple[str, ...]:
        """Blocks never instantiated by another block or data block."""
        used = {d.fb_type for d in self.instances}
        for b in self.blocks:
            used.update(v.type_name for v in b.vars)
        return tuple(b.name for b in self.blocks if b.name not in used)

    def resolve(self, block: A.FunctionBlockDecl, name: A.Name) -> Ref:
        return resolve(self, block, name)


def resolve(program: TypedProgram, block: A.FunctionBlockDecl, name: A.Name) -> Ref:
    first = name.parts[0]
    decl = block.var(first)
    if decl is not None:
        ref = Ref("local", (first,), decl.type_name, decl.section, block.name)
    elif program.instance(first) is not None:
        ref = Ref("global", (first,), program.instance(first).fb_type, "instance", "")
    else:
        raise UnresolvedIdentifier(f"unknown identifier {first!r}", *name.pos, block.path)
    for part in name.parts[1:]:
        if not ref.is_instance:
            raise UnresolvedIdentifier(f"{'.'.join(ref.path)!r} has no field {part!r}", *name.pos, block.path)
        fields = program.fields(ref.type)
        if part not in fields:
            raise UnresolvedIdentifier(f"{ref.type} has no field {part!r}", *name.pos, block.path)
        t, section = fields[part]
        ref = Ref(ref.root, ref.path + (part,), t, section, ref.type)
    return ref


def assignable(target: str, value: str) -> bool:
    return target == value or (target == A.TIME and value == A.INT)


def expr_type(e: A.Expr, lookup, path: str = "<string>") -> str:
    """Type of ``e``; ``lookup(Name)`` returns the type of a name."""
    if isinstance(e, A.Literal):
        return e.type
    if isinstance(e, A.Name):
        return lookup(e)
    if isinstance(e, A.Unary):
        t = expr_type(e.operand, lookup, path)
        if e.op == "NOT" and t == A.BOOL:
            return A.BOOL
        if e.op == "-" and t in NUMERIC:
            return t
        raise TypeMismatch(f"operator {e.op} not defined on {t}", *e.pos, path)
    lt = expr_type(e.left, lookup, path)
    rt = expr_type(e.right, lookup, path)
    op = e.op
    if op in ("AND", "OR", "XOR", "-->"):
        if lt == rt == A.BOOL:
            return A.BOOL
    elif op in ("=", "<>"):
        if lt == rt or (lt in NUMERIC and rt in NUMERIC):
            return A.BOOL
    elif op in ("<", "<=", ">", ">="):
        if lt in NUMERIC and rt in NUMERIC:
            return A.BOOL
    elif op == "/":
        if lt == rt == A.INT:
            return A.INT
    elif lt in NUMERIC and rt in NUMERIC:
        return A.TIME if A.TIME in (lt, rt) else A.INT
    raise TypeMismatch(f"operator {op} not defined on {lt} and {rt}", *e.pos, path)


def constant_value(e: A.Expr):
    """Fold a constant expression; None if it reads a variable."""
    if isinstance(e, A.Literal):
        return e.value
    if isinstance(e, A.Unary):
        v = constant_value(e.operand)
        if v is None:
            return None
        return (not v) if e.op == "NOT" else -v
    if isinstance(e, A.Binary):
        a, b = constant_value(e.left), constant_value(e.right)
        if a is None or b is None:
            return None
        from stverif.semantics.expr import apply_binary

        return apply_binary(e.op, a, b)
    return None


def typecheck_and_resolve(units: Iterable[A.SourceUnit]) -> TypedProgram:
    """Bind all names across ``units`` and check types."""
    units = list(units)
    blocks, dbs = [], []
    seen: Dict[str, A.Pos] = {}
    for u in units:
        for b in u.blocks:
            if b.name in seen or b.name in BUILTIN_FBS:
                raise DuplicateDeclaration(f"{b.name!r} declared twice", *b.pos, b.path)
            seen[b.name] = b.pos
            blocks.append(b)
        for d in u.data_blocks:
            if d.name in seen:
                raise DuplicateDeclaration(f"{d.name!r} declared twice", *d.pos, d.path)
            seen[d.name] = d.pos
            dbs.append(d)

    program = TypedProgram(tuple(blocks), tuple(dbs), ())
    ranges: Dict[Tuple[str, str], Tuple[int, int]] = {}
    for b in blocks:
        _check_decls(program, b, ranges)
    for d in dbs:
        _check_data_block(program, d)
    pragmas = []
    for b in blocks:
        checker = _BodyChecker(program, b)
        checker.stmts(b.body)
        pragmas.extend(checker.pragmas)
    return TypedProgram(tuple(blocks), tuple(dbs), tuple(pragmas), ranges)


def _check_decls(program: TypedProgram, b: A.FunctionBlockDecl, ranges) -> None:
    names = set()
    for v in b.vars:
        if v.name in names:
            raise DuplicateDeclaration(f"variable {v.name!r} declared twice in {b.name}", *v.pos, b.path)
        if program.instance(v.name) is not None:
            raise DuplicateDeclaration(f"variable {v.name!r} shadows data block {v.name!r}", *v.pos, b.path)
        names.add(v.name)
        if v.type_name not in A.SCALAR_TYPES and not program.is_fb_type(v.type_name):
            raise UnresolvedIdentifier(f"unknown type {v.type_name!r}", *v.pos, b.path)
        if v.init is not None:
            if v.type_name not in A.SCALAR_TYPES:
                raise TypeMismatch(f"instance {v.name!r} cannot have an initial value", *v.pos, b.path)
            if constant_value(v.init) is None:
                raise TypeMismatch("initial value must be a constant", *v.pos, b.path)
            t = expr_type(v.init, _no_names(b.path), b.path)
            if not assignable(v.type_name, t):
                raise TypeMismatch(f"cannot initialise {v.type_name} {v.name!r} with {t}", *v.pos, b.path)
    for r in b.ranges:
        decl = b.var(r.var)
        if decl is None:
            raise UnresolvedIdentifier(f"RANGE names unknown variable {r.var!r}", *r.pos, b.path)
        if decl.type_name != A.INT:
            raise TypeMismatch(f"RANGE applies to INT variables, {r.var!r} is {decl.type_name}", *r.pos, b.path)
        if r.lo > r.hi:
            raise TypeMismatch(f"empty range {r.lo}..{r.hi}", *r.pos, b.path)
        if (b.name, r.var) in ranges:
            raise DuplicateDeclaration(f"second RANGE for {r.var!r}", *r.pos, b.path)
        ranges[(b.name, r.var)] = (r.lo, r.hi)
    for v in b.vars:
        if v.type_name == A.INT and v.init is not None:
            lo, hi = ranges.get((b.name, v.name), DEFAULT_INT_RANGE)
            if not lo <= constant_value(v.init) <= hi:
                raise TypeMismatch(f"initial value of {v.name!r} outside {lo}..{hi}", *v.pos, b.path)


def _no_names(path):
    def lookup(n: A.Name):
        raise TypeMismatch("initial value must be a constant", *n.pos, path)

    return lookup


def _check_data_block(program: TypedProgram, d: A.DataBlockDecl) -> None:
    fb = program.block(d.fb_type)
    if fb is None:
        if d.fb_type in BUILTIN_FBS:
            raise TypeMismatch(f"data block {d.name!r} must instantiate a user function block", *d.pos, d.path)
        raise UnresolvedIdentifier(f"data block {d.name!r} instantiates unknown block {d.fb_type!r}",
                                   *d.pos, d.path)
    for a in d.inits:
        decl = fb.var(a.target.parts[0]) if len(a.target.parts) == 1 else None
        if decl is None or decl.type_name not in A.SCALAR_TYPES:
            raise UnresolvedIdentifier(f"{d.fb_type} has no scalar field {a.target.dotted!r}", *a.pos, d.path)
        if constant_value(a.value) is None:
            raise TypeMismatch("data block values must be constants", *a.pos, d.path)
        t = expr_type(a.value, _no_names(d.path), d.path)
        if not assignable(decl.type_name, t):
            raise TypeMismatch(f"cannot assign {t} to {decl.type_name} {a.target.dotted!r}", *a.pos, d.path)


class _BodyChecker:
    def __init__(self, program: TypedProgram, block: A.FunctionBlockDecl):
        self.program = program
        self.block = block
        self.path = block.path
        self.pragmas = []
        self.pragma_names = set()

    def lookup(self, n: A.Name) -> str:
        ref = resolve(self.program, self.block, n)
        if ref.is_instance:
            raise TypeMismatch(f"instance {n.dotted!r} used as a value", *n.pos, self.path)
        return ref.type

    def expr(self, e: A.Expr) -> str:
        return expr_type(e, self.lookup, self.path)

    def stmts(self, stmts) -> None:
        for i, s in enumerate(stmts):
            self.stmt(s, i)

    def stmt(self, s: A.Stmt, index: int) -> None:
        if isinstance(s, A.Assign):
            ref = resolve(self.program, self.block, s.target)
            if ref.is_instance:
                raise TypeMismatch(f"cannot assign to instance {s.target.dotted!r}", *s.pos, self.path)
            if len(ref.path) > 1 and (ref.section != "input" or ref.owner in BUILTIN_FBS):
                raise TypeMismatch(f"{s.target.dotted!r} is not an assignable input", *s.pos, self.path)
            t = self.expr(s.value)
            if not assignable(ref.type, t):
                raise TypeMismatch(f"cannot assign {t} to {ref.type} {s.target.dotted!r}", *s.pos, self.path)
        elif isinstance(s, A.If):
            if self.expr(s.cond) != A.BOOL:
                raise TypeMismatch("IF condition must be BOOL", *s.cond.pos, self.path)
            self.stmts(s.body)
            self.stmts(s.orelse)
        elif isinstance(s, A.Call):
            fb_type = callee_type(self.program, self.block, s.callee)
            fields = self.program.fields(fb_type)
            given = set()
            for arg, value in s.args:
                if arg in given:
                    raise DuplicateDeclaration(f"argument {arg!r} given twice", *s.pos, self.path)
                given.add(arg)
                if arg not in fields or fields[arg][1] != "input":
                    raise UnresolvedIdentifier(f"{fb_type} has no input {arg!r}", *s.pos, self.path)
                t = self.expr(value)
                if not assignable(fields[arg][0], t):
                    raise TypeMismatch(f"argument {arg!r} expects {fields[arg][0]}, got {t}", *s.pos, self.path)
        elif isinstance(s, A.PragmaStmt):
            if self.expr(s.expr) != A.BOOL:
                raise TypeMismatch(f"{s.kind.upper()} expression must be BOOL", *s.pos, self.path)
            if s.name in self.pragma_names:
                raise DuplicateDeclaration(f"pragma name {s.name!r} used twice in {self.block.name}",
                                           *s.pos, self.path)
            self.pragma_names.add(s.name)
            self.pragmas.append(Pragma(s.kind, s.name, s.expr, self.block.name, index, s.pos))


def callee_type(program: TypedProgram, block: A.FunctionBlockDecl, callee: A.Name) -> str:
    """FB type invoked by a call statement; raises UnknownInstance."""
    return resolve_call(program, block, callee)[1]


def resolve_call(program: TypedProgram, block: A.FunctionBlockDecl, callee: A.Name) -> Tuple[A.Name, str]:
    """Return (instance designator, FB type) for a call statement.

    ``FbType.inst()`` is the SCL form for calling a data-block instance; it is
    normalised to the instance designator ``inst``.
    """
    parts = callee.parts
    if (len(parts) == 2 and block.var(parts[0]) is None and program.instance(parts[0]) is None
            and program.is_fb_type(parts[0])):
        db = program.instance(parts[1])
        if db is None:
            raise UnknownInstance(f"no data block {parts[1]!r}", *callee.pos, block.path)
        if db.fb_type != parts[0]:
            raise TypeMismatch(f"data block {parts[1]!r} is a {db.fb_type}, not {parts[0]}", *callee.pos, block.path)
        return A.Name((parts[1],), callee.pos), db.fb_type
    try:
        ref = resolve(program, block, callee)
    except UnresolvedIdentifier:
        raise UnknownInstance(f"call to unknown instance {callee.dotted!r}", *callee.pos, block.path) from None
    if not ref.is_instance:
        raise UnknownInstance(f"{callee.dotted!r} is not a function block instance", *callee.pos, block.path)
    return callee, ref.type


def typecheck_expr(program: TypedProgram, block_name: str, e: A.Expr, path: str = "<string>") -> str:
    """Type-check a free-standing expression in the scope of ``block_name``."""
    block = program.block(block_name)
    checker = _BodyChecker(program, block)
    checker.path = path
    return expr_type(e, checker.lookup, path)
