"""Wrap a target function block and a requirement monitor into one checker block.

The checker block takes the target's inputs as its own inputs, calls the
target instance ``dut``, runs the monitor and asserts at the end of the
cycle. Requirement signal names are tied to program names by a mapping file::

    In_1 -> start_button        # requirement input/output -> program variable
    state Manual -> mode = 0    # state predicate over the program's variables

Names without a mapping line are looked up unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from stverif.bmc import DEFAULT_T_CYCLE_MS, VerificationCase
from stverif.errors import RequirementError
from stverif.frontend import ast as A
from stverif.frontend import format_expr, parse_expression, parse_source, typecheck_and_resolve
from stverif.frontend.printer import format_stmts, ident
from stverif.requirements.logic import compile_logic_diagram, parse_logic_diagrams, tree_inputs
from stverif.requirements.state_machine import compile_state_machine, parse_state_machine
from stverif.requirements.tables import (
    EXCLUSIVE,
    LAST_WINS,
    Monitor,
    compile_cem,
    compile_io_matrix,
    load_cem,
    load_io_matrix,
)

DUT = "dut"
DEFAULT_CHECK_BOUND = 6
KINDS = ("cem", "iom", "sm", "logic")


@dataclass
class RequirementMapping:
    names: Dict[str, str] = field(default_factory=dict)
    states: Dict[str, str] = field(default_factory=dict)

    def target(self, name: str) -> str:
        return self.names.get(name, name)


def parse_mapping(text: str) -> RequirementMapping:
    m = RequirementMapping()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, sep, rhs = line.partition("->")
        if not sep or not rhs.strip():
            raise RequirementError(f"mapping line {lineno}: expected '<name> -> <target>'")
        lhs, rhs = lhs.strip(), rhs.strip()
        if lhs.startswith("state "):
            m.states[lhs[6:].strip()] = rhs
        else:
            m.names[lhs] = rhs
    return m


@dataclass(frozen=True)
class Requirement:
    kind: str
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    spec: object  # CemTable, IoMatrix, StateMachineSpec or list of LogicDiagram


def detect_kind(path: Path) -> str:
    name = path.name.lower()
    for suffix, kind in ((".cem.csv", "cem"), (".iom.csv", "iom"), (".sm", "sm"), (".logic", "logic")):
        if name.endswith(suffix):
            return kind
    raise RequirementError(f"cannot tell the requirement kind of {path.name}; pass --kind")


def load_requirement(path, kind: Optional[str] = None, exclusive: bool = False) -> Requirement:
    path = Path(path)
    kind = kind or detect_kind(path)
    text = path.read_text(encoding="utf-8")
    if kind == "cem":
        t = load_cem(text)
        return Requirement(kind, t.inputs, t.outputs, t)
    if kind == "iom":
        m = load_io_matrix(text, EXCLUSIVE if exclusive else LAST_WINS)
        return Requirement(kind, m.inputs, m.outputs, m)
    if kind == "sm":
        s = parse_state_machine(text, str(path))
        return Requirement(kind, s.inputs, (), s)
    if kind == "logic":
        ds = parse_logic_diagrams(text)
        ins: List[str] = []
        for d in ds:
            ins += [n for n in tree_inputs(d.tree) if n not in ins]
        return Requirement(kind, tuple(ins), tuple(d.output for d in ds), ds)
    raise RequirementError(f"unknown requirement kind {kind!r}; use one of {', '.join(KINDS)}")


@dataclass(frozen=True)
class CheckerSource:
    text: str
    entry: str
    assertions: Tuple[str, ...]
    assumptions: Tuple[str, ...]


def _pure(pairs) -> Monitor:
    return Monitor((), (), (), tuple((o, A.eq(A.var(o), e)) for o, e in pairs))


def compile_requirement(req: Requirement, target: A.FunctionBlockDecl, mapping: RequirementMapping,
                        allow_incomplete: bool = False) -> Monitor:
    if req.kind == "cem":
        return _pure(compile_cem(req.spec))
    if req.kind == "logic":
        return _pure(compile_logic_diagram(d) for d in req.spec)
    if req.kind == "iom":
        initial = {}
        for o in req.outputs:
            decl = target.var(mapping.target(o))
            if decl is not None and isinstance(decl.init, A.Literal):
                initial[o] = bool(decl.init.value)
        return compile_io_matrix(req.spec, initial)
    preds = {}
    for st, text in mapping.states.items():
        e = parse_expression(text, "<mapping>")
        preds[st] = A.rename(e, lambda n: A.Name((DUT,) + n.parts, n.pos))
    return compile_state_machine(req.spec, preds, allow_incomplete)


def build_checker(req: Requirement, monitor: Monitor, target: A.FunctionBlockDecl,
                  mapping: RequirementMapping) -> CheckerSource:
    """ST source of a checker block for ``target``; parse it next to the program."""
    renames: Dict[str, A.Name] = {}
    for i in req.inputs:
        decl = target.var(mapping.target(i))
        if decl is None or decl.section != "input" or decl.type_name != A.BOOL:
            raise RequirementError(f"requirement input {i!r} must map to a BOOL input of {target.name}")
        renames[i] = A.var(decl.name)
    for o in req.outputs:
        decl = target.var(mapping.target(o))
        if decl is None or decl.section != "output":
            raise RequirementError(f"requirement output {o!r} must map to an output of {target.name}")
        renames[o] = A.var(DUT, decl.name)
    own = {name for name, _, _ in monitor.variables}
    for name in own:
        if target.var(name) is not None or name == DUT:
            raise RequirementError(f"monitor variable {name!r} clashes with a variable of {target.name}")

    def tr(n: A.Name) -> A.Name:
        if len(n.parts) == 1 and n.parts[0] in renames:
            return renames[n.parts[0]]
        return n

    def tr_stmt(s):
        if isinstance(s, A.Assign):
            return A.Assign(s.target, A.rename(s.value, tr), s.pos)
        if isinstance(s, A.If):
            return A.If(A.rename(s.cond, tr), tuple(tr_stmt(x) for x in s.body),
                        tuple(tr_stmt(x) for x in s.orelse), s.pos)
        raise TypeError(s)  # pragma: no cover

    entry = f"check_{target.name}"
    lines = [f"FUNCTION_BLOCK {ident(entry)}", "    VAR_INPUT"]
    for d in target.inputs:
        lines.append(f"        {ident(d.name)} : {d.type_name};")
    ranges = [r for r in target.ranges if target.var(r.var).section == "input"]
    for r in ranges:
        lines.append(f"        //#RANGE({r.var}, {r.lo}, {r.hi})")
    lines += ["    END_VAR", "    VAR", f"        {DUT} : {ident(target.name)};"]
    for name, ty, init in monitor.variables:
        lit = format_expr(A.Literal(init, ty))
        lines.append(f"        {ident(name)} : {ty} := {lit};")
    for name, lo, hi in monitor.ranges:
        lines.append(f"        //#RANGE({name}, {lo}, {hi})")
    lines += ["    END_VAR", "BEGIN"]
    for name, e in monitor.assumptions:
        lines.append(f"    //#ASSUME({format_expr(A.rename(e, tr))}) : {name};")
    args = ", ".join(f"{ident(d.name)} := {ident(d.name)}" for d in target.inputs)
    lines.append(f"    {DUT}({args});")
    lines += format_stmts([tr_stmt(s) for s in monitor.statements])
    for name, e in monitor.assertions:
        lines.append(f"    //#ASSERT({format_expr(A.rename(e, tr))}) : {name};")
    lines += ["END_FUNCTION_BLOCK", ""]
    return CheckerSource("\n".join(lines), entry,
                         tuple(n for n, _ in monitor.assertions),
                         tuple(n for n, _ in monitor.assumptions))


def checker_program(units, checker: CheckerSource):
    """Type-check the program units together with the generated checker."""
    return typecheck_and_resolve(list(units) + [parse_source(checker.text, f"<{checker.entry}>")])


def requirement_case(req: Requirement, units, fb: str, mapping: Optional[RequirementMapping] = None,
                     t_cycle: int = DEFAULT_T_CYCLE_MS, K: int = DEFAULT_CHECK_BOUND,
                     allow_incomplete: bool = False, name: str = "requirement") -> VerificationCase:
    """Verification case checking block ``fb`` of ``units`` against ``req``."""
    units = list(units)
    target = typecheck_and_resolve(units).block(fb)
    if target is None:
        raise RequirementError(f"no function block named {fb!r} in the given sources")
    mapping = mapping or RequirementMapping()
    monitor = compile_requirement(req, target, mapping, allow_incomplete)
    checker = build_checker(req, monitor, target, mapping)
    return VerificationCase(checker_program(units, checker), checker.entry, t_cycle, K, name=name)
