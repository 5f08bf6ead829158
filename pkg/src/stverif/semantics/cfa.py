"""Lowering of a typed program to a control-flow automaton with scan cycles.

Each scan cycle walks the automaton once from its head location: the first
transition fixes the cycle inputs, the body follows, and the last transition
returns to the head. Function block instances are inlined and every variable
gets a flat dotted name (``"inst.ET.Q"``); variables of the entry block keep
their plain names.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from stverif.errors import NoSuchEntry, RecursiveCall
from stverif.frontend import ast as A
from stverif.frontend.typecheck import (
    BUILTIN_FBS,
    DEFAULT_INT_RANGE,
    TypedProgram,
    constant_value,
    resolve,
    resolve_call,
)
from stverif.semantics.builtins import BuiltinCTUD, BuiltinTON, ctud_step, ton_step
from stverif.semantics.expr import compile_expr


@dataclass(frozen=True)
class VarInfo:
    name: str
    type: str
    init: object
    role: str  # input, var, output or builtin
    lo: Optional[int] = None
    hi: Optional[int] = None
    ranged: bool = False  # an explicit RANGE pragma was given

    def coerce(self, value):
        if self.type == A.BOOL:
            return bool(value)
        value = int(value)
        if self.lo is not None:
            span = self.hi - self.lo + 1
            value = self.lo + (value - self.lo) % span
        return value


@dataclass(frozen=True)
class Location:
    id: int
    kind: str = "normal"  # head, normal, error, assume_fail
    label: str = ""
    resume: Optional[int] = None


@dataclass(frozen=True)
class Assignment:
    target: str
    expr: A.Expr


@dataclass(frozen=True)
class TimerCall:
    timer: str
    kind: str
    args: Tuple[Tuple[str, A.Expr], ...]


@dataclass(frozen=True)
class Havoc:
    vars: Tuple[str, ...]


@dataclass(frozen=True)
class EndCycle:
    pass


@dataclass(frozen=True)
class Transition:
    src: int
    guard: A.Expr
    actions: tuple
    dst: int


@dataclass
class StepOutcome:
    valuation: Dict[str, object]
    timers: Dict[str, object]
    violations: Tuple[str, ...]
    assume_violations: Tuple[str, ...]
    pruned: bool = False


@dataclass(frozen=True)
class CycleAutomaton:
    locations: Tuple[Location, ...]
    initial: int
    transitions: Tuple[Transition, ...]
    entry_block: str
    cycle_vars: Tuple[str, ...]
    t_cycle: int
    variables: Tuple[VarInfo, ...] = ()
    timers: Tuple[Tuple[str, str], ...] = ()
    assertions: Tuple[str, ...] = ()
    assumptions: Tuple[str, ...] = ()
    outputs: Tuple[str, ...] = ()
    timer_presets: Tuple[A.Expr, ...] = field(default=(), compare=False)

    def var(self, name: str) -> VarInfo:
        return self._vars[name]

    @cached_property
    def _vars(self) -> Dict[str, VarInfo]:
        return {v.name: v for v in self.variables}

    def outgoing(self, loc: int) -> List[Transition]:
        return [t for t in self.transitions if t.src == loc]

    def initial_state(self) -> Tuple[Dict[str, object], Dict[str, object]]:
        vals = {v.name: v.init for v in self.variables}
        timers = {t: (BuiltinTON() if k == "TON" else BuiltinCTUD()) for t, k in self.timers}
        return vals, timers

    @cached_property
    def state_vars(self) -> Tuple[str, ...]:
        """Variables whose value carries over to the next cycle."""
        cyc = set(self.cycle_vars)
        return tuple(v.name for v in self.variables if v.name not in cyc)

    def state_key(self, vals: Mapping[str, object], timers: Mapping[str, object]) -> tuple:
        return tuple(vals[v] for v in self.state_vars), tuple(timers[t] for t, _ in self.timers)

    def step(self, vals: Mapping[str, object], timers: Mapping[str, object],
             inputs: Mapping[str, object], prune: bool = False) -> StepOutcome:
        """Run one scan cycle. With ``prune`` a failed assumption stops the cycle."""
        vals = dict(vals)
        timers = dict(timers)
        table = self._table
        violations: List[str] = []
        assume_fails: List[str] = []
        loc = self.initial
        while True:
            kind, label, resume, outs = table[loc]
            if kind == "error":
                if label not in violations:
                    violations.append(label)
            elif kind == "assume_fail":
                if label not in assume_fails:
                    assume_fails.append(label)
                if prune:
                    return StepOutcome(vals, timers, tuple(violations), tuple(assume_fails), True)
                loc = resume
                continue
            for guard, action, dst in outs:
                if guard(vals):
                    if action is not None:
                        action(vals, timers, inputs)
                    loc = dst
                    break
            else:  # pragma: no cover - guards are exhaustive by construction
                raise RuntimeError(f"no enabled transition at location {loc}")
            if loc == self.initial:
                return StepOutcome(vals, timers, tuple(violations), tuple(assume_fails))

    @cached_property
    def _table(self):
        outs: Dict[int, list] = {loc.id: [] for loc in self.locations}
        for t in self.transitions:
            outs[t.src].append((compile_expr(t.guard), self._compile_actions(t.actions), t.dst))
        return {loc.id: (loc.kind, loc.label, loc.resume, outs[loc.id]) for loc in self.locations}

    def _compile_actions(self, actions):
        if not actions:
            return None
        steps = []
        assigns = [a for a in actions if isinstance(a, Assignment)]
        if assigns:
            targets = [(a.target, self._vars[a.target].coerce) for a in assigns]
            fns = [compile_expr(a.expr) for a in assigns]

            def do_assign(vals, timers, inputs):
                values = [f(vals) for f in fns]
                for (t, coerce), v in zip(targets, values):
                    vals[t] = coerce(v)

            steps.append(do_assign)
        for a in actions:
            if isinstance(a, Havoc):
                names = [(n, self._vars[n].coerce) for n in a.vars]

                def do_havoc(vals, timers, inputs, names=names):
                    for n, coerce in names:
                        vals[n] = coerce(inputs[n])

                steps.append(do_havoc)
            elif isinstance(a, TimerCall):
                steps.append(self._compile_timer(a))
        if len(steps) == 1:
            return steps[0]

        def run_all(vals, timers, inputs):
            for s in steps:
                s(vals, timers, inputs)

        return run_all

    def _compile_timer(self, call: TimerCall):
        args = {p: compile_expr(e) for p, e in call.args}
        t = call.timer
        t_cycle = self.t_cycle
        if call.kind == "TON":
            f_in, f_pt = args.get("IN"), args.get("PT")

            def do_ton(vals, timers, inputs):
                st = timers[t]
                IN = f_in(vals) if f_in else st.IN_prev
                PT = f_pt(vals) if f_pt else st.PT
                new = ton_step(st, IN, PT, t_cycle)
                timers[t] = new
                vals[t + ".Q"] = new.Q
                vals[t + ".ET"] = new.ET

            return do_ton
        lo, hi = DEFAULT_INT_RANGE
        names = ("CU", "CD", "R", "LD", "PV")
        fns = [args.get(n) for n in names]

        def do_ctud(vals, timers, inputs):
            st = timers[t]
            defaults = (st.CU_prev, st.CD_prev, False, False, st.PV)
            cu, cd, r, ld, pv = (f(vals) if f else d for f, d in zip(fns, defaults))
            new = ctud_step(st, cu, cd, r, ld, pv, lo, hi)
            timers[t] = new
            vals[t + ".CV"] = new.CV
            vals[t + ".QU"] = new.QU
            vals[t + ".QD"] = new.QD

        return do_ctud


def _join(prefix: str, *parts: str) -> str:
    return ".".join((prefix,) + parts) if prefix else ".".join(parts)


def lower_to_cfa(program: TypedProgram, entry: str, t_cycle: int,
                 assumptions: Sequence[Tuple[str, A.Expr]] = (),
                 assertions: Sequence[Tuple[str, A.Expr]] = ()) -> CycleAutomaton:
    """Build the scan-cycle automaton for ``entry``.

    ``assumptions`` are checked right after the inputs are sampled and
    ``assertions`` at the end of the cycle; both are (name, expr) pairs whose
    expressions are in the scope of the entry block.
    """
    if program.block(entry) is None:
        raise NoSuchEntry(f"no function block named {entry!r}")
    if t_cycle <= 0:
        raise ValueError("t_cycle must be positive")
    return _Lowerer(program, entry, t_cycle).run(assumptions, assertions)


class _Lowerer:
    def __init__(self, program: TypedProgram, entry: str, t_cycle: int):
        self.program = program
        self.entry = program.block(entry)
        self.t_cycle = t_cycle
        self.vars: Dict[str, VarInfo] = {}
        self.timers: Dict[str, str] = {}
        self.locs: List[Location] = []
        self.trans: List[Transition] = []
        self.assertions: List[str] = []
        self.assumptions: List[str] = []
        self.cycle_vars: List[str] = []
        self.outputs: List[str] = []
        self.presets: List[A.Expr] = []

    # structure

    def new_loc(self, kind="normal", label="", resume=None) -> int:
        loc = Location(len(self.locs), kind, label, resume)
        self.locs.append(loc)
        return loc.id

    def edge(self, src, guard, actions, dst):
        self.trans.append(Transition(src, guard, tuple(actions), dst))

    def run(self, assumptions, assertions) -> CycleAutomaton:
        self._check_recursion()
        dbs = self._reachable_data_blocks(assumptions, assertions)
        self.declare(self.entry, "", top=True)
        for db in dbs:
            self.declare(self.program.block(db.fb_type), db.name, top=True)
            for a in db.inits:
                name = _join(db.name, a.target.parts[0])
                self.vars[name] = _replace_init(self.vars[name], constant_value(a.value))

        head = self.new_loc("head")
        start = self.new_loc()
        self.edge(head, A.TRUE, [Havoc(tuple(self.cycle_vars))], start)
        scope = (self.entry, "")
        cur = start
        for name, e in assumptions:
            nxt = self.new_loc()
            self.pragma("Assume", name, e, scope, cur, nxt)
            cur = nxt
        if self.entry.body:
            nxt = self.new_loc()
            self.stmts(self.entry.body, scope, cur, nxt)
            cur = nxt
        for name, e in assertions:
            nxt = self.new_loc()
            self.pragma("Assert", name, e, scope, cur, nxt)
            cur = nxt
        self.edge(cur, A.TRUE, [EndCycle()], head)

        return CycleAutomaton(
            locations=tuple(self.locs),
            initial=head,
            transitions=tuple(self.trans),
            entry_block=self.entry.name,
            cycle_vars=tuple(self.cycle_vars),
            t_cycle=self.t_cycle,
            variables=tuple(self.vars.values()),
            timers=tuple(self.timers.items()),
            assertions=tuple(self.assertions),
            assumptions=tuple(self.assumptions),
            outputs=tuple(self.outputs),
            timer_presets=tuple(self.presets),
        )

    def declare(self, fb: A.FunctionBlockDecl, prefix: str, top: bool = False):
        for v in fb.vars:
            flat = _join(prefix, v.name)
            if v.type_name in A.SCALAR_TYPES:
                lo = hi = None
                if v.type_name == A.INT:
                    lo, hi = self.program.int_range(fb.name, v.name)
                init = constant_value(v.init) if v.init is not None else (False if v.type_name == A.BOOL else 0)
                if v.type_name == A.INT and not lo <= init <= hi:
                    init = lo if init < lo else hi
                info = VarInfo(flat, v.type_name, init, v.section, lo, hi,
                               self.program.has_range(fb.name, v.name))
                self.vars[flat] = info
                if top and v.section == "input":
                    self.cycle_vars.append(flat)
                if top and v.section == "output":
                    self.outputs.append(flat)
            elif v.type_name in BUILTIN_FBS:
                self.timers[flat] = v.type_name
                for fname, (ftype, section) in BUILTIN_FBS[v.type_name].items():
                    if section == "output":
                        init = False if ftype == A.BOOL else 0
                        lo, hi = (DEFAULT_INT_RANGE if ftype == A.INT else (None, None))
                        self.vars[_join(flat, fname)] = VarInfo(_join(flat, fname), ftype, init, "builtin", lo, hi)
            else:
                self.declare(self.program.block(v.type_name), flat)

    # checks

    def _callees(self, fb: A.FunctionBlockDecl):
        """FB types that ``fb`` contains or calls."""
        out = [v.type_name for v in fb.vars if self.program.block(v.type_name) is not None]
        for s in A.walk_stmts(fb.body):
            if isinstance(s, A.Call):
                inst, fb_type = resolve_call(self.program, fb, s.callee)
                if self.program.block(fb_type) is not None:
                    out.append(fb_type)
        return out

    def _check_recursion(self):
        state: Dict[str, int] = {}

        def visit(name, chain):
            if state.get(name) == 2:
                return
            if state.get(name) == 1:
                cyc = chain[chain.index(name):] + [name]
                raise RecursiveCall("recursive instantiation: " + " -> ".join(cyc))
            state[name] = 1
            for callee in self._callees(self.program.block(name)):
                visit(callee, chain + [name])
            state[name] = 2

        visit(self.entry.name, [])

    def _reachable_data_blocks(self, assumptions, assertions):
        found: Dict[str, A.DataBlockDecl] = {}
        seen_blocks = set()
        work = [self.entry]
        extra = [e for _, e in list(assumptions) + list(assertions)]
        while work:
            fb = work.pop()
            if fb.name in seen_blocks:
                continue
            seen_blocks.add(fb.name)
            names = []
            for s in A.walk_stmts(fb.body):
                if isinstance(s, A.Assign):
                    names.append(s.target)
                    names.extend(A.names_in(s.value))
                elif isinstance(s, A.If):
                    names.extend(A.names_in(s.cond))
                elif isinstance(s, A.PragmaStmt):
                    names.extend(A.names_in(s.expr))
                elif isinstance(s, A.Call):
                    names.append(resolve_call(self.program, fb, s.callee)[0])
                    for _, e in s.args:
                        names.extend(A.names_in(e))
            if fb is self.entry:
                for e in extra:
                    names.extend(A.names_in(e))
            for n in names:
                ref = resolve(self.program, fb, n)
                if ref.root == "global" and ref.path[0] not in found:
                    db = self.program.instance(ref.path[0])
                    found[db.name] = db
                    work.append(self.program.block(db.fb_type))
            for v in fb.vars:
                b = self.program.block(v.type_name)
                if b is not None:
                    work.append(b)
        return [d for d in self.program.instances if d.name in found]

    # statements

    def flat(self, name: A.Name, scope) -> str:
        block, prefix = scope
        ref = resolve(self.program, block, name)
        if ref.root == "global":
            return ".".join(ref.path)
        return _join(prefix, *ref.path)

    def expr(self, e: A.Expr, scope) -> A.Expr:
        return A.rename(e, lambda n: A.Name((self.flat(n, scope),), n.pos))

    def stmts(self, stmts, scope, src, dst):
        if not stmts:
            if src != dst:
                self.edge(src, A.TRUE, (), dst)
            return
        cur = src
        for i, s in enumerate(stmts):
            nxt = dst if i == len(stmts) - 1 else self.new_loc()
            self.stmt(s, scope, cur, nxt)
            cur = nxt

    def branch(self, guard, body, scope, src, dst):
        if body:
            mid = self.new_loc()
            self.edge(src, guard, (), mid)
            self.stmts(body, scope, mid, dst)
        else:
            self.edge(src, guard, (), dst)

    def stmt(self, s, scope, src, dst):
        if isinstance(s, A.Assign):
            self.edge(src, A.TRUE, [Assignment(self.flat(s.target, scope), self.expr(s.value, scope))], dst)
        elif isinstance(s, A.If):
            cond = self.expr(s.cond, scope)
            self.branch(cond, s.body, scope, src, dst)
            self.branch(A.Unary("NOT", cond), s.orelse, scope, src, dst)
        elif isinstance(s, A.PragmaStmt):
            self.pragma(s.kind, s.name, s.expr, scope, src, dst)
        elif isinstance(s, A.Call):
            self.call(s, scope, src, dst)
        else:  # pragma: no cover
            raise TypeError(s)

    def pragma(self, kind, name, e, scope, src, dst):
        block, prefix = scope
        label = _join(prefix, name)
        cond = self.expr(e, scope)
        self.edge(src, cond, (), dst)
        if kind == "Assert":
            err = self.new_loc("error", label, dst)
            self.edge(src, A.Unary("NOT", cond), (), err)
            self.edge(err, A.TRUE, (), dst)
            if label not in self.assertions:
                self.assertions.append(label)
        else:
            fail = self.new_loc("assume_fail", label, dst)
            self.edge(src, A.Unary("NOT", cond), (), fail)
            if label not in self.assumptions:
                self.assumptions.append(label)

    def call(self, s: A.Call, scope, src, dst):
        block, prefix = scope
        inst, fb_type = resolve_call(self.program, block, s.callee)
        flat = self.flat(inst, scope)
        if fb_type in BUILTIN_FBS:
            args = tuple((p, self.expr(e, scope)) for p, e in s.args)
            if fb_type == "TON":
                self.presets.extend(e for p, e in s.args if p == "PT")
            self.edge(src, A.TRUE, [TimerCall(flat, fb_type, args)], dst)
            return
        callee = self.program.block(fb_type)
        inner = (callee, flat)
        if s.args:
            assigns = [Assignment(_join(flat, p), self.expr(e, scope)) for p, e in s.args]
            if callee.body:
                mid = self.new_loc()
                self.edge(src, A.TRUE, assigns, mid)
                self.stmts(callee.body, inner, mid, dst)
            else:
                self.edge(src, A.TRUE, assigns, dst)
        else:
            self.stmts(callee.body, inner, src, dst)


def _replace_init(info: VarInfo, value) -> VarInfo:
    return replace(info, init=info.coerce(value))
