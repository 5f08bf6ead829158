"""State-machine requirements: well-formedness diagnostics and monitors.

File format, one item per line (``#`` starts a comment)::

    input req_manual            # optional; otherwise inputs are taken from guards
    state Manual
    init Manual
    trans Manual -> Forced when req_forced
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from stverif.errors import IncompleteSpec, NondeterministicSpec, RequirementError, StverifError, TooManyInputs
from stverif.frontend import ast as A
from stverif.frontend import format_expr, parse_expression
from stverif.frontend.typecheck import expr_type
from stverif.requirements.tables import Monitor
from stverif.semantics.expr import compile_expr

MAX_INPUTS = 16
STATE_VAR = "mon_state"


@dataclass(frozen=True)
class Transition:
    src: str
    guard: A.Expr
    dst: str

    def __str__(self) -> str:
        return f"{self.src} -> {self.dst} when {format_expr(self.guard)}"


@dataclass(frozen=True)
class StateMachineSpec:
    states: Tuple[str, ...]
    initial: str
    transitions: Tuple[Transition, ...]
    inputs: Tuple[str, ...]

    def __post_init__(self):
        if self.initial not in self.states:
            raise RequirementError(f"initial state {self.initial!r} is not declared")
        known = set(self.inputs)
        for t in self.transitions:
            for s in (t.src, t.dst):
                if s not in self.states:
                    raise RequirementError(f"transition uses undeclared state {s!r}")

            def lookup(n: A.Name, t=t):
                if n.dotted not in known:
                    raise RequirementError(f"guard of {t} reads {n.dotted!r}, which is not an input")
                return A.BOOL

            try:
                ty = expr_type(t.guard, lookup)
            except StverifError as exc:
                raise RequirementError(f"guard of {t}: {exc}") from None
            if ty != A.BOOL:
                raise RequirementError(f"guard of {t} is not BOOL")

    def outgoing(self, state: str) -> List[Transition]:
        return [t for t in self.transitions if t.src == state]

    def index(self, state: str) -> int:
        return self.states.index(state)


def parse_state_machine(text: str, path: str = "<sm>") -> StateMachineSpec:
    states: List[str] = []
    inputs: List[str] = []
    initial: Optional[str] = None
    raw: List[Tuple[str, str, str, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "state":
            if rest in states:
                raise RequirementError(f"line {lineno}: state {rest!r} declared twice")
            states.append(rest)
        elif key == "input":
            inputs.append(rest)
        elif key == "init":
            initial = rest
        elif key == "trans":
            head, sep, guard = rest.partition(" when ")
            src, arrow, dst = head.partition("->")
            if not (sep and arrow):
                raise RequirementError(f"line {lineno}: expected 'trans A -> B when <expr>'")
            raw.append((src.strip(), guard.strip(), dst.strip(), lineno))
        else:
            raise RequirementError(f"line {lineno}: unknown key {key!r}")
    if not states:
        raise RequirementError("no states declared")
    if initial is None:
        initial = states[0]
    transitions = []
    declared = bool(inputs)
    for src, guard, dst, lineno in raw:
        e = parse_expression(guard, path, lineno)
        if not declared:
            for n in A.names_in(e):
                if n.dotted not in inputs:
                    inputs.append(n.dotted)
        transitions.append(Transition(src, e, dst))
    return StateMachineSpec(tuple(states), initial, tuple(transitions), tuple(inputs))


def valuations(inputs: Sequence[str]) -> Iterator[Dict[str, bool]]:
    if len(inputs) > MAX_INPUTS:
        raise TooManyInputs(f"{len(inputs)} inputs; at most {MAX_INPUTS} can be enumerated")
    for combo in itertools.product((False, True), repeat=len(inputs)):
        yield dict(zip(inputs, combo))


@dataclass(frozen=True)
class Conflict:
    state: str
    first: Transition
    second: Transition
    witness: Dict[str, bool]


@dataclass(frozen=True)
class Gap:
    state: str
    witness: Dict[str, bool]


def _guards(s: StateMachineSpec):
    return {t: compile_expr(t.guard) for t in s.transitions}


def check_sm_determinism(s: StateMachineSpec) -> List[Conflict]:
    """Every pair of transitions out of one state that can fire together."""
    envs = list(valuations(s.inputs))
    g = _guards(s)
    out = []
    for state in s.states:
        ts = s.outgoing(state)
        for a, b in itertools.combinations(ts, 2):
            for env in envs:
                if g[a](env) and g[b](env):
                    out.append(Conflict(state, a, b, env))
                    break
    return out


def check_sm_completeness(s: StateMachineSpec) -> List[Gap]:
    """States with an input valuation under which no transition fires."""
    envs = list(valuations(s.inputs))
    g = _guards(s)
    out = []
    for state in s.states:
        ts = s.outgoing(state)
        for env in envs:
            if not any(g[t](env) for t in ts):
                out.append(Gap(state, env))
                break
    return out


def format_witness(w: Dict[str, bool]) -> str:
    return "{" + ", ".join(f"{k}={int(v)}" for k, v in w.items()) + "}"


def sm_step(s: StateMachineSpec, state: str, inputs: Dict[str, bool]) -> str:
    """Reference step: first enabled transition in file order, else stay."""
    for t in s.outgoing(state):
        if compile_expr(t.guard)(inputs):
            return t.dst
    return state


def compile_state_machine(s: StateMachineSpec, state_preds: Dict[str, A.Expr],
                          allow_incomplete: bool = False) -> Monitor:
    """Monitor tracking the expected state, with one assertion per state.

    ``state_preds`` maps each state to a BOOL expression over the program
    that holds exactly when the program is in that state. A missing
    transition keeps the current state.
    """
    if not allow_incomplete:
        conflicts = check_sm_determinism(s)
        if conflicts:
            c = conflicts[0]
            raise NondeterministicSpec(
                f"state {c.state}: '{c.first}' and '{c.second}' both fire under {format_witness(c.witness)}")
        gaps = check_sm_completeness(s)
        if gaps:
            g = gaps[0]
            raise IncompleteSpec(f"state {g.state}: no transition fires under {format_witness(g.witness)}")
    missing = [st for st in s.states if st not in state_preds]
    if missing:
        raise RequirementError(f"no program predicate for state(s) {', '.join(missing)}")

    mon = A.var(STATE_VAR)
    branches: A.Stmt = None
    for state in reversed(s.states):
        inner: Tuple[A.Stmt, ...] = ()
        for t in reversed(s.outgoing(state)):
            # a self-loop needs no assignment but still claims its valuations
            body = () if t.dst == state else (A.Assign(mon, A.Literal(s.index(t.dst), A.INT)),)
            inner = (A.If(t.guard, body, inner),)
        cond = A.eq(mon, A.Literal(s.index(state), A.INT))
        branches = A.If(cond, inner, (branches,) if branches is not None else ())
    stmts = (branches,) if branches is not None else ()
    assertions = tuple(
        (f"state_{st}", A.eq(A.eq(mon, A.Literal(s.index(st), A.INT)), state_preds[st]))
        for st in s.states)
    return Monitor(
        variables=((STATE_VAR, A.INT, s.index(s.initial)),),
        statements=stmts,
        assumptions=(),
        assertions=assertions,
        ranges=((STATE_VAR, 0, len(s.states) - 1),),
    )
