"""Bounded, cycle-accurate verification by explicit-state exploration.

Every scan cycle samples all cycle inputs from their finite domains. The
engine explores the reachable states layer by layer (one layer per cycle),
deduplicating states across layers, for at most ``K`` cycles. Within a cycle
an assertion only counts as violated when no assumption failed in the same
cycle, and cycles whose assumptions fail are not continued.

Counterexamples are shortest-first; among the shortest ones the engine
returns the input sequence that comes first in enumeration order (inputs in
declaration order, low value before high).
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from stverif.errors import (
    BudgetExceeded,
    CaseFileError,
    NonConstantPreset,
    NotViolated,
    UnboundedDomain,
    ZeroCycleTime,
)
from stverif.frontend import ast as A
from stverif.frontend import load_program, parse_expression, typecheck_expr
from stverif.frontend.typecheck import TypedProgram, constant_value
from stverif.harness import compute_unwinding, load_timing_diagram
from stverif.semantics.cfa import CycleAutomaton, lower_to_cfa
from stverif.semantics.simulate import CycleState, run_trace

SATISFIED = "Satisfied"
VIOLATED = "Violated"
DEFAULT_BUDGET = 2 ** 24
DEFAULT_T_CYCLE_MS = 100


@dataclass(frozen=True)
class VerificationCase:
    program: TypedProgram
    entry: str
    t_cycle: int
    K: int
    assumptions: Tuple[Tuple[str, A.Expr], ...] = ()
    assertions: Tuple[Tuple[str, A.Expr], ...] = ()  # checked at the end of each cycle
    name: str = "case"

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("the bound K must be at least 1")
        if self.t_cycle <= 0:
            raise ZeroCycleTime("t_cycle must be positive")

    def automaton(self) -> CycleAutomaton:
        return lower_to_cfa(self.program, self.entry, self.t_cycle,
                            self.assumptions, self.assertions)


@dataclass(frozen=True)
class Counterexample:
    states: Tuple[CycleState, ...]
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]

    @property
    def violation_cycle(self) -> int:
        return len(self.states)

    def input_rows(self) -> List[Dict[str, object]]:
        return [dict(s.inputs) for s in self.states]


@dataclass(frozen=True)
class Verdict:
    assertion: str
    status: str
    bound: int
    counterexample: Optional[Counterexample] = None
    vacuous_from: Optional[int] = None

    @property
    def violated(self) -> bool:
        return self.status == VIOLATED


@dataclass
class Exploration:
    """Verdicts plus the bookkeeping the report wants to show."""

    verdicts: List[Verdict]
    automaton: CycleAutomaton
    states: int
    cycles_explored: int
    vacuous_from: Optional[int] = None
    fixpoint: bool = False


def input_domain(automaton: CycleAutomaton, name: str) -> Tuple[object, ...]:
    v = automaton.var(name)
    if v.type == A.BOOL:
        return (False, True)
    if v.type == A.INT:
        if not v.ranged:
            raise UnboundedDomain(f"input {name!r} is INT without a RANGE pragma")
        return tuple(range(v.lo, v.hi + 1))
    raise UnboundedDomain(f"input {name!r} of type {v.type} has no finite domain")


def input_order(automaton: CycleAutomaton, order: str = "decl") -> Tuple[str, ...]:
    if order == "decl":
        return automaton.cycle_vars
    if order == "name":
        return tuple(sorted(automaton.cycle_vars))
    raise ValueError(f"unknown input order {order!r}")


def enumerate_inputs(automaton: CycleAutomaton, order: str = "decl") -> List[Dict[str, object]]:
    """All per-cycle input valuations in enumeration order."""
    names = input_order(automaton, order)
    domains = [input_domain(automaton, n) for n in names]
    return [dict(zip(names, combo)) for combo in itertools.product(*domains)]


def explore(case: VerificationCase, budget: int = DEFAULT_BUDGET, order: str = "decl",
            automaton: Optional[CycleAutomaton] = None) -> Exploration:
    automaton = automaton if automaton is not None else case.automaton()
    names = automaton.assertions
    if not names:
        raise ValueError(f"{case.entry} has no assertions to check")
    names_in = input_order(automaton, order)
    size = 1
    for n in names_in:
        size *= len(input_domain(automaton, n))
        if size > budget:
            raise BudgetExceeded(f"one cycle has more than {budget} input combinations")
    rows = enumerate_inputs(automaton, order)

    vals, timers = automaton.initial_state()
    root = automaton.state_key(vals, timers)
    visited = {root}
    # parent links: key -> (parent key, input index)
    parent: Dict[tuple, Tuple[Optional[tuple], int]] = {root: (None, -1)}
    layer = [(root, vals, timers)]
    found: Dict[str, Tuple[tuple, int]] = {}
    vacuous_from = None
    fixpoint = False
    explored = 0

    for k in range(1, case.K + 1):
        explored = k
        nxt = []
        alive = False
        for key, vals, timers in layer:
            for idx, row in enumerate(rows):
                out = automaton.step(vals, timers, row, prune=True)
                if out.pruned:
                    continue
                alive = True
                for name in out.violations:
                    if name not in found:
                        found[name] = (key, idx)
                child = automaton.state_key(out.valuation, out.timers)
                if child not in visited:
                    visited.add(child)
                    if len(visited) > budget:
                        raise BudgetExceeded(f"more than {budget} distinct states after {k} cycles")
                    parent[child] = (key, idx)
                    nxt.append((child, out.valuation, out.timers))
        if not alive:
            vacuous_from = k
            break
        if len(found) == len(names):
            break
        if not nxt:
            fixpoint = True
            break
        layer = nxt

    verdicts = []
    for name in names:
        if name in found:
            key, idx = found[name]
            seq = [rows[idx]]
            while parent[key][0] is not None:
                key, i = parent[key]
                seq.append(rows[i])
            seq.reverse()
            trace = _readable_trace(automaton, seq, name)
            cex = Counterexample(trace, automaton.cycle_vars, _observed_outputs(automaton))
            verdicts.append(Verdict(name, VIOLATED, case.K, cex))
        else:
            verdicts.append(Verdict(name, SATISFIED, case.K, None, vacuous_from))
    return Exploration(verdicts, automaton, len(visited), explored, vacuous_from, fixpoint)


def _reaches(trace: Sequence[CycleState], name: str) -> bool:
    return (name in trace[-1].violations
            and not any(s.assume_violations for s in trace))


def _readable_trace(automaton: CycleAutomaton, seq, name: str) -> Tuple[CycleState, ...]:
    """Replay ``seq``, preferring the input values seen at the end of each cycle.

    A harness overwrites most sampled inputs, so the end-of-cycle values are
    what a reader expects to see. They are used only if they replay to the
    same violation.
    """
    trace = run_trace(automaton, seq)
    effective = [{n: s.valuation[n] for n in automaton.cycle_vars} for s in trace]
    if effective != seq:
        alt = run_trace(automaton, effective)
        if _reaches(alt, name):
            return tuple(alt)
    return tuple(trace)


def verify(case: VerificationCase, budget: int = DEFAULT_BUDGET, order: str = "decl") -> List[Verdict]:
    """Check every assertion of ``case`` up to its bound."""
    return explore(case, budget, order).verdicts


def verify_mutant_sensitivity(case: VerificationCase, mutated: TypedProgram,
                              budget: int = DEFAULT_BUDGET, order: str = "decl") -> List[Verdict]:
    """Run the same case against a modified program."""
    return verify(replace(case, program=mutated), budget, order)


def _observed_outputs(automaton: CycleAutomaton) -> Tuple[str, ...]:
    """Outputs of the entry block, or of the called instances when it has none."""
    if automaton.outputs:
        return automaton.outputs
    return tuple(v.name for v in automaton.variables if v.role == "output")


def _cell(v) -> str:
    return str(int(v))


def render_counterexample(v: Verdict) -> str:
    """Timing-diagram CSV for cycles 1..violation of a violated verdict."""
    if v.counterexample is None:
        raise NotViolated(f"{v.assertion} is not violated")
    cex = v.counterexample
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["signal", "dir"] + [str(k) for k in range(1, cex.violation_cycle + 1)])
    for name in cex.inputs:
        w.writerow([name, "in"] + [_cell(s.inputs[name]) for s in cex.states])
    for name in cex.outputs:
        w.writerow([name, "out"] + [_cell(s.valuation[name]) for s in cex.states])
    return buf.getvalue()


# case files


@dataclass
class CaseFile:
    path: Path
    sources: List[Path] = field(default_factory=list)
    entry: Optional[str] = None
    t_cycle_ms: int = DEFAULT_T_CYCLE_MS
    unwind: Optional[int] = None  # None means auto
    assumes: List[Tuple[str, str]] = field(default_factory=list)
    asserts: List[Tuple[str, str]] = field(default_factory=list)
    diagram: Optional[Path] = None
    cycles: Optional[int] = None

    @property
    def name(self) -> str:
        return self.path.stem


def _int(text: str, key: str, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise CaseFileError(f"line {lineno}: {key} expects an integer, got {text!r}") from None


def _named(rest: str, default: str) -> Tuple[str, str]:
    head, sep, tail = rest.partition(":")
    if sep and head.strip().isidentifier() and "=" not in head:
        return head.strip(), tail.strip()
    return default, rest


def parse_case_file(text: str, path="<case>") -> CaseFile:
    """Read the line-based case format.

    Keys: ``source``, ``entry``, ``t_cycle_ms``, ``unwind <int|auto>``,
    ``assume [name:] <expr>``, ``assert [name:] <expr>``, ``diagram <csv>``
    and ``cycles <n>``. ``#`` starts a comment line.
    """
    path = Path(path)
    base = path.parent
    case = CaseFile(path)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        key, rest = key.lower(), rest.strip()
        if not rest:
            raise CaseFileError(f"line {lineno}: {key!r} needs a value")
        if key == "source":
            case.sources.append(base / rest)
        elif key == "entry":
            case.entry = rest
        elif key == "t_cycle_ms":
            case.t_cycle_ms = _int(rest, key, lineno)
        elif key == "unwind":
            case.unwind = None if rest.lower() == "auto" else _int(rest, key, lineno)
        elif key == "assume":
            case.assumes.append(_named(rest, f"assume{len(case.assumes) + 1}"))
        elif key == "assert":
            case.asserts.append(_named(rest, f"assert{len(case.asserts) + 1}"))
        elif key == "diagram":
            case.diagram = base / rest
        elif key == "cycles":
            case.cycles = _int(rest, key, lineno)
        else:
            raise CaseFileError(f"line {lineno}: unknown key {key!r}")
    if not case.sources:
        raise CaseFileError(f"{path}: no 'source' line")
    if case.entry is None:
        raise CaseFileError(f"{path}: no 'entry' line")
    return case


def load_case_file(path) -> CaseFile:
    path = Path(path)
    return parse_case_file(path.read_text(encoding="utf-8"), path)


def _exprs(program, entry, pairs, label, path) -> Tuple[Tuple[str, A.Expr], ...]:
    out = []
    for name, text in pairs:
        e = parse_expression(text, str(path))
        if typecheck_expr(program, entry, e, str(path)) != A.BOOL:
            raise CaseFileError(f"{label} {name!r} is not a BOOL expression")
        out.append((name, e))
    return tuple(out)


def timer_presets_ms(automaton: CycleAutomaton) -> List[int]:
    out = []
    for e in automaton.timer_presets:
        v = constant_value(e)
        if v is None:
            raise NonConstantPreset("unwind auto needs constant timer presets; give 'unwind <n>' instead")
        out.append(int(v))
    return out


def build_case(cf: CaseFile, program: Optional[TypedProgram] = None,
               t_cycle: Optional[int] = None, unwind: Optional[int] = None) -> VerificationCase:
    """Turn a parsed case file into a VerificationCase, resolving ``unwind auto``."""
    program = program if program is not None else load_program(cf.sources)
    t_cycle = t_cycle if t_cycle is not None else cf.t_cycle_ms
    assumes = _exprs(program, cf.entry, cf.assumes, "assume", cf.path)
    asserts = _exprs(program, cf.entry, cf.asserts, "assert", cf.path)
    K = unwind if unwind is not None else cf.unwind
    if K is None:
        automaton = lower_to_cfa(program, cf.entry, t_cycle, assumes, asserts)
        c_t = cf.cycles or 1
        if cf.diagram is not None:
            c_t = load_timing_diagram(cf.diagram.read_text(encoding="utf-8")).cycles
        K = compute_unwinding(timer_presets_ms(automaton), t_cycle, c_t)
    return VerificationCase(program, cf.entry, t_cycle, K, assumes, asserts, cf.name)
