"""Concrete execution of a cycle automaton over given per-cycle inputs."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from stverif.errors import MissingInput
from stverif.semantics.cfa import CycleAutomaton


@dataclass(frozen=True)
class CycleState:
    """Snapshot at the end of one scan cycle."""

    cycle_index: int
    inputs: Mapping[str, object]
    valuation: Mapping[str, object]
    timer_states: Mapping[str, object] = field(default_factory=dict)
    violations: Tuple[str, ...] = ()
    assume_violations: Tuple[str, ...] = ()

    def __getitem__(self, name: str):
        return self.valuation[name]


def run_trace(automaton: CycleAutomaton, inputs: Sequence[Mapping[str, object]],
              initial: Optional[Tuple[Dict, Dict]] = None) -> List[CycleState]:
    """Simulate one cycle per element of ``inputs``.

    Assertion and assumption failures are recorded on the returned states;
    they never stop the simulation.
    """
    vals, timers = initial if initial is not None else automaton.initial_state()
    trace: List[CycleState] = []
    for k, row in enumerate(inputs, start=1):
        for v in automaton.cycle_vars:
            if v not in row:
                raise MissingInput(k, v)
        out = automaton.step(vals, timers, row, prune=False)
        vals, timers = out.valuation, out.timers
        used = {v: automaton.var(v).coerce(row[v]) for v in automaton.cycle_vars}
        trace.append(CycleState(k, used, vals, timers, out.violations, out.assume_violations))
    return trace


def format_value(v) -> str:
    if isinstance(v, bool):
        return "TRUE" if v else "FALSE"
    return str(v)


def trace_to_csv(automaton: CycleAutomaton, trace: Sequence[CycleState],
                 variables: Optional[Sequence[str]] = None) -> str:
    """CSV with header ``cycle,<var>...`` and one row per cycle."""
    names = list(variables) if variables is not None else [v.name for v in automaton.variables]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["cycle"] + names)
    for st in trace:
        w.writerow([st.cycle_index] + [format_value(st.valuation[n]) for n in names])
    return buf.getvalue()


def parse_value(text: str):
    t = text.strip().upper()
    if t == "TRUE":
        return True
    if t == "FALSE":
        return False
    return int(t)


def inputs_from_csv(text: str) -> List[Dict[str, object]]:
    """Read per-cycle inputs from a ``cycle,<var>...`` CSV.

    Empty cells are left out, so a missing value surfaces as MissingInput.
    """
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(c.strip() for c in r)]
    if not rows:
        return []
    header = [h.strip() for h in rows[0]]
    names = header[1:] if header and header[0].lower() == "cycle" else header
    offset = len(header) - len(names)
    out = []
    for r in rows[1:]:
        row = {}
        for n, cell in zip(names, r[offset:]):
            if cell.strip():
                row[n] = parse_value(cell)
        out.append(row)
    return out
