"""Timing diagrams and the verification harnesses generated from them.

A timing diagram is a CSV grid::

    signal,dir,1,2,3,4,5,6
    ON,in,0,1,1,1,0,0
    ACK,in,U,U,U,0,0,1
    ERROR,out,0,0,0,1,1,0

``U`` marks an unconstrained input: the generated harness leaves that input
unassigned in that cycle so the verifier explores both values.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from stverif.errors import (
    DiagramError,
    DirectionMismatch,
    RaggedRow,
    SignalNotInInterface,
    UnconstrainedOutput,
    UnknownCellValue,
    ZeroCycleTime,
)
from stverif.frontend import ast as A
from stverif.frontend.printer import ident

INPUT = "in"
OUTPUT = "out"
_DIRS = {"in": INPUT, "input": INPUT, "out": OUTPUT, "output": OUTPUT}
_CELLS = {"1": True, "0": False, "U": None}

Cell = Optional[bool]  # None is unconstrained


@dataclass(frozen=True)
class Signal:
    name: str
    direction: str
    cells: Tuple[Cell, ...]


@dataclass(frozen=True)
class TimingDiagram:
    signals: Tuple[Signal, ...]

    @property
    def cycles(self) -> int:
        return len(self.signals[0].cells) if self.signals else 0

    @property
    def inputs(self) -> Tuple[Signal, ...]:
        return tuple(s for s in self.signals if s.direction == INPUT)

    @property
    def outputs(self) -> Tuple[Signal, ...]:
        return tuple(s for s in self.signals if s.direction == OUTPUT)

    def input_rows(self) -> List[Dict[str, bool]]:
        """Per-cycle input valuations; unconstrained cells are left out."""
        rows = []
        for k in range(self.cycles):
            rows.append({s.name: s.cells[k] for s in self.inputs if s.cells[k] is not None})
        return rows

    def output_rows(self) -> List[Dict[str, bool]]:
        return [{s.name: s.cells[k] for s in self.outputs} for k in range(self.cycles)]


def load_timing_diagram(text: str) -> TimingDiagram:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise DiagramError("empty timing diagram")
    header = [c.strip() for c in rows[0]]
    if len(header) < 3 or [h.lower() for h in header[:2]] != ["signal", "dir"]:
        raise DiagramError("header must be 'signal,dir,1,2,...'")
    if header[2:] != [str(k) for k in range(1, len(header) - 1)]:
        raise DiagramError("cycle columns must be numbered 1..n")
    n = len(header) - 2
    signals = []
    names = set()
    for lineno, row in enumerate(rows[1:], start=2):
        row = [c.strip() for c in row]
        if len(row) != n + 2:
            raise RaggedRow(f"line {lineno}: expected {n} cycle cells, found {len(row) - 2}")
        name, d = row[0], row[1].lower()
        if d not in _DIRS:
            raise DiagramError(f"line {lineno}: direction must be 'in' or 'out', not {row[1]!r}")
        if name in names:
            raise DiagramError(f"line {lineno}: signal {name!r} listed twice")
        names.add(name)
        cells = []
        for k, c in enumerate(row[2:], start=1):
            key = c.upper()
            if key not in _CELLS:
                raise UnknownCellValue(f"line {lineno}, cycle {k}: cell {c!r} is not 1, 0 or U")
            if key == "U" and _DIRS[d] == OUTPUT:
                raise UnconstrainedOutput(f"output {name!r} is unconstrained in cycle {k}")
            cells.append(_CELLS[key])
        signals.append(Signal(name, _DIRS[d], tuple(cells)))
    diagram = TimingDiagram(tuple(signals))
    if not diagram.inputs or not diagram.outputs:
        raise DiagramError("a timing diagram needs at least one input and one output")
    return diagram


def dump_timing_diagram(d: TimingDiagram) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["signal", "dir"] + [str(k) for k in range(1, d.cycles + 1)])
    for s in d.signals:
        w.writerow([s.name, s.direction] + ["U" if c is None else str(int(c)) for c in s.cells])
    return buf.getvalue()


@dataclass(frozen=True)
class HarnessSource:
    text: str
    driver: str  # name of the generated driver block
    instance: str  # data block holding the target instance
    target: str
    assertions: Tuple[str, ...]


def _literal(v: bool) -> str:
    return "TRUE" if v else "FALSE"


def generate_harness(d: TimingDiagram, target: A.FunctionBlockDecl,
                     instance: Optional[str] = None, driver: Optional[str] = None) -> HarnessSource:
    """Emit a driver block that replays ``d`` against an instance of ``target``.

    Each cycle assigns the constrained inputs, calls the instance once and
    asserts every output cell separately, so a failing assertion names the
    exact (output, cycle) that disagrees.
    """
    for s in d.signals:
        decl = target.var(s.name)
        if decl is None:
            raise SignalNotInInterface(f"{target.name} has no variable {s.name!r}")
        want = "input" if s.direction == INPUT else "output"
        if decl.section != want:
            raise DirectionMismatch(f"{s.name!r} is a {s.direction} signal but a {decl.section} of {target.name}")
        if decl.type_name != A.BOOL:
            raise DirectionMismatch(f"{s.name!r} must be BOOL to appear in a timing diagram")

    instance = instance or f"{target.name}_inst"
    driver = driver or f"call_{target.name}"
    inst = f'"{instance}"'
    lines = [f"DATA_BLOCK {inst} {ident(target.name)}", "BEGIN", "END_DATA_BLOCK", "",
             f"FUNCTION_BLOCK {ident(driver)}", "    VAR", "        cycle : INT := 1;"]
    if d.cycles > 200:
        lines.append("        //#RANGE(cycle, 0, 32767)")
    lines += ["    END_VAR", "BEGIN", "",
              "// inputs per cycle; an input without assignment is nondeterministic"]

    branches = []
    for k, row in enumerate(d.input_rows(), start=1):
        if row:
            body = [f"    {inst}.{ident(n)} := {_literal(v)};" for n, v in row.items()]
            branches.append((k, body))
    for i, (k, body) in enumerate(branches):
        lines.append(f"{'IF' if i == 0 else 'ELSIF'} cycle={k} THEN")
        lines += body
    if branches:
        lines.append("END_IF;")
    lines += ["", f"{ident(target.name)}.{inst}();", ""]

    names = []
    for k in range(1, d.cycles + 1):
        for s in d.outputs:
            name = f"assertion{len(names) + 1}"
            names.append(name)
            lines.append(f"//#ASSERT(cycle={k} --> ({inst}.{ident(s.name)} = {_literal(s.cells[k - 1])})) : {name};")
    lines += ["", "cycle := cycle + 1;", "", "END_FUNCTION_BLOCK", ""]
    return HarnessSource("\n".join(lines), driver, instance, target.name, tuple(names))


def compute_unwinding(timer_pts: Sequence[int], t_cycle: int, c_t: int) -> int:
    """Number of cycles to explore: enough to see every timer expire and to
    cover the whole timing diagram."""
    if t_cycle <= 0:
        raise ZeroCycleTime("cycle time must be positive")
    c_c = max((int(pt // t_cycle) + 1 for pt in timer_pts), default=0)
    return max(c_c, c_t)
