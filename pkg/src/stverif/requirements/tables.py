"""Cause-and-effect matrices and input/output matrices.

Both come as CSV grids: the first row names the outputs, the first column
names the inputs.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from stverif.errors import EmptyColumn, EmptyRow, NonContiguousGroups, RequirementError
from stverif.frontend import ast as A

_CEM_CELL = re.compile(r"(N?A)(\d+)", re.IGNORECASE)


def _grid(text: str) -> Tuple[List[str], List[str], Dict[Tuple[str, str], str]]:
    rows = [[c.strip() for c in r] for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if len(rows) < 2:
        raise RequirementError("a matrix needs a header row and at least one input row")
    outputs = rows[0][1:]
    if not outputs or any(not o for o in outputs):
        raise RequirementError("header row must name every output column")
    inputs, cells = [], {}
    for lineno, r in enumerate(rows[1:], start=2):
        if len(r) > len(outputs) + 1:
            raise RequirementError(f"line {lineno}: more cells than outputs")
        r = r + [""] * (len(outputs) + 1 - len(r))
        if not r[0]:
            raise RequirementError(f"line {lineno}: missing input name")
        inputs.append(r[0])
        for o, c in zip(outputs, r[1:]):
            cells[(r[0], o)] = c
    for names, what in ((inputs, "input"), (outputs, "output")):
        if len(set(names)) != len(names):
            raise RequirementError(f"duplicate {what} name")
    return inputs, outputs, cells


# cause-and-effect matrix


@dataclass(frozen=True)
class CemCell:
    negated: bool
    group: int

    def __str__(self) -> str:
        return f"{'NA' if self.negated else 'A'}{self.group}"


@dataclass(frozen=True)
class CemTable:
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    cells: Dict[Tuple[str, str], CemCell]  # blank cells are absent

    def column(self, output: str) -> List[Tuple[str, CemCell]]:
        return [(i, self.cells[(i, output)]) for i in self.inputs if (i, output) in self.cells]


def parse_cem_cell(text: str) -> Optional[CemCell]:
    if not text:
        return None
    m = _CEM_CELL.fullmatch(text)
    if not m:
        raise RequirementError(f"CEM cell {text!r} is not A<n> or NA<n>")
    return CemCell(m.group(1).upper() == "NA", int(m.group(2)))


def load_cem(text: str) -> CemTable:
    inputs, outputs, raw = _grid(text)
    cells = {k: c for k, v in raw.items() if (c := parse_cem_cell(v)) is not None}
    return CemTable(tuple(inputs), tuple(outputs), cells)


def dump_cem(t: CemTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + list(t.outputs))
    for i in t.inputs:
        w.writerow([i] + [str(t.cells[(i, o)]) if (i, o) in t.cells else "" for o in t.outputs])
    return buf.getvalue()


def compile_cem(t: CemTable) -> List[Tuple[str, A.Expr]]:
    """Per output, the OR over its groups of the AND of the group's literals."""
    out = []
    for o in t.outputs:
        col = t.column(o)
        if not col:
            raise EmptyColumn(f"output {o!r} has no cells")
        groups = sorted({c.group for _, c in col})
        if groups != list(range(1, len(groups) + 1)):
            raise NonContiguousGroups(f"groups of {o!r} are {groups}, expected 1..{len(groups)}")
        terms = []
        for g in groups:
            lits = [A.not_(A.var(i)) if c.negated else A.var(i) for i, c in col if c.group == g]
            terms.append(A.and_(*lits))
        out.append((o, A.or_(*terms)))
    return out


# input/output matrix

SET = "Set"
RESET = "Reset"
LAST_WINS = "RowOrderLastWins"
EXCLUSIVE = "MutuallyExclusiveDeclared"


@dataclass(frozen=True)
class IoMatrix:
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    cells: Dict[Tuple[str, str], str]  # Set or Reset; blank cells are absent
    priority: str = LAST_WINS


def load_io_matrix(text: str, priority: str = LAST_WINS) -> IoMatrix:
    if priority not in (LAST_WINS, EXCLUSIVE):
        raise RequirementError(f"unknown priority {priority!r}")
    inputs, outputs, raw = _grid(text)
    cells = {}
    for k, v in raw.items():
        if not v:
            continue
        norm = {"set": SET, "s": SET, "reset": RESET, "r": RESET}.get(v.lower())
        if norm is None:
            raise RequirementError(f"I/O matrix cell {v!r} is not Set or Reset")
        cells[k] = norm
    return IoMatrix(tuple(inputs), tuple(outputs), cells, priority)


@dataclass(frozen=True)
class Monitor:
    """Statements that track expected outputs, plus what to assume and assert.

    ``variables`` are (name, type, init) triples the monitor owns; the
    ``assertions`` compare them with requirement-level output names.
    """

    variables: Tuple[Tuple[str, str, object], ...]
    statements: Tuple[A.Stmt, ...]
    assumptions: Tuple[Tuple[str, A.Expr], ...]
    assertions: Tuple[Tuple[str, A.Expr], ...]
    ranges: Tuple[Tuple[str, int, int], ...] = ()


def monitor_name(output: str) -> str:
    return f"mon_{output}"


def compile_io_matrix(m: IoMatrix, initial: Optional[Dict[str, bool]] = None) -> Monitor:
    """Monitor applying the rows in order, so a later row overrides an earlier one."""
    initial = initial or {}
    stmts = []
    for i in m.inputs:
        row = [(o, m.cells[(i, o)]) for o in m.outputs if (i, o) in m.cells]
        if not row:
            raise EmptyRow(f"input {i!r} sets or resets nothing")
        body = tuple(A.Assign(A.var(monitor_name(o)), A.TRUE if v == SET else A.FALSE) for o, v in row)
        stmts.append(A.If(A.var(i), body, ()))
    assumptions = []
    if m.priority == EXCLUSIVE and len(m.inputs) > 1:
        pairs = [A.not_(A.and_(A.var(a), A.var(b)))
                 for k, a in enumerate(m.inputs) for b in m.inputs[k + 1:]]
        assumptions.append(("exclusive_inputs", A.and_(*pairs)))
    variables = tuple((monitor_name(o), A.BOOL, bool(initial.get(o, False))) for o in m.outputs)
    assertions = tuple((o, A.eq(A.var(o), A.var(monitor_name(o)))) for o in m.outputs)
    return Monitor(variables, tuple(stmts), tuple(assumptions), assertions)


def io_matrix_step(m: IoMatrix, prev: Dict[str, bool], inputs: Dict[str, bool]) -> Dict[str, bool]:
    """Reference execution of one cycle of the row-order rule."""
    out = dict(prev)
    for i in m.inputs:
        if inputs[i]:
            for o in m.outputs:
                if (i, o) in m.cells:
                    out[o] = m.cells[(i, o)] == SET
    return out
