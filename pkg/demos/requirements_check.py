"""Check programs against tabular and state-machine requirements.

A cause-and-effect matrix, an I/O matrix and a logic diagram each compile
to a monitor that runs beside the program and is compared with it at the
end of every cycle. A state-machine requirement is first checked for
determinism and completeness: the operating-mode machine without
priorities fails both checks, the version with priorities and self-loops
passes and is then verified against an implementation.

Run with ``python3 demos/requirements_check.py``.
"""

from __future__ import annotations

from stverif.bmc import verify
from stverif.corpus import REQUIREMENTS
from stverif.frontend import load_units
from stverif.requirements import (
    check_sm_completeness,
    check_sm_determinism,
    load_requirement,
    parse_mapping,
    requirement_case,
)
from stverif.requirements.state_machine import format_witness

CHECKS = [
    # requirement, implementation, block, mapping
    ("interlock.cem.csv", "cem_impl.scl", "cem_impl", None),
    ("set_reset.iom.csv", "iom_impl.scl", "iom_impl", None),
    ("gates.logic", "logic_impl.scl", "logic_impl", None),
    ("two_modes.sm", "two_modes.scl", "two_modes", "two_modes.map"),
    ("two_modes.sm", "two_modes_mutant.scl", "two_modes", "two_modes.map"),
    ("modes.sm", "op_modes.scl", "op_modes", "op_modes.map"),
]


def diagnose(name: str) -> None:
    spec = load_requirement(REQUIREMENTS / name).spec
    conflicts, gaps = check_sm_determinism(spec), check_sm_completeness(spec)
    print(f"{name}: {len(conflicts)} conflict(s), {len(gaps)} gap(s)")
    for c in conflicts:
        print(f"  state {c.state}: '{c.first}' and '{c.second}' under {format_witness(c.witness)}")
    for g in gaps:
        print(f"  state {g.state}: nothing fires under {format_witness(g.witness)}")


def main() -> None:
    diagnose("modes_ambiguous.sm")
    diagnose("modes.sm")
    print()
    for req_name, impl, fb, mapping in CHECKS:
        req = load_requirement(REQUIREMENTS / req_name)
        m = parse_mapping((REQUIREMENTS / mapping).read_text()) if mapping else None
        case = requirement_case(req, load_units([REQUIREMENTS / impl]), fb, m)
        verdicts = verify(case)
        bad = [v for v in verdicts if v.violated]
        print(f"{req_name} vs {impl}: " + ("all satisfied" if not bad else
              f"{bad[0].assertion} violated, inputs {bad[0].counterexample.input_rows()}"))


if __name__ == "__main__":
    main()
