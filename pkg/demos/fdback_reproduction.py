"""Timing diagram to verified harness, on the feedback-monitoring block.

The block raises ERROR when its feedback input disagrees with the ON
command for longer than a 400 ms timer allows, and clears it on ACK. We
simulate it against the recorded timing diagram, turn the diagram into a
harness with one assertion per output cell, and check the harness for
every value of the unconstrained ACK cells.

Run with ``python3 demos/fdback_reproduction.py``.
"""

from __future__ import annotations

from stverif.bmc import VerificationCase, explore
from stverif.corpus import path
from stverif.frontend import load_program, program_from_text
from stverif.harness import compute_unwinding, generate_harness, load_timing_diagram
from stverif.report import Report, render_report
from stverif.semantics import lower_to_cfa, run_trace

T_CYCLE_MS = 200


def main() -> None:
    source = path("fdback_simplified.scl")
    program = load_program([source])
    diagram = load_timing_diagram(path("fdback_diagram.csv").read_text())
    print(f"diagram: {diagram.cycles} cycles, inputs {[s.name for s in diagram.inputs]}, "
          f"outputs {[s.name for s in diagram.outputs]}")

    # 1. simulate one concrete run, reading the unconstrained cells as FALSE
    automaton = lower_to_cfa(program, "FDBACK_simplified", T_CYCLE_MS)
    rows = [{s.name: bool(s.cells[k]) for s in diagram.inputs} for k in range(diagram.cycles)]
    trace = run_trace(automaton, rows)
    print("simulated ERROR:", [int(s["ERROR"]) for s in trace])
    print("expected ERROR: ", [int(r["ERROR"]) for r in diagram.output_rows()])

    # 2. generate the harness and pick the bound
    harness = generate_harness(diagram, program.block("FDBACK_simplified"))
    K = compute_unwinding([400], T_CYCLE_MS, diagram.cycles)
    print(f"\nharness entry {harness.driver} with {len(harness.assertions)} assertions, K = {K}\n")
    print(harness.text)

    # 3. verify it exhaustively up to K cycles
    checked = program_from_text(source.read_text(), harness.text)
    case = VerificationCase(checked, harness.driver, T_CYCLE_MS, K, name="fdback")
    ex = explore(case)
    report = Report.from_exploration("fdback", {"entry": case.entry, "unwinding (K)": K}, ex)
    print(render_report(report))


if __name__ == "__main__":
    main()
