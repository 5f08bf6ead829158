"""Show that the FDBACK harness catches small faults in the block.

Two mutants of the block are checked against the unchanged harness: one
never acknowledges the error, the other fires its timer after 200 ms
instead of 400 ms. Each flips exactly one assertion, and its counterexample
replays on the mutant.

Run with ``python3 demos/mutation_sensitivity.py``.
"""

from __future__ import annotations

from dataclasses import replace

from stverif.bmc import VerificationCase, render_counterexample, verify, verify_mutant_sensitivity
from stverif.corpus import path
from stverif.frontend import load_program
from stverif.semantics import run_trace

MUTANTS = {
    "fdback_no_ack.scl": "the ACK branch is gone",
    "fdback_pt_halved.scl": "the timer preset is 200 ms",
}


def main() -> None:
    harness = path("call_fdback_simplified.scl")
    original = load_program([path("fdback_simplified.scl"), harness])
    case = VerificationCase(original, "call_FDBACK_simplified", 200, 6)
    print("original:", ", ".join(f"{v.assertion}={v.status}" for v in verify(case)))

    for name, what in MUTANTS.items():
        mutated = load_program([path(name), harness])
        verdicts = verify_mutant_sensitivity(case, mutated)
        (bad,) = [v for v in verdicts if v.violated]
        print(f"\n{name} ({what}): {bad.assertion} violated at cycle {bad.counterexample.violation_cycle}")
        print(render_counterexample(bad), end="")
        replay = run_trace(replace(case, program=mutated).automaton(), bad.counterexample.input_rows())
        print("replay hits:", replay[-1].violations)


if __name__ == "__main__":
    main()
