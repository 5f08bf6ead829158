"""Compositional reasoning with assumptions.

module_2 copies its input v_1 into v_2 negated. Verified alone, the
guarantee ``v_2 = TRUE`` fails as soon as v_1 is TRUE. Its caller,
module_1, always drives v_1 with FALSE, and that fact can be assumed
when module_2 is checked. An assumption that excludes every execution
makes the result vacuous, and the report says so.

Run with ``python3 demos/assume_guarantee.py``.
"""

from __future__ import annotations

from stverif.bmc import VerificationCase, explore, render_counterexample
from stverif.corpus import path
from stverif.frontend import load_program, parse_expression


def run(title: str, case: VerificationCase) -> None:
    ex = explore(case)
    (v,) = ex.verdicts
    print(f"{title}: {v.status}", f"(vacuous from cycle {ex.vacuous_from})" if ex.vacuous_from else "")
    if v.violated:
        print(render_counterexample(v), end="")


def main() -> None:
    program = load_program([path("modules.scl")])
    guarantee = (("r3", parse_expression("v_2 = TRUE")),)

    run("module_2 alone", VerificationCase(program, "module_2", 100, 1, assertions=guarantee))
    run("module_1 keeps v_1 FALSE",
        VerificationCase(program, "module_1", 100, 3, assertions=(("r4", parse_expression("v_1 = FALSE")),)))
    run("module_2 assuming v_1 = FALSE",
        VerificationCase(program, "module_2", 100, 1,
                         assumptions=(("r4", parse_expression("v_1 = FALSE")),), assertions=guarantee))
    run("module_2 assuming FALSE",
        VerificationCase(program, "module_2", 100, 1,
                         assumptions=(("never", parse_expression("FALSE")),), assertions=guarantee))


if __name__ == "__main__":
    main()
