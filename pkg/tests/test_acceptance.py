"""End-to-end acceptance criteria, one test each, with runtime limits.

Every test prints a single ``PASS``/``FAIL`` line, visible even without ``-s``.
"""

from __future__ import annotations

import itertools
import random
import time
from contextlib import contextmanager
from dataclasses import replace

import pytest

from oracles import brute_force, random_program
from stverif.bmc import SATISFIED, VIOLATED, VerificationCase, build_case, load_case_file, verify
from stverif.cli import ERROR, OK, VIOLATED as EXIT_VIOLATED, main
from stverif.frontend import load_program, parse_expression, program_from_text
from stverif.harness import compute_unwinding
from stverif.requirements import (
    check_sm_completeness,
    check_sm_determinism,
    compile_cem,
    load_cem,
    parse_state_machine,
)
from stverif.requirements.tables import CemCell, CemTable
from stverif.semantics import run_trace
from stverif.semantics.expr import evaluate


@pytest.fixture
def criterion(capsys):
    """Collect failures for one criterion, then print its verdict line and
    fail the test if anything went wrong or it ran too long."""

    @contextmanager
    def _criterion(number: int, title: str, limit_s: float):
        problems: list = []
        t0 = time.perf_counter()
        yield problems
        elapsed = time.perf_counter() - t0
        if elapsed >= limit_s:
            problems.append(f"took {elapsed:.2f} s, limit {limit_s} s")
        status = "PASS" if not problems else "FAIL"
        with capsys.disabled():
            detail = f" ({'; '.join(map(str, problems))})" if problems else ""
            print(f"\n[{status}] criterion {number}: {title} in {elapsed:.2f} s{detail}")
        assert not problems

    return _criterion


def test_1_fdback_reproduction(criterion, corpus):
    with criterion(1, "FDBACK harness, all 6 assertions satisfied", 5.0) as problems:
        cf = load_case_file(corpus / "fdback.case")
        case = build_case(cf)
        if (case.t_cycle, case.K) != (200, 6):
            problems.append(f"t_cycle={case.t_cycle}, K={case.K}")
        vs = verify(case)
        if [(v.assertion, v.status) for v in vs] != [(f"assertion{k}", SATISFIED) for k in range(1, 7)]:
            problems.append([(v.assertion, v.status) for v in vs])


@pytest.mark.parametrize("mutant, target", [
    ("fdback_no_ack.scl", "assertion6"),
    ("fdback_pt_halved.scl", "assertion3"),
])
def test_2_mutation_sensitivity(criterion, corpus, mutant, target):
    with criterion(2, f"mutant {mutant} flips {target}", 5.0) as problems:
        program = load_program([corpus / mutant, corpus / "call_fdback_simplified.scl"])
        case = VerificationCase(program, "call_FDBACK_simplified", 200, 6)
        vs = {v.assertion: v for v in verify(case)}
        flipped = sorted(n for n, v in vs.items() if v.violated)
        if target not in flipped:
            problems.append(f"violated: {flipped}")
        else:
            cex = vs[target].counterexample
            replay = run_trace(case.automaton(), cex.input_rows())
            if target not in replay[-1].violations:
                problems.append("counterexample does not replay")


def test_3_assume_guarantee(criterion, modules_program):
    with criterion(3, "module_2 counterexample, then satisfied under assumption", 1.0) as problems:
        assertion = (("r3", parse_expression("v_2 = TRUE")),)
        case = VerificationCase(modules_program, "module_2", 100, 1, assertions=assertion)
        (v,) = verify(case)
        if v.status != VIOLATED:
            problems.append(f"without assumption: {v.status}")
        else:
            (state,) = v.counterexample.states
            got = {"v_1": state.inputs["v_1"], "v_2": state["v_2"]}
            if got != {"v_1": True, "v_2": False}:
                problems.append(f"counterexample {got}")
        assumed = replace(case, assumptions=(("r4", parse_expression("v_1 = FALSE")),))
        (v,) = verify(assumed)
        if v.status != SATISFIED:
            problems.append(f"with assumption: {v.status}")


def test_4_requirement_diagnostics(criterion, req_dir):
    with criterion(4, "state machine conflict and gap found, fixed machine clean", 1.0) as problems:
        ambiguous = parse_state_machine((req_dir / "modes_ambiguous.sm").read_text())
        conflicts = {c.state for c in check_sm_determinism(ambiguous)}
        gaps = {g.state for g in check_sm_completeness(ambiguous)}
        if "Manual" not in conflicts:
            problems.append(f"conflicts at {sorted(conflicts)}")
        if "Forced" not in gaps:
            problems.append(f"gaps at {sorted(gaps)}")
        prioritized = parse_state_machine((req_dir / "modes.sm").read_text())
        if check_sm_determinism(prioritized) or check_sm_completeness(prioritized):
            problems.append("fixed machine still reports problems")


def _cell_oracle(t: CemTable, output: str, env) -> bool:
    groups: dict = {}
    for (i, o), cell in t.cells.items():
        if o == output:
            groups.setdefault(cell.group, []).append(env[i] != cell.negated)
    return any(all(v) for v in groups.values())


def _random_cem(rng: random.Random, inputs) -> CemTable:
    cells = {}
    for o in ("Out_1", "Out_2"):
        n_groups = rng.randint(1, 3)
        chosen = rng.sample(inputs, rng.randint(n_groups, len(inputs)))
        for k, i in enumerate(chosen):
            cells[(i, o)] = CemCell(rng.random() < 0.4, k + 1 if k < n_groups else rng.randint(1, n_groups))
    return CemTable(tuple(inputs), ("Out_1", "Out_2"), cells)


def test_5_cem_correctness(criterion, req_dir):
    with criterion(5, "cause-and-effect matrix formulas and 100 random matrices", 5.0) as problems:
        names = ("In_1", "In_2", "In_3", "In_4")
        valuations = [dict(zip(names, c)) for c in itertools.product((False, True), repeat=4)]
        got = dict(compile_cem(load_cem((req_dir / "interlock.cem.csv").read_text())))
        for env in valuations:
            a, b, c, d = (env[n] for n in names)
            if evaluate(got["Out_1"], env) != ((a and b) or (not c and not d)):
                problems.append(f"Out_1 at {env}")
            if evaluate(got["Out_2"], env) != (a and b and c and d):
                problems.append(f"Out_2 at {env}")
        rng = random.Random(61131)
        mismatches = 0
        for _ in range(100):
            t = _random_cem(rng, names)
            for o, e in compile_cem(t):
                mismatches += sum(evaluate(e, env) != _cell_oracle(t, o, env) for env in valuations)
        if mismatches:
            problems.append(f"{mismatches} random mismatches")


def test_6_unwinding_rule(criterion, corpus):
    with criterion(6, "unwinding bound", 1.0) as problems:
        if compute_unwinding([400], 200, 6) != 6:
            problems.append("worked case")
        if compute_unwinding([400], 100, 2) != 5:
            problems.append("formula branch")
        if build_case(load_case_file(corpus / "fdback.case")).K != 6:
            problems.append("auto unwinding of the FDBACK case")


def test_7_oracle_equivalence(criterion):
    with criterion(7, "50 random programs agree with brute force", 60.0) as problems:
        rng = random.Random(1131)
        for k in range(50):
            n = rng.randint(1, 6)
            K = max(1, min(5, 12 // n))
            src = random_program(rng, n, rng.random() < 0.5)
            case = VerificationCase(program_from_text(src), "rnd", 100, K)
            expected = brute_force(case.automaton(), K)
            for v in verify(case):
                shortest = v.counterexample.violation_cycle if v.violated else None
                if shortest != expected[v.assertion]:
                    problems.append(f"program {k} {v.assertion}: {shortest} vs {expected[v.assertion]}")


def test_8_exit_codes(criterion, corpus, tmp_path, capsys):
    with criterion(8, "command line exit codes on the corpus", 10.0) as problems:
        for case, want in (("fdback.case", OK), ("module2.case", EXIT_VIOLATED), ("malformed.case", ERROR)):
            got = main(["verify", str(corpus / case), "--out", str(tmp_path / case)])
            capsys.readouterr()
            if got != want:
                problems.append(f"{case}: exit {got}, expected {want}")
