from __future__ import annotations

import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force, random_program
from stverif.bmc import (
    SATISFIED,
    VIOLATED,
    VerificationCase,
    build_case,
    enumerate_inputs,
    explore,
    load_case_file,
    parse_case_file,
    render_counterexample,
    verify,
    verify_mutant_sensitivity,
)
from stverif.errors import BudgetExceeded, CaseFileError, NonConstantPreset, NotViolated, UnboundedDomain
from stverif.frontend import ast as A
from stverif.frontend import load_program, parse_expression, program_from_text
from stverif.harness import load_timing_diagram
from stverif.semantics import run_trace


def case_for(src: str, K: int, entry: str = "rnd", **kw) -> VerificationCase:
    return VerificationCase(program_from_text(src), entry, 100, K, **kw)


def statuses(verdicts):
    return {v.assertion: v.status for v in verdicts}


class TestCorpusCases:
    def test_fdback_all_satisfied(self, harness_program):
        vs = verify(VerificationCase(harness_program, "call_FDBACK_simplified", 200, 6))
        assert [v.status for v in vs] == [SATISFIED] * 6
        assert all(v.bound == 6 and v.counterexample is None for v in vs)

    def test_module_2_counterexample(self, modules_program):
        case = VerificationCase(modules_program, "module_2", 100, 1,
                                assertions=(("r3", parse_expression("v_2 = TRUE")),))
        (v,) = verify(case)
        assert v.status == VIOLATED
        (state,) = v.counterexample.states
        assert dict(state.inputs) == {"v_1": True} and state["v_2"] is False

    def test_module_2_with_assumption(self, modules_program):
        case = VerificationCase(modules_program, "module_2", 100, 1,
                                assumptions=(("r4", parse_expression("v_1 = FALSE")),),
                                assertions=(("r3", parse_expression("v_2 = TRUE")),))
        assert [v.status for v in verify(case)] == [SATISFIED]

    def test_no_assertions(self, fdback_program):
        with pytest.raises(ValueError):
            verify(VerificationCase(fdback_program, "FDBACK_simplified", 200, 2))

    @pytest.mark.parametrize("mutant, name, cycle", [
        ("fdback_no_ack.scl", "assertion6", 6),
        ("fdback_pt_halved.scl", "assertion3", 3),
    ])
    def test_mutants(self, corpus, harness_program, mutant, name, cycle):
        case = VerificationCase(harness_program, "call_FDBACK_simplified", 200, 6)
        mutated = load_program([corpus / mutant, corpus / "call_fdback_simplified.scl"])
        vs = {v.assertion: v for v in verify_mutant_sensitivity(case, mutated)}
        assert vs[name].status == VIOLATED
        assert vs[name].counterexample.violation_cycle == cycle
        replay = run_trace(replace(case, program=mutated).automaton(), vs[name].counterexample.input_rows())
        assert name in replay[-1].violations

    def test_identity_mutation(self, harness_program):
        case = VerificationCase(harness_program, "call_FDBACK_simplified", 200, 6)
        assert verify_mutant_sensitivity(case, harness_program) == verify(case)


class TestDomains:
    def test_int_input_needs_range(self):
        src = "FUNCTION_BLOCK rnd VAR_INPUT n : INT; END_VAR\n//#ASSERT(n < 300) : a;\nEND_FUNCTION_BLOCK"
        with pytest.raises(UnboundedDomain):
            verify(case_for(src, 1))

    def test_ranged_int_input(self):
        src = ("FUNCTION_BLOCK rnd VAR_INPUT n : INT; //#RANGE(n, 0, 3)\nEND_VAR\n"
               "//#ASSERT(n < 3) : a;\nEND_FUNCTION_BLOCK")
        (v,) = verify(case_for(src, 1))
        assert v.status == VIOLATED and dict(v.counterexample.states[0].inputs) == {"n": 3}

    def test_time_input_unbounded(self):
        src = "FUNCTION_BLOCK rnd VAR_INPUT t : TIME; END_VAR\n//#ASSERT(t >= T#0ms) : a;\nEND_FUNCTION_BLOCK"
        with pytest.raises(UnboundedDomain):
            verify(case_for(src, 1))

    def test_budget_on_inputs(self):
        ins = "".join(f"i{k} : BOOL; " for k in range(12))
        src = f"FUNCTION_BLOCK rnd VAR_INPUT {ins}END_VAR\n//#ASSERT(i0) : a;\nEND_FUNCTION_BLOCK"
        with pytest.raises(BudgetExceeded):
            verify(case_for(src, 1), budget=1000)

    def test_budget_on_states(self):
        src = ("FUNCTION_BLOCK rnd VAR_INPUT up : BOOL; END_VAR VAR n : INT; END_VAR\n"
               "IF up THEN n := n + 1; END_IF;\n//#ASSERT(n < 250) : a;\nEND_FUNCTION_BLOCK")
        with pytest.raises(BudgetExceeded):
            verify(case_for(src, 40), budget=10)

    def test_enumeration_order(self, fdback_program):
        from stverif.semantics import lower_to_cfa

        rows = enumerate_inputs(lower_to_cfa(fdback_program, "FDBACK_simplified", 200))
        assert rows[0] == {"ON": False, "FEEDBACK": False, "ACK": False}
        assert rows[1] == {"ON": False, "FEEDBACK": False, "ACK": True}
        assert len(rows) == 8


class TestSearch:
    SRC = """FUNCTION_BLOCK rnd
VAR_INPUT b : BOOL; a : BOOL; END_VAR
//#ASSERT(NOT (a OR b)) : none;
END_FUNCTION_BLOCK
"""

    def test_first_counterexample_by_declaration_order(self):
        (v,) = verify(case_for(self.SRC, 1))
        assert dict(v.counterexample.states[0].inputs) == {"b": False, "a": True}

    def test_seed_order_by_name(self):
        (v,) = verify(case_for(self.SRC, 1), order="name")
        assert dict(v.counterexample.states[0].inputs) == {"a": False, "b": True}

    def test_shortest_counterexample(self):
        src = ("FUNCTION_BLOCK rnd VAR_INPUT x : BOOL; END_VAR VAR n : INT; //#RANGE(n, 0, 7)\nEND_VAR\n"
               "IF x THEN n := n + 1; END_IF;\n//#ASSERT(n < 3) : small;\nEND_FUNCTION_BLOCK")
        (v,) = verify(case_for(src, 6))
        assert v.counterexample.violation_cycle == 3
        assert [dict(s.inputs) for s in v.counterexample.states] == [{"x": True}] * 3

    def test_bound_too_small(self):
        src = ("FUNCTION_BLOCK rnd VAR_INPUT x : BOOL; END_VAR VAR n : INT; //#RANGE(n, 0, 7)\nEND_VAR\n"
               "IF x THEN n := n + 1; END_IF;\n//#ASSERT(n < 3) : small;\nEND_FUNCTION_BLOCK")
        (v,) = verify(case_for(src, 2))
        assert v.status == SATISFIED and v.bound == 2

    def test_vacuity(self):
        src = "FUNCTION_BLOCK rnd VAR_INPUT x : BOOL; END_VAR\n//#ASSERT(x) : a;\nEND_FUNCTION_BLOCK"
        case = case_for(src, 3, assumptions=(("never", A.FALSE),))
        ex = explore(case)
        assert ex.vacuous_from == 1
        assert [(v.status, v.vacuous_from) for v in ex.verdicts] == [(SATISFIED, 1)]

    def test_assume_at_later_cycle_vacuity(self):
        src = ("FUNCTION_BLOCK rnd VAR_INPUT x : BOOL; END_VAR VAR c : INT; END_VAR\n"
               "c := c + 1;\n//#ASSUME(c < 3) : early;\n//#ASSERT(x OR NOT x) : a;\nEND_FUNCTION_BLOCK")
        ex = explore(case_for(src, 5))
        assert ex.vacuous_from == 3

    def test_fixpoint_is_not_vacuous(self, modules_program):
        case = VerificationCase(modules_program, "module_1", 100, 10,
                                assertions=(("r4", parse_expression("v_1 = FALSE")),))
        ex = explore(case)
        assert ex.fixpoint and ex.vacuous_from is None and ex.cycles_explored < 10

    def test_violation_in_assume_failing_cycle_ignored(self):
        src = ("FUNCTION_BLOCK rnd VAR_INPUT x : BOOL; END_VAR\n"
               "//#ASSERT(NOT x) : a;\n//#ASSUME(NOT x) : env;\nEND_FUNCTION_BLOCK")
        assert [v.status for v in verify(case_for(src, 2))] == [SATISFIED]


class TestRender:
    def test_module_2_csv(self, modules_program):
        case = VerificationCase(modules_program, "module_2", 100, 1,
                                assertions=(("r3", parse_expression("v_2 = TRUE")),))
        (v,) = verify(case)
        assert render_counterexample(v) == "signal,dir,1\nv_1,in,1\nv_2,out,0\n"

    def test_not_violated(self, harness_program):
        v = verify(VerificationCase(harness_program, "call_FDBACK_simplified", 200, 6))[0]
        with pytest.raises(NotViolated):
            render_counterexample(v)

    def test_round_trip(self, corpus, harness_program):
        case = VerificationCase(harness_program, "call_FDBACK_simplified", 200, 6)
        mutated = load_program([corpus / "fdback_no_ack.scl", corpus / "call_fdback_simplified.scl"])
        (v,) = [v for v in verify_mutant_sensitivity(case, mutated) if v.violated]
        d = load_timing_diagram(render_counterexample(v))
        assert d.cycles == 6
        mcase = replace(case, program=mutated)
        trace = run_trace(mcase.automaton(), d.input_rows())
        assert v.assertion in trace[-1].violations


class TestCaseFiles:
    def test_fdback_case(self, corpus):
        cf = load_case_file(corpus / "fdback.case")
        assert cf.entry == "call_FDBACK_simplified" and cf.t_cycle_ms == 200 and cf.unwind is None
        case = build_case(cf)
        assert case.K == 6

    def test_defaults_and_named_asserts(self):
        cf = parse_case_file("source a.scl\nentry f\nassume x\nassert ok: y = TRUE\nassert z\n", "/tmp/c.case")
        assert cf.t_cycle_ms == 100
        assert cf.assumes == [("assume1", "x")]
        assert cf.asserts == [("ok", "y = TRUE"), ("assert2", "z")]

    @pytest.mark.parametrize("text", [
        "source a.scl\n",
        "entry f\n",
        "source a.scl\nentry f\nunwind many\n",
        "source a.scl\nentry f\nbogus 1\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(CaseFileError):
            parse_case_file(text)

    def test_auto_unwind_needs_constant_preset(self, tmp_path):
        (tmp_path / "p.scl").write_text(
            "FUNCTION_BLOCK f VAR_INPUT x : BOOL; p : TIME; END_VAR VAR t : TON; END_VAR\n"
            "t(IN := x, PT := p);\n//#ASSERT(TRUE) : a;\nEND_FUNCTION_BLOCK\n")
        cf = parse_case_file("source p.scl\nentry f\nunwind auto\n", tmp_path / "x.case")
        with pytest.raises(NonConstantPreset):
            build_case(cf)


def _random_case(seed: int):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    K = max(1, min(5, 12 // n))
    timer = rng.random() < 0.5
    src = random_program(rng, n, timer)
    return VerificationCase(program_from_text(src), "rnd", 100, K), src


class TestOracle:
    @pytest.mark.parametrize("seed", range(20))
    def test_random_programs(self, seed):
        case, src = _random_case(1000 + seed)
        verdicts = verify(case)
        expected = brute_force(case.automaton(), case.K)
        for v in verdicts:
            first = expected[v.assertion]
            assert v.violated == (first is not None), src
            if v.violated:
                assert v.counterexample.violation_cycle == first

    @pytest.mark.parametrize("seed", range(10))
    def test_counterexamples_replay(self, seed):
        case, _ = _random_case(2000 + seed)
        automaton = case.automaton()
        for v in verify(case):
            if v.violated:
                trace = run_trace(automaton, v.counterexample.input_rows())
                assert v.assertion in trace[-1].violations
                assert not any(s.assume_violations for s in trace)
                assert all(v.assertion not in s.violations for s in trace[:-1])

    @pytest.mark.parametrize("seed", range(10))
    def test_monotone_in_bound(self, seed):
        case, _ = _random_case(3000 + seed)
        small = statuses(verify(replace(case, K=1)))
        large = statuses(verify(case))
        for name, status in small.items():
            if status == VIOLATED:
                assert large[name] == VIOLATED


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["i0", "NOT i0", "i0 AND s0", "s1 OR i0"]))
def test_assumptions_never_add_violations(seed, assumption):
    case, _ = _random_case(seed)
    base = statuses(verify(case))
    more = statuses(verify(replace(case, assumptions=(("extra", parse_expression(assumption)),))))
    for name, status in more.items():
        if status == VIOLATED:
            assert base[name] == VIOLATED


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_assume_false_is_vacuous(seed):
    case, _ = _random_case(seed)
    ex = explore(replace(case, assumptions=(("never", A.FALSE),)))
    assert all(v.status == SATISFIED for v in ex.verdicts)
    assert ex.vacuous_from == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.data())
def test_simulator_matches_explorer_path(seed, data):
    """A single input sequence explored with a one-value domain per cycle
    gives the same state as run_trace."""
    case, _ = _random_case(seed)
    automaton = case.automaton()
    rows = [{n: data.draw(st.booleans()) for n in automaton.cycle_vars} for _ in range(case.K)]
    trace = run_trace(automaton, rows)
    vals, timers = automaton.initial_state()
    for row, state in zip(rows, trace):
        out = automaton.step(vals, timers, row)
        vals, timers = out.valuation, out.timers
        assert dict(vals) == dict(state.valuation) and out.violations == state.violations
