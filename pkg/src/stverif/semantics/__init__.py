"""Scan-cycle semantics: automaton lowering, built-in blocks, simulation."""

from stverif.semantics.builtins import BuiltinCTUD, BuiltinTON, ctud_step, ton_step
from stverif.semantics.cfa import CycleAutomaton, Location, Transition, VarInfo, lower_to_cfa
from stverif.semantics.expr import compile_expr, evaluate
from stverif.semantics.simulate import CycleState, inputs_from_csv, run_trace, trace_to_csv

__all__ = [
    "BuiltinCTUD", "BuiltinTON", "CycleAutomaton", "CycleState", "Location", "Transition", "VarInfo",
    "compile_expr", "ctud_step", "evaluate", "inputs_from_csv", "lower_to_cfa", "run_trace",
    "ton_step", "trace_to_csv",
]
