"""Requirement formalisms compiled to monitors and assertions."""

from __future__ import annotations

from stverif.requirements.checker import (
    CheckerSource,
    Requirement,
    RequirementMapping,
    build_checker,
    compile_requirement,
    load_requirement,
    parse_mapping,
    requirement_case,
)
from stverif.requirements.logic import (
    Gate,
    LogicDiagram,
    compile_logic_diagram,
    evaluate_tree,
    parse_gate_tree,
    parse_logic_diagrams,
)
from stverif.requirements.state_machine import (
    Conflict,
    Gap,
    StateMachineSpec,
    check_sm_completeness,
    check_sm_determinism,
    compile_state_machine,
    parse_state_machine,
    sm_step,
)
from stverif.requirements.tables import (
    EXCLUSIVE,
    LAST_WINS,
    RESET,
    SET,
    CemCell,
    CemTable,
    IoMatrix,
    Monitor,
    compile_cem,
    compile_io_matrix,
    io_matrix_step,
    load_cem,
    load_io_matrix,
)

__all__ = [
    "EXCLUSIVE", "LAST_WINS", "RESET", "SET", "CemCell", "CemTable", "CheckerSource", "Conflict",
    "Gap", "Gate", "IoMatrix", "LogicDiagram", "Monitor", "Requirement", "RequirementMapping",
    "StateMachineSpec", "build_checker", "check_sm_completeness", "check_sm_determinism",
    "compile_cem", "compile_io_matrix", "compile_logic_diagram", "compile_requirement",
    "compile_state_machine", "evaluate_tree", "io_matrix_step", "load_cem", "load_io_matrix",
    "load_requirement", "parse_gate_tree", "parse_logic_diagrams", "parse_mapping",
    "parse_state_machine", "requirement_case", "sm_step",
]
