"""Structured Text front end: lexing, parsing, type checking."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from stverif.frontend.ast import SourceUnit
from stverif.frontend.lexer import PragmaToken, Token, lex
from stverif.frontend.parser import parse, parse_expression, parse_source
from stverif.frontend.printer import format_expr, format_unit
from stverif.frontend.typecheck import (
    Pragma,
    TypedProgram,
    typecheck_and_resolve,
    typecheck_expr,
)


def load_units(paths: Iterable) -> list:
    units = []
    for p in paths:
        p = Path(p)
        units.append(parse_source(p.read_text(encoding="utf-8"), str(p)))
    return units


def load_program(paths: Iterable) -> TypedProgram:
    """Parse and type-check a set of ``.scl`` files."""
    return typecheck_and_resolve(load_units(paths))


def program_from_text(*texts: str) -> TypedProgram:
    return typecheck_and_resolve(parse_source(t, f"<text{i}>") for i, t in enumerate(texts))


__all__ = [
    "Pragma", "PragmaToken", "SourceUnit", "Token", "TypedProgram", "format_expr", "format_unit",
    "lex", "load_program", "load_units", "parse", "parse_expression", "parse_source",
    "program_from_text", "typecheck_and_resolve", "typecheck_expr",
]
