"""Render syntax trees back to ST text that reparses to the same tree."""

from __future__ import annotations

import re

from stverif.frontend import ast as A
from stverif.frontend.lexer import KEYWORDS

_PREC = {"-->": 1, "OR": 2, "XOR": 3, "AND": 4, "=": 5, "<>": 5,
         "<": 6, "<=": 6, ">": 6, ">=": 6, "+": 7, "-": 7, "*": 8, "/": 8}
_UNARY_PREC = 9
_BARE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_SECTION_KW = {"input": "VAR_INPUT", "var": "VAR", "output": "VAR_OUTPUT"}


def ident(name: str) -> str:
    if _BARE.fullmatch(name) and name.upper() not in KEYWORDS:
        return name
    return f'"{name}"'


def format_name(n: A.Name) -> str:
    return ".".join(ident(p) for p in n.parts)


def format_expr(e: A.Expr, parent: int = 0) -> str:
    if isinstance(e, A.Literal):
        if e.type == A.BOOL:
            return "TRUE" if e.value else "FALSE"
        if e.type == A.TIME:
            return f"T#{e.value}ms" if e.value >= 0 else f"-T#{-e.value}ms"
        return str(e.value)
    if isinstance(e, A.Name):
        return format_name(e)
    if isinstance(e, A.Unary):
        inner = format_expr(e.operand, _UNARY_PREC)
        text = f"NOT {inner}" if e.op == "NOT" else f"-{inner}"
        return f"({text})" if parent > _UNARY_PREC else text
    prec = _PREC[e.op]
    right_assoc = e.op == "-->"
    # a comparison nested in a comparison reads better with parentheses
    lp = prec + 1 if right_assoc or prec in (5, 6) else prec
    rp = prec if right_assoc else prec + 1
    text = f"{format_expr(e.left, lp)} {e.op} {format_expr(e.right, rp)}"
    return f"({text})" if prec < parent else text


def format_stmts(stmts, indent: int = 1) -> list:
    pad = "    " * indent
    out = []
    for s in stmts:
        if isinstance(s, A.Assign):
            out.append(f"{pad}{format_name(s.target)} := {format_expr(s.value)};")
        elif isinstance(s, A.Call):
            args = ", ".join(f"{a} := {format_expr(v)}" for a, v in s.args)
            out.append(f"{pad}{format_name(s.callee)}({args});")
        elif isinstance(s, A.PragmaStmt):
            out.append(f"{pad}//#{s.kind.upper()}({format_expr(s.expr)}) : {s.name};")
        elif isinstance(s, A.If):
            out.extend(_format_if(s, indent))
        else:  # pragma: no cover
            raise TypeError(s)
    return out


def _format_if(s: A.If, indent: int) -> list:
    pad = "    " * indent
    out = [f"{pad}IF {format_expr(s.cond)} THEN"]
    out += format_stmts(s.body, indent + 1)
    while len(s.orelse) == 1 and isinstance(s.orelse[0], A.If):
        s = s.orelse[0]
        out.append(f"{pad}ELSIF {format_expr(s.cond)} THEN")
        out += format_stmts(s.body, indent + 1)
    if s.orelse:
        out.append(f"{pad}ELSE")
        out += format_stmts(s.orelse, indent + 1)
    out.append(f"{pad}END_IF;")
    return out


def format_block(fb: A.FunctionBlockDecl) -> str:
    lines = [f"FUNCTION_BLOCK {ident(fb.name)}"]
    # consecutive runs keep declaration order intact
    runs = [[d.section, [d]] for d in fb.vars[:1]]
    for d in fb.vars[1:]:
        if d.section == runs[-1][0]:
            runs[-1][1].append(d)
        else:
            runs.append([d.section, [d]])
    # all RANGE pragmas go into one trailing VAR section
    if fb.ranges:
        runs.append(["var", []])
    for section, decls in runs:
        lines.append(f"    {_SECTION_KW[section]}")
        for d in decls:
            init = f" := {format_expr(d.init)}" if d.init is not None else ""
            lines.append(f"        {ident(d.name)} : {d.type_name}{init};")
        lines.append("    END_VAR")
    if fb.ranges:
        lines.pop()
        for r in fb.ranges:
            lines.append(f"        //#RANGE({r.var}, {r.lo}, {r.hi})")
        lines.append("    END_VAR")
    lines.append("BEGIN")
    lines += format_stmts(fb.body)
    lines.append("END_FUNCTION_BLOCK")
    return "\n".join(lines)


def format_data_block(db: A.DataBlockDecl) -> str:
    lines = [f"DATA_BLOCK {ident(db.name)} {ident(db.fb_type)}", "BEGIN"]
    lines += format_stmts(db.inits)
    lines.append("END_DATA_BLOCK")
    return "\n".join(lines)


def format_unit(unit: A.SourceUnit) -> str:
    parts = [format_data_block(d) for d in unit.data_blocks]
    parts += [format_block(b) for b in unit.blocks]
    return "\n\n".join(parts) + "\n"
