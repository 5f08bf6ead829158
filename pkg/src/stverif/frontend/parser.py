"""Recursive-descent parser producing :mod:`stverif.frontend.ast` trees."""

from __future__ import annotations

from typing import List, Optional, Sequence

from stverif.errors import STSyntaxError
from stverif.frontend import ast as A
from stverif.frontend.lexer import PragmaToken, Token, lex

_SECTIONS = {"VAR_INPUT": "input", "VAR": "var", "VAR_OUTPUT": "output"}
_STMT_END = ("END_FUNCTION_BLOCK", "END_IF", "ELSIF", "ELSE", "EOF")

# binary operator levels, loosest first (IMPLIES handled separately: right-assoc)
_LEVELS = [
    {"OR": "OR"},
    {"XOR": "XOR"},
    {"AND": "AND"},
    {"EQ": "=", "NE": "<>"},
    {"LT": "<", "LE": "<=", "GT": ">", "GE": ">="},
    {"PLUS": "+", "MINUS": "-"},
    {"STAR": "*", "SLASH": "/"},
]


def parse(tokens: Sequence[Token], path: str = "<string>", text: str = "") -> A.SourceUnit:
    """Parse a token list (from :func:`lex`) into a SourceUnit."""
    return _Parser(tokens, path).unit(text)


def parse_source(text: str, path: str = "<string>") -> A.SourceUnit:
    return parse(lex(text, path), path, text)


def parse_expression(text: str, path: str = "<string>", line: int = 1, col: int = 1) -> A.Expr:
    p = _Parser(lex(text, path, line, col), path)
    e = p.expr()
    p.expect("EOF")
    return e


class _Parser:
    def __init__(self, tokens: Sequence[Token], path: str):
        self.toks = list(tokens)
        last = self.toks[-1] if self.toks else None
        eof_pos = (last.line, last.col + 1) if last else (1, 1)
        self.toks.append(Token("EOF", None, *eof_pos))
        self.i = 0
        self.path = path

    # helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, *kinds: str) -> bool:
        return self.tok.kind in kinds

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, kind: str) -> Optional[Token]:
        return self.take() if self.tok.kind == kind else None

    def expect(self, *kinds: str) -> Token:
        if self.tok.kind in kinds:
            return self.take()
        raise self.error(kinds)

    def error(self, expected, message=None) -> STSyntaxError:
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.value if t.kind != "PRAGMA" else "pragma")
        msg = message or f"expected {' or '.join(expected)}, found {found}"
        return STSyntaxError(msg, t.line, t.col, self.path, expected=expected)

    def pos(self) -> A.Pos:
        return (self.tok.line, self.tok.col)

    # declarations

    def unit(self, text: str) -> A.SourceUnit:
        blocks, dbs = [], []
        while not self.at("EOF"):
            if self.at("FUNCTION_BLOCK"):
                blocks.append(self.function_block())
            elif self.at("DATA_BLOCK"):
                dbs.append(self.data_block())
            else:
                raise self.error(["FUNCTION_BLOCK", "DATA_BLOCK"])
        if not blocks and not dbs:
            raise self.error(["FUNCTION_BLOCK", "DATA_BLOCK"], "source contains no blocks")
        kind = "Mixed" if blocks and dbs else ("FunctionBlock" if blocks else "DataBlock")
        return A.SourceUnit(self.path, text, kind, tuple(blocks), tuple(dbs))

    def function_block(self) -> A.FunctionBlockDecl:
        pos = self.pos()
        self.expect("FUNCTION_BLOCK")
        name = self.expect("IDENT").value
        decls: List[A.VarDecl] = []
        ranges: List[A.RangePragma] = []
        while self.at(*_SECTIONS):
            section = _SECTIONS[self.take().kind]
            while not self.accept("END_VAR"):
                if self.at("PRAGMA"):
                    ranges.append(self.range_pragma())
                else:
                    decls.append(self.var_decl(section))
        self.accept("BEGIN")
        body = self.statements()
        self.expect("END_FUNCTION_BLOCK")
        return A.FunctionBlockDecl(name, tuple(decls), body, tuple(ranges), pos, self.path)

    def var_decl(self, section: str) -> A.VarDecl:
        pos = self.pos()
        name = self.expect("IDENT").value
        self.expect("COLON")
        type_name = self.expect("IDENT", "BOOL", "INT", "TIME").value
        init = self.expr() if self.accept("ASSIGN") else None
        self.expect("SEMI")
        return A.VarDecl(name, type_name, section, init, pos)

    def range_pragma(self) -> A.RangePragma:
        t = self.take()
        p: PragmaToken = t.value
        if p.kind != "Range":
            raise STSyntaxError(f"{p.kind.upper()} pragma not allowed in a declaration section",
                                t.line, t.col, self.path, expected=["RANGE"])
        sub = _Parser(lex(p.text, self.path, p.line, p.col), self.path)
        var = sub.expect("IDENT").value
        sub.expect("COMMA")
        lo = sub.signed_int()
        sub.expect("COMMA")
        hi = sub.signed_int()
        sub.expect("EOF")
        return A.RangePragma(var, lo, hi, (t.line, t.col))

    def signed_int(self) -> int:
        neg = self.accept("MINUS") is not None
        v = self.expect("INT_LIT").value
        return -v if neg else v

    def data_block(self) -> A.DataBlockDecl:
        pos = self.pos()
        self.expect("DATA_BLOCK")
        name = self.expect("IDENT").value
        fb_type = self.expect("IDENT").value
        self.expect("BEGIN")
        inits = []
        while not self.accept("END_DATA_BLOCK"):
            if self.accept("SEMI"):
                continue
            spos = self.pos()
            target = self.designator()
            self.expect("ASSIGN")
            value = self.expr()
            self.expect("SEMI")
            inits.append(A.Assign(target, value, spos))
        return A.DataBlockDecl(name, fb_type, tuple(inits), pos, self.path)

    # statements

    def statements(self) -> tuple:
        out = []
        while not self.at(*_STMT_END):
            s = self.statement()
            if s is not None:
                out.append(s)
        return tuple(out)

    def statement(self) -> Optional[A.Stmt]:
        pos = self.pos()
        if self.accept("SEMI"):
            return None
        if self.at("IF"):
            return self.if_stmt()
        if self.at("PRAGMA"):
            t = self.take()
            p: PragmaToken = t.value
            if p.kind == "Range":
                raise STSyntaxError("RANGE pragma only allowed in a declaration section",
                                    t.line, t.col, self.path, expected=["ASSERT", "ASSUME"])
            sub = _Parser(lex(p.text, self.path, p.line, p.col), self.path)
            e = sub.expr()
            sub.expect("EOF")
            name = p.name or f"{p.kind.lower()}_{t.line}"
            return A.PragmaStmt(p.kind, name, e, pos)
        if self.at("IDENT"):
            target = self.designator()
            if self.accept("ASSIGN"):
                value = self.expr()
                self.expect("SEMI")
                return A.Assign(target, value, pos)
            if self.accept("LPAREN"):
                args = []
                if not self.at("RPAREN"):
                    while True:
                        arg = self.expect("IDENT").value
                        self.expect("ASSIGN")
                        args.append((arg, self.expr()))
                        if not self.accept("COMMA"):
                            break
                self.expect("RPAREN")
                self.expect("SEMI")
                return A.Call(target, tuple(args), pos)
            raise self.error(["ASSIGN", "LPAREN"])
        raise self.error(["IDENT", "IF", "PRAGMA", "SEMI"])

    def if_stmt(self) -> A.If:
        pos = self.pos()
        self.expect("IF", "ELSIF")
        cond = self.expr()
        self.expect("THEN")
        body = self.statements()
        if self.at("ELSIF"):
            orelse = (self.if_stmt(),)
            return A.If(cond, body, orelse, pos)
        orelse = ()
        if self.accept("ELSE"):
            orelse = self.statements()
        self.expect("END_IF")
        self.accept("SEMI")
        return A.If(cond, body, orelse, pos)

    def designator(self) -> A.Name:
        pos = self.pos()
        parts = [self.expect("IDENT").value]
        while self.accept("DOT"):
            parts.append(self.expect("IDENT").value)
        return A.Name(tuple(parts), pos)

    # expressions

    def expr(self) -> A.Expr:
        pos = self.pos()
        left = self.binary(0)
        if self.accept("IMPLIES"):
            return A.Binary("-->", left, self.expr(), pos)
        return left

    def binary(self, level: int) -> A.Expr:
        if level == len(_LEVELS):
            return self.unary()
        ops = _LEVELS[level]
        pos = self.pos()
        left = self.binary(level + 1)
        while self.tok.kind in ops:
            op = ops[self.take().kind]
            left = A.Binary(op, left, self.binary(level + 1), pos)
        return left

    def unary(self) -> A.Expr:
        pos = self.pos()
        if self.accept("NOT"):
            return A.Unary("NOT", self.unary(), pos)
        if self.accept("MINUS"):
            return A.Unary("-", self.unary(), pos)
        return self.primary()

    def primary(self) -> A.Expr:
        pos = self.pos()
        t = self.tok
        if t.kind in ("TRUE", "FALSE"):
            self.take()
            return A.Literal(t.value, A.BOOL, pos)
        if t.kind == "INT_LIT":
            self.take()
            return A.Literal(t.value, A.INT, pos)
        if t.kind == "TIME_LIT":
            self.take()
            return A.Literal(t.value, A.TIME, pos)
        if t.kind == "IDENT":
            return self.designator()
        if self.accept("LPAREN"):
            e = self.expr()
            self.expect("RPAREN")
            return e
        raise self.error(["expression"])
