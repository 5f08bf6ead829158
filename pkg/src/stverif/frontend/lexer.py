"""Tokenizer for the SCL subset.

Comments are dropped except ``//#`` pragma comments, which come out as a single
``PRAGMA`` token carrying the unparsed expression text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Union

from stverif.errors import STSyntaxError, UnknownCharacter, UnterminatedComment

KEYWORDS = frozenset(
    """
    FUNCTION_BLOCK END_FUNCTION_BLOCK DATA_BLOCK END_DATA_BLOCK
    VAR VAR_INPUT VAR_OUTPUT END_VAR BEGIN
    IF THEN ELSIF ELSE END_IF
    NOT AND OR XOR TRUE FALSE
    BOOL INT TIME
    """.split()
)

# longest first
OPERATORS = [
    ("-->", "IMPLIES"),
    (":=", "ASSIGN"),
    ("<>", "NE"),
    ("<=", "LE"),
    (">=", "GE"),
    ("<", "LT"),
    (">", "GT"),
    ("=", "EQ"),
    ("+", "PLUS"),
    ("-", "MINUS"),
    ("*", "STAR"),
    ("/", "SLASH"),
    ("(", "LPAREN"),
    (")", "RPAREN"),
    (",", "COMMA"),
    (";", "SEMI"),
    (":", "COLON"),
    (".", "DOT"),
    ("&", "AND"),
]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"[0-9][0-9_]*")
_TIME = re.compile(r"(?:TIME|T)#((?:[0-9]+(?:ms|s|m|h|d))+)", re.IGNORECASE)
_TIME_PART = re.compile(r"([0-9]+)(ms|s|m|h|d)", re.IGNORECASE)
_TIME_UNITS = {"ms": 1, "s": 1000, "m": 60_000, "h": 3_600_000, "d": 86_400_000}
_PRAGMA_KINDS = {"ASSERT": "Assert", "ASSUME": "Assume", "RANGE": "Range"}
_PRAGMA_TAIL = re.compile(r"\s*(?::\s*\"?([A-Za-z_][A-Za-z0-9_]*)\"?)?\s*;?\s*$")


@dataclass(frozen=True)
class PragmaToken:
    kind: str  # Assert, Assume or Range
    text: str  # expression (or argument list) between the parentheses
    name: Optional[str]
    line: int = 0
    col: int = 0  # position of ``text`` in the source


@dataclass(frozen=True)
class Token:
    kind: str
    value: Union[str, int, bool, PragmaToken, None]
    line: int
    col: int

    def __repr__(self):
        return f"Token({self.kind}, {self.value!r}, {self.line}:{self.col})"


def time_literal_ms(spec: str) -> int:
    return sum(int(n) * _TIME_UNITS[u.lower()] for n, u in _TIME_PART.findall(spec))


def lex(text: str, path: str = "<string>", line: int = 1, col: int = 1) -> List[Token]:
    """Tokenize ``text``. ``line``/``col`` give the position of its first char."""
    return _Lexer(text, path, line, col).run()


class _Lexer:
    def __init__(self, text, path, line, col):
        self.text = text
        self.path = path
        self.i = 0
        self.line = line
        self.col = col

    def _advance(self, n: int):
        chunk = self.text[self.i : self.i + n]
        nl = chunk.count("\n")
        if nl:
            self.line += nl
            self.col = len(chunk) - chunk.rfind("\n")
        else:
            self.col += n
        self.i += n

    def run(self) -> List[Token]:
        text = self.text
        out: List[Token] = []
        while self.i < len(text):
            c = text[self.i]
            if c in " \t\r\n\f﻿":
                self._advance(1)
                continue
            line, col = self.line, self.col
            if text.startswith("//#", self.i):
                end = text.find("\n", self.i)
                end = len(text) if end < 0 else end
                out.append(Token("PRAGMA", self._pragma(text[self.i : end], line, col), line, col))
                self._advance(end - self.i)
                continue
            if text.startswith("//", self.i):
                end = text.find("\n", self.i)
                self._advance((len(text) if end < 0 else end) - self.i)
                continue
            if text.startswith("(*", self.i):
                end = text.find("*)", self.i + 2)
                if end < 0:
                    raise UnterminatedComment("comment opened here is never closed", line, col, self.path)
                self._advance(end + 2 - self.i)
                continue
            if c == '"':
                end = text.find('"', self.i + 1)
                if end < 0 or "\n" in text[self.i : end]:
                    raise STSyntaxError("unterminated quoted identifier", line, col, self.path)
                name = text[self.i + 1 : end]
                if not _IDENT.fullmatch(name):
                    raise STSyntaxError(f"invalid quoted identifier {name!r}", line, col, self.path)
                out.append(Token("IDENT", name, line, col))
                self._advance(end + 1 - self.i)
                continue
            m = _TIME.match(text, self.i)
            if m:
                out.append(Token("TIME_LIT", time_literal_ms(m.group(1)), line, col))
                self._advance(m.end() - self.i)
                continue
            m = _IDENT.match(text, self.i)
            if m:
                word = m.group(0)
                upper = word.upper()
                if upper in KEYWORDS:
                    value = {"TRUE": True, "FALSE": False}.get(upper, upper)
                    out.append(Token(upper, value, line, col))
                else:
                    out.append(Token("IDENT", word, line, col))
                self._advance(m.end() - self.i)
                continue
            m = _NUMBER.match(text, self.i)
            if m:
                out.append(Token("INT_LIT", int(m.group(0).replace("_", "")), line, col))
                self._advance(m.end() - self.i)
                continue
            for op, kind in OPERATORS:
                if text.startswith(op, self.i):
                    out.append(Token(kind, op, line, col))
                    self._advance(len(op))
                    break
            else:
                raise UnknownCharacter(f"unexpected character {c!r}", line, col, self.path)
        return out

    def _pragma(self, raw: str, line: int, col: int) -> PragmaToken:
        m = re.match(r"//#\s*([A-Za-z]+)\s*\(", raw)
        if not m or m.group(1).upper() not in _PRAGMA_KINDS:
            raise STSyntaxError(f"unknown pragma {raw.strip()!r}", line, col, self.path,
                                expected=sorted(_PRAGMA_KINDS))
        kind = _PRAGMA_KINDS[m.group(1).upper()]
        start = m.end()
        depth, j, quoted = 1, start, False
        while j < len(raw):
            ch = raw[j]
            if ch == '"':
                quoted = not quoted
            elif not quoted and ch == "(":
                depth += 1
            elif not quoted and ch == ")":
                depth -= 1
                if depth == 0:
                    break
            j += 1
        if depth:
            raise STSyntaxError("pragma has unbalanced parentheses", line, col, self.path, expected=[")"])
        tail = _PRAGMA_TAIL.match(raw, j + 1)
        if tail is None:
            raise STSyntaxError(f"unexpected text after pragma: {raw[j + 1:].strip()!r}",
                                line, col + j + 1, self.path, expected=[":", ";"])
        return PragmaToken(kind, raw[start:j], tail.group(1), line, col + start)
