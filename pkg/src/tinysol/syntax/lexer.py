from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Optional


class ParseError(Exception):
    """A source file could not be parsed or is not well formed.

    ``code`` is one of ``syntax``, ``duplicate-procedure``,
    ``reserved-formal``, ``duplicate-formal``, ``balance-lhs``,
    ``unknown-address``, ``io``.
    """

    def __init__(self, message: str, line: int = 0, col: int = 0,
                 code: str = "syntax", path: Optional[str] = None):
        self.message = message
        self.line = line
        self.col = col
        self.code = code
        self.path = path
        super().__init__(str(self))

    def __str__(self) -> str:
        where = f"{self.path}:" if self.path else ""
        return f"{where}{self.line}:{self.col}: {self.code}: {self.message}"


class UnknownAddress(ParseError):
    def __init__(self, message: str, line: int = 0, col: int = 0, path: Optional[str] = None):
        super().__init__(message, line, col, code="unknown-address", path=path)


KEYWORDS = frozenset({
    "contract", "skip", "throw", "if", "then", "else", "while", "do",
    "true", "false", "not", "hash", "fst", "snd",
})

# longest first
PUNCT = (
    ":=", "::", "==", "!=", "<=", ">=", "&&", "||", "->",
    ":", ";", ",", ".", "(", ")", "{", "}", "?", "!", "<", ">",
    "+", "-", "*", "/", "%", "^",
)


@dataclass(frozen=True)
class Token:
    kind: str   # IDENT KW INT STR ACCOUNT CONTRACT PUNCT EOF
    text: str
    value: Any
    line: int
    col: int
    offset: int
    end: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<int>[0-9]+)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<account>@[A-Za-z_][A-Za-z0-9_]*)
  | (?P<contract>\#[A-Za-z_][A-Za-z0-9_]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>"""
    + "|".join(re.escape(p) for p in PUNCT)
    + r")",
    re.VERBOSE,
)


def tokenize(source: str, path: Optional[str] = None) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col, path=path)
        kind = m.lastgroup
        text = m.group()
        if kind == "int":
            tokens.append(Token("INT", text, int(text), line, col, pos, m.end()))
        elif kind == "str":
            try:
                value = json.loads(text)
            except json.JSONDecodeError:
                raise ParseError(f"bad string literal {text}", line, col, path=path) from None
            tokens.append(Token("STR", text, value, line, col, pos, m.end()))
        elif kind == "account":
            tokens.append(Token("ACCOUNT", text, text[1:], line, col, pos, m.end()))
        elif kind == "contract":
            tokens.append(Token("CONTRACT", text, text[1:], line, col, pos, m.end()))
        elif kind == "ident":
            tokens.append(Token("KW" if text in KEYWORDS else "IDENT", text, text, line, col, pos, m.end()))
        elif kind == "punct":
            tokens.append(Token("PUNCT", text, text, line, col, pos, m.end()))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", None, line, pos - line_start + 1, pos, pos))
    return tokens
