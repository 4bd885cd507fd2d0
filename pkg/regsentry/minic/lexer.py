"""Tokenizer for MiniC source text."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..shared.errors import ParseError

KEYWORDS = frozenset(
    {"int", "void", "record", "if", "else", "while", "return", "assume", "assert"}
)

# longest operators first so "<=" wins over "<"
_PUNCTUATION = (
    "&&", "||", "==", "!=", "<=", ">=",
    "{", "}", "(", ")", "[", "]", ";", ",", ".", ":",
    "=", "+", "-", "*", "/", "%", "<", ">", "!",
)

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)"
    r"|(?P<newline>\n)"
    r"|(?P<line_comment>//[^\n]*)"
    r"|(?P<block_comment>/\*.*?\*/)"
    r"|(?P<int>[0-9]+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>" + "|".join(re.escape(p) for p in _PUNCTUATION) + ")",
    re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "keyword", "punct" or "eof"
    text: str
    line: int
    column: int

    def describe(self):
        return "end of input" if self.kind == "eof" else self.text


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise ParseError(line, column, "a token", text[pos])
        kind = match.lastgroup
        lexeme = match.group()
        if kind == "punct" and text.startswith("/*", pos):
            raise ParseError(line, column, "'*/' closing the comment", "end of input")
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind == "block_comment":
            line += lexeme.count("\n")
            if "\n" in lexeme:
                line_start = pos + lexeme.rindex("\n") + 1
        elif kind in ("ws", "line_comment"):
            pass
        elif kind == "ident" and lexeme in KEYWORDS:
            tokens.append(Token("keyword", lexeme, line, column))
        else:
            tokens.append(Token(kind, lexeme, line, column))
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens
