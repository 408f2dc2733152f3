"""Tokenizer for ``.catspec`` text."""
from __future__ import annotations

import re
from typing import NamedTuple

from .model import ERROR, SYNTAX, Diagnostic

WORD = "word"
SYM = "sym"
NL = "nl"
EOF = "eof"

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_WORDISH = re.compile(r"[^\s{}:;=.@()\"#]+")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<quoted>"[^"\s]*")
  | (?P<sym>->|=>|[{}:;=.@()])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    type: str
    text: str
    line: int
    column: int
    quoted: bool = False

    def is_sym(self, s):
        return self.type == SYM and self.text == s

    def is_kw(self, s):
        return self.type == WORD and not self.quoted and self.text == s

    def describe(self):
        if self.type == NL:
            return "end of line"
        if self.type == EOF:
            return "end of input"
        return repr(self.text)


def tokenize(text: str):
    """Return ``(tokens, diagnostics)``; the token list always ends in EOF."""
    tokens = []
    diags = []
    line, line_start, pos = 1, 0, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            ch = text[pos]
            if ch == '"':
                end = text.find("\n", pos)
                end = n if end < 0 else end
                diags.append(Diagnostic(ERROR, SYNTAX, "unterminated or malformed quoted "
                                        "identifier (no spaces allowed inside quotes)",
                                        line, col))
                pos = end
            elif ch.isdigit():
                run = _WORDISH.match(text, pos).group()
                diags.append(Diagnostic(ERROR, SYNTAX, f"identifier {run!r} starts with a digit; "
                                        f"write it quoted as \"{run}\"", line, col))
                pos += len(run)
            else:
                diags.append(Diagnostic(ERROR, SYNTAX, f"unexpected character {ch!r}", line, col))
                pos += 1
            continue
        kind = m.lastgroup
        if kind == "nl":
            tokens.append(Token(NL, "\n", line, col))
            line += 1
            line_start = m.end()
        elif kind == "word":
            tokens.append(Token(WORD, m.group(), line, col))
        elif kind == "quoted":
            body = m.group()[1:-1]
            if not body:
                diags.append(Diagnostic(ERROR, SYNTAX, "empty quoted identifier", line, col))
            else:
                tokens.append(Token(WORD, body, line, col, True))
        elif kind == "sym":
            tokens.append(Token(SYM, m.group(), line, col))
        pos = m.end()
    tokens.append(Token(EOF, "", line, pos - line_start + 1))
    return tokens, diags


def format_id(name: str) -> str:
    """Write an identifier bare when the grammar allows it, quoted otherwise."""
    if IDENT_RE.match(name):
        return name
    if '"' in name or any(c.isspace() for c in name):
        raise ValueError(f"identifier {name!r} cannot be written in a spec")
    return f'"{name}"'
