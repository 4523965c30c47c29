"""Tokenizer for the expression language.

Lexical rules: identifiers `[a-z_][a-z0-9_]*`, strings in single or double
quotes (spaces allowed, no escapes needed by the vocabulary), unsigned
decimal numbers with optional fraction and exponent, punctuation
`( ) [ ] , + - * = .`, and `#` comments running to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ManiplangError


class ParseError(ManiplangError):
    """Syntax failure with the byte offset and the expected-token set."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected {', '.join(self.expected)})"
        super().__init__(detail)


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, STRING, NUMBER, or the punctuation itself; EOF at end
    text: str
    offset: int
    value: float | str | None = None


_PUNCT = "()[],+-*=."


def _is_ident_start(c: str) -> bool:
    return c == "_" or "a" <= c <= "z"


def _is_ident_rest(c: str) -> bool:
    return c == "_" or "a" <= c <= "z" or "0" <= c <= "9"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if c in _PUNCT:
            tokens.append(Token(c, c, i))
            i += 1
            continue
        if c in "'\"":
            quote = c
            j = i + 1
            while j < n and source[j] != quote:
                if source[j] == "\n":
                    raise ParseError("unterminated string", i, ("closing quote",))
                j += 1
            if j >= n:
                raise ParseError("unterminated string", i, ("closing quote",))
            tokens.append(Token("STRING", source[i : j + 1], i, value=source[i + 1 : j]))
            i = j + 1
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            text = source[i:j]
            tokens.append(Token("NUMBER", text, i, value=float(text)))
            i = j
            continue
        if _is_ident_start(c):
            j = i
            while j < n and _is_ident_rest(source[j]):
                j += 1
            text = source[i:j]
            tokens.append(Token("IDENT", text, i, value=text))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i, ("token",))
    tokens.append(Token("EOF", "", n))
    return tokens
