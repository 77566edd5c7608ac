"""Textual DSL for diagram terms and signature files.

Grammar (whitespace-insensitive, ``*`` binds tighter than ``;``)::

    term   := tensor (";" tensor)*
    tensor := atom ("*" atom)*
    atom   := name | "id:" nat | "swap:" nat "," nat | "copy" | "discard"
            | "tr^" nat "(" term ")" | "(" term ")"

Signature files hold one ``gen <name> : <nat> -> <nat>`` line per
generator; blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .hypergraph import HypergraphError, Signature
from .term import (
    Compose,
    Copy,
    Discard,
    Generator,
    Identity,
    Symmetry,
    Tensor,
    Term,
    Trace,
    TypedTerm,
    typecheck,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<tr>tr\^(?P<trn>\d+))
  | (?P<id>id:(?P<idn>\d+))
  | (?P<swap>swap:(?P<swm>\d+),(?P<swn>\d+))
  | (?P<name>[A-Za-z_][A-Za-z0-9_:]*)
  | (?P<punct>[;*()])
""", re.VERBOSE)


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        text = m.group(0)
        if not m.group("ws"):
            kind = next(k for k in ("tr", "id", "swap", "name", "punct")
                        if m.group(k))
            tokens.append(_Token(kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], source_len_line: tuple[int, int],
                 resolve: Callable[[str], Term | None]):
        self.tokens = tokens
        self.pos = 0
        self.end = source_len_line
        self.resolve = resolve

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        if tok is None:
            return ParseError(message, *self.end)
        return ParseError(message, tok.line, tok.column)

    def expect_punct(self, text: str) -> None:
        tok = self.peek()
        if tok is None or tok.kind != "punct" or tok.text != text:
            raise self.error(f"expected {text!r}")
        self.pos += 1

    def term(self) -> Term:
        t = self.tensor()
        while (tok := self.peek()) and tok.kind == "punct" and tok.text == ";":
            self.pos += 1
            t = Compose(t, self.tensor())
        return t

    def tensor(self) -> Term:
        t = self.atom()
        while (tok := self.peek()) and tok.kind == "punct" and tok.text == "*":
            self.pos += 1
            t = Tensor(t, self.atom())
        return t

    def atom(self) -> Term:
        tok = self.peek()
        if tok is None:
            raise self.error("expected a term")
        if tok.kind == "punct" and tok.text == "(":
            self.pos += 1
            t = self.term()
            self.expect_punct(")")
            return t
        if tok.kind == "tr":
            width = int(tok.text.split("^")[1])
            self.pos += 1
            self.expect_punct("(")
            body = self.term()
            self.expect_punct(")")
            return Trace(width, body)
        if tok.kind == "id":
            self.pos += 1
            return Identity(int(tok.text.split(":")[1]))
        if tok.kind == "swap":
            self.pos += 1
            m, n = tok.text.split(":")[1].split(",")
            return Symmetry(int(m), int(n))
        if tok.kind == "name":
            self.pos += 1
            if tok.text == "copy":
                return Copy()
            if tok.text == "discard":
                return Discard()
            resolved = self.resolve(tok.text)
            if resolved is None:
                raise ParseError(f"unknown generator {tok.text!r}",
                                 tok.line, tok.column)
            return resolved
        raise self.error(f"unexpected token {tok.text!r}")


def parse_term(source: str, sig: Signature,
               resolve: Callable[[str], Term | None] | None = None) -> TypedTerm:
    """Parse and typecheck a term; errors carry line and column."""
    def default_resolve(name: str) -> Term | None:
        return Generator(name) if name in sig else None

    tokens = _tokenize(source)
    last_line = source.count("\n") + 1
    last_col = len(source) - source.rfind("\n")
    parser = _Parser(tokens, (last_line, last_col), resolve or default_resolve)
    term = parser.term()
    if parser.peek() is not None:
        raise parser.error("trailing input")
    try:
        return typecheck(term, sig)
    except (HypergraphError, ValueError) as exc:
        raise ParseError(str(exc), 1, 1) from exc


_SIG_LINE = re.compile(
    r"^gen\s+(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*:\s*(?P<m>\d+)\s*->\s*(?P<n>\d+)$")


def parse_signature(text: str) -> Signature:
    generators: dict[str, tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SIG_LINE.match(line)
        if m is None:
            raise ParseError(f"bad signature line: {raw.strip()!r}", lineno, 1)
        name = m.group("name")
        if name in generators:
            raise ParseError(f"duplicate generator {name!r}", lineno, 1)
        generators[name] = (int(m.group("m")), int(m.group("n")))
    return Signature(generators)
