"""Text format for reaction networks (``.crn`` files).

One reaction per line::

    # one-site phosphorylation
    R1: S0 + E <-> S0E
    S0E -> S1 + E
    3/2 A + B -> 0

A line is ``[label ":"] complex arrow complex``, a ``#`` comment or blank.
Coefficients are positive integers or ``p/q`` fractions placed before the
species name; repeated species in one complex are summed; ``0`` is the
empty complex. Species are ordered by first appearance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, ValidationError
from .model import Complex, Reaction, ReactionNetwork, format_fraction, validate_network

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<arrow><->|->)
  | (?P<plus>\+)
  | (?P<colon>:)
  | (?P<number>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    col: int  # 1-based


def _tokenize(line: str, lineno: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(line):
        if line[pos] == "#":
            break
        m = _TOKEN.match(line, pos)
        if m is None:
            raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1, 1)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    return toks


class _LineParser:
    def __init__(self, toks: list[_Tok], lineno: int, line: str):
        self.toks = toks
        self.pos = 0
        self.lineno = lineno
        self.end_col = max(len(line.rstrip()), 1)

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def error(self, message: str, tok: _Tok | None) -> ParseError:
        if tok is None:
            return ParseError(message, self.lineno, self.end_col, 1)
        return ParseError(message, self.lineno, tok.col, len(tok.text))

    def take(self) -> _Tok:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def reaction(self) -> Reaction:
        label = None
        if len(self.toks) >= 2 and self.toks[0].kind == "ident" and self.toks[1].kind == "colon":
            label = self.take().text
            self.take()
        lhs = self.complex()
        tok = self.peek()
        if tok is None or tok.kind != "arrow":
            raise self.error("expected '->' or '<->'", tok)
        arrow = self.take()
        rhs = self.complex()
        if self.peek() is not None:
            raise self.error("unexpected token after product", self.peek())
        return Reaction(lhs, rhs, arrow.text == "<->", label)

    def complex(self) -> Complex:
        tok = self.peek()
        if tok is not None and tok.kind == "number" and tok.text == "0":
            nxt = self.toks[self.pos + 1] if self.pos + 1 < len(self.toks) else None
            if nxt is None or nxt.kind == "arrow":
                self.take()
                return Complex.zero()
        terms = [self.term()]
        while (tok := self.peek()) is not None and tok.kind == "plus":
            plus = self.take()
            nxt = self.peek()
            if nxt is None or nxt.kind not in ("number", "ident"):
                raise self.error("dangling '+'", plus)
            terms.append(self.term())
        return Complex(tuple(terms))

    def term(self) -> tuple[str, Fraction]:
        tok = self.peek()
        coeff = Fraction(1)
        if tok is not None and tok.kind == "number":
            self.take()
            num, _, den = tok.text.partition("/")
            if den and int(den) == 0:
                raise self.error("zero denominator", tok)
            coeff = Fraction(int(num), int(den or 1))
            if coeff == 0:
                raise self.error("coefficients must be positive", tok)
            tok = self.peek()
        if tok is None or tok.kind != "ident":
            raise self.error("expected a species name", tok)
        self.take()
        return tok.text, coeff


def parse_network(text: str) -> ReactionNetwork:
    """Parse ``.crn`` text into a validated network.

    Raises:
        ParseError: on malformed input or when the parsed network fails
            validation (the span then covers the offending line).
    """
    if text.startswith("\ufeff"):
        text = text[1:]
    reactions: list[Reaction] = []
    lines: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = _tokenize(line, lineno)
        if not toks:
            continue
        reactions.append(_LineParser(toks, lineno, line).reaction())
        lines.append((lineno, line))
    if not reactions:
        raise ParseError("no reactions found", 1, 1, 0)
    raw = ReactionNetwork.from_reactions(reactions)
    try:
        return validate_network(raw)
    except ValidationError as exc:
        index = getattr(exc, "index", None)
        lineno, line = lines[index] if index is not None else lines[0]
        stripped = line.strip()
        raise ParseError(str(exc), lineno, line.index(stripped[0]) + 1 if stripped else 1, len(stripped)) from exc


def _format_complex(c: Complex) -> str:
    if c.is_zero():
        return "0"
    return " + ".join(name if k == 1 else f"{format_fraction(k)} {name}" for name, k in c.terms)


def serialize_network(net: ReactionNetwork) -> str:
    """One line per reaction in stored order; no trailing newline."""
    lines = []
    for r in net.reactions:
        body = f"{_format_complex(r.reactant)} {r.arrow} {_format_complex(r.product)}"
        lines.append(f"{r.label}: {body}" if r.label else body)
    return "\n".join(lines)


def read_network(path) -> ReactionNetwork:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())
