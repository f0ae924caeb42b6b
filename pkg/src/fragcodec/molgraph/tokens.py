"""Tokenizer for SMILES and the fragment dialects built on it."""

from __future__ import annotations

import re
from dataclasses import dataclass

from fragcodec.errors import (
    MalformedBracketAtom,
    MalformedPercentClosure,
    UnknownCharacter,
    UnsupportedElement,
)
from fragcodec.molgraph.graph import AROMATIC_ELEMENTS, SUPPORTED_ELEMENTS

DIALECTS = ("smiles", "safe", "tsis", "tsid")

ATOM = "atom"
BRACKET_ATOM = "bracket_atom"
BOND = "bond"
RING_CLOSURE = "ring_closure"
OPEN_PAREN = "open_paren"
CLOSE_PAREN = "close_paren"
DOT = "dot"
AMP_SEP = "amp_sep"
CARET_SEP = "caret_sep"

_SCANNER = re.compile(
    r"""
    (?P<ws>\s+)
    |(?P<bracket_atom>\[[^\[\]]*\])
    |(?P<ring_closure>[-=\#:/\\]?(?:%\d\d|\d))
    |(?P<atom>Cl|Br|[BCNOPSFI]|[bcnops]|\*)
    |(?P<bond>[-=\#:/\\])
    |(?P<open_paren>\()
    |(?P<close_paren>\))
    |(?P<dot>\.)
    |(?P<amp_sep>&)
    |(?P<caret_sep>\^)
    """,
    re.VERBOSE,
)

_BRACKET = re.compile(
    r"""^\[
    (?P<isotope>\d+)?
    (?P<element>Cl|Br|[A-Z][a-z]?|[bcnops]|\*)
    (?P<chirality>@@?)?
    (?P<hcount>H\d*)?
    (?P<charge>[+-]\d*|\+\++|-+)?
    \]$""",
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    position: int

    @property
    def bond(self) -> str | None:
        """Bond symbol carried by a ring_closure token, if any."""
        if self.kind == RING_CLOSURE and self.text[0] not in "%0123456789":
            return self.text[0]
        return None

    @property
    def label(self) -> str:
        """Closure label as written, without the bond symbol (``"3"``, ``"%18"``)."""
        return self.text[1:] if self.bond else self.text

    @property
    def number(self) -> int:
        return int(self.label.lstrip("%"))


@dataclass(frozen=True, slots=True)
class BracketInfo:
    element: str
    aromatic: bool
    isotope: int | None
    chirality: str | None
    hcount: int
    charge: int


def parse_bracket(text: str, position: int = 0) -> BracketInfo:
    m = _BRACKET.match(text)
    if m is None:
        raise MalformedBracketAtom(f"malformed bracket atom {text!r}", position)
    symbol = m["element"]
    aromatic = symbol.islower()
    element = symbol.capitalize() if aromatic else symbol
    if element not in SUPPORTED_ELEMENTS:
        raise UnsupportedElement(f"unsupported element {symbol!r} in {text!r}", position)
    if aromatic and element not in AROMATIC_ELEMENTS:
        raise UnsupportedElement(f"element {symbol!r} cannot be aromatic", position)
    hcount = 0
    if m["hcount"]:
        hcount = int(m["hcount"][1:] or 1)
        if element == "H":
            raise MalformedBracketAtom(f"hydrogen with hydrogens in {text!r}", position)
    charge = 0
    raw = m["charge"]
    if raw:
        sign = 1 if raw[0] == "+" else -1
        if len(raw) > 1 and raw[1].isdigit():
            charge = sign * int(raw[1:])
        else:
            charge = sign * len(raw)
    isotope = int(m["isotope"]) if m["isotope"] else None
    if element == "*" and isotope is not None and isotope < 1:
        raise MalformedBracketAtom(f"attachment IDs start at 1, got {text!r}", position)
    return BracketInfo(element, aromatic, isotope, m["chirality"], hcount, charge)


def tokenize(s: str, dialect: str = "smiles") -> list[Token]:
    """Split ``s`` into tokens; whitespace is skipped.

    ``&`` and ``^`` are separators in the tsis/tsid dialects and illegal
    elsewhere. Bracket atoms are validated here so that errors carry the
    bracket's position.
    """
    if dialect not in DIALECTS:
        raise ValueError(f"unknown dialect {dialect!r}")
    separators = dialect in ("tsis", "tsid")
    tokens: list[Token] = []
    pos = 0
    n = len(s)
    match = _SCANNER.match
    while pos < n:
        m = match(s, pos)
        if m is None:
            ch = s[pos]
            if ch == "[":
                raise MalformedBracketAtom("unterminated bracket atom", pos)
            if ch == "%":
                raise MalformedPercentClosure("'%' must be followed by two digits", pos)
            raise UnknownCharacter(ch, pos)
        kind = m.lastgroup
        if kind == "ws":
            pos = m.end()
            continue
        text = m.group()
        if kind == BRACKET_ATOM:
            parse_bracket(text, pos)
        elif kind in (AMP_SEP, CARET_SEP) and not separators:
            raise UnknownCharacter(text, pos)
        elif kind == BOND and m.end() < n and s[m.end()] == "%":
            raise MalformedPercentClosure("'%' must be followed by two digits", m.end())
        tokens.append(Token(kind, text, pos))
        pos = m.end()
    return tokens
