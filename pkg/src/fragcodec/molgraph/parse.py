"""SMILES parser producing :class:`MolGraph`."""

from __future__ import annotations

from fragcodec.errors import (
    AromaticityError,
    BondOrderConflict,
    SmilesSyntaxError,
    UnbalancedParenthesis,
    UnmatchedRingClosure,
)
from fragcodec.molgraph import tokens as T
from fragcodec.molgraph.graph import Atom, Bond, BondOrder, MolGraph
from fragcodec.molgraph.tokens import Token, parse_bracket, tokenize

_CLOSURE_FOLLOWS = (T.ATOM, T.BRACKET_ATOM, T.RING_CLOSURE)


def parse_smiles(s: str, allow_cross_dot_closures: bool = False) -> MolGraph:
    """Parse a SMILES string.

    Ring-closure numbers pair first-open/first-close and may be reused once
    paired. With ``allow_cross_dot_closures`` a closure may stay open across
    a ``.``, which is how SAFE strings express attachments.

    Unspecified bonds between two aromatic atoms become aromatic when they
    lie on a ring and single otherwise.
    """
    dialect = "safe" if allow_cross_dot_closures else "smiles"
    return parse_tokens(tokenize(s, dialect), allow_cross_dot_closures)


def parse_tokens(tokens: list[Token], allow_cross_dot_closures: bool = False) -> MolGraph:
    atoms: list[Atom] = []
    # (a, b, symbol or None)
    raw_bonds: list[list] = []
    pairs: set[tuple[int, int]] = set()
    open_rings: dict[int, tuple[int, str | None, int]] = {}
    branches: list[tuple[int, int]] = []
    prev: int | None = None
    pending: str | None = None
    pending_pos = 0
    last_kind: str | None = None

    def add_bond(a: int, b: int, symbol: str | None, position: int) -> None:
        key = (a, b) if a < b else (b, a)
        if a == b:
            raise SmilesSyntaxError("ring closure bonds an atom to itself", position)
        if key in pairs:
            raise SmilesSyntaxError("duplicate bond between the same atoms", position)
        pairs.add(key)
        raw_bonds.append([a, b, symbol])

    for tok in tokens:
        kind = tok.kind
        if kind == T.ATOM or kind == T.BRACKET_ATOM:
            if kind == T.ATOM:
                text = tok.text
                if text == "*":
                    atom = Atom("*")
                elif text.islower():
                    atom = Atom(text.upper(), aromatic=True)
                else:
                    atom = Atom(text)
            else:
                info = parse_bracket(tok.text, tok.position)
                atom = Atom(info.element, info.aromatic, info.charge, info.isotope,
                            info.hcount, info.chirality)
            idx = len(atoms)
            atoms.append(atom)
            if prev is not None:
                add_bond(prev, idx, pending, tok.position)
            elif pending is not None:
                raise SmilesSyntaxError("bond without a preceding atom", pending_pos)
            pending = None
            prev = idx
        elif kind == T.BOND:
            if prev is None or pending is not None:
                raise SmilesSyntaxError(f"misplaced bond {tok.text!r}", tok.position)
            pending = tok.text
            pending_pos = tok.position
        elif kind == T.RING_CLOSURE:
            if last_kind not in _CLOSURE_FOLLOWS or pending is not None:
                raise SmilesSyntaxError("misplaced ring closure", tok.position)
            number = tok.number
            symbol = tok.bond
            if number in open_rings:
                other, other_symbol, _ = open_rings.pop(number)
                if symbol is not None and other_symbol is not None and (
                    BondOrder.from_symbol(symbol) != BondOrder.from_symbol(other_symbol)
                ):
                    raise BondOrderConflict(number)
                chosen = other_symbol if symbol is None else symbol
                if symbol is None and other_symbol in ("/", "\\"):
                    # mark was written on the opening atom, i.e. in the other -> prev direction
                    add_bond(other, prev, chosen, tok.position)
                else:
                    add_bond(prev, other, chosen, tok.position)
            else:
                open_rings[number] = (prev, symbol, tok.position)
        elif kind == T.OPEN_PAREN:
            if prev is None or pending is not None:
                raise SmilesSyntaxError("branch without a preceding atom", tok.position)
            branches.append((prev, tok.position))
        elif kind == T.CLOSE_PAREN:
            if not branches:
                raise UnbalancedParenthesis("unmatched ')'", tok.position)
            if pending is not None or last_kind == T.OPEN_PAREN:
                raise SmilesSyntaxError("empty or dangling branch", tok.position)
            prev = branches.pop()[0]
        elif kind == T.DOT:
            if pending is not None or prev is None:
                raise SmilesSyntaxError("misplaced '.'", tok.position)
            if branches:
                raise UnbalancedParenthesis("unclosed '(' before '.'", branches[-1][1])
            if open_rings and not allow_cross_dot_closures:
                number = min(open_rings)
                raise UnmatchedRingClosure(number, open_rings[number][2])
            prev = None
        else:
            raise SmilesSyntaxError(f"separator {tok.text!r} inside a SMILES string",
                                    tok.position)
        last_kind = kind

    if not atoms:
        raise SmilesSyntaxError("empty string", 0)
    if pending is not None or prev is None:
        raise SmilesSyntaxError("string ends with a dangling symbol", pending_pos)
    if branches:
        raise UnbalancedParenthesis("unclosed '('", branches[-1][1])
    if open_rings:
        number = min(open_rings)
        raise UnmatchedRingClosure(number, open_rings[number][2])
    return _build(atoms, raw_bonds)


def _build(atoms: list[Atom], raw_bonds: list[list]) -> MolGraph:
    bonds: list[Bond] = []
    deferred: list[int] = []
    for a, b, symbol in raw_bonds:
        if symbol is None:
            if atoms[a].aromatic and atoms[b].aromatic:
                deferred.append(len(bonds))
                order = BondOrder.AROMATIC
            else:
                order = BondOrder.SINGLE
            bonds.append(Bond(a, b, order))
        else:
            stereo = symbol if symbol in ("/", "\\") else None
            bonds.append(Bond(a, b, BondOrder.from_symbol(symbol), stereo))
    graph = MolGraph(atoms, bonds)
    for k in deferred:
        if not bonds[k].in_ring:
            bonds[k].order = BondOrder.SINGLE
    for i, atom in enumerate(atoms):
        if atom.aromatic and not atom.in_ring:
            raise AromaticityError(f"aromatic atom {i} is not in a ring")
    return graph
