"""TSIS, TSID and SAFE string codecs and the shared fragment reassembler."""

from __future__ import annotations

from dataclasses import dataclass

from fragcodec.amtree import amt_bfs, amt_to_fbt, build_amt, fbt_bfs
from fragcodec.errors import (
    BondOrderConflict,
    ClosureNumberExhausted,
    CodecError,
    DisconnectedResult,
    DuplicateBond,
    FragmentParseError,
    SmilesError,
    SmilesSyntaxError,
)
from fragcodec.fragmenter import CutSet, FragmentSet, apply_cuts, find_cut_bonds
from fragcodec.molgraph import Atom, Bond, BondOrder, MolGraph, parse_smiles
from fragcodec.molgraph.canon import canonical_ranks, canonical_smiles
from fragcodec.molgraph.parse import parse_tokens
from fragcodec.molgraph.tokens import AMP_SEP, CARET_SEP, Token, tokenize
from fragcodec.molgraph.write import MAX_CLOSURE, closure_label, write_ranked

TSIS_SEP = "^"
TSID_EMPTY = "&"
SAFE_SEP = "."


@dataclass(frozen=True)
class EncodedString:
    text: str
    dialect: str
    fragment_count: int

    def __str__(self) -> str:
        return self.text


def _fragment(g: MolGraph, cuts: CutSet | None) -> FragmentSet:
    if g.components != 1:
        raise CodecError(f"expected a single molecule, got {g.components} components")
    if cuts is None:
        cuts = find_cut_bonds(g)
    return apply_cuts(g, cuts)


# -- reassembly ---------------------------------------------------------------

def reassemble(fs: FragmentSet) -> MolGraph:
    """Glue fragments back together at their paired dummies.

    For every attachment pair both dummies are removed and their neighbors
    bonded with the pair's bond order. Pairs may sit in the same fragment.
    """
    offsets = []
    atoms: list[Atom] = []
    for frag in fs.fragments:
        offsets.append(len(atoms))
        atoms.extend(a.copy() for a in frag.atoms)
    bonds: list[Bond] = []
    for f, frag in enumerate(fs.fragments):
        base = offsets[f]
        for bond in frag.bonds:
            nb = bond.copy()
            nb.a += base
            nb.b += base
            bonds.append(nb)
    total = len(atoms)
    dummy_anchor: dict[int, tuple[int, int]] = {}
    for f, frag in enumerate(fs.fragments):
        for i, atom in enumerate(frag.atoms):
            if not atom.is_dummy:
                continue
            links = frag.adjacency[i]
            if len(links) != 1:
                raise SmilesSyntaxError(f"attachment dummy in fragment {f} has {len(links)} bonds")
            dummy_anchor[offsets[f] + i] = (offsets[f] + links[0][0], links[0][1])

    existing = {(min(b.a, b.b), max(b.a, b.b)) for b in bonds}
    for attach_id, ((f1, d1), (f2, d2)) in sorted(fs.attach_pairs.items()):
        g1, g2 = offsets[f1] + d1, offsets[f2] + d2
        n1, k1 = dummy_anchor[g1]
        n2, k2 = dummy_anchor[g2]
        o1 = fs.fragments[f1].bonds[k1].order
        o2 = fs.fragments[f2].bonds[k2].order
        if o1 != o2:
            raise BondOrderConflict(attach_id)
        if atoms[n1].is_dummy or atoms[n2].is_dummy:
            raise SmilesSyntaxError(f"attachment {attach_id} is bonded to another dummy")
        key = (min(n1, n2), max(n1, n2))
        if n1 == n2 or key in existing:
            raise DuplicateBond(f"attachment {attach_id} duplicates an existing bond")
        existing.add(key)
        bonds.append(Bond(n1, n2, o1))

    keep = [i for i in range(total) if i not in dummy_anchor]
    if len(keep) == total and not fs.attach_pairs:
        merged = MolGraph(atoms, bonds)
    else:
        new_index = {old: new for new, old in enumerate(keep)}
        kept_bonds = []
        for bond in bonds:
            if bond.a in dummy_anchor or bond.b in dummy_anchor:
                continue
            bond.a, bond.b = new_index[bond.a], new_index[bond.b]
            kept_bonds.append(bond)
        merged = MolGraph([atoms[i] for i in keep], kept_bonds)
    if merged.components != 1:
        raise DisconnectedResult(merged.components)
    return merged


# -- TSIS / TSID ----------------------------------------------------------------

def encode_tsis(g: MolGraph, cuts: CutSet | None = None) -> EncodedString:
    """Fragments in AMT breadth-first order joined by ``^``."""
    fs = _fragment(g, cuts)
    order = amt_bfs(build_amt(fs))
    return EncodedString(TSIS_SEP.join(fs.smiles[f] for f in order), "tsis", len(fs))


def encode_tsid(g: MolGraph, cuts: CutSet | None = None) -> EncodedString:
    """Breadth-first walk of the binary tree: ``&`` per empty node, ``^`` between adjacent fragments."""
    fs = _fragment(g, cuts)
    pieces: list[str] = []
    prev_fragment = False
    for item in fbt_bfs(amt_to_fbt(build_amt(fs))):
        if item is None:
            pieces.append(TSID_EMPTY)
            prev_fragment = False
        else:
            if prev_fragment:
                pieces.append(TSIS_SEP)
            pieces.append(fs.smiles[item])
            prev_fragment = True
    return EncodedString("".join(pieces), "tsid", len(fs))


def split_fragments(s: str, dialect: str) -> list[list[Token]]:
    """Split a tsis/tsid string into per-fragment token lists.

    TSIS keeps empty pieces so that they surface as parse errors; TSID drops
    them because runs of ``&`` are legitimate tree markers.
    """
    tokens = tokenize(s, dialect)
    pieces: list[list[Token]] = [[]]
    for tok in tokens:
        if tok.kind == CARET_SEP or tok.kind == AMP_SEP:
            if tok.kind == AMP_SEP and dialect == "tsis":
                raise SmilesSyntaxError("'&' is not used in TSIS", tok.position)
            pieces.append([])
        else:
            pieces[-1].append(tok)
    if dialect == "tsid":
        pieces = [p for p in pieces if p]
    return pieces


def _decode_fragments(pieces: list[list[Token]]) -> MolGraph:
    if not pieces:
        raise SmilesSyntaxError("no fragments", 0)
    graphs = []
    for i, toks in enumerate(pieces):
        try:
            graphs.append(parse_tokens(toks))
        except SmilesError as exc:
            raise FragmentParseError(i, exc) from exc
    return reassemble(FragmentSet.from_graphs(graphs))


def decode_tsis(s: str) -> MolGraph:
    return _decode_fragments(split_fragments(s, "tsis"))


def decode_tsid(s: str) -> MolGraph:
    """Decode TSID; connectivity comes from attachment IDs alone."""
    return _decode_fragments(split_fragments(s, "tsid"))


# -- SAFE -------------------------------------------------------------------------

def encode_safe(g: MolGraph, cuts: CutSet | None = None) -> EncodedString:
    """Size-sorted fragments joined by ``.``, attachments as ring-closure numbers.

    Fragments are ordered by descending heavy-atom count, ties by ascending
    canonical SMILES (attachment IDs erased). Each attachment pair takes the
    smallest number not used anywhere else in the output.
    """
    fs = _fragment(g, cuts)
    if len(fs) == 1:
        return EncodedString(fs.smiles[0], "safe", 1)

    plans = []
    for f, frag in enumerate(fs.fragments):
        erased = _erase_ids(frag)
        ranks = canonical_ranks(erased)
        dummies = [i for i, a in enumerate(frag.atoms) if a.is_dummy]
        first = min(dummies, key=ranks.__getitem__)
        start = frag.neighbors(first)[0]
        heavy = sum(a.is_heavy for a in frag.atoms)
        plans.append((-heavy, canonical_smiles(erased), f, ranks, start, frozenset(dummies)))
    plans.sort(key=lambda p: (p[0], p[1], p[2]))

    used: set[int] = set()
    for _, _, f, ranks, start, dummies in plans:
        used |= write_ranked(fs.fragments[f], ranks, start=start, hidden=dummies)[2]

    numbers: dict[int, int] = {}
    free = (n for n in range(1, MAX_CLOSURE + 1) if n not in used)
    texts = []
    for _, _, f, ranks, start, dummies in plans:
        frag = fs.fragments[f]
        labels: dict[int, list[str]] = {}
        # dummies in rank order so the label order at one atom is stable
        for d in sorted(dummies, key=ranks.__getitem__):
            attach_id = frag.atoms[d].attach_id
            if attach_id not in numbers:
                try:
                    numbers[attach_id] = next(free)
                except StopIteration:
                    raise ClosureNumberExhausted("SAFE needs more than 99 closure numbers") from None
            anchor, k = frag.adjacency[d][0]
            order = frag.bonds[k].order
            symbol = "" if order == BondOrder.SINGLE else order.symbol
            labels.setdefault(anchor, []).append(symbol + closure_label(numbers[attach_id]))
        texts.append(write_ranked(frag, ranks, start=start, hidden=dummies, labels=labels)[0])
    return EncodedString(SAFE_SEP.join(texts), "safe", len(fs))


def _erase_ids(frag: MolGraph) -> MolGraph:
    g = frag.copy()
    for atom in g.atoms:
        if atom.is_dummy:
            atom.isotope = None
    return g


def decode_safe(s: str) -> MolGraph:
    g = parse_smiles(s, allow_cross_dot_closures=True)
    if g.components != 1:
        raise DisconnectedResult(g.components)
    return g


# -- dispatch -----------------------------------------------------------------------

def encode_smiles(g: MolGraph, cuts: CutSet | None = None) -> EncodedString:
    if g.components != 1:
        raise CodecError(f"expected a single molecule, got {g.components} components")
    return EncodedString(canonical_smiles(g), "smiles", 1)


def decode_smiles(s: str) -> MolGraph:
    g = parse_smiles(s)
    if g.components != 1:
        raise DisconnectedResult(g.components)
    return g


ENCODERS = {
    "smiles": encode_smiles,
    "tsis": encode_tsis,
    "tsid": encode_tsid,
    "safe": encode_safe,
}
DECODERS = {
    "smiles": decode_smiles,
    "tsis": decode_tsis,
    "tsid": decode_tsid,
    "safe": decode_safe,
}


def encode(g: MolGraph, dialect: str, cuts: CutSet | None = None) -> EncodedString:
    try:
        encoder = ENCODERS[dialect]
    except KeyError:
        raise ValueError(f"unknown dialect {dialect!r}") from None
    return encoder(g, cuts)


def decode(s: str, dialect: str) -> MolGraph:
    """Decode ``s``; the result is always a single connected molecule."""
    try:
        decoder = DECODERS[dialect]
    except KeyError:
        raise ValueError(f"unknown dialect {dialect!r}") from None
    return decoder(s)
