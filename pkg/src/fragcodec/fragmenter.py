"""Cut a molecule into fragments joined by paired ``[n*]`` dummy atoms."""

from __future__ import annotations

from dataclasses import dataclass, field

from fragcodec.errors import NotCuttable, UnpairedAttachment
from fragcodec.molgraph import Atom, Bond, BondOrder, MolGraph
from fragcodec.molgraph.canon import aromatize, canonical_ranks
from fragcodec.molgraph.write import write_ranked

AttachSite = tuple[int, int]  # (fragment index, dummy atom index)


@dataclass(frozen=True)
class CutSet:
    """Bonds to cut, each given by its (smaller, larger) endpoint pair."""

    bond_refs: tuple[tuple[int, int], ...] = ()

    def __len__(self) -> int:
        return len(self.bond_refs)

    def __iter__(self):
        return iter(self.bond_refs)

    @classmethod
    def parse(cls, text: str) -> CutSet:
        """Parse the CLI form ``"a-b,c-d"``."""
        refs = []
        for part in filter(None, (p.strip() for p in text.split(","))):
            try:
                a, b = (int(x) for x in part.split("-"))
            except ValueError:
                raise ValueError(f"bad cut {part!r}; expected 'a-b'") from None
            refs.append((min(a, b), max(a, b)))
        return cls(tuple(refs))


@dataclass
class FragmentSet:
    """Fragments plus the bookkeeping needed to glue them back together.

    Each fragment's atoms are stored in the order of its written SMILES, so
    dummy index order equals dummy appearance order in the text.
    ``source_atoms[f][i]`` is the source-molecule index of fragment atom
    ``i`` (``None`` for dummies or when the fragments came from strings).
    """

    fragments: list[MolGraph]
    attach_pairs: dict[int, tuple[AttachSite, AttachSite]]
    bond_order_of: dict[int, BondOrder]
    source_atoms: list[list[int | None]] | None = None
    smiles: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.fragments)

    @property
    def root_index(self) -> int:
        """Fragment holding source atom 0, or the first fragment."""
        if self.source_atoms:
            for f, mapping in enumerate(self.source_atoms):
                if 0 in mapping:
                    return f
        return 0

    @classmethod
    def from_graphs(cls, fragments: list[MolGraph]) -> FragmentSet:
        """Pair dummies by attachment ID across already-parsed fragments."""
        sites: dict[int | None, list[AttachSite]] = {}
        for f, frag in enumerate(fragments):
            for i, atom in enumerate(frag.atoms):
                if atom.is_dummy:
                    sites.setdefault(atom.attach_id, []).append((f, i))
        pairs: dict[int, tuple[AttachSite, AttachSite]] = {}
        orders: dict[int, BondOrder] = {}
        for attach_id, found in sorted(sites.items(), key=lambda kv: (kv[0] is None, kv[0] or 0)):
            if attach_id is None or len(found) != 2:
                raise UnpairedAttachment(attach_id, len(found))
            pairs[attach_id] = (found[0], found[1])
        for attach_id, (s1, s2) in pairs.items():
            o1, o2 = (_dummy_order(fragments, s) for s in (s1, s2))
            orders[attach_id] = o1 if o1 == o2 else None  # conflict surfaced by reassemble
        return cls(list(fragments), pairs, orders)


def _dummy_order(fragments: list[MolGraph], site: AttachSite) -> BondOrder | None:
    frag = fragments[site[0]]
    links = frag.adjacency[site[1]]
    if len(links) != 1:
        return None
    return frag.bonds[links[0][1]].order


def _side_has_heavy(g: MolGraph, start: int, banned: int) -> bool:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        if g.atoms[u].is_heavy:
            return True
        for v, k in g.adjacency[u]:
            if k != banned and v not in seen:
                seen.add(v)
                stack.append(v)
    return False


def find_cut_bonds(g: MolGraph, rule: str = "exocyclic_single",
                   explicit: list[tuple[int, int]] | CutSet | None = None) -> CutSet:
    """Select bonds to cut.

    ``exocyclic_single`` picks every single acyclic bond touching a ring atom
    whose removal leaves heavy atoms on both sides. ``explicit`` validates a
    caller-supplied list: each bond must exist, lie outside rings, be
    non-aromatic and leave heavy atoms on both sides. Acyclic double bonds
    are accepted here so that splits like ``[1*]=C`` / ``[1*]=CC...`` are
    expressible.
    """
    if rule == "exocyclic_single":
        refs = []
        for k, bond in enumerate(g.bonds):
            if bond.order != BondOrder.SINGLE or bond.in_ring:
                continue
            if not (g.atoms[bond.a].in_ring or g.atoms[bond.b].in_ring):
                continue
            if _side_has_heavy(g, bond.a, k) and _side_has_heavy(g, bond.b, k):
                refs.append((min(bond.a, bond.b), max(bond.a, bond.b)))
        return CutSet(tuple(sorted(refs)))
    if rule == "explicit":
        refs = []
        for a, b in explicit or ():
            pair = (min(a, b), max(a, b))
            if not (0 <= pair[0] < len(g.atoms) and pair[1] < len(g.atoms)):
                raise NotCuttable(pair, "atom index out of range")
            bond = g.bond_between(*pair)
            if bond is None:
                raise NotCuttable(pair, "no such bond")
            if bond.in_ring:
                raise NotCuttable(pair, "ring bond")
            if bond.order == BondOrder.AROMATIC:
                raise NotCuttable(pair, "aromatic bond")
            k = g.bonds.index(bond)
            if not (_side_has_heavy(g, bond.a, k) and _side_has_heavy(g, bond.b, k)):
                raise NotCuttable(pair, "dangling: one side has no heavy atom")
            if pair in refs:
                raise NotCuttable(pair, "listed twice")
            refs.append(pair)
        return CutSet(tuple(refs))
    raise ValueError(f"unknown fragmentation rule {rule!r}")


def apply_cuts(g: MolGraph, cuts: CutSet) -> FragmentSet:
    """Split ``g`` at ``cuts``; IDs 1, 2, ... follow the cut bonds' smaller endpoint."""
    ordered = sorted(cuts.bond_refs)
    cut_id: dict[int, int] = {}
    for n, (a, b) in enumerate(ordered, start=1):
        bond = g.bond_between(a, b)
        if bond is None:
            raise NotCuttable((a, b), "no such bond")
        cut_id[g.bonds.index(bond)] = n

    # connected pieces after removing the cut bonds
    label = [-1] * len(g.atoms)
    pieces = 0
    for s in range(len(g.atoms)):
        if label[s] >= 0:
            continue
        label[s] = pieces
        stack = [s]
        while stack:
            u = stack.pop()
            for v, k in g.adjacency[u]:
                if k not in cut_id and label[v] < 0:
                    label[v] = pieces
                    stack.append(v)
        pieces += 1

    members: list[list[int]] = [[] for _ in range(pieces)]
    for i in range(len(g.atoms)):
        members[label[i]].append(i)
    local = [0] * len(g.atoms)
    frag_atoms: list[list[Atom]] = []
    frag_bonds: list[list[Bond]] = [[] for _ in range(pieces)]
    sources: list[list[int | None]] = []
    for f, idxs in enumerate(members):
        for j, i in enumerate(idxs):
            local[i] = j
        frag_atoms.append([g.atoms[i].copy() for i in idxs])
        sources.append(list(idxs))
    for k, bond in enumerate(g.bonds):
        if k in cut_id:
            continue
        f = label[bond.a]
        nb = bond.copy()
        nb.a, nb.b = local[bond.a], local[bond.b]
        frag_bonds[f].append(nb)
    orders: dict[int, BondOrder] = {}
    for k, n in sorted(cut_id.items(), key=lambda kv: kv[1]):
        bond = g.bonds[k]
        orders[n] = bond.order
        for end in (bond.a, bond.b):
            f = label[end]
            frag_atoms[f].append(Atom("*", isotope=n, explicit_h=0))
            sources[f].append(None)
            frag_bonds[f].append(Bond(local[end], len(frag_atoms[f]) - 1, bond.order))

    fragments: list[MolGraph] = []
    smiles: list[str] = []
    final_sources: list[list[int | None]] = []
    for f in range(pieces):
        frag = aromatize(MolGraph(frag_atoms[f], frag_bonds[f]))
        text, order, _ = write_ranked(frag, canonical_ranks(frag))
        frag = frag.permuted(order)
        fragments.append(frag)
        smiles.append(text)
        final_sources.append([sources[f][i] for i in order])

    sites: dict[int, list[AttachSite]] = {}
    for f, frag in enumerate(fragments):
        for i, atom in enumerate(frag.atoms):
            if atom.is_dummy:
                sites.setdefault(atom.attach_id, []).append((f, i))
    pairs = {n: (s[0], s[1]) for n, s in sorted(sites.items())}
    return FragmentSet(fragments, pairs, orders, final_sources, smiles)
