"""Canonical ranking, Kekule-ring normalization and canonical SMILES."""

from __future__ import annotations

from fragcodec.molgraph.graph import ATOMIC_NUMBER, BondOrder, MolGraph
from fragcodec.molgraph.write import write_ranked

_KEKULE_ELEMENTS = ("C", "N")


def aromatize(g: MolGraph) -> MolGraph:
    """Mark alternating single/double 6-rings of C/N atoms aromatic.

    Applied to a fixpoint, so fused Kekule systems (naphthalene drawn with
    a single shared bond) are picked up ring by ring. Returns ``g`` itself
    when nothing qualifies.
    """
    atoms = g.atoms
    candidates = [
        b for b in g.bonds
        if b.in_ring and b.order == BondOrder.DOUBLE
        and atoms[b.a].element in _KEKULE_ELEMENTS and atoms[b.b].element in _KEKULE_ELEMENTS
    ]
    if not candidates:
        return g
    cycles = _six_cycles(g)
    if not cycles:
        return g
    out = g.copy()
    atoms = out.atoms
    bonds = out.bonds
    done = [False] * len(cycles)
    changed = True
    while changed:
        changed = False
        for c, (ring_atoms, ring_bonds) in enumerate(cycles):
            if done[c]:
                continue
            orders = [bonds[k].order for k in ring_bonds]
            if BondOrder.TRIPLE in orders or BondOrder.DOUBLE not in orders:
                continue
            doubles = dict.fromkeys(ring_atoms, 0)
            for k in ring_bonds:
                if bonds[k].order == BondOrder.DOUBLE:
                    doubles[bonds[k].a] += 1
                    doubles[bonds[k].b] += 1
            if all(doubles[a] == (0 if atoms[a].aromatic else 1) for a in ring_atoms):
                for a in ring_atoms:
                    atoms[a].aromatic = True
                for k in ring_bonds:
                    bonds[k].order = BondOrder.AROMATIC
                    bonds[k].stereo = None
                done[c] = True
                changed = True
    return out


def _six_cycles(g: MolGraph) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    atoms = g.atoms
    ok = [a.in_ring and a.element in _KEKULE_ELEMENTS for a in atoms]
    adj = [
        [(v, k) for v, k in g.adjacency[u] if ok[v] and g.bonds[k].in_ring] if ok[u] else []
        for u in range(len(atoms))
    ]
    found = []
    for s in range(len(atoms)):
        if not ok[s]:
            continue
        # paths of atoms > s; close back to s at length 6
        stack = [(s, (s,), ())]
        while stack:
            u, path, bpath = stack.pop()
            if len(path) == 6:
                for v, k in adj[u]:
                    if v == s and path[1] < path[5]:
                        found.append((path, bpath + (k,)))
                continue
            for v, k in adj[u]:
                if v > s and v not in path:
                    stack.append((v, path + (v,), bpath + (k,)))
    return found


def atom_invariants(g: MolGraph) -> list[tuple]:
    out = []
    for i, atom in enumerate(g.atoms):
        out.append((
            ATOMIC_NUMBER[atom.element],
            atom.charge,
            g.degree(i),
            atom.in_ring,
            atom.aromatic,
            -1 if atom.isotope is None else atom.isotope,
            -1 if atom.explicit_h is None else atom.explicit_h,
        ))
    return out


def _dense_ranks(keys: list) -> tuple[list[int], int]:
    table = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys], len(table)


def _refine(ranks: list[int], count: int, nbrs: list[list[tuple[int, int]]]) -> tuple[list[int], int]:
    n = len(ranks)
    while count < n:
        keys = [
            (ranks[u], tuple(sorted([(ranks[v], o) for v, o in nbrs[u]])))
            for u in range(n)
        ]
        new, new_count = _dense_ranks(keys)
        if new_count == count:
            break
        ranks, count = new, new_count
    return ranks, count


def canonical_ranks(g: MolGraph) -> list[int]:
    """Return a permutation-invariant total ranking of atoms.

    Ranks are seeded from atom invariants and refined from neighbor ranks and
    bond orders. Remaining ties are broken by individualizing the first atom
    of the lowest tied class and refining again.
    """
    n = len(g.atoms)
    if n == 0:
        return []
    nbrs = [[(v, int(g.bonds[k].order)) for v, k in g.adjacency[u]] for u in range(n)]
    ranks, count = _dense_ranks(atom_invariants(g))
    ranks, count = _refine(ranks, count, nbrs)
    while count < n:
        seen: dict[int, int] = {}
        tied = None
        for i, r in enumerate(ranks):
            if r in seen and (tied is None or r < ranks[tied]):
                tied = seen[r]
            seen.setdefault(r, i)
        # tied holds the lowest-indexed member of the lowest tied class
        target = ranks[tied]
        ranks, count = _dense_ranks([
            2 * r + (1 if r == target and i != tied else 0) for i, r in enumerate(ranks)
        ])
        ranks, count = _refine(ranks, count, nbrs)
    return ranks


def canonical_smiles(g: MolGraph) -> str:
    """Input-order-independent SMILES; stereo marks are dropped."""
    g = aromatize(g)
    return write_ranked(g, canonical_ranks(g), stereo=False)[0]
