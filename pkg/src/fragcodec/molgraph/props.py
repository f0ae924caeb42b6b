"""Simple molecular descriptors."""

from __future__ import annotations

from dataclasses import dataclass

from fragcodec.molgraph.canon import aromatize
from fragcodec.molgraph.graph import BondOrder, MolGraph

ATOMIC_MASS = {
    "H": 1.008, "B": 10.81, "C": 12.011, "N": 14.007, "O": 15.999, "F": 18.998,
    "P": 30.974, "S": 32.06, "Cl": 35.45, "Br": 79.904, "I": 126.904, "*": 0.0,
}

# default valences used for implicit hydrogens on bare organic-subset atoms
_VALENCES = {
    "B": (3,), "C": (4,), "N": (3, 5), "O": (2,), "P": (3, 5), "S": (2, 4, 6),
    "F": (1,), "Cl": (1,), "Br": (1,), "I": (1,),
}
_BOND_VALENCE = {
    BondOrder.SINGLE: 1, BondOrder.DOUBLE: 2, BondOrder.TRIPLE: 3, BondOrder.AROMATIC: 1,
}


@dataclass(frozen=True)
class Descriptors:
    heavy_atoms: int
    ring_count: int
    aromatic_fraction: float
    mol_weight: float

    def as_dict(self) -> dict[str, float]:
        return {
            "heavy_atoms": self.heavy_atoms,
            "ring_count": self.ring_count,
            "aromatic_fraction": self.aromatic_fraction,
            "mol_weight": self.mol_weight,
        }


def implicit_hydrogens(g: MolGraph, i: int) -> int:
    """Hydrogens implied by the SMILES default-valence rule.

    Bracket atoms carry their count explicitly; dummies carry none. An
    aromatic atom contributes one extra valence and only its lowest default
    valence is considered.
    """
    atom = g.atoms[i]
    if atom.explicit_h is not None:
        return atom.explicit_h
    valences = _VALENCES.get(atom.element)
    if valences is None:
        return 0
    used = sum(_BOND_VALENCE[g.bonds[k].order] for _, k in g.adjacency[i])
    if atom.aromatic:
        return max(0, valences[0] - used - 1)
    for v in valences:
        if v >= used:
            return v - used
    return 0


def descriptors(g: MolGraph) -> Descriptors:
    g = aromatize(g)
    heavy = 0
    aromatic = 0
    weight = 0.0
    for i, atom in enumerate(g.atoms):
        weight += ATOMIC_MASS[atom.element] + ATOMIC_MASS["H"] * implicit_hydrogens(g, i)
        if atom.is_heavy:
            heavy += 1
            if atom.aromatic:
                aromatic += 1
    return Descriptors(
        heavy_atoms=heavy,
        ring_count=g.ring_count,
        aromatic_fraction=aromatic / heavy if heavy else 0.0,
        mol_weight=weight,
    )
