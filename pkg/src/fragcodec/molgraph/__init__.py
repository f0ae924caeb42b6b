"""Molecular graphs and the SMILES subset used by every codec."""

from fragcodec.molgraph.canon import aromatize, canonical_ranks, canonical_smiles
from fragcodec.molgraph.graph import Atom, Bond, BondOrder, MolGraph
from fragcodec.molgraph.parse import parse_smiles
from fragcodec.molgraph.props import Descriptors, descriptors, implicit_hydrogens
from fragcodec.molgraph.tokens import DIALECTS, Token, tokenize
from fragcodec.molgraph.write import write_smiles

__all__ = [
    "Atom", "Bond", "BondOrder", "DIALECTS", "Descriptors", "MolGraph", "Token",
    "aromatize", "canonical_ranks", "canonical_smiles", "descriptors",
    "implicit_hydrogens", "parse_smiles", "tokenize", "write_smiles",
]
