"""Core molecular graph types and ring perception."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

ORGANIC_SUBSET = frozenset({"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"})
AROMATIC_ELEMENTS = frozenset({"B", "C", "N", "O", "P", "S"})
SUPPORTED_ELEMENTS = ORGANIC_SUBSET | {"H", "*"}

ATOMIC_NUMBER = {
    "*": 0, "H": 1, "B": 5, "C": 6, "N": 7, "O": 8, "F": 9,
    "P": 15, "S": 16, "Cl": 17, "Br": 35, "I": 53,
}


class BondOrder(IntEnum):
    SINGLE = 1
    DOUBLE = 2
    TRIPLE = 3
    AROMATIC = 4

    @property
    def symbol(self) -> str:
        return _BOND_SYMBOLS[self]

    @classmethod
    def from_symbol(cls, symbol: str) -> BondOrder:
        return _SYMBOL_ORDERS[symbol]


_BOND_SYMBOLS = {
    BondOrder.SINGLE: "-",
    BondOrder.DOUBLE: "=",
    BondOrder.TRIPLE: "#",
    BondOrder.AROMATIC: ":",
}
_SYMBOL_ORDERS = {
    "-": BondOrder.SINGLE,
    "/": BondOrder.SINGLE,
    "\\": BondOrder.SINGLE,
    "=": BondOrder.DOUBLE,
    "#": BondOrder.TRIPLE,
    ":": BondOrder.AROMATIC,
}


@dataclass(slots=True)
class Atom:
    """One atom. For ``element == "*"`` the isotope slot holds the attachment ID."""

    element: str
    aromatic: bool = False
    charge: int = 0
    isotope: int | None = None
    explicit_h: int | None = None
    chirality: str | None = None
    in_ring: bool = False

    @property
    def is_dummy(self) -> bool:
        return self.element == "*"

    @property
    def attach_id(self) -> int | None:
        return self.isotope if self.element == "*" else None

    @property
    def is_heavy(self) -> bool:
        return self.element not in ("H", "*")

    def copy(self) -> Atom:
        return Atom(self.element, self.aromatic, self.charge, self.isotope,
                    self.explicit_h, self.chirality, self.in_ring)


@dataclass(slots=True)
class Bond:
    """A bond between atoms ``a`` and ``b``.

    ``stereo`` is a ``/`` or ``\\`` mark read in the a -> b direction.
    """

    a: int
    b: int
    order: BondOrder = BondOrder.SINGLE
    stereo: str | None = None
    in_ring: bool = False

    @property
    def endpoints(self) -> frozenset[int]:
        return frozenset((self.a, self.b))

    def other(self, atom: int) -> int:
        return self.b if atom == self.a else self.a

    def copy(self) -> Bond:
        return Bond(self.a, self.b, self.order, self.stereo, self.in_ring)


@dataclass(eq=False)
class MolGraph:
    """Attributed molecular graph.

    Construction validates bond endpoints and perceives ring membership
    (a bond is a ring bond iff it is not a bridge). ``atoms`` and ``bonds``
    are owned by the graph; build a new graph rather than mutating them.
    """

    atoms: list[Atom]
    bonds: list[Bond]
    components: int = field(init=False, default=0)
    # adjacency: per atom, list of (neighbor, bond index)
    adjacency: list[list[tuple[int, int]]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.atoms)
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for i, bond in enumerate(self.bonds):
            a, b = bond.a, bond.b
            if a == b or not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"invalid bond endpoints ({a}, {b})")
            key = (a, b) if a < b else (b, a)
            if key in seen:
                raise ValueError(f"duplicate bond between {a} and {b}")
            seen.add(key)
            adj[a].append((b, i))
            adj[b].append((a, i))
        self.adjacency = adj
        self._perceive_rings()

    def __len__(self) -> int:
        return len(self.atoms)

    def neighbors(self, atom: int) -> list[int]:
        return [j for j, _ in self.adjacency[atom]]

    def degree(self, atom: int) -> int:
        return len(self.adjacency[atom])

    def bond_between(self, a: int, b: int) -> Bond | None:
        for j, k in self.adjacency[a]:
            if j == b:
                return self.bonds[k]
        return None

    @property
    def ring_count(self) -> int:
        return len(self.bonds) - len(self.atoms) + self.components

    def component_labels(self) -> list[int]:
        labels = [-1] * len(self.atoms)
        current = 0
        for start in range(len(self.atoms)):
            if labels[start] >= 0:
                continue
            labels[start] = current
            stack = [start]
            while stack:
                u = stack.pop()
                for v, _ in self.adjacency[u]:
                    if labels[v] < 0:
                        labels[v] = current
                        stack.append(v)
            current += 1
        return labels

    def copy(self) -> MolGraph:
        return MolGraph([a.copy() for a in self.atoms], [b.copy() for b in self.bonds])

    def permuted(self, order: list[int]) -> MolGraph:
        """Return a copy whose atom ``i`` is this graph's atom ``order[i]``."""
        if sorted(order) != list(range(len(self.atoms))):
            raise ValueError("order must be a permutation of atom indices")
        new_index = [0] * len(order)
        for new, old in enumerate(order):
            new_index[old] = new
        atoms = [self.atoms[old].copy() for old in order]
        bonds = []
        for bond in self.bonds:
            b = bond.copy()
            b.a, b.b = new_index[bond.a], new_index[bond.b]
            bonds.append(b)
        return MolGraph(atoms, bonds)

    def _perceive_rings(self) -> None:
        n = len(self.atoms)
        adj = self.adjacency
        disc = [-1] * n
        low = [0] * n
        is_bridge = [False] * len(self.bonds)
        timer = 0
        components = 0
        for root in range(n):
            if disc[root] >= 0:
                continue
            components += 1
            disc[root] = low[root] = timer
            timer += 1
            # frames: (atom, bond index used to enter, neighbor iterator position)
            stack = [(root, -1, 0)]
            while stack:
                u, via, pos = stack[-1]
                if pos < len(adj[u]):
                    stack[-1] = (u, via, pos + 1)
                    v, k = adj[u][pos]
                    if k == via:
                        continue
                    if disc[v] < 0:
                        disc[v] = low[v] = timer
                        timer += 1
                        stack.append((v, k, 0))
                    elif disc[v] < low[u]:
                        low[u] = disc[v]
                else:
                    stack.pop()
                    if stack:
                        p = stack[-1][0]
                        if low[u] < low[p]:
                            low[p] = low[u]
                        if low[u] > disc[p]:
                            is_bridge[via] = True
        self.components = components
        for atom in self.atoms:
            atom.in_ring = False
        for k, bond in enumerate(self.bonds):
            ring = not is_bridge[k]
            bond.in_ring = ring
            if ring:
                self.atoms[bond.a].in_ring = True
                self.atoms[bond.b].in_ring = True
