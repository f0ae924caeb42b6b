"""SMILES writer: DFS emission driven by an atom ranking."""

from __future__ import annotations

from fragcodec.errors import ClosureNumberExhausted
from fragcodec.molgraph.graph import ORGANIC_SUBSET, BondOrder, MolGraph

MAX_CLOSURE = 99


def closure_label(number: int) -> str:
    if number < 1 or number > MAX_CLOSURE:
        raise ClosureNumberExhausted(f"ring-closure number {number} outside 1..{MAX_CLOSURE}")
    return str(number) if number < 10 else f"%{number}"


def atom_symbol(atom, stereo: bool = True) -> str:
    chirality = atom.chirality if stereo else None
    element = atom.element
    symbol = element.lower() if atom.aromatic else element
    if atom.charge == 0 and atom.isotope is None and atom.explicit_h is None and chirality is None:
        if element == "*" or element in ORGANIC_SUBSET:
            return symbol
    parts = ["["]
    if atom.isotope is not None:
        parts.append(str(atom.isotope))
    parts.append(symbol)
    if chirality:
        parts.append(chirality)
    if atom.explicit_h:
        parts.append("H" if atom.explicit_h == 1 else f"H{atom.explicit_h}")
    if atom.charge:
        sign = "+" if atom.charge > 0 else "-"
        parts.append(sign if abs(atom.charge) == 1 else f"{sign}{abs(atom.charge)}")
    parts.append("]")
    return "".join(parts)


def bond_symbol(g: MolGraph, k: int, start: int, stereo: bool = True) -> str:
    """Symbol for bond ``k`` written from atom ``start`` towards its partner."""
    bond = g.bonds[k]
    order = bond.order
    if order == BondOrder.SINGLE:
        if stereo and bond.stereo:
            if start == bond.a:
                return bond.stereo
            return "\\" if bond.stereo == "/" else "/"
        if g.atoms[bond.a].aromatic and g.atoms[bond.b].aromatic:
            return "-"
        return ""
    if order == BondOrder.AROMATIC:
        if g.atoms[bond.a].aromatic and g.atoms[bond.b].aromatic:
            return ""
        return ":"
    return order.symbol


def write_smiles(g: MolGraph, start_ranks: list[int] | None = None, stereo: bool = True) -> str:
    """Write ``g`` as SMILES.

    ``start_ranks`` orders atoms: each component starts at its lowest-ranked
    atom and branches are visited in ascending rank. Defaults to input order.
    Ring-closure numbers are the smallest free at emission time.
    """
    ranks = start_ranks if start_ranks is not None else list(range(len(g.atoms)))
    return write_ranked(g, ranks, stereo=stereo)[0]


def write_ranked(
    g: MolGraph,
    ranks: list[int],
    *,
    stereo: bool = True,
    start: int | None = None,
    hidden: frozenset[int] | set[int] = frozenset(),
    labels: dict[int, list[str]] | None = None,
) -> tuple[str, list[int], set[int]]:
    """Core writer.

    Returns ``(text, emission_order, ring_numbers_used)``. Atoms in
    ``hidden`` are skipped entirely; ``labels`` maps an atom to extra
    pre-rendered closure labels emitted after its own ring closures.
    """
    n = len(g.atoms)
    adjacency = g.adjacency
    nbrs = [
        sorted((ranks[v], v, k) for v, k in adjacency[u] if v not in hidden)
        for u in range(n)
    ]
    visited = [False] * n
    for h in hidden:
        visited[h] = True
    emitted = [False] * n
    in_bond = [-1] * n
    children: list[list[int]] = [[] for _ in range(n)]
    closures: list[list[int]] = [[] for _ in range(n)]
    ring_seen: set[int] = set()

    starts = sorted(range(n), key=ranks.__getitem__)
    if start is not None:
        starts.insert(0, start)

    pieces: list[str] = []
    order: list[int] = []
    used: set[int] = set()
    open_numbers: dict[int, int] = {}  # bond index -> closure number
    in_use: set[int] = set()

    for root in starts:
        if visited[root]:
            continue
        if pieces:
            pieces.append(".")
        visited[root] = True
        stack = [(root, 0)]
        while stack:
            u, i = stack[-1]
            if i < len(nbrs[u]):
                stack[-1] = (u, i + 1)
                _, v, k = nbrs[u][i]
                if k == in_bond[u]:
                    continue
                if not visited[v]:
                    visited[v] = True
                    in_bond[v] = k
                    children[u].append(v)
                    stack.append((v, 0))
                elif k not in ring_seen:
                    ring_seen.add(k)
                    closures[u].append(k)
                    closures[v].append(k)
            else:
                stack.pop()

        todo: list = [root]
        while todo:
            item = todo.pop()
            if isinstance(item, str):
                pieces.append(item)
                continue
            u = item
            k = in_bond[u]
            if k >= 0:
                pieces.append(bond_symbol(g, k, g.bonds[k].other(u), stereo))
            pieces.append(atom_symbol(g.atoms[u], stereo))
            order.append(u)
            emitted[u] = True
            if closures[u]:
                freed = []
                opening = []
                for kb in closures[u]:
                    if kb in open_numbers:
                        num = open_numbers.pop(kb)
                        pieces.append(closure_label(num))
                        freed.append(num)
                    else:
                        opening.append(kb)
                for kb in opening:
                    num = 1
                    while num in in_use:
                        num += 1
                    in_use.add(num)
                    used.add(num)
                    open_numbers[kb] = num
                    pieces.append(bond_symbol(g, kb, u, stereo) + closure_label(num))
                in_use.difference_update(freed)
            if labels and u in labels:
                pieces.extend(labels[u])
            kids = children[u]
            if kids:
                todo.append(kids[-1])
                for c in reversed(kids[:-1]):
                    todo.append(")")
                    todo.append(c)
                    todo.append("(")
    return "".join(pieces), order, used
