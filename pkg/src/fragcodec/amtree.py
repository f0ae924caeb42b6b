"""Acyclic molecular tree (AMT), its full-binary-tree form, and BFS orders."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from fragcodec.errors import CyclicFragmentGraph, DisconnectedResult
from fragcodec.fragmenter import FragmentSet


@dataclass
class AMT:
    """Fragment tree. Nodes are fragment indices into the source FragmentSet."""

    nodes: list[int]
    root: int
    children: dict[int, list[int]]
    edge_id: dict[tuple[int, int], int]

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(self.edge_id)


@dataclass
class FBTNode:
    """Binary-tree node; ``fragment is None`` marks an empty leaf."""

    fragment: int | None
    left: FBTNode | None = None
    right: FBTNode | None = None

    @property
    def is_empty(self) -> bool:
        return self.fragment is None


@dataclass
class FBT:
    root: FBTNode
    size: int = field(default=0)


def build_amt(fs: FragmentSet, root: int | None = None) -> AMT:
    """Build the fragment tree by following attachment IDs from ``root``.

    Children of a node are ordered by where their linking dummy appears in
    the node's fragment, skipping the dummy that leads back to the parent.
    ``root`` defaults to the fragment holding source atom 0.
    """
    if root is None:
        root = fs.root_index
    # per fragment, the dummies in index order as (dummy index, attach id, partner fragment)
    links: dict[int, list[tuple[int, int, int]]] = {f: [] for f in range(len(fs.fragments))}
    for attach_id, ((f1, d1), (f2, d2)) in fs.attach_pairs.items():
        if f1 == f2:
            raise CyclicFragmentGraph(f"attachment {attach_id} joins fragment {f1} to itself")
        links[f1].append((d1, attach_id, f2))
        links[f2].append((d2, attach_id, f1))
    for f in links:
        links[f].sort()

    children: dict[int, list[int]] = {root: []}
    edge_id: dict[tuple[int, int], int] = {}
    parent_id = {root: None}
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for _, attach_id, v in links[u]:
            if attach_id == parent_id[u]:
                continue
            if v in children:
                raise CyclicFragmentGraph(f"attachment {attach_id} closes a cycle of fragments")
            children[u].append(v)
            children[v] = []
            parent_id[v] = attach_id
            edge_id[(u, v)] = attach_id
            order.append(v)
            queue.append(v)
    if len(order) != len(fs.fragments):
        raise DisconnectedResult(len(fs.fragments) - len(order) + 1)
    return AMT(nodes=sorted(order), root=root, children=children, edge_id=edge_id)


def amt_bfs(t: AMT) -> list[int]:
    out = []
    queue = deque([t.root])
    while queue:
        u = queue.popleft()
        out.append(u)
        queue.extend(t.children[u])
    return out


def amt_to_fbt(t: AMT) -> FBT:
    """Left-child/right-sibling transform padded with empty leaves."""

    def empty() -> FBTNode:
        return FBTNode(None)

    nodes = {u: FBTNode(u) for u in t.nodes}
    for u, kids in t.children.items():
        node = nodes[u]
        node.left = nodes[kids[0]] if kids else empty()
        for a, b in zip(kids, kids[1:]):
            nodes[a].right = nodes[b]
    for node in nodes.values():
        if node.left is None:
            node.left = empty()
        if node.right is None:
            node.right = empty()
    return FBT(nodes[t.root], len(nodes))


def fbt_bfs(t: FBT) -> list[int | None]:
    """Level order including empty leaves (as ``None``)."""
    out: list[int | None] = []
    queue = deque([t.root])
    while queue:
        node = queue.popleft()
        out.append(node.fragment)
        if not node.is_empty:
            queue.append(node.left)
            queue.append(node.right)
    return out
