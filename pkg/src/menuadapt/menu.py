"""Hierarchical menu tree and the structural queries the simulator relies on.

Nodes are identified by integer ids assigned in pre-order, so ``0`` is always
the root and a parent's id is always smaller than its children's ids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .errors import (
    DistributionError,
    DistributionKeyError,
    DistributionSumError,
    MenuValidationError,
    UnknownNodeError,
)

SUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class MenuNode:
    id: int
    label: str
    parent: int | None
    children: tuple[int, ...]
    depth: int

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def kind(self) -> str:
        return "leaf" if self.is_leaf else "internal"


class MenuTree:
    """Immutable ordered rooted tree of menu items."""

    root = 0

    def __init__(self, nodes: Sequence[MenuNode]):
        self.nodes: tuple[MenuNode, ...] = tuple(nodes)
        self._by_label = {n.label: n.id for n in self.nodes}
        self._position = {}
        for n in self.nodes:
            for pos, c in enumerate(n.children, start=1):
                self._position[c] = pos
        self.leaves: tuple[int, ...] = tuple(n.id for n in self.nodes if n.is_leaf)

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[MenuNode]:
        return iter(self.nodes)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MenuTree) and self.nodes == other.nodes

    def __hash__(self) -> int:
        return hash(self.nodes)

    def __repr__(self) -> str:
        return f"MenuTree(root={self.label(0)!r}, nodes={len(self)})"

    def node(self, key: int | str) -> MenuNode:
        return self.nodes[self.resolve(key)]

    def resolve(self, key: int | str) -> int:
        """Accept a node id or a label and return the node id."""
        if type(key) is int and 0 <= key < len(self.nodes):
            return key
        if isinstance(key, str):
            try:
                return self._by_label[key]
            except KeyError:
                raise UnknownNodeError(key) from None
        if isinstance(key, bool) or not isinstance(key, int) or not 0 <= key < len(self.nodes):
            raise UnknownNodeError(key)
        return key

    def label(self, node_id: int) -> str:
        return self.nodes[self.resolve(node_id)].label

    def parent(self, node_id: int) -> int | None:
        return self.nodes[node_id].parent

    def children(self, node_id: int) -> tuple[int, ...]:
        return self.nodes[node_id].children

    def depth(self, node_id: int) -> int:
        return self.nodes[node_id].depth

    def is_leaf(self, node_id: int) -> bool:
        return not self.nodes[node_id].children

    def position(self, node_id: int) -> int:
        """1-based display position of a node within its parent menu."""
        if node_id == self.root:
            raise MenuValidationError("the root has no position", self.label(node_id))
        return self._position[node_id]

    def ancestors(self, node_id: int) -> list[int]:
        """Ancestor-or-self chain from ``node_id`` up to the root."""
        chain = [node_id]
        while (p := self.nodes[chain[-1]].parent) is not None:
            chain.append(p)
        return chain

    def path_from_root(self, node_id: int) -> list[int]:
        return self.ancestors(node_id)[::-1]

    def subtree(self, node_id: int) -> list[int]:
        out, stack = [], [node_id]
        while stack:
            n = stack.pop()
            out.append(n)
            stack.extend(reversed(self.nodes[n].children))
        return out

    def is_ancestor_or_self(self, a: int, b: int) -> bool:
        """True when ``a`` lies on the root path of ``b``."""
        da = self.nodes[a].depth
        while self.nodes[b].depth > da:
            b = self.nodes[b].parent
        return a == b

    def to_document(self, node_id: int = 0) -> dict[str, Any]:
        node = self.nodes[node_id]
        doc: dict[str, Any] = {"label": node.label}
        if node.children:
            doc["children"] = [self.to_document(c) for c in node.children]
        return doc


def build_tree(spec: Mapping[str, Any] | Sequence[Mapping[str, Any]]) -> MenuTree:
    """Build a validated tree from a menu definition.

    ``spec`` is either the nested form ``{"label": ..., "children": [...]}`` or
    a flat list of ``{"label": ..., "parent": label-or-null}`` records whose
    order gives the display order of siblings.
    """
    if isinstance(spec, Mapping):
        return _build_nested(spec)
    if isinstance(spec, Sequence) and not isinstance(spec, (str, bytes)):
        return _build_flat(spec)
    raise MenuValidationError(f"menu definition must be an object or a list, got {type(spec).__name__}")


def _build_nested(spec: Mapping[str, Any]) -> MenuTree:
    nodes: list[dict[str, Any]] = []
    seen: set[str] = set()
    # explicit stack: (document, parent id, depth)
    stack: list[tuple[Any, int | None, int]] = [(spec, None, 0)]
    while stack:
        doc, parent, depth = stack.pop()
        if not isinstance(doc, Mapping):
            raise MenuValidationError(f"menu node must be an object, got {doc!r}")
        label = _check_label(doc.get("label"), seen)
        children = doc.get("children")
        if children is None:
            children = []
        if not isinstance(children, list):
            raise MenuValidationError(f"children of {label!r} must be a list", label)
        nid = len(nodes)
        nodes.append({"label": label, "parent": parent, "children": [], "depth": depth})
        if parent is not None:
            nodes[parent]["children"].append(nid)
        for child in reversed(children):
            stack.append((child, nid, depth + 1))
    return _freeze(nodes)


def _build_flat(records: Sequence[Mapping[str, Any]]) -> MenuTree:
    seen: set[str] = set()
    order: list[str] = []
    parent_of: dict[str, str | None] = {}
    for rec in records:
        if not isinstance(rec, Mapping):
            raise MenuValidationError(f"menu record must be an object, got {rec!r}")
        label = _check_label(rec.get("label"), seen)
        parent = rec.get("parent")
        if parent is not None and not isinstance(parent, str):
            raise MenuValidationError(f"parent of {label!r} must be a label or null", label)
        order.append(label)
        parent_of[label] = parent
    roots = [lab for lab in order if parent_of[lab] is None]
    if not roots:
        raise MenuValidationError("menu has no root (every record names a parent)")
    if len(roots) > 1:
        raise MenuValidationError(f"menu has multiple roots: {roots}", roots[1])
    for lab, par in parent_of.items():
        if par is not None and par not in parent_of:
            raise MenuValidationError(f"{lab!r} names unknown parent {par!r}", lab)
    kids: dict[str, list[str]] = {lab: [] for lab in order}
    for lab in order:
        if parent_of[lab] is not None:
            kids[parent_of[lab]].append(lab)

    nested_seen: set[str] = set()

    def nest(label: str) -> dict[str, Any]:
        nested_seen.add(label)
        return {"label": label, "children": [nest(c) for c in kids[label]]}

    doc = nest(roots[0])
    if len(nested_seen) != len(order):
        # unreachable records can only hang off a parent cycle
        stray = next(lab for lab in order if lab not in nested_seen)
        raise MenuValidationError(f"cycle in parent links involving {stray!r}", stray)
    return _build_nested(doc)


def _check_label(label: Any, seen: set[str]) -> str:
    if not isinstance(label, str) or not label:
        raise MenuValidationError(f"menu label must be a non-empty string, got {label!r}")
    if label in seen:
        raise MenuValidationError(f"duplicate menu label {label!r}", label)
    seen.add(label)
    return label


def _freeze(raw: list[dict[str, Any]]) -> MenuTree:
    return MenuTree(
        MenuNode(
            id=i,
            label=r["label"],
            parent=r["parent"],
            children=tuple(r["children"]),
            depth=r["depth"],
        )
        for i, r in enumerate(raw)
    )


def lca(tree: MenuTree, a: int | str, b: int | str) -> int:
    """Deepest node that is an ancestor-or-self of both ``a`` and ``b``."""
    a, b = tree.resolve(a), tree.resolve(b)
    nodes = tree.nodes
    while nodes[a].depth > nodes[b].depth:
        a = nodes[a].parent
    while nodes[b].depth > nodes[a].depth:
        b = nodes[b].parent
    while a != b:
        a, b = nodes[a].parent, nodes[b].parent
    return a


def child_position(tree: MenuTree, parent: int | str, child: int | str) -> int:
    parent, child = tree.resolve(parent), tree.resolve(child)
    if tree.parent(child) != parent:
        raise MenuValidationError(
            f"{tree.label(child)!r} is not a child of {tree.label(parent)!r}", tree.label(child)
        )
    return tree.position(child)


class TargetDistribution(Mapping[int, float]):
    """Probability over the leaves of one tree, keyed by leaf id.

    Internal nodes get the summed mass of the leaves beneath them.
    """

    def __init__(self, tree: MenuTree, mass: Mapping[int, float]):
        self.tree = tree
        self._mass = MappingProxyType({leaf: float(mass.get(leaf, 0.0)) for leaf in tree.leaves})
        sub = [0.0] * len(tree)
        # children always carry larger ids than their parent
        for n in reversed(tree.nodes):
            if n.is_leaf:
                sub[n.id] = self._mass[n.id]
            else:
                sub[n.id] = math.fsum(sub[c] for c in n.children)
        self._subtree = tuple(sub)

    def __getitem__(self, leaf: int) -> float:
        return self._mass[leaf]

    def __iter__(self) -> Iterator[int]:
        return iter(self._mass)

    def __len__(self) -> int:
        return len(self._mass)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TargetDistribution):
            return NotImplemented
        return self.tree == other.tree and dict(self._mass) == dict(other._mass)

    def __repr__(self) -> str:
        inner = ", ".join(f"{self.tree.label(k)}: {v:g}" for k, v in self._mass.items())
        return f"TargetDistribution({{{inner}}})"

    def mass_of(self, node_id: int) -> float:
        return self._subtree[node_id]

    def total(self) -> float:
        return self._subtree[self.tree.root]

    def by_label(self) -> dict[str, float]:
        return {self.tree.label(k): v for k, v in self._mass.items()}


def make_distribution(
    tree: MenuTree,
    probabilities: Mapping[str | int, float],
    *,
    renormalize: bool = False,
    tolerance: float = SUM_TOLERANCE,
) -> TargetDistribution:
    """Validate leaf probabilities (keyed by label or id) against ``tree``.

    Leaves without an entry get zero mass. The total must be within
    ``tolerance`` of 1 unless ``renormalize`` is set.
    """
    mass: dict[int, float] = {}
    for key, value in probabilities.items():
        try:
            nid = tree.resolve(key)
        except KeyError:
            raise DistributionKeyError(str(key), "does not name a menu item") from None
        if not tree.is_leaf(nid):
            raise DistributionKeyError(tree.label(nid), "is a sub-menu, not a leaf")
        if nid in mass:
            raise DistributionKeyError(tree.label(nid), "appears more than once")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DistributionError(f"probability of {tree.label(nid)!r} must be a number")
        p = float(value)
        if not math.isfinite(p) or p < 0.0 or p > 1.0 + tolerance:
            raise DistributionError(f"probability of {tree.label(nid)!r} out of range: {p!r}")
        mass[nid] = p
    total = math.fsum(mass.values())
    if renormalize:
        if total <= 0.0:
            raise DistributionSumError(total, tolerance)
        mass = {k: v / total for k, v in mass.items()}
    elif abs(total - 1.0) > tolerance:
        raise DistributionSumError(total, tolerance)
    return TargetDistribution(tree, mass)


def subtree_mass(tree: MenuTree, dist: TargetDistribution, k: int | str) -> float:
    return dist.mass_of(tree.resolve(k))


def leaf_labels(tree: MenuTree) -> list[str]:
    return [tree.label(i) for i in tree.leaves]


def iter_pairs(tree: MenuTree) -> Iterable[tuple[int, int]]:
    """Every (start node, target leaf) pair, start in pre-order."""
    for start in range(len(tree)):
        for target in tree.leaves:
            yield start, target
