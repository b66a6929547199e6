"""Deliberately naive re-derivation of the interaction cost, used as a cross-check.

Nothing here calls into :mod:`menuadapt.simulation`; it only reads the raw
parent/children links of the tree. Four interpretations are supported:

* ``additive`` backtracking charges ``T_correct + l * T_inspect`` per menu
  left; ``literal-multiplicative`` charges ``T_correct * (l * T_inspect)``
  exactly as the formula is typeset.
* ``dedup`` charges the scan of the common-parent menu once (under search);
  ``double-count`` also charges the backtracking scan up to the relevant
  item before the search phase re-reads that menu from the top.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Mapping, Sequence

from .menu import MenuTree, TargetDistribution


@dataclass(frozen=True)
class OracleVariant:
    backtrack_op: str = "additive"  # or "literal-multiplicative"
    boundary: str = "dedup"  # or "double-count"

    def __post_init__(self):
        if self.backtrack_op not in ("additive", "literal-multiplicative"):
            raise ValueError(f"unknown backtrack_op {self.backtrack_op!r}")
        if self.boundary not in ("dedup", "double-count"):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    @property
    def name(self) -> str:
        return f"{self.backtrack_op}/{self.boundary}"

    @property
    def canonical(self) -> bool:
        return self == CANONICAL


CANONICAL = OracleVariant("additive", "dedup")
ALL_VARIANTS = tuple(
    OracleVariant(op, b) for op in ("additive", "literal-multiplicative") for b in ("dedup", "double-count")
)


def _chain_to_root(tree: MenuTree, node: int) -> list[int]:
    chain = []
    cur = node
    while cur is not None:
        chain.append(cur)
        cur = tree.nodes[cur].parent
    return chain


def _location(tree: MenuTree, item: int) -> int:
    """1-based place of ``item`` in its parent's list, found by reading the list."""
    siblings = tree.nodes[tree.nodes[item].parent].children
    for j, sib in enumerate(siblings):
        if sib == item:
            return j + 1
    raise AssertionError("child missing from its parent's list")


def _search(tree: MenuTree, costs, items_on_path: Sequence[int]) -> float:
    # one search-and-select per level: sum_{j=1..l} T_inspect + T_select
    total = 0.0
    for item in items_on_path:
        l = _location(tree, item)
        total += l * costs.t_inspect + costs.t_select
    return total


def _backtrack_term(costs, l: int, variant: OracleVariant) -> float:
    scan = l * costs.t_inspect
    if variant.backtrack_op == "additive":
        return costs.t_correct + scan
    return costs.t_correct * scan


def naive_cost(tree: MenuTree, costs, start, target, variant: OracleVariant = CANONICAL) -> float:
    start, target = tree.resolve(start), tree.resolve(target)
    if tree.nodes[target].children:
        raise ValueError("target must be a leaf")
    if start == target:
        return costs.t_inspect

    target_chain = _chain_to_root(tree, target)
    start_chain = _chain_to_root(tree, start)
    on_target_path = set(target_chain)
    common = next(n for n in start_chain if n in on_target_path)

    backtrack = 0.0
    left = start_chain[: start_chain.index(common)]  # menus abandoned, start first
    for menu in left:
        kids = tree.nodes[menu].children
        # a leaf shows only itself
        l = len(kids) if kids else 1
        backtrack += _backtrack_term(costs, l, variant)

    below_common = target_chain[: target_chain.index(common)][::-1]
    if left and variant.boundary == "double-count":
        backtrack += _location(tree, below_common[0]) * costs.t_inspect

    return backtrack + _search(tree, costs, below_common)


@dataclass(frozen=True)
class VariantRow:
    variant: OracleVariant
    scenario: str
    selected: str
    max_abs_dev_ms: float


def variant_selection(tree: MenuTree, costs, dist: TargetDistribution, variant: OracleVariant, mode: str = "single-p") -> int:
    """Argmin of the utility when every interaction cost comes from ``variant``."""
    root = tree.root

    def root_path(k: int) -> float:
        if k == root:
            return 0.0
        return _search(tree, costs, _chain_to_root(tree, k)[:-1][::-1])

    best_key, best = None, None
    for k in range(len(tree)):
        mass = sum(dist[leaf] for leaf in tree.leaves if k in _chain_to_root(tree, leaf))
        expected = sum(p * naive_cost(tree, costs, k, leaf, variant) for leaf, p in dist.items() if p > 0)
        gain = mass * root_path(k)
        u = expected - (mass * gain if mode == "literal" else gain)
        key = (u, len(_chain_to_root(tree, k)), k)
        if best_key is None or key < best_key:
            best_key, best = key, k
    return best


def variant_report(
    tree: MenuTree,
    scenarios: Mapping[str, object],
    dist: TargetDistribution,
    mode: str = "single-p",
) -> list[VariantRow]:
    """Winner and worst per-pair deviation from canonical, per variant and scenario.

    ``scenarios`` maps a scenario name to its cost parameters.
    """
    rows = []
    for name, costs in scenarios.items():
        canon = {
            (s, t): naive_cost(tree, costs, s, t, CANONICAL) for s in range(len(tree)) for t in tree.leaves
        }
        for variant in ALL_VARIANTS:
            dev = max(
                (abs(naive_cost(tree, costs, s, t, variant) - c) for (s, t), c in canon.items()),
                default=0.0,
            )
            winner = variant_selection(tree, costs, dist, variant, mode)
            rows.append(VariantRow(variant, name, tree.label(winner), dev))
    return rows


def report_to_csv(rows: Sequence[VariantRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["variant", "scenario", "selected", "max_abs_dev_ms"])
    for r in rows:
        name = r.variant.name + (" (canonical)" if r.variant.canonical else "")
        w.writerow([name, r.scenario, r.selected, f"{r.max_abs_dev_ms:.3f}"])
    return buf.getvalue()
