"""Utility of each candidate starting item and the policies that pick one.

Utility is expected interaction time minus a probability-weighted benefit of
skipping the path from the root to the candidate; lower is better.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .menu import MenuTree, TargetDistribution
from .simulation import CostParams, interaction_cost, search_cost_from_root, simulate_trace, trace_cost

TIE_TOLERANCE = 1e-9


class BenefitMode(str, Enum):
    """How often the candidate's mass multiplies the root-path cost.

    ``literal`` subtracts ``p_k * (p_k * T(root, k))``; ``single-p`` subtracts
    ``p_k * T(root, k)`` once.
    """

    LITERAL = "literal"
    SINGLE_P = "single-p"


DEFAULT_MODE = BenefitMode.SINGLE_P


@dataclass(frozen=True)
class UtilityEntry:
    node: int
    expected_cost: float
    benefit: float
    utility: float


@dataclass(frozen=True)
class UtilityTable:
    tree: MenuTree
    dist: TargetDistribution
    costs: CostParams
    mode: BenefitMode
    entries: Mapping[int, UtilityEntry] = field(repr=False)

    def __iter__(self):
        # pre-order regardless of how the mapping was assembled
        return (self.entries[k] for k in sorted(self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, node) -> UtilityEntry:
        return self.entries[self.tree.resolve(node)]

    def utilities(self) -> dict[str, float]:
        return {self.tree.label(e.node): e.utility for e in self}


@dataclass(frozen=True)
class AdaptationResult:
    selected: int
    utility: float
    tie_broken: bool
    runner_up: tuple[int, float] | None


def expected_selection_time(tree: MenuTree, costs: CostParams, dist: TargetDistribution, adaptation) -> float:
    """Probability-weighted interaction time when the interface opens at ``adaptation``."""
    k = tree.resolve(adaptation)
    return math.fsum(p * interaction_cost(tree, costs, k, leaf) for leaf, p in dist.items() if p > 0)


def benefit(tree: MenuTree, costs: CostParams, dist: TargetDistribution, k) -> float:
    """Subtree mass of ``k`` times the search time from the root down to ``k``."""
    k = tree.resolve(k)
    return dist.mass_of(k) * search_cost_from_root(tree, costs, k)


def _utility_entry(tree, costs, dist, k: int, mode: BenefitMode) -> UtilityEntry:
    expected = expected_selection_time(tree, costs, dist, k)
    gain = benefit(tree, costs, dist, k)
    if BenefitMode(mode) is BenefitMode.LITERAL:
        utility = expected - dist.mass_of(k) * gain
    else:
        utility = expected - gain
    return UtilityEntry(k, expected, gain, utility)


def utility(tree: MenuTree, costs: CostParams, dist: TargetDistribution, k, mode=DEFAULT_MODE) -> float:
    return _utility_entry(tree, costs, dist, tree.resolve(k), BenefitMode(mode)).utility


def utility_table(
    tree: MenuTree,
    costs: CostParams,
    dist: TargetDistribution,
    mode=DEFAULT_MODE,
    order: Iterable[int] | None = None,
) -> UtilityTable:
    """Evaluate every node as a candidate.

    ``order`` only changes the evaluation order; the result is identical.
    """
    mode = BenefitMode(mode)
    nodes = range(len(tree)) if order is None else order
    entries = {k: _utility_entry(tree, costs, dist, k, mode) for k in nodes}
    return UtilityTable(tree, dist, costs, mode, entries)


def select_adaptation(table: UtilityTable, tolerance: float = TIE_TOLERANCE) -> AdaptationResult:
    """Argmin utility; near-ties go to the shallower, then earlier, node."""
    if not table.entries:
        raise ValueError("cannot select from an empty utility table")
    tree = table.tree
    ranked = sorted(table.entries.values(), key=lambda e: (e.utility, tree.depth(e.node), e.node))
    best_value = ranked[0].utility
    tied = [e for e in ranked if e.utility - best_value <= tolerance]
    chosen = min(tied, key=lambda e: (tree.depth(e.node), e.node))
    others = [e for e in ranked if e.node != chosen.node]
    runner = (others[0].node, others[0].utility) if others else None
    return AdaptationResult(chosen.node, chosen.utility, len(tied) > 1, runner)


def optimal_adaptation(tree, costs, dist, mode=DEFAULT_MODE) -> AdaptationResult:
    return select_adaptation(utility_table(tree, costs, dist, mode))


def greedy_adaptation(tree: MenuTree, dist: TargetDistribution) -> int:
    """Leaf with the highest probability, earliest in pre-order on ties."""
    best = None
    for leaf in tree.leaves:
        if best is None or dist[leaf] > dist[best]:
            best = leaf
    return best


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std: float
    samples: int

    @property
    def standard_error(self) -> float:
        return self.std / math.sqrt(self.samples)


def monte_carlo_estimate(
    tree: MenuTree,
    costs: CostParams,
    dist: TargetDistribution,
    adaptation,
    samples: int,
    seed: int,
) -> MonteCarloEstimate:
    """Sample targets from ``dist`` and average the simulated trace costs."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    start = tree.resolve(adaptation)
    leaves = np.array(tree.leaves)
    probs = np.array([dist[leaf] for leaf in tree.leaves], dtype=float)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    drawn = rng.choice(len(leaves), size=samples, p=probs)
    # the simulated user is deterministic, so one trace per distinct target suffices
    per_target = np.array(
        [trace_cost(simulate_trace(tree, costs, start, int(leaf))) for leaf in leaves]
    )
    values = per_target[drawn]
    std = float(values.std(ddof=1)) if samples > 1 else 0.0
    return MonteCarloEstimate(float(values.mean()), std, samples)


def monte_carlo_expected_time(tree, costs, dist, adaptation, samples: int, seed: int) -> float:
    return monte_carlo_estimate(tree, costs, dist, adaptation, samples, seed).mean


TABLE_HEADER = "node,depth,p,expected_cost_ms,benefit_ms,utility_ms,selected"


def table_to_csv(table: UtilityTable, selected: int | None = None) -> str:
    if selected is None:
        selected = select_adaptation(table).selected
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_HEADER.split(","))
    tree = table.tree
    for e in table:
        writer.writerow(
            [
                tree.label(e.node),
                tree.depth(e.node),
                f"{table.dist.mass_of(e.node):.6f}",
                f"{e.expected_cost:.3f}",
                f"{e.benefit:.3f}",
                f"{e.utility:.3f}",
                int(e.node == selected),
            ]
        )
    return buf.getvalue()
