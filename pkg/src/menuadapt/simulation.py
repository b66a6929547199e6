"""Serial-search user simulation over a menu tree.

A simulated user starts at whatever the adaptation put on screen. If that is
a leaf they look at it once; if it is the target they are done, otherwise
they press back. From a sub-menu that does not lead to the target they read
every item, then press back. Once the focused menu contains the path to the
target they read down to the relevant item and select it, repeating until
the target leaf is selected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

from .errors import ValidationError
from .menu import MenuTree, lca


@dataclass(frozen=True)
class CostParams:
    """Time cost in milliseconds of one inspection, selection and correction."""

    t_inspect: float
    t_select: float
    t_correct: float

    def __post_init__(self):
        for name in ("t_inspect", "t_select", "t_correct"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f"{name} must be a number, got {value!r}")
            if not math.isfinite(value) or value < 0:
                raise ValidationError(f"{name} must be finite and non-negative, got {value!r}")
            object.__setattr__(self, name, float(value))

    def scaled(self, factor: float) -> "CostParams":
        return CostParams(self.t_inspect * factor, self.t_select * factor, self.t_correct * factor)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.t_inspect, self.t_select, self.t_correct)


class ActionKind(str, Enum):
    INSPECT = "INSPECT"
    SELECT = "SELECT"
    CORRECT = "CORRECT"


@dataclass(frozen=True)
class ActionEvent:
    kind: ActionKind
    node: int  # inspected item, selected item, or the menu corrected from
    cost: float


@dataclass(frozen=True)
class ActionTrace:
    events: tuple[ActionEvent, ...]
    start: int
    target: int

    def count(self, kind: ActionKind) -> int:
        return sum(1 for e in self.events if e.kind is kind)


class ActionCounts(NamedTuple):
    inspect: int
    select: int
    correct: int

    def price(self, costs: CostParams) -> float:
        # correctly rounded, so it matches fsum over the equivalent event list
        return math.fsum(
            [costs.t_inspect] * self.inspect
            + [costs.t_select] * self.select
            + [costs.t_correct] * self.correct
        )


def _check_pair(tree: MenuTree, start, target) -> tuple[int, int]:
    start, target = tree.resolve(start), tree.resolve(target)
    if not tree.is_leaf(target):
        raise ValidationError(f"target {tree.label(target)!r} is a sub-menu; targets must be leaves")
    return start, target


def simulate_trace(tree: MenuTree, costs: CostParams, start, target) -> ActionTrace:
    start, target = _check_pair(tree, start, target)
    inspect, select, correct = ActionKind.INSPECT, ActionKind.SELECT, ActionKind.CORRECT
    events: list[ActionEvent] = []

    focus = start
    if tree.is_leaf(start):
        events.append(ActionEvent(inspect, start, costs.t_inspect))
        if start == target:
            return ActionTrace(tuple(events), start, target)
        events.append(ActionEvent(correct, start, costs.t_correct))
        focus = tree.parent(start)

    while not tree.is_ancestor_or_self(focus, target):
        for child in tree.children(focus):
            events.append(ActionEvent(inspect, child, costs.t_inspect))
        events.append(ActionEvent(correct, focus, costs.t_correct))
        focus = tree.parent(focus)

    path = tree.path_from_root(target)
    for step in path[tree.depth(focus) + 1 :]:
        for child in tree.children(focus)[: tree.position(step)]:
            events.append(ActionEvent(inspect, child, costs.t_inspect))
        events.append(ActionEvent(select, step, costs.t_select))
        focus = step

    return ActionTrace(tuple(events), start, target)


def trace_cost(trace: ActionTrace) -> float:
    return math.fsum(e.cost for e in trace.events)


def action_counts(tree: MenuTree, start, target) -> ActionCounts:
    """Closed-form event counts for a (start, target) pair."""
    start, target = _check_pair(tree, start, target)
    if start == target:
        return ActionCounts(1, 0, 0)
    nodes = tree.nodes
    meet = lca(tree, start, target)
    n_inspect = n_correct = 0
    focus = start
    if not nodes[start].children:
        n_inspect, n_correct = 1, 1
        focus = nodes[start].parent
    while focus != meet:
        n_inspect += len(nodes[focus].children)
        n_correct += 1
        focus = nodes[focus].parent
    node = target
    while node != meet:
        n_inspect += tree.position(node)
        node = nodes[node].parent
    return ActionCounts(n_inspect, nodes[target].depth - nodes[meet].depth, n_correct)


def interaction_cost(tree: MenuTree, costs: CostParams, start, target) -> float:
    """Total time to acquire ``target`` when the interface opens at ``start``.

    Backtracking charges one full menu scan plus a correction per level
    left; the search phase charges ``position * t_inspect + t_select`` per
    level descended.
    """
    return action_counts(tree, start, target).price(costs)


def search_cost_from_root(tree: MenuTree, costs: CostParams, node) -> float:
    """Cost of navigating root -> ``node`` by search alone, selecting ``node`` itself.

    Zero for the root. For a leaf this equals ``interaction_cost(tree, costs, root, leaf)``.
    """
    node = tree.resolve(node)
    total = 0.0
    while node != tree.root:
        total += tree.position(node) * costs.t_inspect + costs.t_select
        node = tree.parent(node)
    return total


def format_trace(tree: MenuTree, trace: ActionTrace) -> str:
    lines = [f"{e.kind.value} {tree.label(e.node)} {e.cost:.3f}" for e in trace.events]
    lines.append(f"TOTAL {trace_cost(trace):.3f}")
    return "\n".join(lines) + "\n"


def parse_trace(tree: MenuTree, text: str) -> tuple[list[tuple[ActionKind, int, float]], float]:
    """Inverse of :func:`format_trace`; returns (events, total)."""
    events: list[tuple[ActionKind, int, float]] = []
    total = None
    for line in _nonblank(text.splitlines()):
        if line.startswith("TOTAL "):
            total = float(line.split()[1])
            continue
        kind, rest = line.split(" ", 1)
        label, cost = rest.rsplit(" ", 1)
        events.append((ActionKind(kind), tree.resolve(label), float(cost)))
    if total is None:
        raise ValidationError("trace text has no TOTAL line")
    return events, total


def _nonblank(lines: Iterable[str]) -> Iterable[str]:
    return (ln for ln in lines if ln.strip())
