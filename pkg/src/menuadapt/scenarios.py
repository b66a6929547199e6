"""Scenario bundles: a menu, a leaf distribution and named cost settings."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .adaptation import DEFAULT_MODE, BenefitMode
from .errors import BundleNotFoundError, BundleSchemaError, ValidationError
from .menu import MenuTree, TargetDistribution, build_tree, make_distribution
from .simulation import CostParams

# Scenario 3 is only described qualitatively (expensive inspection, equal
# select and correct costs), so it ships as a grid rather than one point.
SCENARIO3_T_INSPECT = (500.0, 1000.0, 1500.0, 2000.0, 2500.0, 3000.0)
SCENARIO3_T_SELECT_CORRECT = (500.0, 1000.0, 1500.0)

BUNDLED = ("walkthrough.json",)


@dataclass(frozen=True)
class Scenario:
    name: str
    costs: CostParams
    mode: BenefitMode = DEFAULT_MODE
    notes: str | None = None


@dataclass(frozen=True)
class ScenarioBundle:
    menu: MenuTree
    dist: TargetDistribution
    scenarios: tuple[Scenario, ...]

    def scenario(self, name: str | None = None) -> Scenario:
        if name is None:
            return self.scenarios[0]
        for s in self.scenarios:
            if s.name == name:
                return s
        known = ", ".join(s.name for s in self.scenarios)
        raise ValidationError(f"unknown scenario {name!r} (bundle has: {known})")


def scenario3_grid() -> list[CostParams]:
    return [CostParams(ti, sc, sc) for ti in SCENARIO3_T_INSPECT for sc in SCENARIO3_T_SELECT_CORRECT]


def bundled_path(name: str = "walkthrough.json") -> Path:
    return Path(str(resources.files("menuadapt") / "data" / name))


def resolve_bundle_path(path: str | Path) -> Path:
    """Use ``path`` if it exists, else fall back to a bundled fixture of that name."""
    p = Path(path)
    if p.exists():
        return p
    if p.name in BUNDLED and len(p.parts) == 1:
        return bundled_path(p.name)
    raise BundleNotFoundError(f"bundle file not found: {path}")


def load_bundle(path: str | Path, *, renormalize: bool = False) -> ScenarioBundle:
    p = resolve_bundle_path(path)
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BundleSchemaError(f"{p}: not valid JSON ({exc})") from exc
    return parse_bundle(doc, renormalize=renormalize)


def _number(raw: Mapping[str, Any], key: str, where: str) -> float:
    value = raw.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise BundleSchemaError(f"{where}: {key!r} must be a number of milliseconds")
    return float(value)


def parse_bundle(doc: Any, *, renormalize: bool = False) -> ScenarioBundle:
    if not isinstance(doc, Mapping):
        raise BundleSchemaError("bundle must be a JSON object")
    for key in ("menu", "distribution", "scenarios"):
        if key not in doc:
            raise BundleSchemaError(f"bundle is missing {key!r}")
    unknown = set(doc) - {"menu", "distribution", "scenarios"}
    if unknown:
        raise BundleSchemaError(f"unexpected bundle keys: {sorted(unknown)}")

    tree = build_tree(doc["menu"])
    if not isinstance(doc["distribution"], Mapping):
        raise BundleSchemaError("'distribution' must map leaf labels to probabilities")
    dist = make_distribution(tree, doc["distribution"], renormalize=renormalize)

    raw_scenarios = doc["scenarios"]
    if not isinstance(raw_scenarios, list) or not raw_scenarios:
        raise BundleSchemaError("'scenarios' must be a non-empty list")
    scenarios = []
    names = set()
    for i, raw in enumerate(raw_scenarios):
        if not isinstance(raw, Mapping):
            raise BundleSchemaError(f"scenario #{i} must be an object")
        name = raw.get("name")
        if not isinstance(name, str) or not name:
            raise BundleSchemaError(f"scenario #{i} needs a non-empty 'name'")
        if name in names:
            raise BundleSchemaError(f"duplicate scenario name {name!r}")
        names.add(name)
        costs = CostParams(
            _number(raw, "t_inspect_ms", name),
            _number(raw, "t_select_ms", name),
            _number(raw, "t_correct_ms", name),
        )
        try:
            mode = BenefitMode(raw.get("benefit_mode", DEFAULT_MODE.value))
        except ValueError:
            raise BundleSchemaError(f"{name}: unknown benefit_mode {raw.get('benefit_mode')!r}") from None
        notes = raw.get("notes")
        if notes is not None and not isinstance(notes, str):
            raise BundleSchemaError(f"{name}: 'notes' must be text")
        scenarios.append(Scenario(name, costs, mode, notes))
    return ScenarioBundle(tree, dist, tuple(scenarios))


def bundle_to_document(bundle: ScenarioBundle) -> dict[str, Any]:
    scenarios = []
    for s in bundle.scenarios:
        entry: dict[str, Any] = {
            "name": s.name,
            "t_inspect_ms": s.costs.t_inspect,
            "t_select_ms": s.costs.t_select,
            "t_correct_ms": s.costs.t_correct,
            "benefit_mode": s.mode.value,
        }
        if s.notes is not None:
            entry["notes"] = s.notes
        scenarios.append(entry)
    return {
        "menu": bundle.menu.to_document(),
        "distribution": bundle.dist.by_label(),
        "scenarios": scenarios,
    }


def dump_bundle(bundle: ScenarioBundle) -> str:
    """Canonical JSON text: fixed key order, floats in shortest round-trip form."""
    return json.dumps(bundle_to_document(bundle), indent=2, ensure_ascii=False) + "\n"


def save_bundle(bundle: ScenarioBundle, path: str | Path) -> None:
    Path(path).write_text(dump_bundle(bundle), encoding="utf-8")


def load_walkthrough() -> ScenarioBundle:
    return load_bundle(bundled_path())

