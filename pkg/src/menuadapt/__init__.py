"""Cost-aware adaptation of hierarchical menus via serial-search user simulation."""

from .adaptation import (
    AdaptationResult,
    BenefitMode,
    UtilityTable,
    benefit,
    expected_selection_time,
    greedy_adaptation,
    monte_carlo_expected_time,
    select_adaptation,
    utility,
    utility_table,
)
from .errors import MenuAdaptError, ValidationError
from .menu import MenuTree, TargetDistribution, build_tree, child_position, lca, make_distribution, subtree_mass
from .scenarios import Scenario, ScenarioBundle, load_bundle, load_walkthrough
from .simulation import ActionTrace, CostParams, interaction_cost, simulate_trace, trace_cost

__version__ = "0.1.0"
