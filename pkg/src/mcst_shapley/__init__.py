"""Shapley values of minimum cost spanning tree games and their saving games."""

from mcst_shapley.game import (
    EliminationResult,
    GameKind,
    cost_value,
    eliminate_null_players,
    is_dummy_player_cost,
    is_non_null_simple,
    is_null_player,
    saving_value,
)
from mcst_shapley.graph import (
    Binary,
    InstanceParseError,
    RootedWeightedGraph,
    ThresholdDecomposition,
    UniformInt,
    level_graph,
    parse_instance,
    random_instance,
    serialize_instance,
    threshold_decompose,
)
from mcst_shapley.mst import (
    TreeState,
    cost_profiles,
    extend,
    mst_cost,
    new_tree_state,
    permutation_cost_profile,
)
from mcst_shapley.shapley import (
    BudgetExceeded,
    EstimateReport,
    ShapleyVector,
    cost_estimates_from_saving,
    exact_shapley_permutations,
    exact_shapley_subsets,
    monte_carlo_shapley,
    required_samples,
)

__version__ = "0.1.0"
