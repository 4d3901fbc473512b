"""Transductive graph-based active learning with hierarchical subquery search."""

from .dataset import Dataset, load_csv, save_csv, split_state
from .eer import RiskReport, expected_error, expected_risk, select_min_risk
from .graph import (
    SimilarityGraph,
    build_baseline_graph,
    build_graph,
    build_perplexity_graph,
    calibrate_gamma,
    knn_neighbors,
)
from .harmonic import (
    HarmonicModel,
    LabelState,
    add_label,
    lookahead,
    predict,
    solve_harmonic,
)
from .hierarchy import ClusterTree, TreeNode, build_hierarchy, tree_linearization
from .session import (
    ActiveSession,
    LearningCurve,
    SessionConfig,
    auc,
    next_query,
    run_simulated,
    start_session,
    submit_label,
)
from .strategies import (
    SelectionTrace,
    StrategyConfig,
    select_eer_breadth_first,
    select_eer_full,
    select_eer_random_subsample,
    select_entropy,
    select_hse,
    select_margin,
    select_random,
)

__version__ = "0.1.0"
