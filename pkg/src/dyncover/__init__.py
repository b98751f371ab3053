"""Fully dynamic clustering and diversity maximization on an augmented cover tree."""

from .coreset import (
    MisCoreset,
    WeightedCoreset,
    coreset_level,
    kcenter_coreset,
    mis_coreset,
    outliers_coreset,
)
from .covertree import (
    CoverTree,
    TreeNode,
    ValidationReport,
    extract_level,
    level_size_profile,
    new_tree,
    validate_invariants,
)
from .estimators import DynamicDiversity, DynamicKCenter, DynamicMatroidCenter, DynamicRobustKCenter
from .matroid import (
    MatroidOracle,
    NullMatroid,
    PartitionMatroid,
    UniformMatroid,
    matroid_intersection,
    merge_maximal,
    parse_matroid_config,
)
from .metric import Metric, PointRecord, dataset_stats, dist, dist_to_set, radius_of
from .solvers import (
    Solution,
    diversity_query,
    gonzalez,
    kcenter_query,
    matroid_center_query,
    outliers_cluster,
    robust_query,
)

__version__ = "0.1.0"

__all__ = [
    "CoverTree",
    "DynamicDiversity",
    "DynamicKCenter",
    "DynamicMatroidCenter",
    "DynamicRobustKCenter",
    "MatroidOracle",
    "Metric",
    "MisCoreset",
    "NullMatroid",
    "PartitionMatroid",
    "PointRecord",
    "Solution",
    "TreeNode",
    "UniformMatroid",
    "ValidationReport",
    "WeightedCoreset",
    "coreset_level",
    "dataset_stats",
    "dist",
    "dist_to_set",
    "diversity_query",
    "extract_level",
    "gonzalez",
    "kcenter_coreset",
    "kcenter_query",
    "level_size_profile",
    "matroid_center_query",
    "matroid_intersection",
    "merge_maximal",
    "mis_coreset",
    "new_tree",
    "outliers_cluster",
    "outliers_coreset",
    "parse_matroid_config",
    "radius_of",
    "robust_query",
    "validate_invariants",
]
