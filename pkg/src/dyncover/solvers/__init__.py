from .diversity import (
    APPROX_FACTOR,
    MEASURES,
    diversity_query,
    diversity_value,
    mst_weight,
    remote_clique_greedy,
    tour_weight_2approx,
)
from .kcenter import default_ensemble_size, farthest_point_order, gonzalez, kcenter_query
from .matroid_center import matroid_center_query, solve_matroid_center
from .robust import (
    OutliersClusterResult,
    outliers_cluster,
    robust_from_coreset,
    robust_query,
    robust_radius,
)
from .solution import Solution

__all__ = [
    "APPROX_FACTOR",
    "MEASURES",
    "OutliersClusterResult",
    "Solution",
    "default_ensemble_size",
    "diversity_query",
    "diversity_value",
    "farthest_point_order",
    "gonzalez",
    "kcenter_query",
    "matroid_center_query",
    "mst_weight",
    "outliers_cluster",
    "remote_clique_greedy",
    "robust_from_coreset",
    "robust_query",
    "robust_radius",
    "solve_matroid_center",
    "tour_weight_2approx",
]
