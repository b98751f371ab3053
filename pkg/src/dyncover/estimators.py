"""Scikit-learn style estimators over a dynamic cover tree.

Each estimator owns a :class:`CoverTree`. ``fit`` rebuilds it from scratch,
``partial_fit`` inserts more rows and ``remove`` deletes rows by id; every
call re-solves the query on the current coreset so the fitted attributes
always describe the live point set.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from .covertree import CoverTree
from .matroid import MatroidOracle, NullMatroid, UniformMatroid, parse_matroid_config
from .metric import as_metric
from .solvers import diversity_query, kcenter_query, matroid_center_query, robust_query
from .solvers.diversity import normalize_measure
from .utils import check_epsilon, check_points, check_positive_int

__all__ = ["DynamicKCenter", "DynamicRobustKCenter", "DynamicMatroidCenter", "DynamicDiversity"]


class _DynamicTreeMixin:
    """Tree bookkeeping shared by all estimators."""

    def _make_oracle(self) -> MatroidOracle:
        return NullMatroid()

    def _check_params(self):
        check_epsilon(self.epsilon)
        as_metric(self.metric)

    def _new_tree(self):
        return CoverTree(self.metric, self._make_oracle(), self.alpha, self.beta)

    def fit(self, X, y=None, ids=None):
        """Build a fresh tree from ``X`` and solve.

        ``y``, when given, holds a category label per row (used by partition
        matroids, ignored otherwise). Rows get ids ``0..n-1`` unless ``ids``
        is passed.
        """
        self._check_params()
        records = check_points(X, ids=ids, categories=y)
        self.tree_ = self._new_tree()
        for p in records:
            self.tree_.insert(p)
        self.n_features_in_ = self.tree_.dim
        self.next_id_ = max(p.id for p in records) + 1
        self._solve()
        return self

    def partial_fit(self, X, y=None, ids=None):
        """Insert rows into the existing tree (starting one if needed) and re-solve."""
        if not hasattr(self, "tree_"):
            return self.fit(X, y, ids=ids)
        records = check_points(X, ids=ids, categories=y, start_id=self.next_id_)
        for p in records:
            self.tree_.insert(p)
        self.next_id_ = max([self.next_id_ - 1, *(p.id for p in records)]) + 1
        self._solve()
        return self

    def remove(self, ids):
        """Delete points by id and re-solve. Unknown ids raise ``KeyError``."""
        check_is_fitted(self, "tree_")
        for pid in np.atleast_1d(ids).tolist():
            self.tree_.delete(int(pid))
        if len(self.tree_):
            self._solve()
        return self

    @property
    def n_points_(self):
        check_is_fitted(self, "tree_")
        return len(self.tree_)

    def _center_attrs(self, sol):
        self.solution_ = sol
        self.center_ids_ = np.asarray(sol.centers, dtype=int)
        self.cluster_centers_ = np.array(
            [self.tree_.get(i).coords for i in sol.centers], dtype=float
        ).reshape(len(sol.centers), self.n_features_in_)
        self.radius_ = float(sol.objective)

    def _nearest(self, X):
        check_is_fitted(self, "cluster_centers_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        D = as_metric(self.metric).cross(X, self.cluster_centers_)
        return D.argmin(axis=1), D.min(axis=1)


class DynamicKCenter(_DynamicTreeMixin, ClusterMixin, BaseEstimator):
    """Fully dynamic k-center clustering.

    Parameters
    ----------
    n_clusters : int, default=8
    epsilon : float, default=1.0
        Coreset accuracy; smaller values give larger coresets and tighter
        radii (ratio at most 2 + 3 * epsilon in ``gonzalez`` mode).
    method : {"gonzalez", "ensemble"}, default="gonzalez"
    n_trees : int, optional
        Ensemble size for ``method="ensemble"``.
    metric : {"euclidean", "manhattan", "chebyshev"}, default="euclidean"
    alpha, beta : float, default=2.0, 1.0
        Tree level thresholds ``beta * alpha**l``. Deletions need the defaults.
    certify : bool, default=False
        Report the radius over all live points instead of the coreset radius.

    Attributes
    ----------
    tree_ : CoverTree
    center_ids_ : ndarray of int
    cluster_centers_ : ndarray of shape (n_centers, n_features)
    radius_ : float
    labels_ : ndarray of int
        Nearest-center labels of the rows passed to the last ``fit``.
    """

    def __init__(self, n_clusters=8, epsilon=1.0, method="gonzalez", n_trees=None,
                 metric="euclidean", alpha=2.0, beta=1.0, certify=False):
        self.n_clusters = n_clusters
        self.epsilon = epsilon
        self.method = method
        self.n_trees = n_trees
        self.metric = metric
        self.alpha = alpha
        self.beta = beta
        self.certify = certify

    def _check_params(self):
        super()._check_params()
        check_positive_int(self.n_clusters, "n_clusters")
        if self.method not in ("gonzalez", "ensemble"):
            raise ValueError(f"method must be 'gonzalez' or 'ensemble', got {self.method!r}")

    def _solve(self):
        sol = kcenter_query(self.tree_, self.n_clusters, self.epsilon, mode=self.method,
                            m=self.n_trees, certify=self.certify)
        self._center_attrs(sol)

    def fit(self, X, y=None, ids=None):
        super().fit(X, y, ids=ids)
        self.labels_ = self.predict(X)
        return self

    def predict(self, X):
        """Index of the nearest center for each row."""
        return self._nearest(X)[0]

    def transform(self, X):
        """Distances from each row to every center."""
        check_is_fitted(self, "cluster_centers_")
        X = check_array(X, dtype=np.float64)
        return as_metric(self.metric).cross(X, self.cluster_centers_)


class DynamicRobustKCenter(_DynamicTreeMixin, ClusterMixin, BaseEstimator):
    """Fully dynamic k-center with ``n_outliers`` discarded points.

    ``predict`` labels rows farther than ``radius_`` from every center as
    ``-1`` (outliers).
    """

    def __init__(self, n_clusters=8, n_outliers=0, epsilon=0.5, metric="euclidean",
                 alpha=2.0, beta=1.0, certify=False):
        self.n_clusters = n_clusters
        self.n_outliers = n_outliers
        self.epsilon = epsilon
        self.metric = metric
        self.alpha = alpha
        self.beta = beta
        self.certify = certify

    def _check_params(self):
        super()._check_params()
        check_positive_int(self.n_clusters, "n_clusters")
        check_positive_int(self.n_outliers, "n_outliers", minimum=0)

    def _solve(self):
        sol = robust_query(self.tree_, self.n_clusters, self.n_outliers, self.epsilon,
                           certify=self.certify)
        self._center_attrs(sol)

    def fit(self, X, y=None, ids=None):
        super().fit(X, y, ids=ids)
        self.labels_ = self.predict(X)
        return self

    def predict(self, X):
        labels, d = self._nearest(X)
        bound = self.solution_.meta.get("radius_bound", self.radius_)
        labels[d > bound * (1 + 1e-12)] = -1
        return labels


class DynamicMatroidCenter(_DynamicTreeMixin, ClusterMixin, BaseEstimator):
    """Fully dynamic matroid center.

    Parameters
    ----------
    matroid : str or MatroidOracle
        ``"uniform:<K>"``, ``"partition:<file>"`` or an oracle instance, e.g.
        ``PartitionMatroid({"a": 1, "b": 2})`` together with labels passed as
        ``y`` to ``fit``.
    """

    def __init__(self, matroid="uniform:2", epsilon=0.5, metric="euclidean",
                 alpha=2.0, beta=1.0, certify=False):
        self.matroid = matroid
        self.epsilon = epsilon
        self.metric = metric
        self.alpha = alpha
        self.beta = beta
        self.certify = certify

    def _make_oracle(self):
        if isinstance(self.matroid, MatroidOracle):
            oracle = self.matroid
        else:
            oracle = parse_matroid_config(self.matroid)
        if oracle.is_null:
            raise ValueError("matroid center needs a non-null matroid")
        return oracle

    def _solve(self):
        self._center_attrs(matroid_center_query(self.tree_, self.epsilon, certify=self.certify))

    def predict(self, X):
        return self._nearest(X)[0]


class DynamicDiversity(_DynamicTreeMixin, BaseEstimator):
    """Fully dynamic diversity maximization.

    ``measure`` is one of ``remote_edge``, ``remote_clique``, ``remote_tree``
    or ``remote_cycle`` (``edge``/``clique``/``tree``/``cycle`` also work).
    Clique and tree measures keep a rank-``n_select`` uniform matroid in the
    tree, so ``n_select`` is fixed at ``fit`` time for them.

    Attributes
    ----------
    selected_ids_ : ndarray of int
    selected_ : ndarray of shape (n_select, n_features)
    diversity_ : float
    """

    def __init__(self, n_select=4, measure="remote_edge", epsilon=0.5, metric="euclidean",
                 alpha=2.0, beta=1.0):
        self.n_select = n_select
        self.measure = measure
        self.epsilon = epsilon
        self.metric = metric
        self.alpha = alpha
        self.beta = beta

    def _check_params(self):
        super()._check_params()
        check_positive_int(self.n_select, "n_select", minimum=2)
        normalize_measure(self.measure)

    def _make_oracle(self):
        if normalize_measure(self.measure) in ("remote_clique", "remote_tree"):
            return UniformMatroid(self.n_select)
        return NullMatroid()

    def _solve(self):
        sol = diversity_query(self.tree_, self.measure, self.n_select, self.epsilon)
        self.solution_ = sol
        self.selected_ids_ = np.asarray(sol.centers, dtype=int)
        self.selected_ = np.array([self.tree_.get(i).coords for i in sol.centers], dtype=float)
        self.diversity_ = float(sol.objective)
