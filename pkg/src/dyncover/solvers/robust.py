"""Robust (k, z)-center: weighted greedy clustering over a radius-guess schedule."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..coreset import WeightedCoreset, outliers_coreset
from ..covertree import CoverTree
from ..metric import PointRecord, as_metric, coords_array
from .solution import Solution

__all__ = [
    "OutliersClusterResult",
    "outliers_cluster",
    "robust_from_coreset",
    "robust_query",
    "robust_radius",
]


@dataclass
class OutliersClusterResult:
    X: list
    Q_prime: list  # (point, weight) pairs never covered
    residual_weight: int


class _Weighted:
    """Coreset entries sorted by id, with their distance matrix cached."""

    def __init__(self, entries, m):
        entries = sorted(entries, key=lambda e: e[0].id)
        self.points = [p for p, _ in entries]
        self.w = np.array([w for _, w in entries], dtype=float)
        X = coords_array(self.points)
        self.D = as_metric(m).pairwise(X) if len(X) else np.zeros((0, 0))

    def d_min(self):
        n = len(self.points)
        if n < 2:
            return np.inf
        return float(self.D[~np.eye(n, dtype=bool)].min())


def _entries(Q):
    if isinstance(Q, WeightedCoreset):
        return Q.entries
    return [(p, 1) if isinstance(p, PointRecord) else tuple(p) for p in Q]


def _cluster(W: _Weighted, k: int, r: float, eps: float) -> OutliersClusterResult:
    D, w = W.D, W.w
    n = len(W.points)
    uncovered = np.ones(n, dtype=bool)
    ball = D <= (1 + 2 * eps) * r
    reach = D <= (3 + 4 * eps) * r
    X = []
    for _ in range(k):
        if not uncovered.any():
            break
        gain = ball @ (w * uncovered)
        x = int(np.argmax(gain))
        X.append(W.points[x])
        uncovered &= ~reach[x]
    rest = [(W.points[i], int(w[i])) for i in np.flatnonzero(uncovered)]
    return OutliersClusterResult(X, rest, int(sum(wt for _, wt in rest)))


def outliers_cluster(Q, k: int, r: float, eps: float, m="euclidean") -> OutliersClusterResult:
    """Greedy weighted clustering with radius guess ``r``.

    Up to ``k`` times, pick the coreset point whose ``(1+2eps) r`` ball holds
    the most uncovered weight (ties to the lowest id) and cover everything
    within ``(3+4eps) r`` of it. When ``r`` is at least the optimal robust
    radius the uncovered weight is at most ``z``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not r > 0:
        raise ValueError("r must be positive")
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return _cluster(_Weighted(_entries(Q), m), int(k), float(r), float(eps))


def robust_from_coreset(Q, k: int, z: int, eps: float, r0: float, m="euclidean"):
    """Run the guess schedule ``r0 / (1+eps)**i`` over a fixed weighted coreset.

    Starting from a guess that succeeds (raising ``r0`` if it does not),
    guesses shrink while they keep succeeding; the last success is returned
    with its guess. Once ``(3+4eps) r`` drops below the smallest coreset
    distance the outcome can no longer change, so the schedule stops there.
    """
    W = _Weighted(_entries(Q), m)
    if not W.points:
        raise ValueError("empty coreset")
    r = float(r0)
    if not r > 0:
        raise ValueError("initial guess must be positive")
    res = _cluster(W, k, r, eps)
    guesses = 1
    while res.residual_weight > z:
        r *= 1 + eps
        res = _cluster(W, k, r, eps)
        guesses += 1
    floor = W.d_min() / (3 + 4 * eps)
    while r >= floor:
        r_next = r / (1 + eps)
        nxt = _cluster(W, k, r_next, eps)
        guesses += 1
        if nxt.residual_weight > z:
            break
        r, res = r_next, nxt
    return res, r, guesses


def robust_radius(C: Sequence[PointRecord], S: Sequence[PointRecord], z: int, m="euclidean", weights=None):
    """Radius of ``C`` after discarding the farthest points of total weight at most ``z``."""
    S = list(S)
    if not C:
        raise ValueError("empty center set")
    if not S:
        return 0.0
    metric = as_metric(m)
    X = coords_array(S)
    d = np.full(len(S), np.inf)
    for c in C:
        np.minimum(d, metric.to_many(X, c.coords), out=d)
    w = np.ones(len(S)) if weights is None else np.asarray(weights, dtype=float)
    order = np.argsort(-d, kind="stable")
    dropped = np.cumsum(w[order]) <= z
    keep = order[~dropped]
    return float(d[keep].max()) if len(keep) else 0.0


def robust_query(T: CoverTree, k: int, z: int, eps: float, certify: bool = False) -> Solution:
    """(3 + O(eps))-approximate k-center with ``z`` outliers on the points of ``T``."""
    if len(T) == 0:
        raise ValueError("empty tree")
    if not eps > 0:
        raise ValueError("eps must be positive")
    Q = outliers_coreset(T, eps, k, z)
    res, r, guesses = robust_from_coreset(Q, k, z, eps, T.scale(T.ell_max), T.metric)
    coreset_r = robust_radius(res.X, Q.points, z, T.metric, Q.weights)
    meta = {
        "guess": r,
        "guesses": guesses,
        "residual_weight": res.residual_weight,
        "coreset_size": len(Q),
        "level": Q.source_level,
        "coreset_radius": coreset_r,
        "radius_bound": coreset_r + Q.slack,
    }
    objective = coreset_r
    if certify:
        objective = robust_radius(res.X, T.points(), z, T.metric)
        meta["certified"] = True
    return Solution(sorted(p.id for p in res.X), objective, meta)
