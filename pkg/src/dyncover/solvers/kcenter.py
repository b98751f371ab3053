"""k-center queries: Gonzalez on the coreset, or the ensemble of generalized trees."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..coreset import kcenter_coreset
from ..covertree import CoverTree
from ..metric import Metric, PointRecord, as_metric, coords_array, radius_of
from .solution import Solution

__all__ = ["gonzalez", "farthest_point_order", "kcenter_query", "default_ensemble_size"]


def farthest_point_order(Q: Sequence[PointRecord], k: int, m="euclidean"):
    """Farthest-point traversal of ``Q`` for ``k`` steps.

    The first pick is the lowest id; every later pick is the point farthest
    from those already chosen (ties to the lowest id). Returns the picked
    points and the final point-to-set distances (aligned with ``Q`` sorted by id).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not Q:
        raise ValueError("empty point set")
    metric = as_metric(m)
    pts = sorted(Q, key=lambda p: p.id)
    X = coords_array(pts)
    best = np.full(len(pts), np.inf)
    picked = []
    idx = 0
    for _ in range(min(k, len(pts))):
        picked.append(idx)
        np.minimum(best, metric.to_many(X, X[idx]), out=best)
        idx = int(np.argmax(best))
    return [pts[i] for i in picked], pts, best


def gonzalez(Q: Sequence[PointRecord], k: int, m="euclidean") -> Solution:
    """Gonzalez's greedy 2-approximation for k-center on ``Q``."""
    centers, _, best = farthest_point_order(Q, k, m)
    return Solution([c.id for c in centers], float(best.max()), {"algorithm": "gonzalez"})


def default_ensemble_size(eps: float) -> int:
    return max(1, math.ceil((1.0 / eps) * math.log(1.0 / eps)))


def _ensemble(Q: Sequence[PointRecord], k: int, eps: float, m: int, metric: Metric, base=None):
    alpha = base if base is not None else 2.0 / min(eps, 1.0)
    if not alpha > 1:
        raise ValueError(f"ensemble base must exceed 1, got {alpha}")
    pts = sorted(Q, key=lambda p: p.id)
    best = None
    for p in range(1, m + 1):
        T = CoverTree(metric, alpha=alpha, beta=alpha ** (p / m))
        for q in pts:
            T.insert(q)
        ell_p = heads = None
        for top, bottom, hs in T.iter_levels():
            if len(hs) > k:
                break
            ell_p = bottom if bottom is not None else top
            heads = hs
        key = (ell_p + p / m, p)
        if best is None or key < best[0]:
            best = (key, [h.point for h in heads], p, ell_p)
    _, centers, p, ell_p = best
    return centers, {"ensemble_base": alpha, "ensemble_size": m, "ensemble_member": p, "ensemble_level": ell_p}


def kcenter_query(
    T: CoverTree,
    k: int,
    eps: float,
    mode: str = "gonzalez",
    m: int | None = None,
    certify: bool = False,
    base: float | None = None,
) -> Solution:
    """(2 + O(eps))-approximate k-center of the points stored in ``T``.

    ``mode`` is ``"gonzalez"`` or ``"ensemble"``; the ensemble builds ``m``
    generalized trees over the coreset (default ``m`` from
    :func:`default_ensemble_size`) with level base ``2 / min(eps, 1)`` unless
    ``base`` is given. The objective is the radius over the
    coreset unless ``certify`` is set, in which case it is the exact radius
    over every stored point; ``meta["radius_bound"]`` is always a valid
    upper bound on the latter.
    """
    if len(T) == 0:
        raise ValueError("empty tree")
    Q = kcenter_coreset(T, eps, k)
    metric = T.metric
    if mode == "gonzalez":
        centers, _, _ = farthest_point_order(Q.points, k, metric)
        meta = {"algorithm": "gonzalez"}
    elif mode == "ensemble":
        m = default_ensemble_size(eps) if m is None else int(m)
        if m < 1:
            raise ValueError("ensemble size must be at least 1")
        centers, meta = _ensemble(Q.points, k, eps, m, metric, base)
        meta = {"algorithm": "ensemble", **meta}
    else:
        raise ValueError(f"unknown k-center mode {mode!r}")
    r_q = radius_of(centers, Q.points, metric)
    meta.update(
        coreset_size=len(Q),
        level=Q.source_level,
        coreset_radius=r_q,
        radius_bound=r_q + Q.slack,
    )
    objective = r_q
    if certify:
        objective = radius_of(centers, T.points(), metric)
        meta["certified"] = True
    return Solution(sorted(c.id for c in centers), objective, meta)
