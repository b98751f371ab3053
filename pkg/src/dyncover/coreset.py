"""Coreset extraction from a cover tree at query time.

The extraction level for accuracy ``eps`` and size parameter ``k`` is

    l*(eps, k) = max(l_min, l(k) - ceil(log2(8 / eps)))

where ``l(k)`` is the lowest level holding at most ``k`` nodes. The points
of that level are an (eps, k)-coreset: every stored point is within
``eps * r*_k`` of one of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .covertree import CoverTree
from .metric import PointRecord

__all__ = [
    "WeightedCoreset",
    "MisCoreset",
    "level_offset",
    "coreset_level",
    "kcenter_coreset",
    "outliers_coreset",
    "mis_coreset",
]


@dataclass(frozen=True)
class WeightedCoreset:
    """Coreset points with the size of the subtree each one represents."""

    points: tuple
    weights: tuple
    source_level: int
    epsilon: float
    k_param: int
    slack: float = 0.0  # bound on the distance from any stored point to its representative

    def __len__(self):
        return len(self.points)

    @property
    def total_weight(self) -> int:
        return int(sum(self.weights))

    @property
    def entries(self):
        return list(zip(self.points, self.weights))

    def coords(self) -> np.ndarray:
        return np.array([p.coords for p in self.points], dtype=float)


@dataclass(frozen=True)
class MisCoreset:
    """Union of the maximal independent sets of the nodes at the extraction level."""

    points: tuple
    source_level: int
    slack: float = 0.0
    groups: tuple = field(default=(), repr=False)
    heads: tuple = field(default=(), repr=False)  # level points; every stored point is within slack of one

    def __len__(self):
        return len(self.points)


def level_offset(eps: float) -> int:
    """``ceil(log2(8 / eps))``, exact at powers of two."""
    x = 8.0 / eps
    m, e = math.frexp(x)
    return e - 1 if m == 0.5 else e


def _check(eps, k):
    if not eps > 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")


def _select(T: CoverTree, eps: float, k: int):
    """Return ``(l*, heads at l*, l(k), l_min or None)`` from one top-down walk."""
    if T.root is None:
        raise ValueError("empty tree")
    off = level_offset(eps)
    runs = []
    ell_k = target = None
    prev_bottom = None
    for top, bottom, heads in T.iter_levels():
        runs.append((top, bottom, heads))
        if ell_k is None:
            if len(heads) > k:
                ell_k = prev_bottom
            elif bottom is None:
                ell_k = top  # k >= n
            if ell_k is not None:
                target = ell_k - off
        if ell_k is not None and (bottom is None or target >= bottom):
            break
        prev_bottom = bottom
    top, bottom, _ = runs[-1]
    ell_min = top if bottom is None else None
    ell_star = target if ell_min is None else max(ell_min, target)
    ell_star = min(ell_star, T.ell_max)
    for top, bottom, heads in runs:
        if ell_star <= top and (bottom is None or ell_star >= bottom):
            return ell_star, heads, ell_k, ell_min
    raise AssertionError("extraction level not found")


def coreset_level(T: CoverTree, eps: float, k: int) -> int:
    _check(eps, k)
    return _select(T, eps, int(k))[0]


def _slack(T, ell_star, heads):
    if all(not h.children for h in heads):
        return 0.0
    return T.covering_slack(ell_star)


def kcenter_coreset(T: CoverTree, eps: float, k: int) -> WeightedCoreset:
    """Points of level l*(eps, k) with their subtree weights."""
    _check(eps, k)
    ell_star, heads, _, _ = _select(T, eps, int(k))
    return WeightedCoreset(
        points=tuple(h.point for h in heads),
        weights=tuple(h.weight for h in heads),
        source_level=ell_star,
        epsilon=float(eps),
        k_param=int(k),
        slack=_slack(T, ell_star, heads),
    )


def outliers_coreset(T: CoverTree, eps: float, k: int, z: int) -> WeightedCoreset:
    """Weighted coreset for the robust problem: the k-center coreset for ``k + z``."""
    if int(z) != z or z < 0:
        raise ValueError(f"z must be a non-negative integer, got {z}")
    return kcenter_coreset(T, eps, int(k) + int(z))


def mis_coreset(T: CoverTree, eps: float, k_param: int | None = None) -> MisCoreset:
    """Deduplicated union of the mis fields at level l*(eps, k_param).

    With ``k_param=None`` the tree's rank (size of the root mis) is used,
    which is what the matroid-center query needs.
    """
    if T.oracle.is_null:
        raise ValueError("mis coreset needs a tree built with a matroid oracle")
    if k_param is None:
        k_param = T.rank
        if k_param == 0:
            raise ValueError("the matroid has rank 0 on the stored points")
    else:
        cap = T.oracle.upper_rank
        if T.oracle.kind == "uniform" and cap is not None and k_param > cap:
            raise ValueError(f"k={k_param} exceeds the tree's uniform rank {cap}")
    _check(eps, k_param)
    ell_star, heads, _, _ = _select(T, eps, int(k_param))
    seen = set()
    pts: list[PointRecord] = []
    groups = []
    for h in heads:
        groups.append(tuple(q.id for q in h.mis))
        for q in h.mis:
            if q.id not in seen:
                seen.add(q.id)
                pts.append(q)
    return MisCoreset(tuple(pts), ell_star, _slack(T, ell_star, heads), tuple(groups),
                      tuple(h.point for h in heads))
