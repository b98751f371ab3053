"""Points, distances and the brute-force radius primitives."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial.distance import cdist, pdist

__all__ = [
    "PointRecord",
    "Metric",
    "DatasetStats",
    "dist",
    "dist_to_set",
    "radius_of",
    "dataset_stats",
]


@dataclass(frozen=True, slots=True)
class PointRecord:
    """A point with a stable external id and an optional category label."""

    id: int
    coords: tuple
    category: str | None = None

    @classmethod
    def make(cls, id, coords, category=None):
        return cls(int(id), tuple(float(c) for c in coords), category)

    @property
    def dim(self):
        return len(self.coords)


def _manhattan(a, b):
    return math.fsum(abs(x - y) for x, y in zip(a, b, strict=True))


def _chebyshev(a, b):
    return max(abs(x - y) for x, y in zip(a, b, strict=True))


_ALIASES = {
    "euclidean": "euclidean",
    "l2": "euclidean",
    "manhattan": "manhattan",
    "l1": "manhattan",
    "cityblock": "manhattan",
    "chebyshev": "chebyshev",
    "linf": "chebyshev",
}

# Minkowski order per kind, as understood by scipy's KD-tree.
_MINKOWSKI_P = {"euclidean": 2.0, "manhattan": 1.0, "chebyshev": np.inf}
_SCIPY_NAME = {"euclidean": "euclidean", "manhattan": "cityblock", "chebyshev": "chebyshev"}


class Metric:
    """One of the three built-in vector metrics.

    ``pair`` works on raw coordinate tuples and is what the tree calls in
    its inner loops; ``to_many`` and ``pairwise`` are vectorised forms for
    solvers running on whole coresets.
    """

    __slots__ = ("kind", "pair")

    def __init__(self, kind="euclidean"):
        if isinstance(kind, Metric):
            kind = kind.kind
        try:
            self.kind = _ALIASES[str(kind).lower()]
        except KeyError:
            raise ValueError(f"unknown metric {kind!r}") from None
        self.pair = {
            "euclidean": math.dist,
            "manhattan": _manhattan,
            "chebyshev": _chebyshev,
        }[self.kind]

    def __repr__(self):
        return f"Metric({self.kind!r})"

    def __eq__(self, other):
        return isinstance(other, Metric) and other.kind == self.kind

    def __hash__(self):
        return hash(self.kind)

    @property
    def minkowski_p(self):
        return _MINKOWSKI_P[self.kind]

    def __call__(self, a: PointRecord, b: PointRecord) -> float:
        return self.pair(a.coords, b.coords)

    def to_many(self, X: np.ndarray, c) -> np.ndarray:
        """Distances from one coordinate vector ``c`` to every row of ``X``."""
        diff = X - np.asarray(c, dtype=float)
        if self.kind == "euclidean":
            return np.sqrt(np.einsum("ij,ij->i", diff, diff))
        np.abs(diff, out=diff)
        if self.kind == "manhattan":
            return diff.sum(axis=1)
        return diff.max(axis=1)

    def cross(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Distances between every row of ``X`` and every row of ``Y``."""
        return cdist(np.asarray(X, dtype=float), np.asarray(Y, dtype=float), metric=_SCIPY_NAME[self.kind])

    def pairwise(self, X: np.ndarray) -> np.ndarray:
        """Dense distance matrix of the rows of ``X``."""
        X = np.asarray(X, dtype=float)
        return cdist(X, X, metric=_SCIPY_NAME[self.kind])

    def condensed(self, X: np.ndarray) -> np.ndarray:
        return pdist(np.asarray(X, dtype=float), metric=_SCIPY_NAME[self.kind])


def as_metric(m) -> Metric:
    return m if isinstance(m, Metric) else Metric(m)


def coords_array(points: Sequence[PointRecord]) -> np.ndarray:
    if not points:
        return np.empty((0, 0))
    return np.array([p.coords for p in points], dtype=float)


def dist(a: PointRecord, b: PointRecord, m="euclidean") -> float:
    """Distance between two points; raises ``ValueError`` on a dimension mismatch."""
    if len(a.coords) != len(b.coords):
        raise ValueError(f"dimension mismatch: {len(a.coords)} vs {len(b.coords)}")
    return as_metric(m).pair(a.coords, b.coords)


def dist_to_set(p: PointRecord, C: Iterable[PointRecord], m="euclidean"):
    """Return ``(distance, id)`` of the point of ``C`` nearest to ``p``.

    Ties go to the lowest id.
    """
    pair = as_metric(m).pair
    best = None
    for q in C:
        d = pair(p.coords, q.coords)
        if best is None or d < best[0] or (d == best[0] and q.id < best[1]):
            best = (d, q.id)
    if best is None:
        raise ValueError("distance to an empty set is undefined")
    return best


def radius_of(C: Sequence[PointRecord], S: Sequence[PointRecord], m="euclidean") -> float:
    """max over ``S`` of the distance to the nearest point of ``C``."""
    C = list(C)
    if not C:
        raise ValueError("radius of an empty center set is undefined")
    S = list(S)
    if not S:
        return 0.0
    metric = as_metric(m)
    X = coords_array(S)
    best = np.full(len(S), np.inf)
    for c in C:
        np.minimum(best, metric.to_many(X, c.coords), out=best)
    return float(best.max())


@dataclass(frozen=True)
class DatasetStats:
    n: int
    d_min: float
    d_max: float

    @property
    def aspect_ratio(self) -> float:
        return self.d_max / self.d_min


def dataset_stats(S: Sequence[PointRecord], m="euclidean") -> DatasetStats:
    """Exact min/max pairwise distance by a full scan (quadratic; diagnostics only)."""
    if len(S) < 2:
        raise ValueError("need at least two points")
    d = as_metric(m).condensed(coords_array(S))
    d_min = float(d.min())
    if d_min == 0.0:
        raise ValueError("duplicate points")
    return DatasetStats(len(S), d_min, float(d.max()))
