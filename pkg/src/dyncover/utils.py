"""Input validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.utils import check_array

from .metric import PointRecord


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_epsilon(value, name="epsilon"):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number")
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value}")
    return float(value)


def check_points(X, ids=None, categories=None, start_id=0):
    """Validate a 2-D array and wrap its rows as :class:`PointRecord` objects.

    Rows get consecutive ids from ``start_id`` unless ``ids`` is given.
    Duplicate rows are rejected, since the tree needs distinct points.
    """
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    n = X.shape[0]
    if ids is None:
        ids = range(start_id, start_id + n)
    else:
        ids = [int(i) for i in ids]
        if len(ids) != n:
            raise ValueError(f"got {len(ids)} ids for {n} rows")
        if len(set(ids)) != n:
            raise ValueError("ids must be unique")
    if categories is not None:
        categories = list(categories)
        if len(categories) != n:
            raise ValueError(f"got {len(categories)} categories for {n} rows")
    if n > 1 and len(np.unique(X, axis=0)) != n:
        raise ValueError("duplicate rows; the tree stores distinct points only")
    return [
        PointRecord(i, tuple(row.tolist()), None if categories is None else str(categories[j]))
        for j, (i, row) in enumerate(zip(ids, X))
    ]
