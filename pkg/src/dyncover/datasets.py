"""Dataset files and synthetic generators.

A dataset file holds one point per line as whitespace-separated reals, with
an optional final ``cat:<label>`` token; ``#`` starts a comment line. Point
ids are assigned 0, 1, 2, ... in file order.
"""

from __future__ import annotations

import numpy as np

from .metric import PointRecord

__all__ = ["read_dataset", "write_dataset", "uniform_points", "clustered_points"]


class DatasetError(ValueError):
    pass


def parse_point_tokens(tokens, pid, where=""):
    category = None
    if tokens and tokens[-1].startswith("cat:"):
        category = tokens[-1][4:]
        if not category:
            raise DatasetError(f"{where}empty category label")
        tokens = tokens[:-1]
    if not tokens:
        raise DatasetError(f"{where}no coordinates")
    try:
        coords = tuple(float(t) for t in tokens)
    except ValueError as exc:
        raise DatasetError(f"{where}{exc}") from None
    if not all(np.isfinite(coords)):
        raise DatasetError(f"{where}non-finite coordinate")
    return PointRecord(pid, coords, category)


def read_dataset(path) -> list[PointRecord]:
    points: list[PointRecord] = []
    dim = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            p = parse_point_tokens(line.split(), len(points), f"{path}:{lineno}: ")
            if dim is None:
                dim = len(p.coords)
            elif len(p.coords) != dim:
                raise DatasetError(f"{path}:{lineno}: expected {dim} coordinates, got {len(p.coords)}")
            points.append(p)
    return points


def write_dataset(path_or_file, X, categories=None) -> None:
    """Write rows of ``X`` (and optional labels) in the dataset file format."""
    X = np.asarray(X, dtype=float)
    lines = []
    for i, row in enumerate(X):
        line = " ".join(repr(float(v)) for v in row)
        if categories is not None:
            line += f" cat:{categories[i]}"
        lines.append(line + "\n")
    if hasattr(path_or_file, "write"):
        path_or_file.writelines(lines)
    else:
        with open(path_or_file, "w") as fh:
            fh.writelines(lines)


def uniform_points(n, dim=2, seed=None) -> np.ndarray:
    """``n`` points uniform in the unit cube."""
    return np.random.default_rng(seed).random((n, dim))


def clustered_points(n, dim=2, n_clusters=5, spread=0.02, seed=None) -> np.ndarray:
    """Gaussian blobs around uniform random centers in the unit cube."""
    rng = np.random.default_rng(seed)
    centers = rng.random((n_clusters, dim))
    labels = rng.integers(n_clusters, size=n)
    return centers[labels] + rng.normal(scale=spread, size=(n, dim))


def to_records(X, categories=None, start_id=0) -> list[PointRecord]:
    return [
        PointRecord(start_id + i, tuple(float(v) for v in row),
                    None if categories is None else str(categories[i]))
        for i, row in enumerate(np.asarray(X, dtype=float))
    ]
