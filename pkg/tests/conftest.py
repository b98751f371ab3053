import numpy as np
import pytest
from hypothesis import settings

from dyncover import CoverTree, PointRecord

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def recs(values, cats=None):
    """PointRecords from 1-D numbers or coordinate rows, ids 0.. in order."""
    out = []
    for i, v in enumerate(values):
        coords = tuple(float(c) for c in np.atleast_1d(v))
        out.append(PointRecord(i, coords, None if cats is None else cats[i]))
    return out


def build(points, metric="euclidean", oracle=None, alpha=2.0, beta=1.0):
    T = CoverTree(metric, oracle, alpha, beta)
    for p in points:
        T.insert(p)
    return T


def random_points(rng, n, dim=2, kind="uniform", cats=None, grid=None):
    """Distinct random points; ``grid`` snaps to an integer lattice to force ties."""
    if kind == "uniform":
        X = rng.random((n, dim))
    else:
        centers = rng.random((3, dim))
        X = centers[rng.integers(3, size=n)] + rng.normal(scale=0.01, size=(n, dim))
    if grid:
        X = np.round(X * grid)
    X = np.unique(X, axis=0)
    rng.shuffle(X)
    labels = None if cats is None else [cats[i % len(cats)] for i in range(len(X))]
    return recs(X, labels)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
