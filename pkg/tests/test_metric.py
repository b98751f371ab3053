import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dyncover.metric import (
    Metric,
    PointRecord,
    dataset_stats,
    dist,
    dist_to_set,
    radius_of,
)

from conftest import recs

KINDS = ["euclidean", "manhattan", "chebyshev"]


def test_dist_examples():
    a, b = PointRecord(0, (0.0, 0.0)), PointRecord(1, (3.0, 4.0))
    assert dist(a, b) == 5.0
    assert dist(a, a) == 0.0
    assert dist(PointRecord(0, (1.0, 2.0)), PointRecord(1, (4.0, 6.0)), "manhattan") == 7.0
    assert dist(a, b, "chebyshev") == 4.0


def test_metric_aliases():
    assert Metric("l2").kind == "euclidean"
    assert Metric("l1").kind == "manhattan"
    assert Metric("linf").kind == "chebyshev"
    with pytest.raises(ValueError):
        Metric("cosine")


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        dist(PointRecord(0, (0.0,)), PointRecord(1, (0.0, 1.0)))


def test_dist_to_set_examples():
    p0, p10 = recs([0, 10])
    assert dist_to_set(PointRecord(5, (5.0,)), [p10, p0]) == (5.0, 0)  # tie to lowest id
    assert dist_to_set(p0, [p0, p10])[0] == 0.0
    assert dist_to_set(PointRecord(9, (2.0,)), recs([0, 1, 10]))[0] == 1.0
    with pytest.raises(ValueError):
        dist_to_set(p0, [])


def test_radius_of_examples():
    S = recs([0, 1, 10])
    assert radius_of([S[0], S[2]], S) == 1.0
    assert radius_of(S, S) == 0.0
    S = recs([0, 1, 2, 100])
    assert radius_of([S[1]], S) == 99.0
    with pytest.raises(ValueError):
        radius_of([], S)


def test_dataset_stats_examples():
    st_ = dataset_stats(recs([0, 1, 10]))
    assert (st_.n, st_.d_min, st_.d_max, st_.aspect_ratio) == (3, 1.0, 10.0, 10.0)
    assert dataset_stats(recs([0, 3])).aspect_ratio == 1.0
    with pytest.raises(ValueError):
        dataset_stats(recs([0, 0]))
    with pytest.raises(ValueError):
        dataset_stats(recs([0]))


@pytest.mark.parametrize("kind", KINDS)
def test_triangle_inequality_bulk(kind):
    rng = np.random.default_rng(hash(kind) % 2**32)
    m = Metric(kind)
    A, B, C = (rng.normal(scale=10, size=(10_000, 3)) for _ in range(3))
    ab, bc, ac = (np.array([m.pair(tuple(x), tuple(y)) for x, y in zip(P, Q)])
                  for P, Q in ((A, B), (B, C), (A, C)))
    assert np.all(ac <= ab + bc + 1e-9)
    assert np.all(ab >= 0)


coords = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=3, max_size=3).map(tuple)


@given(a=coords, b=coords, kind=st.sampled_from(KINDS))
def test_symmetry_and_identity(a, b, kind):
    m = Metric(kind)
    assert m.pair(a, b) == m.pair(b, a)
    assert m.pair(a, a) == 0.0


@given(a=coords, b=coords, kind=st.sampled_from(KINDS))
def test_vectorized_matches_pairwise(a, b, kind):
    m = Metric(kind)
    v = m.to_many(np.array([b]), a)[0]
    assert math.isclose(v, m.pair(a, b), rel_tol=1e-12, abs_tol=1e-12)


@given(st.lists(coords, min_size=1, max_size=20), st.integers(1, 5), st.sampled_from(KINDS))
def test_radius_of_matches_naive_loop(rows, nc, kind):
    S = recs(rows)
    C = S[:nc]
    m = Metric(kind)
    naive = max(min(m.pair(p.coords, c.coords) for c in C) for p in S)
    assert radius_of(C, S, kind) == pytest.approx(naive, rel=1e-12, abs=1e-12)
