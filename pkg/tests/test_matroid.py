import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dyncover.matroid import (
    NullMatroid,
    PartitionMatroid,
    UniformMatroid,
    is_independent,
    matroid_intersection,
    merge_maximal,
    parse_matroid_config,
    rank,
)
from dyncover.metric import PointRecord

from conftest import recs


def labeled(labels):
    return [PointRecord(i, (float(i),), c) for i, c in enumerate(labels)]


def test_is_independent_examples():
    P = recs(range(3))
    assert is_independent(P[:2], UniformMatroid(2))
    assert not is_independent(P, UniformMatroid(2))
    p, q = labeled("aa")
    assert not is_independent([p, q], PartitionMatroid({"a": 1, "b": 1}))
    for O in (UniformMatroid(1), PartitionMatroid({"a": 1})):
        assert is_independent([], O)
    assert is_independent([], NullMatroid())
    assert not is_independent(P[:1], NullMatroid())


def test_partition_rejects_unlabeled():
    with pytest.raises(ValueError):
        is_independent(recs([0]), PartitionMatroid({"a": 1}))


def test_unknown_label_has_zero_capacity():
    (p,) = labeled("c")
    assert not is_independent([p], PartitionMatroid({"a": 1}))


def test_merge_maximal_examples():
    p, q, r = recs(range(3))
    assert merge_maximal([[p], [q], [r]], UniformMatroid(2)) == [p, q]
    A = [p, q]
    assert merge_maximal([A], UniformMatroid(2)) == A
    pa, qa, rb = labeled("aab")
    assert merge_maximal([[pa], [qa, rb]], PartitionMatroid({"a": 1, "b": 1})) == [pa, rb]


def test_rank_examples():
    assert rank(UniformMatroid(3), recs(range(10))) == 3
    assert rank(PartitionMatroid({"a": 1, "b": 2}), labeled("aabbbbb")) == 3
    assert rank(UniformMatroid(3), []) == 0


def test_intersection_examples():
    P = recs(range(5))
    assert len(matroid_intersection(P, UniformMatroid(5), UniformMatroid(2))) == 2
    assert matroid_intersection([], UniformMatroid(1), UniformMatroid(1)) == []
    # p(a,c1) q(a,c2) r(b,c2)
    pts = [PointRecord(0, (0.0,), "a"), PointRecord(1, (1.0,), "a"), PointRecord(2, (2.0,), "b")]
    cluster = {0: "c1", 1: "c2", 2: "c2"}
    O2 = PartitionMatroid({"c1": 1, "c2": 1}, key=lambda p: cluster[p.id])
    I = matroid_intersection(pts, PartitionMatroid({"a": 1, "b": 1}), O2)
    assert len(I) == 2
    assert is_independent(I, O2)


def test_parse_matroid_config(tmp_path):
    assert parse_matroid_config("none").is_null
    assert parse_matroid_config("uniform:3").upper_rank == 3
    f = tmp_path / "caps.txt"
    f.write_text("# caps\na 1\nb 2\n")
    O = parse_matroid_config(f"partition:{f}")
    assert O.kind == "partition" and O.upper_rank == 3
    for bad in ("uniform", "uniform:x", "graphic:3"):
        with pytest.raises(ValueError):
            parse_matroid_config(bad)


# ---------------------------------------------------------------- properties

labels = st.lists(st.sampled_from("abc"), min_size=0, max_size=10)


def oracles():
    return st.one_of(
        st.integers(0, 4).map(UniformMatroid),
        st.fixed_dictionaries({c: st.integers(0, 3) for c in "abc"}).map(PartitionMatroid),
    )


@given(labels, oracles(), st.data())
def test_hereditary(ls, O, data):
    X = labeled(ls)
    if not is_independent(X, O):
        X = O.greedy(X)
    mask = data.draw(st.lists(st.booleans(), min_size=len(X), max_size=len(X)))
    assert is_independent([x for x, keep in zip(X, mask) if keep], O)


@given(labels, oracles(), st.data())
def test_augmentation(ls, O, data):
    X = labeled(ls)
    order_a = data.draw(st.permutations(X))
    order_b = data.draw(st.permutations(X))
    A = O.greedy(order_a)
    B = O.greedy(order_b)[: max(0, len(A) - 1)]
    if len(A) > len(B):
        assert any(is_independent(B + [x], O) for x in A if x not in B)


@given(labels, oracles(), st.integers(1, 4), st.randoms())
def test_merge_maximal_is_maximal_and_rank_preserving(ls, O, h, rnd):
    X = labeled(ls)
    blocks = [[] for _ in range(h)]
    for x in X:
        blocks[rnd.randrange(h)].append(x)
    parts = [O.greedy(b) for b in blocks]
    M = merge_maximal(parts, O)
    assert is_independent(M, O)
    union = [x for b in parts for x in b]
    for x in union:
        if x not in M:
            assert not is_independent(M + [x], O)
    assert len(M) == rank(O, X)


def _brute_common(ground, O1, O2):
    for size in range(len(ground), -1, -1):
        for c in itertools.combinations(ground, size):
            if is_independent(c, O1) and is_independent(c, O2):
                return size
    return 0


def test_intersection_matches_exhaustive_small():
    rng = np.random.default_rng(7)
    for _ in range(60):
        n = int(rng.integers(0, 9))
        ls = rng.choice(list("abc"), size=n).tolist()
        second = rng.choice(list("xyz"), size=n).tolist()
        pts = labeled(ls)
        O1 = PartitionMatroid({c: int(rng.integers(0, 3)) for c in "abc"})
        O2 = PartitionMatroid({c: int(rng.integers(0, 3)) for c in "xyz"},
                              key=lambda p, s=second: s[p.id])
        I = matroid_intersection(pts, O1, O2)
        assert is_independent(I, O1) and is_independent(I, O2)
        assert len(I) == _brute_common(pts, O1, O2)


def test_partition_accepts_non_string_labels():
    O = PartitionMatroid({0: 1, 1: 2}, key=lambda p: p.id % 2)
    P = recs(range(4))
    assert is_independent(P[:2], O)
    assert not is_independent([P[0], P[2]], O)
    assert len(O.greedy(P)) == 3
