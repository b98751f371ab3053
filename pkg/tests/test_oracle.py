import itertools

import numpy as np
import pytest

from dyncover.matroid import PartitionMatroid, UniformMatroid, is_independent
from dyncover.metric import PointRecord, radius_of
from dyncover.oracle import (
    BudgetExceeded,
    OracleBudget,
    exact_diversity,
    exact_diversity_value,
    exact_kcenter,
    exact_matroid_center,
    exact_robust,
    held_karp,
)

from conftest import random_points, recs


def naive_kcenter(S, k):
    return min(radius_of(C, S) for C in itertools.combinations(S, min(k, len(S))))


def test_exact_kcenter_examples():
    assert exact_kcenter(recs([0, 1, 10]), 2)[1] == 1.0
    assert exact_kcenter(recs([0, 1, 10]), 3)[1] == 0.0
    assert exact_kcenter(recs([0, 2]), 1)[1] == 2.0


def test_exact_kcenter_lexicographic_tie():
    assert exact_kcenter(recs([0, 1, 2]), 1) == ([1], 1.0)
    assert exact_kcenter(recs([0, 2]), 1)[0] == [0]


def test_exact_kcenter_matches_naive():
    rng = np.random.default_rng(1)
    for _ in range(30):
        S = random_points(rng, int(rng.integers(1, 10)))
        k = int(rng.integers(1, 4))
        C, r = exact_kcenter(S, k)
        assert r == pytest.approx(naive_kcenter(S, k))
        assert radius_of([p for p in S if p.id in C], S) == pytest.approx(r)


def test_exact_robust_examples():
    S = recs([0, 1, 2, 100])
    assert exact_robust(S, 1, 1) == ([1], 1.0)
    assert exact_robust(S, 2, 2)[1] == 0.0
    assert exact_robust(S, 2, 0)[1] == exact_kcenter(S, 2)[1]


def test_robust_relations():
    rng = np.random.default_rng(2)
    for _ in range(30):
        S = random_points(rng, int(rng.integers(3, 12)))
        k, z = int(rng.integers(1, 3)), int(rng.integers(0, 3))
        rkz = exact_robust(S, k, z)[1]
        assert exact_robust(S, k, 0)[1] == exact_kcenter(S, k)[1]
        assert exact_kcenter(S, k + z)[1] <= rkz


def test_exact_matroid_center():
    S = [PointRecord(0, (0.0,), "a"), PointRecord(1, (1.0,), "b"),
         PointRecord(2, (10.0,), "a"), PointRecord(3, (11.0,), "b")]
    C, r = exact_matroid_center(S, PartitionMatroid({"a": 1, "b": 1}))
    assert r == 1.0 and is_independent([S[i] for i in C], PartitionMatroid({"a": 1, "b": 1}))
    assert exact_matroid_center(recs([3]), UniformMatroid(1))[1] == 0.0
    rng = np.random.default_rng(3)
    for _ in range(15):
        S = random_points(rng, int(rng.integers(2, 10)))
        K = int(rng.integers(1, 4))
        assert exact_matroid_center(S, UniformMatroid(K))[1] == exact_kcenter(S, K)[1]


def test_held_karp():
    sq = np.array([[0, 1, 1.4, 1], [1, 0, 1, 1.4], [1.4, 1, 0, 1], [1, 1.4, 1, 0]])
    assert held_karp(sq) == pytest.approx(4.0)
    D = np.abs(np.subtract.outer([0.0, 1.0, 10.0], [0.0, 1.0, 10.0]))
    assert held_karp(D) == 20.0
    rng = np.random.default_rng(4)
    for n in range(3, 7):
        X = rng.random((n, 2))
        D = np.linalg.norm(X[:, None] - X[None], axis=-1)
        brute = min(sum(D[a, b] for a, b in zip((0,) + p, p + (0,)))
                    for p in itertools.permutations(range(1, n)))
        assert held_karp(D) == pytest.approx(brute)


def test_exact_diversity_examples():
    S = recs([0, 1, 10])
    assert exact_diversity(S, "remote_edge", 2)[1] == 10.0
    assert exact_diversity(S, "remote_clique", 3)[1] == 1 + 10 + 9
    assert exact_diversity(S, "remote_tree", 3)[1] == 10.0
    assert exact_diversity_value(S, "remote_cycle") == 20.0


def test_budget():
    with pytest.raises(BudgetExceeded):
        exact_kcenter(recs(range(60)), 2)
    with pytest.raises(BudgetExceeded):
        exact_robust(recs(range(30)), 8, 8, budget=OracleBudget(ceiling=1000))
    OracleBudget().check(14, 3, 2)  # desk-scale instances fit the default budget
