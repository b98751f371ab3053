"""Exhaustive reference solvers for desk-sized instances.

All ties are resolved towards the lexicographically smallest sorted id tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb
from typing import Sequence

import numpy as np

from .matroid import MatroidOracle, rank
from .metric import PointRecord, as_metric, coords_array
from .solvers.diversity import normalize_measure

__all__ = [
    "OracleBudget",
    "BudgetExceeded",
    "exact_kcenter",
    "exact_robust",
    "exact_matroid_center",
    "exact_diversity",
    "held_karp",
]


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_n: int = 40
    max_k: int = 8
    max_z: int = 8
    ceiling: int = 10 ** 7

    def check(self, n, k, z=0):
        if n > self.max_n or k > self.max_k or z > self.max_z:
            raise BudgetExceeded(f"instance (n={n}, k={k}, z={z}) outside {self}")
        size = comb(n, min(k, n)) * comb(n, min(z, n))
        if size > self.ceiling:
            raise BudgetExceeded(f"{size} combinations exceed the ceiling {self.ceiling}")


DEFAULT_BUDGET = OracleBudget()


def _setup(S, m):
    pts = sorted(S, key=lambda p: p.id)
    if not pts:
        raise ValueError("empty point set")
    return pts, as_metric(m).pairwise(coords_array(pts))


def _radii(D, combos, z=0):
    """Robust radius for each row of ``combos`` (center index tuples)."""
    d = D[:, combos].min(axis=2).T  # (n_combos, n)
    if z == 0:
        return d.max(axis=1)
    if z >= d.shape[1]:
        return np.zeros(len(d))
    return -np.partition(-d, z, axis=1)[:, z]


def _best_subset(D, n, size, z, chunk=20000):
    best = None
    it = combinations(range(n), size)
    while True:
        block = [c for _, c in zip(range(chunk), it)]
        if not block:
            return best
        r = _radii(D, np.array(block), z)
        i = int(np.argmin(r))
        if best is None or r[i] < best[1]:
            best = (block[i], float(r[i]))


def exact_kcenter(S: Sequence[PointRecord], k: int, m="euclidean", budget=DEFAULT_BUDGET):
    """Optimal ``(centers, r*_k)`` with centers drawn from ``S``."""
    pts, D = _setup(S, m)
    n = len(pts)
    if k >= n:
        return [p.id for p in pts], 0.0
    budget.check(n, k)
    idx, r = _best_subset(D, n, k, 0)
    return [pts[i].id for i in idx], r


def exact_robust(S: Sequence[PointRecord], k: int, z: int, m="euclidean", budget=DEFAULT_BUDGET):
    """Optimal ``(centers, r*_{k,z})``: the radius after dropping the z farthest points."""
    pts, D = _setup(S, m)
    n = len(pts)
    if k + z >= n:
        ids = [p.id for p in pts[: min(k, n)]]
        return ids, 0.0
    budget.check(n, k, z)
    idx, r = _best_subset(D, n, k, z)
    return [pts[i].id for i in idx], r


def exact_matroid_center(S: Sequence[PointRecord], O: MatroidOracle, m="euclidean", budget=DEFAULT_BUDGET):
    """Optimal ``(C, r*(M))`` over the independent sets of ``O`` restricted to ``S``.

    Only bases are enumerated: every independent set extends to a base whose
    radius is no larger.
    """
    pts, D = _setup(S, m)
    n = len(pts)
    r_M = rank(O, pts)
    if r_M == 0:
        raise ValueError("rank 0: no non-empty independent set")
    budget.check(n, r_M)
    best = None
    for idx in combinations(range(n), r_M):
        if not O.is_independent([pts[i] for i in idx]):
            continue
        r = float(D[:, idx].min(axis=1).max())
        if best is None or r < best[1]:
            best = (idx, r)
    _, r_k = exact_kcenter(pts, r_M, m, budget)
    assert r_k <= best[1] + 1e-12, "k-center optimum must not exceed the matroid optimum"
    return [pts[i].id for i in best[0]], best[1]


def held_karp(D: np.ndarray) -> float:
    """Exact minimum Hamiltonian cycle weight (2 points: there and back)."""
    n = len(D)
    if n <= 1:
        return 0.0
    if n == 2:
        return float(2 * D[0, 1])
    if n > 10:
        raise BudgetExceeded("Held-Karp limited to 10 points")
    if n <= 4:
        return float(min(
            sum(D[a, b] for a, b in zip((0,) + perm, perm + (0,)))
            for perm in permutations(range(1, n))
        ))
    full = 1 << (n - 1)
    dp = np.full((full, n - 1), np.inf)
    for j in range(n - 1):
        dp[1 << j, j] = D[0, j + 1]
    for mask in range(1, full):
        for j in range(n - 1):
            cur = dp[mask, j]
            if not (mask >> j) & 1 or cur == np.inf:
                continue
            for t in range(n - 1):
                if (mask >> t) & 1:
                    continue
                nm = mask | (1 << t)
                val = cur + D[j + 1, t + 1]
                if val < dp[nm, t]:
                    dp[nm, t] = val
    return float(min(dp[full - 1, j] + D[j + 1, 0] for j in range(n - 1)))


def _exact_value(D, idx, measure):
    sub = D[np.ix_(idx, idx)]
    k = len(idx)
    if measure == "remote_edge":
        return float(sub[np.triu_indices(k, 1)].min()) if k > 1 else 0.0
    if measure == "remote_clique":
        return float(sub[np.triu_indices(k, 1)].sum())
    if measure == "remote_tree":
        from .solvers.diversity import _mst

        return float(_mst(sub)[0])
    return held_karp(sub)


def exact_diversity_value(X: Sequence[PointRecord], measure: str, m="euclidean") -> float:
    """Objective of ``X`` with the exact formula for every measure."""
    measure = normalize_measure(measure)
    pts, D = _setup(X, m)
    return _exact_value(D, list(range(len(pts))), measure)


def exact_diversity(S: Sequence[PointRecord], measure: str, k: int, m="euclidean", budget=DEFAULT_BUDGET):
    """Optimal ``(C, div*_k)`` over all k-subsets of ``S``."""
    measure = normalize_measure(measure)
    pts, D = _setup(S, m)
    n = len(pts)
    if k > n:
        raise ValueError("k exceeds the number of points")
    budget.check(n, k)
    best = None
    for idx in combinations(range(n), k):
        v = _exact_value(D, list(idx), measure)
        if best is None or v > best[1]:
            best = (idx, v)
    return [pts[i].id for i in best[0]], best[1]
