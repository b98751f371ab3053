"""Diversity maximization: remote-edge, remote-clique, remote-tree, remote-cycle."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..coreset import kcenter_coreset, mis_coreset
from ..covertree import CoverTree
from ..metric import PointRecord, as_metric, coords_array
from .kcenter import farthest_point_order
from .solution import Solution

__all__ = [
    "MEASURES",
    "APPROX_FACTOR",
    "mst_weight",
    "tour_weight_2approx",
    "diversity_value",
    "remote_clique_greedy",
    "diversity_query",
]

MEASURES = ("remote_edge", "remote_clique", "remote_tree", "remote_cycle")
APPROX_FACTOR = {"remote_edge": 2.0, "remote_clique": 2.0, "remote_tree": 4.0, "remote_cycle": 3.0}

_SHORT = {"edge": "remote_edge", "clique": "remote_clique", "tree": "remote_tree", "cycle": "remote_cycle"}


def normalize_measure(measure: str) -> str:
    measure = _SHORT.get(measure, measure).replace("-", "_")
    if measure not in MEASURES:
        raise ValueError(f"unknown diversity measure {measure!r}")
    return measure


def _mst(D: np.ndarray):
    """Dense Prim from index 0; returns (weight, parent array)."""
    n = len(D)
    parent = np.full(n, -1)
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    best[0] = 0.0
    total = 0.0
    for _ in range(n):
        cand = np.where(in_tree, np.inf, best)
        u = int(np.argmin(cand))
        in_tree[u] = True
        total += best[u]
        closer = ~in_tree & (D[u] < best)
        best[closer] = D[u][closer]
        parent[closer] = u
    return total, parent


def _sorted_matrix(X: Sequence[PointRecord], m):
    pts = sorted(X, key=lambda p: p.id)
    if not pts:
        raise ValueError("empty point set")
    return pts, as_metric(m).pairwise(coords_array(pts))


def mst_weight(X: Sequence[PointRecord], m="euclidean") -> float:
    """Exact minimum spanning tree weight of the complete graph on ``X``."""
    _, D = _sorted_matrix(X, m)
    return float(_mst(D)[0])


def tour_weight_2approx(X: Sequence[PointRecord], m="euclidean") -> float:
    """Weight of the preorder shortcut of the MST (rooted at the lowest id).

    Fewer than three points give the degenerate value ``2 * mst_weight``.
    """
    pts, D = _sorted_matrix(X, m)
    total, parent = _mst(D)
    n = len(pts)
    if n < 3:
        return float(2 * total)
    kids = [[] for _ in range(n)]
    for v in range(1, n):
        kids[parent[v]].append(v)
    order = []
    stack = [0]
    while stack:
        u = stack.pop()
        order.append(u)
        stack.extend(reversed(kids[u]))
    tour = sum(D[order[i], order[i + 1]] for i in range(n - 1)) + D[order[-1], order[0]]
    return float(tour)


def diversity_value(X: Sequence[PointRecord], measure: str, m="euclidean") -> float:
    """Objective of ``X``; remote-cycle uses the MST-doubling tour."""
    measure = normalize_measure(measure)
    pts, D = _sorted_matrix(X, m)
    if measure == "remote_edge":
        if len(pts) < 2:
            return 0.0
        return float(D[np.triu_indices(len(pts), 1)].min())
    if measure == "remote_clique":
        return float(D[np.triu_indices(len(pts), 1)].sum())
    if measure == "remote_tree":
        return float(_mst(D)[0])
    return tour_weight_2approx(pts, m)


def remote_clique_greedy(Q: Sequence[PointRecord], k: int, m="euclidean") -> list:
    """Repeatedly take the farthest remaining pair; an odd last slot goes to
    the point with the largest summed distance to the chosen set."""
    pts, D = _sorted_matrix(Q, m)
    n = len(pts)
    k = min(k, n)
    alive = np.ones(n, dtype=bool)
    chosen: list[int] = []
    work = D.copy()
    np.fill_diagonal(work, -np.inf)
    for _ in range(k // 2):
        i, j = np.unravel_index(int(np.argmax(work)), work.shape)
        chosen += [int(i), int(j)]
        for t in (i, j):
            alive[t] = False
            work[t, :] = -np.inf
            work[:, t] = -np.inf
    if len(chosen) < k:
        if chosen:
            score = np.where(alive, D[:, chosen].sum(axis=1), -np.inf)
        else:
            score = np.where(alive, 0.0, -np.inf)
        chosen.append(int(np.argmax(score)))
    return [pts[i] for i in chosen]


def diversity_query(T: CoverTree, measure: str, k: int, eps: float) -> Solution:
    """(alpha_div + O(eps))-approximate diversity maximization over the points of ``T``.

    Remote-edge and remote-cycle run on the k-center coreset; remote-clique
    and remote-tree need a tree augmented with a uniform matroid of rank at
    least ``k`` and run on its mis coreset.
    """
    measure = normalize_measure(measure)
    if k < 2:
        raise ValueError("diversity needs k >= 2")
    if k > len(T):
        raise ValueError(f"k={k} exceeds the {len(T)} stored points")
    if measure in ("remote_edge", "remote_cycle"):
        Q = kcenter_coreset(T, eps, k)
        pts = list(Q.points)
    else:
        if T.oracle.kind != "uniform":
            raise ValueError(f"{measure} needs a tree augmented with a uniform matroid")
        Q = mis_coreset(T, eps, k)
        pts = list(Q.points)
    if measure == "remote_clique":
        C = remote_clique_greedy(pts, k, T.metric)
    else:
        C, _, _ = farthest_point_order(pts, k, T.metric)
    value = diversity_value(C, measure, T.metric)
    meta = {"measure": measure, "coreset_size": len(Q), "level": Q.source_level}
    return Solution(sorted(p.id for p in C), value, meta)
