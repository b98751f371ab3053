"""Matroid center: pivot-based 3-approximation on the mis coreset."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..coreset import mis_coreset
from ..covertree import CoverTree
from ..matroid import MatroidOracle, PartitionMatroid, matroid_intersection, rank
from ..metric import PointRecord, as_metric, coords_array, radius_of
from .solution import Solution

__all__ = ["solve_matroid_center", "matroid_center_query"]


def _pivots(D: np.ndarray, R: float) -> list[int]:
    piv: list[int] = []
    for i in range(len(D)):
        if all(D[i, j] > 2 * R for j in piv):
            piv.append(i)
    return piv


def solve_matroid_center(Q: Sequence[PointRecord], oracle: MatroidOracle, m="euclidean"):
    """Return ``(centers, R)`` with independent centers and radius at most ``3R`` on ``Q``.

    Candidate radii are scanned in ascending order. For each, pivots are
    picked greedily (lowest id first) more than ``2R`` apart; the radius is
    feasible when some independent set has one point within ``R`` of every
    pivot, which a matroid intersection against the pivot partition decides.
    """
    pts = sorted(Q, key=lambda p: p.id)
    if not pts:
        raise ValueError("empty coreset")
    full_rank = rank(oracle, pts)
    if full_rank == 0:
        raise ValueError("no point of the coreset is independent on its own")
    D = as_metric(m).pairwise(coords_array(pts))
    radii = np.unique(np.concatenate([[0.0], D[np.triu_indices(len(pts), 1)]]))
    for R in radii:
        piv = _pivots(D, R)
        if len(piv) > full_rank:
            continue
        owner = {}
        for j, i in enumerate(piv):
            for t in np.flatnonzero(D[i] <= R):
                owner[pts[t].id] = j  # balls are disjoint since pivots are > 2R apart
        ground = [p for p in pts if p.id in owner]
        blocks = PartitionMatroid({str(j): 1 for j in range(len(piv))}, key=lambda x: str(owner[x.id]))
        C = matroid_intersection(ground, oracle, blocks)
        if len(C) == len(piv):
            return C, float(R)
    raise AssertionError("no feasible radius; the largest candidate must succeed")


def matroid_center_query(T: CoverTree, eps: float, certify: bool = False) -> Solution:
    """(3 + O(eps))-approximate matroid center for the tree's oracle."""
    if T.oracle.is_null:
        raise ValueError("matroid center needs a tree built with a matroid oracle")
    if len(T) == 0:
        raise ValueError("empty tree")
    Q = mis_coreset(T, eps)
    C, R = solve_matroid_center(Q.points, T.oracle, T.metric)
    r_q = radius_of(C, Q.points, T.metric)
    meta = {
        "pivot_radius": R,
        "rank": T.rank,
        "coreset_size": len(Q),
        "level": Q.source_level,
        "coreset_radius": r_q,
        # heads with an empty mis (all loops) have no coreset point, so bound via the heads
        "radius_bound": radius_of(C, Q.heads, T.metric) + Q.slack,
    }
    objective = r_q
    if certify:
        objective = radius_of(C, T.points(), T.metric)
        meta["certified"] = True
    return Solution(sorted(p.id for p in C), objective, meta)
