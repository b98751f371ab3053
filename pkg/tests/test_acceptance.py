"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Ratios are measured against the exhaustive oracles; timings are wall clock on
the current machine.
"""

import math
import time

import numpy as np
import pytest

from dyncover.bench import run_bench
from dyncover.coreset import kcenter_coreset, outliers_coreset
from dyncover.covertree import CoverTree, validate_invariants
from dyncover.datasets import to_records, uniform_points
from dyncover.matroid import PartitionMatroid, UniformMatroid, is_independent, matroid_intersection
from dyncover.metric import PointRecord, radius_of
from dyncover.oracle import exact_diversity, exact_kcenter, exact_matroid_center, exact_robust
from dyncover.solvers import (
    APPROX_FACTOR,
    default_ensemble_size,
    diversity_query,
    kcenter_query,
    matroid_center_query,
    outliers_cluster,
    robust_query,
    robust_radius,
)

from conftest import build, random_points


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}")
        assert ok, detail
    return emit


def _instances(seed, count, n_lo, n_hi, cats=None):
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(n_lo, n_hi + 1))
        yield rng, random_points(rng, n, kind="uniform" if i % 2 else "clustered", cats=cats)


def test_1_structure_invariants(report):
    t0 = time.perf_counter()
    checks, worst_n = 0, 0
    setups = [("uniform", UniformMatroid(3)), ("clustered", PartitionMatroid({"a": 1, "b": 2, "c": 1}))]
    for seed, (kind, oracle) in enumerate(setups):
        rng = np.random.default_rng(100 + seed)
        pool = random_points(rng, 1000, kind=kind, cats="abc")
        T = CoverTree("euclidean", oracle)
        live, nxt = [], 0
        for _ in range(1000):
            grow = len(live) < 500 and rng.random() < 0.75
            if live and not grow:
                j = int(rng.integers(len(live)))
                live[j], live[-1] = live[-1], live[j]
                T.delete(live.pop())
            else:
                T.insert(pool[nxt])
                live.append(pool[nxt].id)
                nxt += 1
            rep = validate_invariants(T)
            if not rep.ok:
                report(1, "structure invariants", False, f"{kind}: {rep.violation}")
            assert sorted(p.id for p in T) == sorted(live)
            checks += 1
            worst_n = max(worst_n, len(live))
    elapsed = time.perf_counter() - t0
    report(1, "structure invariants", elapsed < 60,
           f"{checks} validations, peak n={worst_n}, 0 violations, {elapsed:.1f}s (limit 60s)")


def test_2_coreset_guarantee(report):
    t0 = time.perf_counter()
    violations, cases, worst = 0, 0, 0.0
    for _, S in _instances(2, 50, 5, 30):
        T = build(S)
        for k in (2, 3, 4):
            _, r_star = exact_kcenter(S, k)
            for eps in (0.5, 1.0, 2.0):
                r_q = radius_of(kcenter_coreset(T, eps, k).points, S)
                cases += 1
                violations += r_q > eps * r_star
                worst = max(worst, r_q / (eps * r_star))
    elapsed = time.perf_counter() - t0
    report(2, "coreset guarantee", violations == 0 and elapsed < 30,
           f"{cases} cases, {violations} violations, max r_Q/(eps r*) = {worst:.3f}, "
           f"{elapsed:.1f}s (limit 30s)")


def test_3_kcenter_ratio(report):
    t0 = time.perf_counter()
    bad_g = bad_e = cases = 0
    worst_g = worst_e = 0.0
    for _, S in _instances(2, 50, 5, 30):
        T = build(S)
        for k in (2, 3, 4):
            _, r_star = exact_kcenter(S, k)
            for eps in (0.5, 1.0, 2.0):
                g = kcenter_query(T, k, eps, certify=True).objective / r_star
                m = max(1, math.ceil((1 / eps) * math.log(1 / eps)))
                assert m == default_ensemble_size(eps)
                e = kcenter_query(T, k, eps, mode="ensemble", m=m, certify=True).objective / r_star
                cases += 1
                bad_g += g > 2 + 3 * eps
                bad_e += e > 2 + 9 * eps
                worst_g = max(worst_g, g / (2 + 3 * eps))
                worst_e = max(worst_e, e / (2 + 9 * eps))
    elapsed = time.perf_counter() - t0
    report(3, "k-center ratio", bad_g == 0 and bad_e == 0 and elapsed < 60,
           f"{cases} cases; gonzalez {bad_g} violations (max ratio/bound {worst_g:.3f}); "
           f"ensemble {bad_e} violations (max ratio/bound {worst_e:.3f}); {elapsed:.1f}s (limit 60s)")


def test_4_robust_ratio(report):
    t0 = time.perf_counter()
    bad_ratio = bad_contract = cases = guesses_checked = 0
    worst = 0.0
    for rng, S in _instances(4, 60, 6, 16):
        T = build(S)
        k, z = int(rng.integers(1, 4)), int(rng.integers(0, 3))
        _, r_star = exact_robust(S, k, z)
        for eps in (0.1, 0.5):
            sol = robust_query(T, k, z, eps)
            r = robust_radius([T.get(i) for i in sol.centers], S, z)
            cases += 1
            if r_star == 0:
                bad_ratio += r > 0
            else:
                bad_ratio += r > (3 + 9 * eps) * r_star
                worst = max(worst, r / r_star / (3 + 9 * eps))
            # every guess of the schedule at or above the optimum leaves weight <= z
            Q = outliers_coreset(T, eps, k, z)
            g = T.scale(T.ell_max)
            while g >= r_star and g > 0:
                bad_contract += outliers_cluster(Q.entries, k, g, eps).residual_weight > z
                guesses_checked += 1
                g /= 1 + eps
    elapsed = time.perf_counter() - t0
    report(4, "robust ratio", bad_ratio == 0 and bad_contract == 0 and elapsed < 120,
           f"{cases} cases, {bad_ratio} ratio violations (max ratio/bound {worst:.3f}); "
           f"{guesses_checked} guesses >= r*, {bad_contract} with residual > z; "
           f"{elapsed:.1f}s (limit 120s)")


def _partition(rng):
    """Random partition matroid of rank <= 3 over labels a, b, c."""
    while True:
        caps = {c: int(rng.integers(0, 3)) for c in "abc"}
        if 1 <= sum(caps.values()) <= 3:
            return PartitionMatroid(caps)


def test_5_matroid_center_ratio(report):
    t0 = time.perf_counter()
    bad_indep = bad_ratio = cases = 0
    worst = 0.0
    for rng, S in _instances(5, 40, 5, 14, cats="abc"):
        O = _partition(rng)
        T = build(S, oracle=O)
        _, r_star = exact_matroid_center(S, O)
        for eps in (0.1, 0.5, 1.0):
            sol = matroid_center_query(T, eps)
            C = [T.get(i) for i in sol.centers]
            r = radius_of(C, S)
            cases += 1
            bad_indep += not is_independent(C, O)
            bad_ratio += r > (3 + 9 * eps) * r_star
            if r_star > 0:
                worst = max(worst, r / r_star / (3 + 9 * eps))
    elapsed = time.perf_counter() - t0
    report(5, "matroid center ratio", bad_indep == 0 and bad_ratio == 0 and elapsed < 120,
           f"{cases} cases, {bad_indep} dependent outputs, {bad_ratio} ratio violations "
           f"(max ratio/bound {worst:.3f}); {elapsed:.1f}s (limit 120s)")


def test_6_diversity_ratios(report):
    t0 = time.perf_counter()
    bad, cases = 0, 0
    worst = {m: 0.0 for m in APPROX_FACTOR}
    for rng, S in _instances(6, 30, 5, 12):
        k = int(rng.integers(2, 5))
        T = build(S, oracle=UniformMatroid(k))
        for measure, alpha in APPROX_FACTOR.items():
            _, best = exact_diversity(S, measure, k)
            for eps in (0.1, 0.5, 1.0):
                got = diversity_query(T, measure, k, eps).objective
                cases += 1
                bad += got < best / (alpha + 9 * eps)
                worst[measure] = max(worst[measure], best / got / (alpha + 9 * eps))
    elapsed = time.perf_counter() - t0
    detail = ", ".join(f"{m} {v:.3f}" for m, v in worst.items())
    report(6, "diversity ratios", bad == 0 and elapsed < 120,
           f"{cases} cases, {bad} violations; max (div*/div)/bound: {detail}; {elapsed:.1f}s (limit 120s)")


def _exhaustive_common_max(labels1, caps1, labels2, caps2):
    """Largest subset meeting both capacity vectors, by bitmask enumeration."""
    n = len(labels1)
    masks = np.arange(1 << n)
    bits = (masks[:, None] >> np.arange(n)) & 1
    ok = np.ones(len(masks), dtype=bool)
    for labels, caps in ((labels1, caps1), (labels2, caps2)):
        onehot = np.zeros((n, len(caps)), dtype=int)
        onehot[np.arange(n), labels] = 1
        ok &= (bits @ onehot <= np.asarray(caps)).all(axis=1)
    return int(bits[ok].sum(axis=1).max())


def test_7_matroid_intersection(report):
    rng = np.random.default_rng(7)
    bad = 0
    for _ in range(200):
        n = int(rng.integers(0, 13))
        pts = [PointRecord(i, (float(i),)) for i in range(n)]
        encoded = []
        oracles = []
        for _side in range(2):
            if rng.random() < 0.4:
                K = int(rng.integers(0, n + 2))
                labels, caps = [0] * n, [K]
                oracles.append(UniformMatroid(K))
            else:
                h = int(rng.integers(1, 5))
                labels = rng.integers(h, size=n).tolist()
                caps = rng.integers(0, 3, size=h).tolist()
                lab = dict(zip(range(n), labels))
                oracles.append(PartitionMatroid({j: c for j, c in enumerate(caps)},
                                                key=lambda p, lab=lab: lab[p.id]))
            encoded.append((labels, caps))
        I = matroid_intersection(pts, *oracles)
        expect = _exhaustive_common_max(*encoded[0], *encoded[1]) if n else 0
        bad += len(I) != expect or not all(is_independent(I, O) for O in oracles)
    report(7, "matroid intersection", bad == 0, f"200 grounds, {bad} mismatches vs exhaustive")


def test_8_dynamic_vs_scratch(report):
    pts = to_records(uniform_points(100_000, 2, seed=8))
    rep = run_bench(pts, "churn", k=10, eps=1.0, n_ops=1000, query_every=1,
                    compare=True, checkpoints=None, seed=8)
    assert rep.phase("query")["count"] == 1000 and rep.phase("scratch")["count"] == 1000
    assert max(rep.live_counts) - min(rep.live_counts) <= 1
    dynamic = rep.total_s("update") + rep.total_s("query")
    scratch = rep.total_s("scratch")
    speedup = scratch / dynamic
    report(8, "dynamic vs scratch", speedup >= 5,
           f"maintenance+query {dynamic:.2f}s vs from-scratch {scratch:.2f}s over 1000 ops "
           f"at n=1e5: {speedup:.1f}x (need >= 5x)")


def test_9_update_scaling(report):
    pts = to_records(uniform_points(101_000, 2, seed=9))
    T = CoverTree()
    lat = np.empty(len(pts))
    clock = time.perf_counter_ns
    for i, p in enumerate(pts):
        t0 = clock()
        T.insert(p)
        lat[i] = clock() - t0
    small = float(np.median(lat[9_000:11_000])) / 1e3
    large = float(np.median(lat[99_000:101_000])) / 1e3
    report(9, "update scaling", large <= 3 * small,
           f"median insert {small:.1f}us at n=1e4 vs {large:.1f}us at n=1e5: "
           f"{large / small:.2f}x (need <= 3x)")
