"""Update-latency benchmarks and the recompute-from-scratch baseline."""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .covertree import CoverTree
from .metric import PointRecord, as_metric
from .solvers import kcenter_query

__all__ = ["PATTERNS", "LiveArray", "scratch_gonzalez", "make_schedule", "run_bench", "BenchReport"]

PATTERNS = ("insert_ramp", "churn", "delete_drain")


def scratch_gonzalez(X: np.ndarray, k: int, metric="euclidean"):
    """Farthest-point traversal over a dense array; returns (center rows, radius)."""
    metric = as_metric(metric)
    picked = [0]
    best = metric.to_many(X, X[0])
    for _ in range(min(k, len(X)) - 1):
        j = int(best.argmax())
        picked.append(j)
        np.minimum(best, metric.to_many(X, X[j]), out=best)
    return picked, float(best.max())


class LiveArray:
    """Dense copy of the live set with O(1) swap-remove, for the baseline."""

    def __init__(self, dim, capacity):
        self.X = np.empty((capacity, dim))
        self.ids = np.empty(capacity, dtype=np.int64)
        self.row = {}
        self.n = 0

    def add(self, p: PointRecord):
        self.X[self.n] = p.coords
        self.ids[self.n] = p.id
        self.row[p.id] = self.n
        self.n += 1

    def remove(self, pid):
        i = self.row.pop(pid)
        last = self.n - 1
        if i != last:
            self.X[i] = self.X[last]
            self.ids[i] = self.ids[last]
            self.row[int(self.ids[i])] = i
        self.n = last

    @property
    def view(self):
        return self.X[: self.n]


def make_schedule(pattern, n_points, n_ops=None, seed=0):
    """Return ``(preload ids, ops)`` with ops as ``("I"|"D", id)`` pairs.

    ``churn`` preloads all but ``ceil(n_ops / 2)`` points and then alternates
    a random delete with a fresh insert, so the live count stays within one
    of its starting value.
    """
    rng = np.random.default_rng(seed)
    if pattern == "insert_ramp":
        n_ops = n_points if n_ops is None else min(n_ops, n_points)
        return [], [("I", i) for i in range(n_ops)]
    if pattern == "delete_drain":
        n_ops = n_points if n_ops is None else min(n_ops, n_points)
        order = rng.permutation(n_points)[:n_ops]
        return list(range(n_points)), [("D", int(i)) for i in order]
    if pattern == "churn":
        n_ops = 1000 if n_ops is None else n_ops
        n_new = math.ceil(n_ops / 2)
        if n_new >= n_points:
            raise ValueError(f"churn with {n_ops} ops needs more than {n_new} points")
        preload = list(range(n_points - n_new))
        live = list(preload)
        pool = iter(range(n_points - n_new, n_points))
        ops = []
        for t in range(n_ops):
            if t % 2 == 0:
                j = int(rng.integers(len(live)))
                live[j], live[-1] = live[-1], live[j]
                ops.append(("D", live.pop()))
            else:
                pid = next(pool)
                live.append(pid)
                ops.append(("I", pid))
        return preload, ops
    raise ValueError(f"unknown pattern {pattern!r}; expected one of {PATTERNS}")


def _summary(values_ns):
    a = np.asarray(values_ns, dtype=float) / 1e3
    if a.size == 0:
        return {"count": 0}
    p50, p90, p99 = np.percentile(a, [50, 90, 99])
    return {
        "count": int(a.size),
        "p50_us": p50,
        "p90_us": p90,
        "p99_us": p99,
        "max_us": float(a.max()),
        "mean_us": float(a.mean()),
        "total_s": float(a.sum() / 1e6),
    }


@dataclass
class BenchReport:
    pattern: str
    n_points: int
    timings: dict = field(default_factory=dict)  # phase -> list of ns
    live_counts: list = field(default_factory=list)

    def phase(self, name):
        return _summary(self.timings.get(name, []))

    def total_s(self, name):
        return sum(self.timings.get(name, [])) / 1e9

    def rows(self):
        for name in self.timings:
            yield {"pattern": self.pattern, "phase": name, **self.phase(name)}

    def write_csv(self, fh):
        cols = ["pattern", "phase", "count", "p50_us", "p90_us", "p99_us", "max_us", "mean_us", "total_s"]
        w = csv.DictWriter(fh, fieldnames=cols)
        w.writeheader()
        for row in self.rows():
            w.writerow({c: (f"{v:.3f}" if isinstance(v, float) else v) for c, v in row.items()})


def run_bench(points, pattern, k=10, eps=1.0, n_ops=None, query_every=0, compare=False,
              checkpoints=10, seed=0, metric="euclidean") -> BenchReport:
    """Replay a synthetic op pattern against a fresh tree and time each step.

    Phases: ``preload`` and ``update`` (per-op tree maintenance), ``query``
    (a k-center query after every ``query_every``-th op) and, with
    ``compare``, ``scratch``: a from-scratch Gonzalez on the live set at
    ``checkpoints`` evenly spaced ops (``checkpoints=None`` means every op).
    """
    points = list(points)
    preload, ops = make_schedule(pattern, len(points), n_ops, seed)
    T = CoverTree(metric)
    rep = BenchReport(pattern, len(points), {"preload": [], "update": []})
    live = LiveArray(len(points[0].coords), len(points)) if compare else None
    clock = time.perf_counter_ns

    for pid in preload:
        t0 = clock()
        T.insert(points[pid])
        rep.timings["preload"].append(clock() - t0)
        if live is not None:
            live.add(points[pid])

    if checkpoints is None or checkpoints >= len(ops):
        marks = set(range(len(ops)))
    else:
        marks = {int(i) for i in np.linspace(0, len(ops) - 1, max(checkpoints, 1))}

    for t, (kind, pid) in enumerate(ops):
        t0 = clock()
        if kind == "I":
            T.insert(points[pid])
        else:
            T.delete(pid)
        rep.timings["update"].append(clock() - t0)
        rep.live_counts.append(len(T))
        if live is not None:
            live.add(points[pid]) if kind == "I" else live.remove(pid)
        if len(T) == 0:
            continue
        if query_every and (t + 1) % query_every == 0:
            t0 = clock()
            kcenter_query(T, k, eps)
            rep.timings.setdefault("query", []).append(clock() - t0)
        if live is not None and t in marks:
            t0 = clock()
            scratch_gonzalez(live.view, k, metric)
            rep.timings.setdefault("scratch", []).append(clock() - t0)
    if not rep.timings["preload"]:
        del rep.timings["preload"]
    return rep
