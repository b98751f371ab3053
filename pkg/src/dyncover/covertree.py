"""Augmented cover tree in explicit representation.

Levels decrease towards the leaves. With base ``alpha`` and scale ``beta``
the tree keeps, at every implicit level ``l``:

* nesting: the points of level ``l`` also appear at level ``l - 1``;
* covering: every node lies within ``beta * alpha**(l + 1)`` of its parent;
* separation: distinct nodes of level ``l`` are more than ``beta * alpha**l`` apart.

Chains of nodes that only have their self-child are coalesced into the
chain head, so an explicit node at level ``L`` whose children sit at level
``c`` stands for the implicit nodes at levels ``L, L-1, ..., c+1``.

Each explicit node also carries ``weight`` (the size of its subtree's point
set) and ``mis`` (a maximal independent set of those points for the
attached matroid oracle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .matroid import MatroidOracle, NullMatroid
from .metric import Metric, PointRecord, as_metric

__all__ = [
    "CoverTree",
    "TreeNode",
    "CoverSetCursor",
    "ValidationReport",
    "new_tree",
    "validate_invariants",
    "level_size_profile",
    "extract_level",
]


class TreeNode:
    __slots__ = ("point", "x", "level", "parent", "children", "weight", "mis")

    def __init__(self, point: PointRecord, level: int):
        self.point = point
        self.x = point.coords
        self.level = level
        self.parent: TreeNode | None = None
        self.children: list[TreeNode] = []
        self.weight = 1
        self.mis: list[PointRecord] = []

    def __repr__(self):
        return (
            f"TreeNode(id={self.point.id}, level={self.level}, "
            f"weight={self.weight}, children={len(self.children)})"
        )


@dataclass
class CoverSetCursor:
    """One cover set of a descent: explicit heads standing for implicit nodes at ``level``."""

    level: int
    nodes: list = field(default_factory=list)


@dataclass
class ValidationReport:
    ok: bool
    violation: str | None = None
    checked_nodes: int = 0

    def __bool__(self):
        return self.ok


class CoverTree:
    """Fully dynamic augmented cover tree.

    Parameters
    ----------
    metric : Metric or str
        One of ``euclidean``/``manhattan``/``chebyshev`` (or ``l2``/``l1``/``linf``).
    oracle : MatroidOracle, optional
        Matroid whose maximal independent sets are maintained per node.
        Defaults to the null matroid (mis fields stay empty).
    alpha, beta : float
        Level base and scale. Deletion is only available for ``alpha=2, beta=1``.
    """

    def __init__(self, metric="euclidean", oracle: MatroidOracle | None = None,
                 alpha: float = 2.0, beta: float = 1.0):
        if not alpha > 1:
            raise ValueError(f"alpha must exceed 1, got {alpha}")
        if not beta > 0:
            raise ValueError(f"beta must be positive, got {beta}")
        self.metric = as_metric(metric)
        self.oracle = oracle if oracle is not None else NullMatroid()
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.standard = self.alpha == 2.0 and self.beta == 1.0
        self.root: TreeNode | None = None
        self.ell_max = 0
        self.dim: int | None = None
        self._registry: dict[int, TreeNode] = {}
        self._coords: dict[tuple, int] = {}
        self._scales: dict[int, float] = {}
        self._dist = self.metric.pair

    # ------------------------------------------------------------------ sizes

    def __len__(self):
        return len(self._registry)

    def __contains__(self, pid):
        return pid in self._registry

    def __iter__(self) -> Iterator[PointRecord]:
        return (node.point for node in self._registry.values())

    def points(self) -> list[PointRecord]:
        return [node.point for node in self._registry.values()]

    def get(self, pid) -> PointRecord:
        return self._registry[pid].point

    def leaf(self, pid) -> TreeNode:
        """Deepest explicit node of the point with id ``pid``."""
        return self._registry[pid]

    # ------------------------------------------------------------ level maths

    def scale(self, ell: int) -> float:
        """``beta * alpha**ell``; exact for the standard tree."""
        s = self._scales.get(ell)
        if s is None:
            if self.standard:
                s = math.ldexp(1.0, ell)
            else:
                s = self.beta * self.alpha ** ell
            self._scales[ell] = s
        return s

    def level_for(self, d: float) -> int:
        """Smallest level ``L`` with ``scale(L) >= d`` (``d > 0``)."""
        if self.standard:
            m, e = math.frexp(d)
            return e - 1 if m == 0.5 else e
        L = math.ceil(math.log(d / self.beta) / math.log(self.alpha))
        while self.scale(L) < d:
            L += 1
        while self.scale(L - 1) >= d:
            L -= 1
        return L

    def covering_slack(self, ell: int) -> float:
        """Bound on the distance from any point to its ancestor at level ``ell``."""
        return self.scale(ell) * self.alpha / (self.alpha - 1.0)

    @property
    def rank(self) -> int:
        """Rank of the oracle restricted to the stored points (size of the root mis)."""
        return len(self.root.mis) if self.root is not None else 0

    # ---------------------------------------------------------------- updates

    def _leaf_mis(self, point):
        if self.oracle.is_null:
            return []
        return [point] if self.oracle.extends([], point) else []

    def _refresh(self, node: TreeNode):
        ch = node.children
        if ch:
            node.weight = sum(c.weight for c in ch)
            if self.oracle.is_null:
                node.mis = []
            else:
                node.mis = self.oracle.greedy(x for c in ch for x in c.mis)
        else:
            node.weight = 1
            node.mis = self._leaf_mis(node.point)

    def insert(self, point: PointRecord) -> None:
        """Insert a point. Raises ``ValueError`` on a duplicate id or coordinates."""
        if point.id in self._registry:
            raise ValueError(f"duplicate id {point.id}")
        if self.dim is not None and len(point.coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(point.coords)}")
        if point.coords in self._coords:
            raise ValueError(
                f"point {point.id} duplicates the coordinates of point {self._coords[point.coords]}"
            )
        leaf_mis = self._leaf_mis(point)  # label errors surface before any mutation
        self.dim = len(point.coords)

        if self.root is None:
            node = TreeNode(point, 0)
            node.mis = leaf_mis
            self.root = node
            self.ell_max = 0
            self._registry[point.id] = node
            self._coords[point.coords] = point.id
            return

        dist = self._dist
        scale = self.scale
        x = point.coords
        root = self.root
        d_root = dist(x, root.x)
        if d_root > scale(self.ell_max):
            self.ell_max = self.level_for(d_root)
            root.level = self.ell_max

        # top-down: cover sets as (node, dist to p); covers[i] is at level ell_max - i
        covers = []
        Q = [(root, d_root)]
        ell = self.ell_max
        while Q:
            covers.append(Q)
            thr = scale(ell)
            nxt = []
            for node, dn in Q:
                ch = node.children
                if ch and ch[0].level == ell - 1:
                    for c in ch:
                        dc = dn if c.point is node.point else dist(x, c.x)
                        if dc <= thr:
                            nxt.append((c, dc))
                elif dn <= thr:
                    nxt.append((node, dn))
            Q = nxt
            ell -= 1

        # lowest level whose parent cover set is within reach
        i = len(covers) - 1
        while min(dn for _, dn in covers[i]) > scale(ell + 1):
            ell += 1
            i -= 1
        thr = scale(ell + 1)
        v = None
        best = None
        for node, dn in covers[i]:
            if dn <= thr:
                key = (dn, node.point.id)
                if best is None or key < best:
                    best, v = key, node

        u = TreeNode(point, ell)
        u.mis = leaf_mis
        ch = v.children
        if ch and ch[0].level == ell:
            ch.append(u)
        else:
            w = TreeNode(v.point, ell)
            w.children = ch
            for c in ch:
                c.parent = w
            w.weight = v.weight
            w.mis = list(v.mis)
            w.parent = v
            v.children = [w, u]
            if not ch:
                self._registry[v.point.id] = w
        u.parent = v
        self._registry[point.id] = u
        self._coords[point.coords] = point.id

        oracle = self.oracle
        track = not oracle.is_null
        t = v
        while t is not None:
            t.weight += 1
            if track and oracle.extends(t.mis, point):
                t.mis.append(point)
            t = t.parent

    def delete(self, pid: int) -> None:
        """Remove the point with id ``pid``. Raises ``KeyError`` for unknown ids."""
        if pid not in self._registry:
            raise KeyError(f"unknown id {pid}")
        if not self.standard:
            raise ValueError("deletion requires a standard tree (alpha=2, beta=1)")
        point = self._registry[pid].point
        if len(self._registry) == 1:
            self.root = None
            self.ell_max = 0
            self.dim = None
            self._registry.clear()
            self._coords.clear()
            return

        dist = self._dist
        scale = self.scale
        x = point.coords
        root = self.root
        ell_max = self.ell_max

        # top-down phase, down to the level of p's leaf
        covers = []
        Q = [(root, dist(x, root.x))]
        ell = ell_max
        while True:
            covers.append(Q)
            if any(node.point is point and not node.children for node, _ in Q):
                break
            thr = scale(ell)
            nxt = []
            for node, dn in Q:
                ch = node.children
                if ch and ch[0].level == ell - 1:
                    for c in ch:
                        dc = dn if c.point is node.point else dist(x, c.x)
                        if dc <= thr:
                            nxt.append((c, dc))
                elif dn <= thr:
                    nxt.append((node, dn))
            Q = nxt
            ell -= 1

        # bottom-up phase
        registry = self._registry
        R: list[TreeNode] = []
        while ell <= ell_max - 1:
            Q_here = covers[ell_max - ell]
            Q_up = covers[ell_max - ell - 1]
            for node, _ in Q_here:
                if node.point is point and node.level == ell:
                    v = node.parent
                    v.children.remove(node)
                    if v.point is point:
                        R.extend(v.children)
                        v.children = []
                    elif len(v.children) == 1:
                        c = v.children[0]
                        v.children = c.children
                        for g in c.children:
                            g.parent = v
                        if registry.get(c.point.id) is c:
                            registry[c.point.id] = v
                    break

            thr = scale(ell + 1)
            R_up: list[TreeNode] = []
            for w in R:
                target = None
                for cand, _ in Q_up:
                    if cand.point is not point and dist(w.x, cand.x) <= thr:
                        target = cand
                        break
                if target is None:
                    for cand in R_up:
                        if dist(w.x, cand.x) <= thr:
                            target = cand
                            break
                if target is None:
                    w.level = ell + 1
                    w.parent = None
                    R_up.append(w)
                    continue
                tch = target.children
                if tch and tch[0].level == ell:
                    tch.append(w)
                else:
                    z = TreeNode(target.point, ell)
                    z.children = tch
                    for c in tch:
                        c.parent = z
                    self._refresh(z)
                    z.parent = target
                    target.children = [z, w]
                    if not tch:
                        registry[target.point.id] = z
                w.parent = target

            for node, _ in Q_up:
                if node.level == ell + 1 and node.point is not point:
                    self._refresh(node)
            for node in R_up:
                self._refresh(node)
            R = R_up
            ell += 1

        # root level
        if point is not root.point:
            if not R:
                if root.children:
                    self.ell_max = root.children[0].level + 1
                    root.level = self.ell_max
            else:
                new_root = TreeNode(root.point, ell_max + 1)
                new_root.children = [root] + R
                for c in new_root.children:
                    c.parent = new_root
                self._refresh(new_root)
                self.root = new_root
                self.ell_max = ell_max + 1
        else:
            if len(R) == 1:
                v = R[0]
                v.parent = None
                if v.children:
                    v.level = v.children[0].level + 1
                self.ell_max = v.level
                self._refresh(v)
                self.root = v
            else:
                v = R[0]
                new_root = TreeNode(v.point, ell_max + 1)
                new_root.children = list(R)
                for c in R:
                    c.parent = new_root
                self._refresh(new_root)
                self.root = new_root
                self.ell_max = ell_max + 1

        del registry[pid]
        del self._coords[point.coords]

    # ---------------------------------------------------------------- queries

    def descend(self, p: PointRecord, stop_at_leaf: bool = False) -> list[CoverSetCursor]:
        """Cover sets for ``p`` from the root level downwards.

        Stops at the first empty cover set (included as the last cursor), or
        at the level where a leaf with p's coordinates is reached (with
        ``stop_at_leaf``, p's own leaf).
        """
        if self.root is None:
            raise ValueError("empty tree")
        dist = self._dist
        x = p.coords
        out = []
        Q = [(self.root, dist(x, self.root.x))]
        ell = self.ell_max
        while True:
            out.append(CoverSetCursor(ell, [(node, ell) for node, _ in Q]))
            if not Q:
                break
            if stop_at_leaf and any(n.point.id == p.id and not n.children for n, _ in Q):
                break
            if any(dn == 0 and not n.children for n, dn in Q):
                break  # p sits on a leaf; that leaf stays in every lower cover set
            thr = self.scale(ell)
            nxt = []
            for node, dn in Q:
                ch = node.children
                if ch and ch[0].level == ell - 1:
                    for c in ch:
                        dc = dist(x, c.x)
                        if dc <= thr:
                            nxt.append((c, dc))
                elif dn <= thr:
                    nxt.append((node, dn))
            Q = nxt
            ell -= 1
        return out

    def iter_levels(self) -> Iterator[tuple[int, int | None, list[TreeNode]]]:
        """Walk the implicit levels top-down in runs of identical node sets.

        Yields ``(top, bottom, heads)``: the explicit heads standing for
        ``T_l`` for every ``l`` in ``[bottom, top]``. The last run has
        ``bottom=None`` (it extends downwards forever) and is the first level
        at which every point is its own node.
        """
        if self.root is None:
            return
        heads = [self.root]
        top = self.ell_max
        while True:
            nxt_level = None
            for h in heads:
                if h.children:
                    c = h.children[0].level
                    if nxt_level is None or c > nxt_level:
                        nxt_level = c
            if nxt_level is None:
                yield top, None, heads
                return
            yield top, nxt_level + 1, heads
            nh = []
            for h in heads:
                ch = h.children
                if ch and ch[0].level == nxt_level:
                    nh.extend(ch)
                else:
                    nh.append(h)
            heads = nh
            top = nxt_level

    def level_heads(self, ell: int) -> list[TreeNode]:
        """Explicit heads of the implicit level ``ell``."""
        if self.root is None:
            return []
        if ell > self.ell_max:
            raise ValueError(f"level {ell} is above ell_max={self.ell_max}")
        for top, bottom, heads in self.iter_levels():
            if bottom is None or ell >= bottom:
                return heads
        raise AssertionError("unreachable")

    @property
    def ell_min(self) -> int:
        """Largest level at which every stored point is its own node."""
        last = self.ell_max
        for top, bottom, _ in self.iter_levels():
            last = top
        return last

    def explicit_nodes(self) -> Iterator[TreeNode]:
        if self.root is None:
            return
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def dump(self) -> str:
        """Pre-order dump, one node per line: ``indent level id weight [mis ids]``."""
        lines = []
        if self.root is None:
            return ""
        stack = [(self.root, 0)]
        while stack:
            node, depth = stack.pop()
            mis = " ".join(str(q.id) for q in node.mis)
            lines.append(f"{'  ' * depth}{node.level} {node.point.id} {node.weight} [{mis}]")
            stack.extend((c, depth + 1) for c in reversed(node.children))
        return "\n".join(lines)

    def validate(self) -> ValidationReport:
        return validate_invariants(self)


def new_tree(metric="euclidean", oracle=None, alpha=2.0, beta=1.0) -> CoverTree:
    return CoverTree(metric, oracle, alpha, beta)


def level_size_profile(T: CoverTree) -> dict[int, int]:
    """``|T_l|`` for every level from the deepest explicit level up to ``ell_max``."""
    if T.root is None:
        return {}
    top: dict[int, int] = {}
    low = T.ell_max
    for node in T.explicit_nodes():
        pid = node.point.id
        if node.level > top.get(pid, -(10 ** 9)):
            top[pid] = node.level
        low = min(low, node.level)
    counts = np.zeros(T.ell_max - low + 1, dtype=int)
    for lev in top.values():
        counts[lev - low] += 1
    # |T_l| = #points whose topmost node is at level >= l
    cum = np.cumsum(counts[::-1])[::-1]
    return {low + i: int(c) for i, c in enumerate(cum)}


def extract_level(T: CoverTree, ell: int) -> list[tuple[PointRecord, int, list]]:
    """``(point, weight, mis)`` for every implicit node of level ``ell``."""
    return [(h.point, h.weight, list(h.mis)) for h in T.level_heads(ell)]


# ------------------------------------------------------------------ validator


def _separated_pairs(T: CoverTree, pts: list[PointRecord], thr: float):
    """Pairs of ``pts`` at distance <= thr (candidate search + exact recheck)."""
    if len(pts) < 2:
        return []
    from scipy.spatial import cKDTree

    X = np.array([p.coords for p in pts], dtype=float)
    kd = cKDTree(X)
    cand = kd.query_pairs(thr * (1 + 1e-9) + 1e-300, p=T.metric.minkowski_p)
    pair = T.metric.pair
    return [(pts[i], pts[j]) for i, j in cand if pair(pts[i].coords, pts[j].coords) <= thr]


def validate_invariants(T: CoverTree) -> ValidationReport:
    """Check every structural invariant; report the first violation found."""
    root = T.root
    if root is None:
        if T._registry:
            return ValidationReport(False, "empty tree with a non-empty registry")
        return ValidationReport(True)
    if root.parent is not None:
        return ValidationReport(False, "root has a parent")
    if root.level != T.ell_max:
        return ValidationReport(False, f"root level {root.level} != ell_max {T.ell_max}")

    pair = T.metric.pair
    oracle = T.oracle
    top_level: dict[int, int] = {}
    heads_of: dict[int, int] = {}
    deepest: dict[int, TreeNode] = {}
    subtree_pts: dict[int, list] = {}
    count = 0

    # post-order so children are finished before their parent
    order = list(T.explicit_nodes())
    for node in reversed(order):
        count += 1
        pid = node.point.id
        ch = node.children
        if node.x != node.point.coords:
            return ValidationReport(False, f"node {pid}@{node.level} caches stale coordinates", count)
        if node.parent is None or node.parent.point is not node.point:
            heads_of[pid] = heads_of.get(pid, 0) + 1
        top_level[pid] = max(top_level.get(pid, node.level), node.level)
        if pid not in deepest or node.level < deepest[pid].level:
            deepest[pid] = node
        if not ch:
            pts = [node.point]
            if node.weight != 1:
                return ValidationReport(False, f"leaf {pid}@{node.level} has weight {node.weight}", count)
        else:
            lev = ch[0].level
            if len(ch) < 2:
                return ValidationReport(False, f"node {pid}@{node.level} has a lone child", count)
            if lev >= node.level:
                return ValidationReport(False, f"node {pid}@{node.level} has children at level {lev}", count)
            selfs = 0
            pts = []
            for c in ch:
                if c.level != lev:
                    return ValidationReport(False, f"children of {pid}@{node.level} on mixed levels", count)
                if c.parent is not node:
                    return ValidationReport(False, f"child {c.point.id}@{c.level} has a stale parent link", count)
                if c.point is node.point:
                    selfs += 1
                d = pair(c.x, node.x)
                if d > T.scale(lev + 1):
                    return ValidationReport(
                        False,
                        f"covering: child {c.point.id}@{lev} is {d} from parent {pid} (> {T.scale(lev + 1)})",
                        count,
                    )
                pts.extend(subtree_pts.pop(id(c)))
            if selfs != 1:
                return ValidationReport(False, f"node {pid}@{node.level} has {selfs} self-children", count)
            if node.weight != sum(c.weight for c in ch):
                return ValidationReport(
                    False, f"weight of {pid}@{node.level} is {node.weight}, children sum to "
                    f"{sum(c.weight for c in ch)}", count,
                )
        if node.weight != len(pts):
            return ValidationReport(False, f"weight of {pid}@{node.level} != subtree size {len(pts)}", count)
        bad = _check_mis(node, pts, oracle)
        if bad:
            return ValidationReport(False, bad, count)
        subtree_pts[id(node)] = pts

    if any(v != 1 for v in heads_of.values()):
        bad = [k for k, v in heads_of.items() if v != 1]
        return ValidationReport(False, f"nesting: point {bad[0]} has {heads_of[bad[0]]} chain heads", count)
    if set(T._registry) != set(top_level):
        return ValidationReport(False, "registry does not match the stored points", count)
    for pid, node in T._registry.items():
        if node is not deepest[pid] or node.children:
            return ValidationReport(False, f"registry entry of {pid} is not its deepest node", count)
    if set(T._coords.values()) != set(T._registry):
        return ValidationReport(False, "coordinate index out of sync", count)

    # separation, checked once per distinct set size at its highest level
    by_level = sorted(top_level.items(), key=lambda kv: -kv[1])
    pts_sorted = [T._registry[pid].point for pid, _ in by_level]
    levels = [lev for _, lev in by_level]
    seen = set()
    for i, lev in enumerate(levels):
        if lev in seen:
            continue
        seen.add(lev)
        j = i
        while j < len(levels) and levels[j] >= lev:
            j += 1
        close = _separated_pairs(T, pts_sorted[:j], T.scale(lev))
        if close:
            a, b = close[0]
            return ValidationReport(
                False, f"separation: points {a.id} and {b.id} both on level {lev} within {T.scale(lev)}", count
            )
    return ValidationReport(True, None, count)


def _check_mis(node: TreeNode, pts: list, oracle: MatroidOracle) -> str | None:
    mis = node.mis
    pid, lev = node.point.id, node.level
    if oracle.is_null:
        return f"mis of {pid}@{lev} should be empty" if mis else None
    ids = {q.id for q in pts}
    mis_ids = {q.id for q in mis}
    if len(mis_ids) != len(mis) or not mis_ids <= ids:
        return f"mis of {pid}@{lev} is not a subset of its subtree"
    if not oracle.is_independent(mis):
        return f"mis of {pid}@{lev} is dependent"
    for q in pts:
        if q.id not in mis_ids and oracle.is_independent(mis + [q]):
            return f"mis of {pid}@{lev} is not maximal (could add {q.id})"
    return None
