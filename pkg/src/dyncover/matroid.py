"""Independence oracles, greedy maximal-set merging and matroid intersection.

Oracles are intensional: they decide independence from the points' labels
and the set size alone, so they apply to points that did not exist when the
oracle was built.
"""

from __future__ import annotations

from collections import Counter, deque
from itertools import chain, islice
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .metric import PointRecord

__all__ = [
    "MatroidOracle",
    "NullMatroid",
    "UniformMatroid",
    "PartitionMatroid",
    "is_independent",
    "merge_maximal",
    "rank",
    "matroid_intersection",
    "parse_matroid_config",
]


class MatroidOracle:
    """Base class. Subclasses implement :meth:`is_independent`.

    ``extends`` and ``greedy`` have generic definitions in terms of
    ``is_independent``; the concrete kinds override them with constant-time
    or linear versions since the tree calls them on every update.
    """

    kind = "abstract"
    is_null = False

    def is_independent(self, X: Sequence[PointRecord]) -> bool:
        raise NotImplementedError

    def extends(self, members: Sequence[PointRecord], x: PointRecord) -> bool:
        """Whether ``members + [x]`` is independent, given ``members`` is."""
        return self.is_independent(list(members) + [x])

    def greedy(self, items: Iterable[PointRecord]) -> list:
        out: list = []
        for x in items:
            if self.extends(out, x):
                out.append(x)
        return out

    @property
    def upper_rank(self):
        """Upper bound on the rank over any ground set, or None if unbounded."""
        return None


class NullMatroid(MatroidOracle):
    """No matroid: only the empty set is independent, so mis fields stay empty."""

    kind = "null"
    is_null = True

    def is_independent(self, X):
        return len(X) == 0

    def extends(self, members, x):
        return False

    def greedy(self, items):
        return []

    @property
    def upper_rank(self):
        return 0

    def __repr__(self):
        return "NullMatroid()"


class UniformMatroid(MatroidOracle):
    """Every set of at most ``K`` points is independent."""

    kind = "uniform"

    def __init__(self, K: int):
        if int(K) < 0:
            raise ValueError("uniform matroid rank must be non-negative")
        self.K = int(K)

    def is_independent(self, X):
        return len(X) <= self.K

    def extends(self, members, x):
        return len(members) < self.K

    def greedy(self, items):
        return list(islice(items, self.K))

    @property
    def upper_rank(self):
        return self.K

    def __repr__(self):
        return f"UniformMatroid({self.K})"


class PartitionMatroid(MatroidOracle):
    """At most ``capacities[label]`` points per category label.

    Labels missing from ``capacities`` have capacity zero. A point without a
    label is an error.
    """

    kind = "partition"

    def __init__(
        self,
        capacities: Mapping[str, int],
        key=None,
    ):
        self.capacities = {str(k): int(v) for k, v in capacities.items()}
        if any(v < 0 for v in self.capacities.values()):
            raise ValueError("capacities must be non-negative")
        # label extractor; the matroid-center solver uses a custom one
        self._key = key or _category

    def _label(self, x):
        lab = self._key(x)
        if lab is None:
            raise ValueError(f"point {x.id} has no category label")
        return str(lab)  # capacities are keyed by str

    def is_independent(self, X):
        counts = Counter(self._label(x) for x in X)
        return all(c <= self.capacities.get(lab, 0) for lab, c in counts.items())

    def extends(self, members, x):
        lab = self._label(x)
        cap = self.capacities.get(lab, 0)
        if cap == 0:
            return False
        used = 0
        for y in members:
            if self._label(y) == lab:
                used += 1
        return used < cap

    def greedy(self, items):
        used: Counter = Counter()
        out = []
        for x in items:
            lab = self._label(x)
            if used[lab] < self.capacities.get(lab, 0):
                used[lab] += 1
                out.append(x)
        return out

    @property
    def upper_rank(self):
        return sum(self.capacities.values())

    def __repr__(self):
        return f"PartitionMatroid({self.capacities})"


def _category(x):
    return x.category


def is_independent(X: Sequence[PointRecord], O: MatroidOracle) -> bool:
    return O.is_independent(list(X))


def merge_maximal(parts: Sequence[Sequence[PointRecord]], O: MatroidOracle) -> list:
    """Greedy scan over the concatenation of ``parts``, in order.

    The result is a maximal independent subset of the union of the parts.
    """
    return O.greedy(chain.from_iterable(parts))


def rank(O: MatroidOracle, S: Sequence[PointRecord]) -> int:
    return len(O.greedy(iter(S)))


def matroid_intersection(
    ground: Sequence[PointRecord], O1: MatroidOracle, O2: MatroidOracle
) -> list:
    """Maximum-cardinality common independent set via shortest augmenting paths.

    Standard exchange-graph algorithm. Ties in the BFS are broken by
    scanning elements in ascending id order, so the output is deterministic.
    """
    elems = sorted(ground, key=lambda p: p.id)
    n = len(elems)
    in_I = [False] * n
    while True:
        I_idx = [i for i in range(n) if in_I[i]]
        out_idx = [i for i in range(n) if not in_I[i]]
        cur = [elems[i] for i in I_idx]
        sources = {j for j in out_idx if O1.is_independent(cur + [elems[j]])}
        sinks = {j for j in out_idx if O2.is_independent(cur + [elems[j]])}
        if not sources or not sinks:
            break
        # swap[i][j]: I - elems[i] + elems[j]
        def swapped(i, j):
            return [e for t, e in zip(I_idx, cur) if t != i] + [elems[j]]

        prev = {j: None for j in sorted(sources)}
        queue = deque(sorted(sources))
        end = None
        while queue:
            a = queue.popleft()
            if not in_I[a] and a in sinks:
                end = a
                break
            if not in_I[a]:
                # a outside I: arc a -> i when I - i + a is independent in O2
                for i in I_idx:
                    if i not in prev and O2.is_independent(swapped(i, a)):
                        prev[i] = a
                        queue.append(i)
            else:
                # a inside I: arc a -> j when I - a + j is independent in O1
                for j in out_idx:
                    if j not in prev and O1.is_independent(swapped(a, j)):
                        prev[j] = a
                        queue.append(j)
        if end is None:
            break
        node = end
        while node is not None:
            in_I[node] = not in_I[node]
            node = prev[node]
    return [elems[i] for i in range(n) if in_I[i]]


def parse_matroid_config(text: str | None) -> MatroidOracle:
    """``none``, ``uniform:<K>`` or ``partition:<file>`` (lines ``<label> <capacity>``)."""
    if text is None or text == "none":
        return NullMatroid()
    kind, _, arg = text.partition(":")
    if kind == "uniform" and arg:
        return UniformMatroid(int(arg))
    if kind == "partition" and arg:
        caps = {}
        for lineno, line in enumerate(Path(arg).read_text().splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{arg}:{lineno}: expected '<label> <capacity>'")
            caps[parts[0]] = int(parts[1])
        return PartitionMatroid(caps)
    raise ValueError(f"bad matroid config {text!r}")
