# SPDX-License-Identifier: MIT

"""Zero-dimensional persistent homology of planar point sets.

Balls of radius ``r`` grow around every point; two components merge at the
radius where their balls first touch, i.e. at half the distance between their
closest points. This is single-linkage clustering, computed with Kruskal's
algorithm over the complete graph.
"""

__all__ = [
    "UnionFind",
    "MergeEvent",
    "PersistenceDiagram",
    "Partition",
    "persistence_diagram",
    "components_at",
    "component_count",
    "persistent_radii",
]

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist, squareform

try:
    from .exceptions import EmptyInput
except ImportError:
    from exceptions import EmptyInput

logger = logging.getLogger(__name__)


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path compression and union by size."""

    def __init__(self, n: int):
        self._parent = list(range(n))
        self._size = [1] * n
        self._members: Dict[int, FrozenSet[int]] = {i: frozenset((i,)) for i in range(n)}

    def find(self, i: int) -> int:
        root = i
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[i] != root:
            self._parent[i], i = root, self._parent[i]
        return root

    def members(self, i: int) -> FrozenSet[int]:
        """All indices in the set containing ``i``."""
        return self._members[self.find(i)]

    def union(self, i: int, j: int) -> int:
        """Merge the sets of ``i`` and ``j``; returns the surviving root."""
        a, b = self.find(i), self.find(j)
        if a == b:
            return a
        if self._size[a] < self._size[b] or (self._size[a] == self._size[b] and b < a):
            a, b = b, a
        self._parent[b] = a
        self._size[a] += self._size[b]
        self._members[a] = self._members[a] | self._members.pop(b)
        return a


@dataclass(frozen=True)
class MergeEvent:
    """Two components merging at ``death_radius``; ``survivor`` is the root index of the union."""

    death_radius: float
    component_a: FrozenSet[int]
    component_b: FrozenSet[int]
    survivor: int


@dataclass(frozen=True)
class PersistenceDiagram:
    """Merge events sorted by death radius; every point is born at radius 0."""

    events: Tuple[MergeEvent, ...]
    point_count: int

    @property
    def deaths(self) -> List[float]:
        return [e.death_radius for e in self.events]

    def component_count(self, r: float) -> int:
        """Number of components alive at radius ``r`` (merges are closed at ``r``)."""
        return self.point_count - sum(1 for e in self.events if e.death_radius <= r)

    def to_csv(self) -> str:
        """``death_radius,component_size_a,component_size_b`` rows with a header."""
        rows = ["death_radius,component_size_a,component_size_b"]
        for e in self.events:
            rows.append(f"{e.death_radius!r},{len(e.component_a)},{len(e.component_b)}")
        return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks of point indices covering ``0..n-1``, ordered by smallest member."""

    blocks: Tuple[FrozenSet[int], ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, i: int) -> FrozenSet[int]:
        for block in self.blocks:
            if i in block:
                return block
        raise KeyError(i)


def _as_array(points: Sequence[Sequence[float]]) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return np.zeros((0, 2))
    return arr.reshape(-1, 2)


def persistence_diagram(points: Sequence[Sequence[float]]) -> PersistenceDiagram:
    """Single-linkage merge events of ``points``.

    Edges are swept by increasing distance; distance ties are broken by
    ``(i, j)`` index order so the diagram is deterministic.

    Raises:
        EmptyInput: ``points`` is empty.
    """
    pts = _as_array(points)
    n = len(pts)
    if n == 0:
        raise EmptyInput("persistence diagram needs at least one point")

    events: List[MergeEvent] = []
    if n > 1:
        distances = pdist(pts)
        rows, cols = np.triu_indices(n, k=1)
        # lexsort keys: last is primary
        order = np.lexsort((cols, rows, distances))
        uf = UnionFind(n)
        for k in order:
            i, j = int(rows[k]), int(cols[k])
            if uf.find(i) == uf.find(j):
                continue
            comp_a, comp_b = uf.members(i), uf.members(j)
            survivor = uf.union(i, j)
            events.append(MergeEvent(float(distances[k]) / 2.0, comp_a, comp_b, survivor))
            if len(events) == n - 1:
                break

    logger.debug(f"Persistence diagram over {n} points: {len(events)} merge events")
    return PersistenceDiagram(tuple(events), n)


def components_at(points: Sequence[Sequence[float]], r: float) -> Partition:
    """Connected components of the graph joining points at distance ``<= 2r``."""
    pts = _as_array(points)
    n = len(pts)
    if n == 0:
        return Partition(())
    if n == 1:
        return Partition((frozenset((0,)),))

    adjacency = squareform(pdist(pts)) <= 2.0 * r
    _, labels = connected_components(csr_matrix(adjacency), directed=False)

    grouped: Dict[int, List[int]] = {}
    for index, label in enumerate(labels):
        grouped.setdefault(int(label), []).append(index)
    blocks = sorted((frozenset(members) for members in grouped.values()), key=min)
    return Partition(tuple(blocks))


def component_count(points: Sequence[Sequence[float]], r: float) -> int:
    return len(components_at(points, r))


def persistent_radii(diag: PersistenceDiagram, nu: float, h: float) -> List[float]:
    """Death radii that persist for ``nu`` and admit the gripper (``>= h``).

    A death radius ``d`` persists when no other death lies in ``(d, d + nu]``.
    The largest death always persists. When nothing survives the ``h`` filter
    the result is ``[h]`` so callers always get one actionable radius.
    """
    deaths = sorted(set(diag.deaths))
    persistent = []
    for k, d in enumerate(deaths):
        following = deaths[k + 1] if k + 1 < len(deaths) else None
        if following is None or following > d + nu:
            persistent.append(d)

    result = [d for d in persistent if d >= h]
    if not result:
        return [h]
    return result
