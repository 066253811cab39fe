"""
Unit tests for the 0-dimensional persistence computations.
"""
import math

import numpy as np
import pytest

from pushplan.exceptions import EmptyInput
from pushplan.homology import (
    MergeEvent,
    PersistenceDiagram,
    UnionFind,
    component_count,
    components_at,
    persistence_diagram,
    persistent_radii,
)


def _mst_weights(points):
    """Prim's algorithm on the complete graph; returns sorted edge lengths."""
    n = len(points)
    in_tree = [False] * n
    best = [math.inf] * n
    best[0] = 0.0
    weights = []
    for step in range(n):
        k = min((i for i in range(n) if not in_tree[i]), key=lambda i: best[i])
        in_tree[k] = True
        if step > 0:
            weights.append(best[k])
        for j in range(n):
            if not in_tree[j]:
                best[j] = min(best[j], math.dist(points[k], points[j]))
    return sorted(weights)


def _bfs_components(points, r):
    n = len(points)
    seen = set()
    blocks = []
    for start in range(n):
        if start in seen:
            continue
        block, queue = {start}, [start]
        seen.add(start)
        while queue:
            i = queue.pop()
            for j in range(n):
                if j not in seen and math.dist(points[i], points[j]) <= 2 * r:
                    seen.add(j)
                    block.add(j)
                    queue.append(j)
        blocks.append(frozenset(block))
    return sorted(blocks, key=min)


def _diagram(deaths, n=None):
    events = tuple(MergeEvent(d, frozenset(), frozenset(), 0) for d in deaths)
    return PersistenceDiagram(events, n if n is not None else len(deaths) + 1)


class TestUnionFind:
    """Test the disjoint-set structure."""

    def test_union_and_members(self):
        uf = UnionFind(4)
        uf.union(0, 1)
        uf.union(2, 3)
        assert uf.members(1) == frozenset({0, 1})
        assert uf.find(0) == uf.find(1)
        assert uf.find(1) != uf.find(2)
        uf.union(1, 3)
        assert uf.members(2) == frozenset({0, 1, 2, 3})

    def test_union_is_idempotent(self):
        uf = UnionFind(2)
        root = uf.union(0, 1)
        assert uf.union(1, 0) == root


class TestPersistenceDiagram:
    """Test merge events of point sets."""

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            persistence_diagram([])

    def test_single_point(self):
        diag = persistence_diagram([(0.3, 0.3)])
        assert diag.events == ()
        assert diag.point_count == 1

    def test_collinear_gaps(self):
        """Test points with gaps 0.1 and 0.2 die at half those distances."""
        diag = persistence_diagram([(0.1, 0.35), (0.2, 0.35), (0.4, 0.35)])
        assert diag.deaths == pytest.approx([0.05, 0.1])
        assert [(len(e.component_a), len(e.component_b)) for e in diag.events] == [(1, 1), (2, 1)]

    def test_deaths_sorted_and_count(self):
        rng = np.random.default_rng(3)
        diag = persistence_diagram(rng.uniform(0, 1, size=(12, 2)))
        assert len(diag.events) == 11
        assert diag.deaths == sorted(diag.deaths)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_minimum_spanning_tree(self, seed):
        """Test death radii are half the MST edge lengths."""
        rng = np.random.default_rng(seed)
        points = [tuple(p) for p in rng.uniform(0, 0.7, size=(10, 2))]
        expected = [w / 2 for w in _mst_weights(points)]
        assert persistence_diagram(points).deaths == pytest.approx(expected)

    def test_tied_distances_are_deterministic(self):
        """Test a square with four equal sides yields the same events every time."""
        square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        first = persistence_diagram(square)
        assert first == persistence_diagram(square)
        assert first.events[0].component_a == frozenset({0})
        assert first.events[0].component_b == frozenset({1})

    def test_component_count_is_closed(self):
        diag = persistence_diagram([(0.0, 0.0), (0.1, 0.0)])
        assert diag.component_count(0.049) == 2
        assert diag.component_count(diag.deaths[0]) == 1

    def test_to_csv(self):
        text = persistence_diagram([(0.1, 0.35), (0.2, 0.35), (0.4, 0.35)]).to_csv()
        lines = text.splitlines()
        assert lines[0] == "death_radius,component_size_a,component_size_b"
        assert [line.split(",")[1:] for line in lines[1:]] == [["1", "1"], ["2", "1"]]
        assert text.endswith("\n")

    @pytest.mark.parametrize("seed", range(4))
    def test_rigid_motion_invariance(self, seed):
        """Test rotating and translating the points leaves the death radii unchanged."""
        rng = np.random.default_rng(200 + seed)
        points = rng.uniform(0, 0.7, size=(10, 2))
        angle = float(rng.uniform(-math.pi, math.pi))
        rotation = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
        moved = points @ rotation.T + rng.uniform(-1, 1, size=2)
        assert persistence_diagram(moved).deaths == pytest.approx(persistence_diagram(points).deaths, abs=1e-12)

    @pytest.mark.parametrize("seed", range(4))
    def test_each_death_merges_components(self, seed):
        """Test the partition just below every death radius has more blocks than at the death."""
        rng = np.random.default_rng(300 + seed)
        points = rng.uniform(0, 0.7, size=(9, 2))
        for death in persistence_diagram(points).deaths:
            assert len(components_at(points, death)) < len(components_at(points, death - 1e-12))


class TestComponentsAt:
    """Test clustering at a fixed radius."""

    def test_empty(self):
        assert len(components_at([], 0.1)) == 0

    def test_boundary_distance_joins(self):
        """Test that points exactly 2r apart share a component."""
        partition = components_at([(0.0, 0.0), (0.5, 0.0)], 0.25)
        assert partition.blocks == (frozenset({0, 1}),)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_breadth_first_search(self, seed):
        rng = np.random.default_rng(100 + seed)
        points = [tuple(p) for p in rng.uniform(0, 0.7, size=(9, 2))]
        r = float(rng.uniform(0.02, 0.12))
        assert list(components_at(points, r).blocks) == _bfs_components(points, r)

    def test_count_agrees_with_diagram(self):
        rng = np.random.default_rng(42)
        points = rng.uniform(0, 0.7, size=(8, 2))
        diag = persistence_diagram(points)
        for r in (0.01, 0.05, 0.1, 0.3):
            assert component_count(points, r) == diag.component_count(r)

    def test_block_of(self):
        partition = components_at([(0.0, 0.0), (0.05, 0.0), (1.0, 1.0)], 0.05)
        assert partition.block_of(1) == frozenset({0, 1})
        with pytest.raises(KeyError):
            partition.block_of(5)


class TestPersistentRadii:
    """Test selection of actionable cluster radii."""

    def test_well_separated_deaths_all_persist(self):
        deaths = [0.062, 0.1, 0.116, 0.144]
        assert persistent_radii(_diagram(deaths), nu=0.015, h=0.05) == deaths

    def test_close_death_is_dropped(self):
        assert persistent_radii(_diagram([0.06, 0.07, 0.2]), nu=0.015, h=0.05) == [0.07, 0.2]

    def test_largest_always_persists(self):
        assert persistent_radii(_diagram([0.06, 0.065, 0.07]), nu=0.015, h=0.05) == [0.07]

    def test_small_radii_filtered(self):
        assert persistent_radii(_diagram([0.01, 0.03, 0.09]), nu=0.015, h=0.05) == [0.09]

    @pytest.mark.parametrize("deaths", [[], [0.01, 0.03]])
    def test_falls_back_to_gripper_radius(self, deaths):
        assert persistent_radii(_diagram(deaths), nu=0.015, h=0.05) == [0.05]

    def test_duplicate_deaths_collapse(self):
        assert persistent_radii(_diagram([0.08, 0.08]), nu=0.015, h=0.05) == [0.08]
