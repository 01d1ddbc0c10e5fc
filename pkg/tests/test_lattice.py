import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from percoregret.designs import Design
from percoregret.lattice import (
    BondConfiguration,
    LatticeError,
    _DisjointSet,
    count_spanning_clusters,
    edge_probabilities,
    label_clusters,
    lattice_for_count,
    place_notions,
    sample_configuration,
    square_lattice,
)


def all_open(lattice):
    return BondConfiguration(lattice, np.ones(lattice.n_edges, dtype=bool))


def all_closed(lattice):
    return BondConfiguration(lattice, np.zeros(lattice.n_edges, dtype=bool))


class TestPlacement:
    def test_l4_square(self):
        lat = lattice_for_count(4)
        assert (lat.rows, lat.cols) == (2, 2)
        assert lat.n_edges == 4

    def test_l9_square(self):
        lat = lattice_for_count(9)
        assert (lat.rows, lat.cols) == (3, 3)
        assert lat.n_edges == 12

    def test_l5_partial(self):
        lat = lattice_for_count(5)
        assert (lat.rows, lat.cols) == (3, 2)
        assert len(lat.occupied) == 5
        # The vacant cell is the final row-major position.
        assert (2, 1) not in lat.notion_index
        for (a, b) in lat.edges:
            assert a in lat.notion_index and b in lat.notion_index

    def test_full_lattice_edge_count(self):
        for m, n in [(2, 2), (3, 3), (4, 5), (1, 7)]:
            lat = square_lattice(m, n)
            assert lat.n_edges == m * (n - 1) + n * (m - 1)

    def test_edges_unit_manhattan(self):
        lat = lattice_for_count(7)
        for (ra, ca), (rb, cb) in lat.edges:
            assert abs(ra - rb) + abs(ca - cb) == 1

    def test_pure_function(self):
        d = Design("d", [f"n{i}" for i in range(6)], 0.5)
        a, b = place_notions(d), place_notions(d)
        assert a.edges == b.edges and a.occupied == b.occupied

    def test_empty_design_rejected(self):
        with pytest.raises(LatticeError):
            lattice_for_count(0)


class TestEdgeProbabilities:
    def test_scalar_broadcast(self):
        d = Design("d", ["a", "b", "c", "e"], 0.7)
        lat = place_notions(d)
        assert np.array_equal(edge_probabilities(d, lat), [0.7] * 4)

    def test_matrix_lookup(self):
        # 2x2 lattice, notions 0,1 on the top row; edge (0,1) is first.
        lam = np.full((4, 4), 0.5)
        lam[0, 1] = lam[1, 0] = 0.3
        d = Design("d", ["a", "b", "c", "e"], lam)
        lat = place_notions(d)
        probs = edge_probabilities(d, lat)
        assert probs[0] == 0.3

    def test_matrix_full_handcheck(self):
        # Row-major placement on 2x2: vertex order a,b / c,e.
        # Edge order: (a,b)H, (a,c)V, (b,e)V, (c,e)H.
        lam = np.array(
            [
                [0.0, 0.1, 0.2, 0.3],
                [0.1, 0.0, 0.4, 0.5],
                [0.2, 0.4, 0.0, 0.6],
                [0.3, 0.5, 0.6, 0.0],
            ]
        )
        d = Design("d", ["a", "b", "c", "e"], lam)
        lat = place_notions(d)
        assert np.array_equal(edge_probabilities(d, lat), [0.1, 0.2, 0.5, 0.6])

    def test_asymmetric_rejected(self):
        lam = np.array([[0.0, 0.2], [0.3, 0.0]])
        d = Design("d", ["a", "b"], lam)
        lat = place_notions(d)
        with pytest.raises(LatticeError):
            edge_probabilities(d, lat)

    def test_out_of_range_rejected(self):
        d = Design("d", ["a", "b"], 1.3)
        lat = place_notions(d)
        with pytest.raises(LatticeError):
            edge_probabilities(d, lat)


class TestSampling:
    def test_probs_one_all_open(self):
        lat = lattice_for_count(4)
        cfg = sample_configuration(lat, np.ones(4), np.array([0.99, 0.5, 0.0, 0.7]))
        assert cfg.open.all()

    def test_probs_zero_all_closed(self):
        lat = lattice_for_count(4)
        cfg = sample_configuration(lat, np.zeros(4), np.zeros(4))
        assert not cfg.open.any()

    def test_threshold_rule(self):
        lat = square_lattice(1, 3)  # two edges
        cfg = sample_configuration(lat, np.array([0.5, 0.5]), np.array([0.4, 0.6]))
        assert list(cfg.open) == [True, False]

    def test_length_mismatch(self):
        lat = lattice_for_count(4)
        with pytest.raises(LatticeError):
            sample_configuration(lat, np.ones(3), np.zeros(3))


def middle_row_config():
    """3x3 with only the two middle-row horizontal edges open."""
    lat = lattice_for_count(9)
    open_bits = np.zeros(lat.n_edges, dtype=bool)
    for k, (a, b) in enumerate(lat.edges):
        if a[0] == 1 and b[0] == 1:
            open_bits[k] = True
    cfg = BondConfiguration(lat, open_bits)
    assert cfg.open.sum() == 2
    return cfg


class TestLabeling:
    def test_all_open_2x2(self):
        labeling = label_clusters(all_open(lattice_for_count(4)))
        assert len(labeling.clusters) == 1
        rec = labeling.clusters[0]
        assert rec.size == 4
        assert rec.touches_left and rec.touches_right and rec.touches_top and rec.touches_bottom

    def test_all_closed_singletons(self):
        lat = lattice_for_count(6)
        labeling = label_clusters(all_closed(lat))
        assert len(labeling.clusters) == 6
        assert all(rec.size == 1 for rec in labeling.clusters)

    def test_middle_row(self):
        labeling = label_clusters(middle_row_config())
        sizes = sorted(rec.size for rec in labeling.clusters)
        assert sizes == [1] * 6 + [3]
        big = next(rec for rec in labeling.clusters if rec.size == 3)
        assert big.touches_left and big.touches_right
        assert not (big.touches_top or big.touches_bottom)

    def test_partition(self):
        labeling = label_clusters(middle_row_config())
        assert sorted(labeling.cluster_of) == list(range(9))
        assert sum(rec.size for rec in labeling.clusters) == 9


class TestSpanningCount:
    def test_all_open_2x2(self):
        labeling = label_clusters(all_open(lattice_for_count(4)))
        assert count_spanning_clusters(labeling) == 1

    def test_all_closed_zero(self):
        labeling = label_clusters(all_closed(lattice_for_count(4)))
        assert count_spanning_clusters(labeling) == 0

    def test_middle_row_directions(self):
        labeling = label_clusters(middle_row_config())
        assert count_spanning_clusters(labeling, "horizontal") == 1
        assert count_spanning_clusters(labeling, "vertical") == 0
        assert count_spanning_clusters(labeling, "either") == 1


def brute_force_connected(lattice, open_bits, u, v):
    """Path search over open edges, independent of union-find."""
    adjacency = {w: set() for w in range(lattice.n_vertices)}
    for k in range(lattice.n_edges):
        if open_bits[k]:
            a, b = int(lattice.edge_a[k]), int(lattice.edge_b[k])
            adjacency[a].add(b)
            adjacency[b].add(a)
    frontier, seen = [u], {u}
    while frontier:
        w = frontier.pop()
        if w == v:
            return True
        for x in adjacency[w] - seen:
            seen.add(x)
            frontier.append(x)
    return u == v


class TestUnionFindProperties:
    def test_idempotent_representatives(self):
        dsu = _DisjointSet(8)
        for a, b in [(0, 1), (1, 2), (5, 6), (2, 5)]:
            dsu.union(a, b)
        for v in range(8):
            assert dsu.find(dsu.find(v)) == dsu.find(v)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 9), st.integers(0, 2**12 - 1))
    def test_connectivity_matches_path_search(self, l, mask):
        lat = lattice_for_count(l)
        open_bits = np.array(
            [(mask >> k) & 1 for k in range(lat.n_edges)], dtype=bool
        )
        labeling = label_clusters(BondConfiguration(lat, open_bits))
        for u in range(lat.n_vertices):
            for v in range(lat.n_vertices):
                same = labeling.cluster_of[u] == labeling.cluster_of[v]
                assert same == brute_force_connected(lat, open_bits, u, v)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 9), st.integers(0, 2**12 - 1), st.integers(0, 2**12 - 1))
    def test_subset_clusters_nest(self, l, mask_small, mask_extra):
        lat = lattice_for_count(l)
        small = np.array([(mask_small >> k) & 1 for k in range(lat.n_edges)], dtype=bool)
        big = small | np.array(
            [(mask_extra >> k) & 1 for k in range(lat.n_edges)], dtype=bool
        )
        lab_small = label_clusters(BondConfiguration(lat, small))
        lab_big = label_clusters(BondConfiguration(lat, big))
        # Every small cluster is contained in one big cluster.
        for u in range(lat.n_vertices):
            for v in range(lat.n_vertices):
                if lab_small.cluster_of[u] == lab_small.cluster_of[v]:
                    assert lab_big.cluster_of[u] == lab_big.cluster_of[v]
        if count_spanning_clusters(lab_small) > 0:
            assert count_spanning_clusters(lab_big) > 0
