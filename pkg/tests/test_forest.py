"""Forests, labels, contour walks and bridge codings."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bquad.enumerator import enumerate_bridges, enumerate_forests
from bquad.forest import (
    Bridge,
    ContourPair,
    ForestShape,
    WellLabeledForest,
    bridge_to_pm1,
    contour_pair,
    facial_sequence,
    forest_from_contour_pair,
    oldest_ancestor,
    pm1_to_bridge,
    shifted_labels,
)
from bquad.sampler import Seed, rng_from_seed, sample_forest_shape, sample_labels


class TestForestShape:
    def test_single_edge_tree(self):
        sh = ForestShape(((1, 0),))
        assert sh.sigma == 1
        assert sh.n_edges == 1
        assert sh.n_vertices == 2
        assert sh.parents() == [-1, 0]

    def test_two_trees(self):
        sh = ForestShape(((2, 0, 0), (0,)))
        assert sh.sigma == 2
        assert sh.n_edges == 2
        assert sh.parents() == [-1, 0, 0, -1]
        assert sh.tree_of() == [1, 1, 1, 2]
        assert sh.tree_offsets() == [0, 3]

    def test_preorder_parents_on_a_caterpillar(self):
        # root - child(2 kids each leaf): counts (1, 2, 0, 0)
        sh = ForestShape(((1, 2, 0, 0),))
        assert sh.parents() == [-1, 0, 1, 1]

    @pytest.mark.parametrize(
        "bad", [((),), ((1,),), ((0, 0),), ((2, 0),), ((-1,),), ()]
    )
    def test_invalid_shapes_rejected(self, bad):
        with pytest.raises(ValueError):
            ForestShape(bad)

    def test_facial_sequence_shape(self):
        sh = ForestShape(((2, 0, 0), (0,)))
        fs = facial_sequence(sh)
        # 2 * edges + sigma + 1 entries, phantom id last
        assert len(fs) == 2 * sh.n_edges + sh.sigma + 1
        assert fs == [0, 1, 0, 2, 0, 3, 4]


class TestWellLabeledForest:
    def test_root_label_must_be_zero(self):
        sh = ForestShape(((1, 0),))
        with pytest.raises(ValueError):
            WellLabeledForest(sh, (1, 1))

    def test_label_jumps_rejected(self):
        sh = ForestShape(((1, 0),))
        with pytest.raises(ValueError):
            WellLabeledForest(sh, (0, 2))

    def test_valid_labels(self):
        sh = ForestShape(((1, 2, 0, 0),))
        wlf = WellLabeledForest(sh, (0, 1, 0, 2))
        assert wlf.n_edges == 3


class TestBridge:
    def test_accepts_flat_bridge(self):
        assert Bridge((0, 0, 0)).sigma == 2

    @pytest.mark.parametrize(
        "bad", [(0,), (1, 0), (0, 1), (0, -2), (0, 2, 0)]
    )
    def test_invalid_bridges_rejected(self, bad):
        with pytest.raises(ValueError):
            Bridge(bad)

    @pytest.mark.parametrize("sigma", [1, 2, 3])
    def test_sign_coding_roundtrip_exhaustive(self, sigma):
        for b in enumerate_bridges(sigma):
            seq = bridge_to_pm1(b)
            assert len(seq) == 2 * sigma
            assert sum(seq) == 0
            assert pm1_to_bridge(seq) == b

    @given(st.integers(0, 2**31 - 1), st.integers(1, 40))
    @settings(max_examples=50, deadline=None)
    def test_sign_coding_roundtrip_random(self, seed, sigma):
        from bquad.sampler import sample_bridge

        b = sample_bridge(sigma, Seed(seed))
        assert pm1_to_bridge(bridge_to_pm1(b)) == b


class TestContourWalk:
    def test_contour_of_two_trees(self):
        sh = ForestShape(((1, 0), (0,)))
        wlf = WellLabeledForest(sh, (0, -1, 0))
        cp = contour_pair(wlf)
        assert cp.heights == (2, 3, 2, 1, 0)
        assert cp.labels == (0, -1, 0, 0, 0)
        assert cp.sigma == 2
        assert cp.n_edges == 1

    def test_contour_validation(self):
        with pytest.raises(ValueError):
            ContourPair((1, 0, 1, 0), (0, 0, 0, 0))  # dips to 0 early
        with pytest.raises(ValueError):
            ContourPair((2, 0), (0, 0))  # step of size 2

    def test_roundtrip_exhaustive(self, cells6):
        for n, sigma in cells6:
            for wlf in enumerate_forests(n, sigma):
                assert forest_from_contour_pair(contour_pair(wlf)) == wlf

    @given(st.integers(0, 2**31 - 1))
    @settings(max_examples=25, deadline=None)
    def test_roundtrip_random(self, seed):
        rng = rng_from_seed(Seed(seed))
        shape = sample_forest_shape(30, 4, rng)
        wlf = sample_labels(shape, rng)
        assert forest_from_contour_pair(contour_pair(wlf)) == wlf


class TestShiftedLabels:
    def test_bridge_shift_and_phantom(self):
        sh = ForestShape(((1, 0), (0,)))
        wlf = WellLabeledForest(sh, (0, 1, 0))
        b = Bridge((0, -1, -1))
        s = shifted_labels(wlf, b)
        # tree 1 shifted by b(0)=0, tree 2 by b(1)=-1, phantom is b(2)
        assert s.values == (0, 1, 0, -1, -1)
        assert s.min_value == -1  # phantom excluded from the minimum
        assert s.normalized() == (2, 3, 2, 1)

    def test_phantom_below_every_corner(self):
        sh = ForestShape(((0,),))
        wlf = WellLabeledForest(sh, (0,))
        b = Bridge((0, -1))
        s = shifted_labels(wlf, b)
        assert s.values == (0, -1)
        assert s.min_value == 0
        assert s.normalized() == (1,)

    def test_sigma_mismatch_rejected(self):
        sh = ForestShape(((0,),))
        wlf = WellLabeledForest(sh, (0,))
        with pytest.raises(ValueError):
            shifted_labels(wlf, Bridge((0, 0, 0)))


def test_oldest_ancestor():
    sh = ForestShape(((2, 0, 0), (1, 0)))
    assert [oldest_ancestor(sh, v) for v in range(5)] == [1, 1, 1, 2, 2]
    with pytest.raises(ValueError):
        oldest_ancestor(sh, 5)
