"""Rescaled walks, the excursion transform and the experiment drivers."""

import numpy as np
import pytest

from bquad.sampler import Seed, _bridge_array, rng_from_seed, sample_encoding
from bquad.scaling import (
    GAMMA,
    bridge_pseudometric,
    bridge_variance_experiment,
    dimension_experiment,
    rescale,
    sigma_zero_experiment,
    vervaat,
)


def reference_excursion(path):
    """Naive version of the cyclic-shift transform, for cross-checks."""
    x = np.asarray(path, dtype=float)
    m = len(x) - 1
    drift = (x[-1] - x[0]) / m
    inc = np.diff(x) - drift
    rho = 0
    best = 0.0
    acc = 0.0
    for i in range(m):
        acc += inc[i]
        if acc < best - 1e-12:
            best = acc
            rho = i + 1
    rolled = np.concatenate([inc[rho:], inc[:rho]])
    return np.concatenate([[0.0], np.cumsum(rolled)])


class TestVervaat:
    def test_golden_value(self):
        assert vervaat(np.array([0.0, 1.0, -1.0, 0.0])).tolist() == [
            0.0,
            1.0,
            2.0,
            0.0,
        ]

    def test_matches_reference_on_random_bridges(self):
        rng = rng_from_seed(Seed(31))
        for _ in range(20):
            b = _bridge_array(40, rng).astype(float)
            got = vervaat(b)
            ref = reference_excursion(b)
            assert np.allclose(got, ref)

    def test_output_is_a_nonnegative_excursion(self):
        rng = rng_from_seed(Seed(32))
        for _ in range(20):
            x = np.cumsum(rng.normal(size=100))
            out = vervaat(x)
            assert abs(out[0]) < 1e-9 and abs(out[-1]) < 1e-9
            assert out.min() >= -1e-9

    def test_rejects_trivial_input(self):
        with pytest.raises(ValueError):
            vervaat(np.array([1.0]))

    def test_excursion_midpoint_against_monte_carlo(self):
        # midpoint mean of the transformed, rescaled boundary walk vs a
        # discretized Gaussian-bridge construction of the same excursion
        n = 100_000
        sigma = int(np.sqrt(2.0 * n))
        scale = GAMMA * n**0.25
        reps = 1500
        mids = []
        for r in range(reps):
            b = _bridge_array(sigma, rng_from_seed(Seed(33, r)))
            mids.append(vervaat(b / scale)[sigma // 2])
        got = float(np.mean(mids))

        rng = np.random.default_rng(987654321)
        m = 512
        ref_mids = []
        for _ in range(4000):
            w = np.concatenate([[0.0], np.cumsum(rng.normal(size=m))])
            w -= np.linspace(0.0, w[-1], m + 1)  # Gaussian bridge
            e = vervaat(w / np.sqrt(m))
            ref_mids.append(e[m // 2])
        ref = float(np.sqrt(3.0) * np.mean(ref_mids))
        assert abs(got - ref) / ref < 0.1


class TestRescale:
    def test_bulk_endpoints_and_scales(self):
        enc = sample_encoding(500, 30, Seed(40))
        rs = rescale(enc, grid_size=257, normalization="bulk")
        assert rs.s[0] == 0.0 and rs.s[-1] == 1.0
        assert rs.contour[0] == 30 / np.sqrt(1000.0)
        assert np.isclose(rs.sigma_rescaled, 30 / np.sqrt(1000.0))
        assert np.isclose(rs.bridge[0], enc.bridge[0])
        assert np.isclose(
            rs.bridge[-1], enc.bridge[-1] / (GAMMA * 500**0.25)
        )

    def test_boundary_normalization(self):
        enc = sample_encoding(200, 50, Seed(41))
        rs = rescale(enc, normalization="boundary")
        assert np.isclose(rs.contour[0], 1.0)
        # the walk is read up to the last genuine corner, at height 1
        assert np.isclose(rs.contour[-1], enc.heights[-2] / 50.0)
        assert np.isclose(
            rs.bridge[-1], enc.bridge[-1] / np.sqrt(100.0)
        )

    def test_rejects_unknown_normalization(self):
        enc = sample_encoding(5, 2, Seed(42))
        with pytest.raises(ValueError):
            rescale(enc, normalization="other")
        with pytest.raises(ValueError):
            rescale(sample_encoding(0, 2, Seed(42)), normalization="bulk")


class TestBridgePseudometric:
    def test_pseudometric_axioms_on_random_paths(self):
        rng = rng_from_seed(Seed(50))
        v = np.cumsum(rng.normal(size=201))
        v -= np.linspace(0.0, v[-1] - v[0], 201) + v[0]
        m = 200
        for _ in range(200):
            i, j, k = (int(x) for x in rng.integers(m, size=3))
            dij = bridge_pseudometric(v, i, j)
            assert dij >= -1e-9
            assert abs(dij - bridge_pseudometric(v, j, i)) < 1e-9
            assert bridge_pseudometric(v, i, i) < 1e-9
            dik = bridge_pseudometric(v, i, k)
            dkj = bridge_pseudometric(v, k, j)
            assert dij <= dik + dkj + 1e-9

    def test_wraparound_interval(self):
        v = np.array([0.0, -1.0, 0.0, 1.0, 0.0])
        # between 3 and 1 the outer arc through index 0 has min -1, the
        # inner arc 3..4..(0) has min 0 going the short way 1..3 min -1
        assert bridge_pseudometric(v, 1, 3) == (-1.0 + 1.0 - 2 * (-1.0))


class TestExperiments:
    def test_statistics_reproducible(self):
        a = bridge_variance_experiment(n=2000, replicas=200, seed=3)
        b = bridge_variance_experiment(n=2000, replicas=200, seed=3)
        assert a.statistics == b.statistics
        assert a.name == "bridge-variance" and a.rng == b.rng

    def test_seed_changes_statistics(self):
        a = bridge_variance_experiment(n=2000, replicas=200, seed=3)
        c = bridge_variance_experiment(n=2000, replicas=200, seed=4)
        assert a.statistics != c.statistics

    def test_result_serializes(self):
        a = bridge_variance_experiment(n=500, replicas=50, seed=0)
        d = a.to_dict()
        assert set(d) >= {
            "name",
            "params",
            "seed",
            "rng",
            "statistics",
            "replicas",
            "runtime_s",
            "version",
        }

    def test_dimension_smoke(self):
        r = dimension_experiment(n=4000, replicas=2, seed=0)
        s = r.statistics
        assert s["bulk_slope_mean"] > s["boundary_slope_mean"] > 0

    def test_trend_marker_present(self):
        r = sigma_zero_experiment(sizes=(2**8, 2**10), replicas=4, seed=0)
        assert r.statistics["trend"] in ("ok", "FAILED")
        assert len(r.statistics["bound_medians"]) == 2
