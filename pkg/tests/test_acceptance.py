"""Headline guarantees of the package, one test per criterion.

Each test prints a single PASS/FAIL line (visible with pytest -v -s or
in the captured output on failure) and asserts the same condition, so
the pytest report carries one pass/fail verdict per criterion.
"""

import time

import numpy as np
import pytest

from bquad.bijection import (
    bdg_forward,
    bdg_inverse,
    build_map,
    encoding_from_forest,
)
from bquad.enumerator import (
    count_formula,
    enumerate_bridges,
    enumerate_forests,
    enumerate_quadrangulations,
)
from bquad.metrics import (
    bfs_distances,
    check_cactus_lower_bound,
    check_distance_upper_bound,
)
from bquad.planarmap import canonical_code
from bquad.sampler import Seed, rng_from_seed, sample_encoding
from bquad.saw import quadrangulation_to_saw, saw_to_quadrangulation
from bquad.scaling import (
    bridge_variance_experiment,
    dimension_experiment,
    sigma_infinity_experiment,
    sigma_zero_experiment,
)


def report(label: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {'PASS' if ok else 'FAIL'} {label}: {detail}")
    assert ok, f"{label}: {detail}"


def test_criterion_1_exact_counting(cells8):
    t0 = time.time()
    checked = []
    for n, sigma in cells8:
        nf = sum(1 for _ in enumerate_forests(n, sigma))
        nq = sum(1 for _ in enumerate_quadrangulations(n, sigma))
        checked.append(
            nf == count_formula("forests", n, sigma)
            and nq == count_formula("quadrangulations", n, sigma)
        )
    for sigma in range(1, 9):
        checked.append(
            sum(1 for _ in enumerate_bridges(sigma))
            == count_formula("bridges", 0, sigma)
        )
    spot = (
        count_formula("quadrangulations", 1, 1) == 2
        and count_formula("bridges", 0, 2) == 6
        and count_formula("forests", 1, 1) == 3
    )
    dt = time.time() - t0
    ok = all(checked) and spot and dt < 60
    report(
        "criterion-1 exact counting",
        ok,
        f"{len(checked)} families checked, spot values ok={spot}, {dt:.1f}s",
    )


def test_criterion_2_bijectivity(cells8):
    bad = tot = 0
    mult_ok = True
    for n, sigma in cells8:
        for wlf in enumerate_forests(n, sigma):
            for b in enumerate_bridges(sigma):
                tot += 1
                if bdg_inverse(bdg_forward(wlf, b)) != (wlf, b):
                    bad += 1
        for _, _, mult in enumerate_quadrangulations(n, sigma):
            if mult != n + sigma + 1:
                mult_ok = False
    sigmas = [1, 2, 7, 50, 141]
    rbad = 0
    reps = 1000
    for r in range(reps):
        enc = sample_encoding(10_000, sigmas[r % len(sigmas)], Seed(100, r))
        wlf, b = bdg_inverse(build_map(enc, check=False))
        enc2 = encoding_from_forest(wlf, b)
        if not (
            np.array_equal(enc.corner_vertex, enc2.corner_vertex)
            and np.array_equal(enc.labels, enc2.labels)
            and np.array_equal(enc.bridge, enc2.bridge)
        ):
            rbad += 1
    ok = bad == 0 and rbad == 0 and mult_ok
    report(
        "criterion-2 bijectivity",
        ok,
        f"exhaustive {tot - bad}/{tot}, random {reps - rbad}/{reps}, "
        f"multiplicity ok={mult_ok}",
    )


def test_criterion_3_label_distance_identity():
    sigmas = [1, 10, 45]
    bad = 0
    for r in range(100):
        enc = sample_encoding(1000, sigmas[r % len(sigmas)], Seed(200, r))
        pq = build_map(enc, check=False)
        d = bfs_distances(pq.map, pq.pointed)
        if not np.array_equal(d[pq.corner_vertex], enc.normalized()):
            bad += 1
        if d[pq.pointed] != 0:
            bad += 1
    report(
        "criterion-3 label-distance identity",
        bad == 0,
        f"{100 - bad}/100 maps with every vertex matching",
    )


def test_criterion_4_distance_bounds():
    n, sigma = 100_000, 447
    worst_hi = worst_lo = -np.inf
    for r in range(20):
        rng = rng_from_seed(Seed(300, r))
        enc = sample_encoding(n, sigma, rng)
        pq = build_map(enc, check=False)
        wlf, b = bdg_inverse(pq)
        worst_hi = max(
            worst_hi, check_distance_upper_bound(pq, n_pairs=10_000, rng=rng)
        )
        worst_lo = max(
            worst_lo,
            check_cactus_lower_bound(pq, wlf, b, n_pairs=10_000, rng=rng),
        )
    ok = worst_hi <= 0 and worst_lo <= 0
    report(
        "criterion-4 distance bounds",
        ok,
        f"20 maps at n={n}, worst upper slack {worst_hi}, "
        f"worst lower slack {worst_lo}",
    )


def test_criterion_5_bridge_limit_moments():
    res = bridge_variance_experiment(n=100_000, replicas=10_000, seed=0)
    s = res.statistics
    var_ok = abs(s["midpoint_variance"] - 0.75) <= 0.075
    end_ok = all(
        abs(f - e) <= 3 * se
        for f, e, se in zip(
            s["endpoint_freq"], s["endpoint_exact"], s["endpoint_se"]
        )
    )
    report(
        "criterion-5 bridge limit moments",
        var_ok and end_ok,
        f"midpoint variance {s['midpoint_variance']:.4f} (target 0.75±10%), "
        f"endpoint freqs within 3 SE={end_ok}",
    )


def test_criterion_6_dimension_exponents():
    res = dimension_experiment(n=500_000, replicas=50, seed=0)
    s = res.statistics
    bulk_ok = 3.4 <= s["bulk_slope_mean"] <= 4.6
    bnd_ok = 1.5 <= s["boundary_slope_mean"] <= 2.5
    time_ok = res.runtime_s <= 1800
    report(
        "criterion-6 dimension exponents",
        bulk_ok and bnd_ok and time_ok,
        f"bulk slope {s['bulk_slope_mean']:.3f} in [3.4, 4.6], boundary "
        f"slope {s['boundary_slope_mean']:.3f} in [1.5, 2.5], "
        f"{res.runtime_s:.0f}s",
    )


def test_criterion_7_small_boundary_regime():
    res = sigma_zero_experiment(
        sizes=(2**12, 2**14, 2**16), replicas=50, seed=5
    )
    s = res.statistics
    ok = s["trend"] == "ok"
    report(
        "criterion-7 small-boundary collapse",
        ok,
        f"bound medians {[round(x, 3) for x in s['bound_medians']]} and "
        f"missing medians {[round(x, 5) for x in s['missing_medians']]} "
        f"both decreasing={ok}",
    )


def test_criterion_8_large_boundary_regime():
    res = sigma_infinity_experiment(
        sizes=(2**14, 2**16, 2**18), replicas=50, seed=0
    )
    s = res.statistics
    contour_ok = s["contour_sup_mean"] < 0.1
    trend_ok = s["trend"] == "ok"
    report(
        "criterion-8 large-boundary collapse",
        contour_ok and trend_ok,
        f"contour sup mean {s['contour_sup_mean']:.4f} < 0.1, label spread "
        f"medians {[round(x, 4) for x in s['label_spread_medians']]} "
        f"decreasing={trend_ok}",
    )


def test_criterion_9_walk_decoration(cells8):
    bad = tot = census_bad = 0
    for n, sigma in cells8:
        for _, pq, _ in enumerate_quadrangulations(n, sigma):
            tot += 1
            cfg = quadrangulation_to_saw(pq.map)
            cfg.validate()
            if cfg.tile_census() != (2, sigma - 1, n):
                census_bad += 1
            if canonical_code(saw_to_quadrangulation(cfg)) != canonical_code(
                pq.map
            ):
                bad += 1
    rbad = 0
    reps = 1000
    for r in range(reps):
        m = build_map(sample_encoding(1000, 20, Seed(400, r)), check=False).map
        cfg = quadrangulation_to_saw(m)
        cfg.validate()
        if cfg.tile_census() != (2, 19, 1000) or canonical_code(
            saw_to_quadrangulation(cfg)
        ) != canonical_code(m):
            rbad += 1
    ok = bad == 0 and census_bad == 0 and rbad == 0
    report(
        "criterion-9 walk decoration",
        ok,
        f"exhaustive {tot - bad}/{tot}, random {reps - rbad}/{reps}, "
        f"census mismatches {census_bad}",
    )
