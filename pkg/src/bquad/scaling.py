"""Rescaled contour processes and scaling-limit experiments.

The contour, label and bridge walks of a uniform forest-plus-bridge
pair, suitably rescaled, approach continuum limits: the contour and
label pair behaves like the head of the Brownian snake, the bridge like
sqrt(3) times a Brownian bridge, and the whole map like the Brownian
map (boundary small), the Brownian disk (boundary comparable to
sqrt(2n)) or the continuum random tree (boundary dominant).  The
experiments here produce the summary statistics the test suite checks.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, asdict

import numpy as np

from . import __version__
from .bijection import Encoding, build_map
from .metrics import bfs_distances, ball_volume_profile
from .sampler import (
    RNG_ID,
    Seed,
    _bridge_array,
    rng_from_seed,
    sample_encoding,
)

__all__ = [
    "GAMMA",
    "RescaledProcesses",
    "ExperimentResult",
    "rescale",
    "vervaat",
    "bridge_pseudometric",
    "bridge_variance_experiment",
    "dimension_experiment",
    "sigma_zero_experiment",
    "sigma_infinity_experiment",
]

GAMMA = (8.0 / 9.0) ** 0.25


@dataclass
class RescaledProcesses:
    """Contour, label and bridge walks on a common [0, 1] time grid.

    Bulk normalization: contour over sqrt(2n), labels over
    gamma * n**(1/4), bridge over gamma * n**(1/4) with its own grid on
    [0, sigma / sqrt(2n)].  Boundary normalization: contour over sigma,
    labels and bridge over sqrt(2 * sigma), bridge time in [0, 1].
    """

    s: np.ndarray
    contour: np.ndarray
    label: np.ndarray
    bridge_s: np.ndarray
    bridge: np.ndarray
    sigma_rescaled: float
    normalization: str
    gamma: float = GAMMA


def rescale(
    enc: Encoding, grid_size: int = 1025, normalization: str = "bulk"
) -> RescaledProcesses:
    n, sigma = enc.n, enc.sigma
    s = np.linspace(0.0, 1.0, grid_size)
    C = enc.heights.astype(float)
    L = enc.labels.astype(float)
    b = enc.bridge.astype(float)
    # the walks are read at times (2n + sigma - 1) * s, as far as the
    # last genuine corner
    Cs = np.interp(s * (len(C) - 2), np.arange(len(C)), C)
    Ls = np.interp(s * (len(L) - 2), np.arange(len(L)), L)
    bs = np.interp(s * sigma, np.arange(sigma + 1), b)
    if normalization == "bulk":
        if n == 0:
            raise ValueError("bulk normalization needs n >= 1")
        sig_r = sigma / np.sqrt(2.0 * n)
        return RescaledProcesses(
            s=s,
            contour=Cs / np.sqrt(2.0 * n),
            label=Ls / (GAMMA * n**0.25),
            bridge_s=s * sig_r,
            bridge=bs / (GAMMA * n**0.25),
            sigma_rescaled=sig_r,
            normalization="bulk",
        )
    if normalization == "boundary":
        return RescaledProcesses(
            s=s,
            contour=Cs / sigma,
            label=Ls / np.sqrt(sigma),
            bridge_s=s,
            bridge=bs / np.sqrt(2.0 * sigma),
            sigma_rescaled=1.0,
            normalization="boundary",
        )
    raise ValueError("normalization must be 'bulk' or 'boundary'")


def vervaat(path: np.ndarray) -> np.ndarray:
    """Cyclic shift of a walk at its minimum, re-based to start at 0.

    The endpoint drift is removed first, so any walk is accepted; for a
    bridge (equal endpoints) the output is the classical transform: a
    nonnegative excursion of the same length whose increments are those
    of the input read cyclically from the first minimum.
    """
    x = np.asarray(path, dtype=float)
    m = len(x) - 1
    if m < 1:
        raise ValueError("path too short")
    y = x - np.linspace(0.0, x[-1] - x[0], m + 1) - x[0]
    rho = int(np.argmin(y[:m]))  # first minimum; y[m] duplicates y[0]
    out = y[(rho + np.arange(m + 1)) % m] - y[rho]
    return out


def bridge_pseudometric(values: np.ndarray, i: int, j: int) -> float:
    """Cyclic pseudo-distance built from a bridge path on a grid.

    d(i, j) = v(i) + v(j) - 2 * max of the two directed cyclic interval
    minima between i and j; the path is read cyclically with its last
    entry identified with the first.
    """
    v = np.asarray(values, dtype=float)
    m = len(v) - 1
    i, j = int(i) % m, int(j) % m
    if i > j:
        i, j = j, i
    inner = v[i : j + 1].min()
    outer = min(v[j:m].min(), v[: i + 1].min())
    return float(v[i] + v[j] - 2.0 * max(inner, outer))


@dataclass
class ExperimentResult:
    """Summary of one experiment run.

    statistics is reproducible bit for bit from (name, params, seed);
    runtime_s is informational only.
    """

    name: str
    params: dict
    seed: int
    rng: str
    statistics: dict
    replicas: int
    runtime_s: float
    version: str = __version__

    def to_dict(self) -> dict:
        return asdict(self)


def _sigma_from_rule(n: int, rule: str) -> int:
    """Boundary size as a function of n: 'sqrt2n', 'n^1/4' or 'n^3/4'."""
    if rule == "sqrt2n":
        return max(1, int(np.sqrt(2.0 * n)))
    if rule == "n^1/4":
        return max(1, int(n**0.25))
    if rule == "n^3/4":
        return max(1, int(n**0.75))
    raise ValueError(f"unknown sigma rule {rule!r}")


def bridge_variance_experiment(
    n: int = 100_000,
    replicas: int = 10_000,
    seed: int = 0,
    sigma_rule: str = "sqrt2n",
) -> ExperimentResult:
    """Midpoint variance and endpoint law of the rescaled bridge.

    The bridge alone is sampled; the rescaled walk at time 1/2 should
    have variance 3 * s * (sig - s) / sig with sig = sigma / sqrt(2n)
    and s = sig / 2, i.e. about 3/4 when sigma ~ sqrt(2n).  Endpoint
    frequencies P(b(sigma) = -k) are compared with the exact ratio of
    binomials.
    """
    t0 = time.time()
    sigma = _sigma_from_rule(n, sigma_rule)
    scale = GAMMA * n**0.25
    t_half = np.sqrt(2.0 * n) / 2.0
    lo = int(np.floor(t_half))
    frac = t_half - lo
    mids = np.empty(replicas)
    end_counts = np.zeros(3, dtype=np.int64)
    for r in range(replicas):
        rng = rng_from_seed(Seed(seed, r))
        b = _bridge_array(sigma, rng)
        val = b[lo] + frac * (b[min(lo + 1, sigma)] - b[lo])
        mids[r] = val / scale
        k = -int(b[sigma])
        if k <= 2:
            end_counts[k] += 1
    from math import comb

    denom = comb(2 * sigma, sigma)
    exact = [comb(2 * sigma - k - 1, sigma - 1) / denom for k in range(3)]
    freq = end_counts / replicas
    se = [np.sqrt(max(p * (1 - p), 1e-12) / replicas) for p in exact]
    stats = {
        "sigma": sigma,
        "midpoint_variance": float(np.var(mids)),
        "midpoint_mean": float(np.mean(mids)),
        "target_variance": 3.0
        * (sigma / np.sqrt(2.0 * n) / 2.0)
        * (sigma / np.sqrt(2.0 * n) - sigma / np.sqrt(2.0 * n) / 2.0)
        / (sigma / np.sqrt(2.0 * n)),
        "endpoint_freq": [float(x) for x in freq],
        "endpoint_exact": exact,
        "endpoint_se": [float(x) for x in se],
        "endpoint_limit": [2.0 ** (-k - 1) for k in range(3)],
    }
    return ExperimentResult(
        "bridge-variance",
        {"n": n, "sigma_rule": sigma_rule},
        seed,
        RNG_ID,
        stats,
        replicas,
        time.time() - t0,
    )


def _loglog_slope(radii: np.ndarray, counts: np.ndarray) -> float:
    mask = counts > 0
    x = np.log(radii[mask].astype(float))
    y = np.log(counts[mask].astype(float))
    A = np.vstack([x, np.ones_like(x)]).T
    slope, _ = np.linalg.lstsq(A, y, rcond=None)[0]
    return float(slope)


def dimension_experiment(
    n: int = 500_000,
    replicas: int = 50,
    seed: int = 0,
    sigma_rule: str = "sqrt2n",
) -> ExperimentResult:
    """Growth exponents of metric balls in the bulk and on the boundary.

    For each replica one uniform map is sampled; ball volumes around a
    uniform vertex and boundary-restricted volumes around a uniform
    boundary vertex are fitted on radii between n**(1/8) and n**(1/4).
    The slopes estimate the Hausdorff dimensions 4 and 2.
    """
    t0 = time.time()
    sigma = _sigma_from_rule(n, sigma_rule)
    r_lo = max(2, int(np.ceil(n ** (1.0 / 8.0))))
    r_hi = int(np.floor(n**0.25))
    radii = np.arange(r_lo, r_hi + 1)
    bulk_slopes = []
    bnd_slopes = []
    for r in range(replicas):
        rng = rng_from_seed(Seed(seed, r))
        enc = sample_encoding(n, sigma, rng)
        pq = build_map(enc, check=False)
        m = pq.map
        center = int(rng.integers(m.n_vertices))
        d = bfs_distances(m, center)
        hist = np.bincount(d, minlength=r_hi + 1)
        sizes = np.cumsum(hist)
        bulk_slopes.append(_loglog_slope(radii, sizes[r_lo : r_hi + 1]))
        bvs = m.boundary_vertices()
        bcenter = int(bvs[rng.integers(len(bvs))])
        db = bfs_distances(m, bcenter)[bvs]
        hist = np.bincount(db, minlength=r_hi + 1)
        sizes = np.cumsum(hist)
        bnd_slopes.append(_loglog_slope(radii, sizes[r_lo : r_hi + 1]))
    stats = {
        "sigma": sigma,
        "r_window": [int(r_lo), int(r_hi)],
        "bulk_slope_mean": float(np.mean(bulk_slopes)),
        "bulk_slope_sd": float(np.std(bulk_slopes)),
        "boundary_slope_mean": float(np.mean(bnd_slopes)),
        "boundary_slope_sd": float(np.std(bnd_slopes)),
    }
    return ExperimentResult(
        "dimension",
        {"n": n, "sigma_rule": sigma_rule},
        seed,
        RNG_ID,
        stats,
        replicas,
        time.time() - t0,
    )


def _decreasing(xs: list[float]) -> bool:
    return all(b < a for a, b in zip(xs, xs[1:]))


def sigma_zero_experiment(
    sizes: tuple[int, ...] = (2**12, 2**14, 2**16),
    replicas: int = 50,
    seed: int = 0,
) -> ExperimentResult:
    """Small-boundary regime: one tree swallows the map.

    With sigma ~ n**(1/4), the largest tree carries almost all edges
    and the label spread outside it, rescaled by gamma * n**(1/4),
    bounds the distance between the map and the one-tree map.  Both the
    rescaled spread and the missing edge fraction should shrink with n.
    """
    t0 = time.time()
    stats: dict = {"sizes": list(sizes), "bound_medians": [], "missing_medians": []}
    for n in sizes:
        sigma = _sigma_from_rule(n, "n^1/4")
        bounds = []
        missing = []
        for r in range(replicas):
            rng = rng_from_seed(Seed(seed, r))
            enc = sample_encoding(n, sigma, rng)
            sh = enc.shifted()
            tree_idx = enc.tree_index()
            # vertex count per tree = corners with height above the floor
            # plus the root; count first visits per tree instead
            first = np.zeros(n + sigma + 1, dtype=bool)
            tree_of_vertex = np.full(n + sigma + 1, sigma + 1, dtype=np.int64)
            cv = enc.corner_vertex
            for i in range(len(cv)):
                v = cv[i]
                if not first[v]:
                    first[v] = True
                    tree_of_vertex[v] = tree_idx[i]
            tree_sizes = np.bincount(
                tree_of_vertex[: n + sigma], minlength=sigma + 2
            )
            kbig = int(np.argmax(tree_sizes[1 : sigma + 1])) + 1
            # shifted labels outside the open largest tree: every other
            # tree plus all the floor roots, phantom excluded
            run_min = np.minimum.accumulate(enc.heights)
            roots_mask = enc.heights == run_min
            outside = (tree_idx != kbig) | roots_mask
            outside[-1] = False
            vals = sh[outside]
            bounds.append(
                2.0 * (vals.max() - vals.min() + 1) / (GAMMA * n**0.25)
            )
            missing.append(1.0 - (tree_sizes[kbig] - 1) / n)
        stats["bound_medians"].append(float(np.median(bounds)))
        stats["missing_medians"].append(float(np.median(missing)))
    stats["trend"] = (
        "ok"
        if _decreasing(stats["bound_medians"])
        and _decreasing(stats["missing_medians"])
        else "FAILED"
    )
    return ExperimentResult(
        "sigma-zero",
        {"sizes": list(sizes)},
        seed,
        RNG_ID,
        stats,
        replicas,
        time.time() - t0,
    )


def sigma_infinity_experiment(
    sizes: tuple[int, ...] = (2**14, 2**16, 2**18),
    replicas: int = 25,
    seed: int = 0,
    contour_n: int = 100_000,
    distortion_replicas: int = 3,
    distortion_pairs: int = 2000,
) -> ExperimentResult:
    """Large-boundary regime: the bridge alone drives the geometry.

    Three diagnostics: the boundary-normalized contour of a forest with
    sigma ~ n**(3/4) hugs the line 1 - s; the rescaled label spread
    sup - inf over sqrt(2 sigma) shrinks with n; and matching map
    vertices to bridge times shows the map distance approaching the
    cyclic bridge pseudo-distance.
    """
    t0 = time.time()
    stats: dict = {"sizes": list(sizes), "label_spread_medians": []}
    for n in sizes:
        sigma = _sigma_from_rule(n, "n^3/4")
        spreads = []
        for r in range(replicas):
            rng = rng_from_seed(Seed(seed, r))
            enc = sample_encoding(n, sigma, rng)
            spreads.append(
                float(enc.labels.max() - enc.labels.min())
                / np.sqrt(2.0 * sigma)
            )
        stats["label_spread_medians"].append(float(np.median(spreads)))

    sigma_c = _sigma_from_rule(contour_n, "n^3/4")
    sups = []
    for r in range(replicas):
        rng = rng_from_seed(Seed(seed + 1, r))
        enc = sample_encoding(contour_n, sigma_c, rng)
        rs = rescale(enc, grid_size=2049, normalization="boundary")
        sups.append(float(np.abs(rs.contour - (1.0 - rs.s)).max()))
    stats["contour_sup_mean"] = float(np.mean(sups))
    stats["contour_n"] = contour_n

    # distance distortion at the largest size
    n = sizes[-1]
    sigma = _sigma_from_rule(n, "n^3/4")
    worst = []
    for r in range(distortion_replicas):
        rng = rng_from_seed(Seed(seed + 2, r))
        enc = sample_encoding(n, sigma, rng)
        pq = build_map(enc, check=False)
        scale = np.sqrt(2.0 * sigma)
        bvals = enc.bridge.astype(float) / scale
        run_min = np.minimum.accumulate(enc.heights)
        # bridge time of each corner: index of the current tree
        corner_time = (sigma - run_min)[: enc.n_corners]
        N = enc.n_corners
        n_src = max(2, distortion_pairs // 100)
        per = distortion_pairs // n_src
        w = 0.0
        for _ in range(n_src):
            i = int(rng.integers(N))
            d = bfs_distances(pq.map, int(pq.corner_vertex[i]))
            for j in rng.integers(N, size=per):
                j = int(j)
                dx = d[int(pq.corner_vertex[j])] / scale
                dy = bridge_pseudometric(
                    bvals, int(corner_time[i]), int(corner_time[j])
                )
                w = max(w, abs(dx - dy))
        worst.append(w)
    stats["distortion_mean"] = float(np.mean(worst))
    stats["distortion_n"] = n
    stats["distortion_pairs"] = distortion_pairs
    stats["trend"] = (
        "ok" if _decreasing(stats["label_spread_medians"]) else "FAILED"
    )
    return ExperimentResult(
        "sigma-infinity",
        {"sizes": list(sizes), "contour_n": contour_n},
        seed,
        RNG_ID,
        stats,
        replicas,
        time.time() - t0,
    )
