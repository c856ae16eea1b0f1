"""Exact uniform samplers for bridges, forests and quadrangulations.

Randomness comes from numpy's PCG64 generator.  A Seed names a master
integer plus a replica index; replicas get independent streams through
SeedSequence spawn keys, so experiment replicas can run in any order
(or in parallel) and still reproduce bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bijection import Encoding, build_map
from .forest import Bridge, ForestShape, WellLabeledForest
from .planarmap import PointedBoundaryMap

__all__ = [
    "Seed",
    "RNG_ID",
    "rng_from_seed",
    "sample_bridge",
    "sample_forest_shape",
    "sample_labels",
    "sample_quadrangulation",
    "sample_encoding",
]

RNG_ID = "numpy-pcg64-seedseq"


@dataclass(frozen=True)
class Seed:
    master: int
    replica: int = 0


def rng_from_seed(seed: Seed | int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, int):
        seed = Seed(seed)
    ss = np.random.SeedSequence(seed.master, spawn_key=(seed.replica,))
    return np.random.Generator(np.random.PCG64(ss))


def _bridge_array(sigma: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform bridge walk as a value array of length sigma + 1.

    A uniform sigma-subset of 2*sigma slots marks the -1 steps of the
    sign sequence; the gaps of +1s between consecutive -1s give the
    bridge increments.
    """
    if sigma < 1:
        raise ValueError("sigma must be positive")
    downs = np.sort(rng.choice(2 * sigma, size=sigma, replace=False))
    gaps = np.empty(sigma, dtype=np.int64)
    gaps[:-1] = np.diff(downs) - 1
    gaps[-1] = 2 * sigma - 1 - downs[-1]
    out = np.zeros(sigma + 1, dtype=np.int64)
    out[1:] = np.cumsum(gaps - 1)
    return out


def sample_bridge(sigma: int, seed: Seed | int | np.random.Generator) -> Bridge:
    rng = rng_from_seed(seed)
    return Bridge(tuple(int(x) for x in _bridge_array(sigma, rng)))


def _contour_steps(n: int, sigma: int, rng: np.random.Generator) -> np.ndarray:
    """Steps of a uniform first-passage walk from sigma down to 0.

    A uniform arrangement of n up and n + sigma down steps is rotated
    to one of its first-passage readings, chosen uniformly among the
    sigma valid rotations (cycle lemma); the result is uniform over
    forest contours.
    """
    if sigma < 1 or n < 0:
        raise ValueError("need sigma >= 1 and n >= 0")
    N = 2 * n + sigma
    steps = np.concatenate(
        [np.ones(n, dtype=np.int64), -np.ones(n + sigma, dtype=np.int64)]
    )
    rng.shuffle(steps)
    S = np.concatenate([[0], np.cumsum(steps)])  # length N + 1
    # rotation start p is valid when S[p] beats every earlier value
    # strictly and the remaining walk never dips sigma below S[p]
    prev_min = np.minimum.accumulate(S[:-1])  # min over S[0..p]
    strict = np.empty(N, dtype=bool)
    strict[0] = True
    strict[1:] = S[1:N] < prev_min[:-1]
    suf = np.empty(N, dtype=np.int64)  # suf[p] = min S[p+1..N-1]
    suf[N - 1] = np.iinfo(np.int64).max
    if N > 1:
        suf[: N - 1] = np.minimum.accumulate(S[N - 1 : 0 : -1])[::-1]
    ok = strict & (suf >= S[:N] - sigma + 1)
    valid = np.flatnonzero(ok)
    assert len(valid) == sigma, "cycle lemma miscount"
    p = int(valid[rng.integers(sigma)])
    return np.roll(steps, -p)


def sample_forest_shape(
    n: int, sigma: int, seed: Seed | int | np.random.Generator
) -> ForestShape:
    rng = rng_from_seed(seed)
    steps = _contour_steps(n, sigma, rng)
    counts: list[int] = [0]
    stack = [0]
    roots = [0]
    for s in steps:
        if s > 0:
            counts[stack[-1]] += 1
            counts.append(0)
            stack.append(len(counts) - 1)
        else:
            stack.pop()
            if not stack and len(roots) < sigma:
                counts.append(0)
                roots.append(len(counts) - 1)
                stack.append(len(counts) - 1)
    trees = []
    for k, r in enumerate(roots):
        end = roots[k + 1] if k + 1 < len(roots) else len(counts)
        trees.append(tuple(counts[r:end]))
    return ForestShape(tuple(trees))


def sample_labels(
    shape: ForestShape, seed: Seed | int | np.random.Generator
) -> WellLabeledForest:
    """Attach uniform label increments from {-1, 0, 1} to every edge."""
    rng = rng_from_seed(seed)
    par = shape.parents()
    deltas = rng.integers(-1, 2, size=shape.n_vertices)
    labels = [0] * shape.n_vertices
    for v, p in enumerate(par):
        if p >= 0:
            labels[v] = labels[p] + int(deltas[v])
    return WellLabeledForest(shape, tuple(labels))


def sample_quadrangulation(
    n: int, sigma: int, seed: Seed | int | np.random.Generator
) -> PointedBoundaryMap:
    """A uniform pointed quadrangulation with n faces, boundary 2*sigma."""
    rng = rng_from_seed(seed)
    enc = sample_encoding(n, sigma, rng)
    return build_map(enc, check=False)


def sample_encoding(
    n: int, sigma: int, seed: Seed | int | np.random.Generator
) -> Encoding:
    """Uniform forest-plus-bridge pair in array form.

    This is the workhorse for large instances: it produces the contour
    heights, the vertex visited at each corner and the corner labels in
    one pass, without building the tree objects.
    """
    rng = rng_from_seed(seed)
    steps = _contour_steps(n, sigma, rng)
    deltas = rng.integers(-1, 2, size=len(steps))
    N = 2 * n + sigma
    heights = np.empty(N + 1, dtype=np.int64)
    heights[0] = sigma
    np.cumsum(steps, out=heights[1:])
    heights[1:] += sigma

    corner_vertex = np.empty(N + 1, dtype=np.int64)
    labels = np.zeros(N + 1, dtype=np.int64)
    corner_vertex[0] = 0
    fresh = 1
    cur = 0
    curlab = 0
    stack: list[tuple[int, int]] = []
    for i in range(N):
        if steps[i] > 0:
            stack.append((cur, curlab))
            cur = fresh
            fresh += 1
            curlab += int(deltas[i])
        elif stack:
            cur, curlab = stack.pop()
        else:
            cur = fresh
            fresh += 1
            curlab = 0
        corner_vertex[i + 1] = cur
        labels[i + 1] = curlab
    assert fresh == n + sigma + 1
    bridge = _bridge_array(sigma, rng)
    return Encoding(
        sigma=sigma,
        n=n,
        corner_vertex=corner_vertex,
        heights=heights,
        labels=labels,
        bridge=bridge,
    )
