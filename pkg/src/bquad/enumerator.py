"""Exhaustive enumeration and exact counting for small parameters.

These routines list every bridge, labeled forest or quadrangulation for
small (n, sigma) and provide the closed-form counts they must match.
They exist chiefly as ground truth for the samplers and the encoder.
"""

from __future__ import annotations

from itertools import combinations, product
from math import comb, factorial
from typing import Iterator

from .bijection import bdg_forward
from .forest import Bridge, ForestShape, WellLabeledForest, pm1_to_bridge
from .planarmap import canonical_code

__all__ = [
    "count_formula",
    "enumerate_bridges",
    "enumerate_forest_shapes",
    "enumerate_forests",
    "enumerate_quadrangulations",
]

ENUMERATION_CAP = 10  # largest 2n + sigma we agree to enumerate


def count_formula(kind: str, n: int, sigma: int) -> int:
    """Exact cardinality of a family.

    kind is one of "bridges", "forests", "forest-shapes",
    "quadrangulations" or "pointed-quadrangulations".
    """
    if sigma < 1 or n < 0:
        raise ValueError("need sigma >= 1 and n >= 0")
    if kind == "bridges":
        return comb(2 * sigma, sigma)
    if kind == "forest-shapes":
        return sigma * comb(2 * n + sigma, n) // (2 * n + sigma)
    if kind == "forests":
        return 3**n * sigma * comb(2 * n + sigma, n) // (2 * n + sigma)
    if kind == "quadrangulations":
        return (
            3**n
            * factorial(2 * sigma)
            * factorial(2 * n + sigma - 1)
            // (
                factorial(sigma)
                * factorial(sigma - 1)
                * factorial(n)
                * factorial(n + sigma + 1)
            )
        )
    if kind == "pointed-quadrangulations":
        return count_formula("quadrangulations", n, sigma) * (n + sigma + 1)
    raise ValueError(f"unknown kind {kind!r}")


def enumerate_bridges(sigma: int) -> Iterator[Bridge]:
    """All walks b(0..sigma) with steps >= -1, b(0)=0, b(sigma) <= 0."""
    for downs in combinations(range(2 * sigma), sigma):
        seq = [1] * (2 * sigma)
        for p in downs:
            seq[p] = -1
        yield pm1_to_bridge(seq)


def enumerate_forest_shapes(n: int, sigma: int) -> Iterator[ForestShape]:
    """All plane forests with sigma trees and n edges.

    Generated from first-passage walks: sigma + (up-down) must stay
    positive until the final step brings it to 0.
    """
    N = 2 * n + sigma
    for ups in combinations(range(N), n):
        up_set = set(ups)
        h = sigma
        ok = True
        for i in range(N - 1):
            h += 1 if i in up_set else -1
            if h <= 0:
                ok = False
                break
        if not ok:
            continue
        yield _shape_from_steps([1 if i in up_set else -1 for i in range(N)], sigma)


def _shape_from_steps(steps: list[int], sigma: int) -> ForestShape:
    trees: list[list[int]] = [[0]]
    stack = [0]
    counts: list[int] = [0]
    base = 0
    for s in steps:
        if s > 0:
            counts[stack[-1]] += 1
            counts.append(0)
            stack.append(len(counts) - 1)
            trees[-1].append(0)
        else:
            stack.pop()
            if not stack and len(trees) < sigma:
                trees.append([0])
                counts.append(0)
                stack.append(len(counts) - 1)
    out = []
    i = 0
    for t in trees:
        out.append(tuple(counts[i : i + len(t)]))
        i += len(t)
    return ForestShape(tuple(out))


def enumerate_forests(n: int, sigma: int) -> Iterator[WellLabeledForest]:
    """All well-labeled forests: every shape with every label choice."""
    for shape in enumerate_forest_shapes(n, sigma):
        par = shape.parents()
        non_roots = [v for v, p in enumerate(par) if p >= 0]
        for deltas in product((-1, 0, 1), repeat=len(non_roots)):
            labels = [0] * shape.n_vertices
            for v, d in zip(non_roots, deltas):
                labels[v] = labels[par[v]] + d
            yield WellLabeledForest(shape, tuple(labels))


def enumerate_quadrangulations(
    n: int, sigma: int, pointed: bool = False
) -> Iterator[tuple]:
    """Distinct quadrangulations as (canonical code, map) pairs.

    Every (forest, bridge) pair is encoded; deduplication is by the
    canonical traversal code, with the pointed vertex included when
    pointed is true.  Without pointing each map is produced by exactly
    n + sigma + 1 pairs, which callers may verify via the returned
    multiplicities.
    """
    if 2 * n + sigma > ENUMERATION_CAP:
        raise ValueError("parameters beyond the enumeration cap")
    seen: dict[bytes, list] = {}
    for wlf in enumerate_forests(n, sigma):
        for b in enumerate_bridges(sigma):
            pq = bdg_forward(wlf, b)
            code = canonical_code(pq.map, pq.pointed if pointed else None)
            if code in seen:
                seen[code][1] += 1
            else:
                seen[code] = [pq, 1]
    for code, (pq, mult) in sorted(seen.items()):
        yield code, pq, mult
