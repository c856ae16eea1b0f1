"""Graph distances, profiles and distance bounds on boundary maps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import dijkstra

from .forest import Bridge, ForestShape, WellLabeledForest
from .planarmap import BoundaryMap, PointedBoundaryMap, RootedMap

__all__ = [
    "DistanceProfile",
    "DistortionEstimate",
    "bfs_distances",
    "ball_volume_profile",
    "boundary_ball_profile",
    "diameter",
    "check_distance_upper_bound",
    "check_cactus_lower_bound",
    "correspondence_distortion",
    "largest_tree_comparison",
]


def bfs_distances(m: RootedMap, source: int) -> np.ndarray:
    """Graph distance from source to every vertex."""
    adj = m.adjacency()
    d = dijkstra(adj, directed=False, unweighted=True, indices=source)
    if np.isinf(d).any():
        raise ValueError("map is not connected")
    return d.astype(np.int64)


@dataclass
class DistanceProfile:
    """Distances from one source plus their histogram."""

    source: int
    distances: np.ndarray
    histogram: np.ndarray = field(init=False)

    def __post_init__(self):
        self.histogram = np.bincount(self.distances)

    @property
    def eccentricity(self) -> int:
        return int(self.distances.max())

    def ball_sizes(self) -> np.ndarray:
        """Number of vertices within distance r, for r = 0..ecc."""
        return np.cumsum(self.histogram)


def ball_volume_profile(m: RootedMap, center: int, r_max: int) -> np.ndarray:
    """|B(center, r)| for r = 0..r_max (clipped to the eccentricity)."""
    prof = DistanceProfile(center, bfs_distances(m, center))
    sizes = prof.ball_sizes()
    r_max = min(r_max, prof.eccentricity)
    return sizes[: r_max + 1]


def boundary_ball_profile(m: BoundaryMap, center: int, r_max: int) -> np.ndarray:
    """Number of external-face vertices within distance r of center."""
    d = bfs_distances(m, center)
    db = d[m.boundary_vertices()]
    hist = np.bincount(db)
    sizes = np.cumsum(hist)
    r_max = min(r_max, len(sizes) - 1)
    return sizes[: r_max + 1]


def diameter(m: RootedMap, mode: str = "exact") -> int:
    """Largest pairwise distance.

    mode "exact" runs a BFS from every vertex; "double_sweep" runs two
    and returns a lower bound that is often tight.
    """
    if mode == "double_sweep":
        d0 = bfs_distances(m, 0)
        far = int(np.argmax(d0))
        return int(bfs_distances(m, far).max())
    if mode != "exact":
        raise ValueError("mode must be 'exact' or 'double_sweep'")
    adj = m.adjacency()
    d = dijkstra(adj, directed=False, unweighted=True)
    if np.isinf(d).any():
        raise ValueError("map is not connected")
    return int(d.max())


def _interval_min(vals: np.ndarray, i: int, j: int) -> int:
    """Minimum of vals over the directed cyclic range i..j inclusive."""
    if i <= j:
        return int(vals[i : j + 1].min())
    return int(min(vals[i:].min(), vals[: j + 1].min()))


def check_distance_upper_bound(
    pq: PointedBoundaryMap,
    n_pairs: int = 1000,
    rng: np.random.Generator | None = None,
    n_sources: int | None = None,
) -> float:
    """Largest value of d(a, b) - bound over sampled corner pairs.

    The bound reads the shifted contour labels: the distance between the
    vertices at corners i and j is at most Lab(i) + Lab(j) + 2 minus
    twice the larger of the two cyclic interval minima between i and j.
    A correct implementation never returns a positive value.
    """
    if pq.corner_vertex is None or pq.shifted is None:
        raise ValueError("map lacks corner data; encode it with bdg_forward")
    if rng is None:
        rng = np.random.default_rng(0)
    lab = np.asarray(pq.shifted[: len(pq.corner_vertex)])
    N = len(lab)
    if n_sources is None:
        n_sources = max(1, min(64, n_pairs // 16 + 1))
    per = max(1, n_pairs // n_sources)
    worst = -np.inf
    for _ in range(n_sources):
        i = int(rng.integers(N))
        d = bfs_distances(pq.map, int(pq.corner_vertex[i]))
        js = rng.integers(N, size=per)
        for j in js:
            j = int(j)
            bound = (
                lab[i]
                + lab[j]
                - 2 * max(_interval_min(lab, i, j), _interval_min(lab, j, i))
                + 2
            )
            gap = d[int(pq.corner_vertex[j])] - bound
            worst = max(worst, float(gap))
    return worst


def check_cactus_lower_bound(
    pq: PointedBoundaryMap,
    wlf: WellLabeledForest,
    b: Bridge,
    n_pairs: int = 1000,
    rng: np.random.Generator | None = None,
    n_sources: int | None = None,
) -> float:
    """Largest value of bound - d(a, b) over sampled vertex pairs.

    The lower bound follows the forest structure: between two vertices,
    any path must descend to the label minimum along one of the two
    ancestor-floor-ancestor routes around the forest.  A correct
    implementation never returns a positive value.
    """
    if pq.corner_vertex is None:
        raise ValueError("map lacks corner data; encode it with bdg_forward")
    if rng is None:
        rng = np.random.default_rng(0)
    shape = wlf.shape
    par = shape.parents()
    tree = shape.tree_of()
    sigma = shape.sigma
    lhat = [wlf.labels[v] + b[tree[v] - 1] for v in range(shape.n_vertices)]
    floor_lhat = [b[k - 1] for k in range(1, sigma + 1)]

    # forest vertex id -> map vertex id, via the corner walk
    first_corner = {}
    from .forest import facial_sequence

    fs = facial_sequence(shape)
    for i, v in enumerate(fs[:-1]):
        if v not in first_corner:
            first_corner[v] = i

    def anc_min(v):
        chain = []
        while v >= 0:
            chain.append(lhat[v])
            v = par[v]
        return min(chain)

    def route_min(a, bv):
        ka, kb = tree[a], tree[bv]
        if ka == kb:
            # within one tree: walk both ancestor chains to their meet
            ca, cb = [], []
            x = a
            while x >= 0:
                ca.append(x)
                x = par[x]
            x = bv
            seen = set(ca)
            path_min = lhat[bv]
            while x not in seen:
                path_min = min(path_min, lhat[x])
                x = par[x]
            meet = x
            for y in ca:
                path_min = min(path_min, lhat[y])
                if y == meet:
                    break
            return path_min, path_min
        if ka < kb:
            fwd = floor_lhat[ka - 1 : kb]
        else:
            fwd = floor_lhat[ka - 1 :] + floor_lhat[:kb]
        if kb < ka:
            bwd = floor_lhat[kb - 1 : ka]
        else:
            bwd = floor_lhat[kb - 1 :] + floor_lhat[:ka]
        m_a, m_b = anc_min(a), anc_min(bv)
        return min(m_a, m_b, min(fwd)), min(m_a, m_b, min(bwd))

    nv = shape.n_vertices
    if n_sources is None:
        n_sources = max(1, min(64, n_pairs // 16 + 1))
    per = max(1, n_pairs // n_sources)
    worst = -np.inf
    for _ in range(n_sources):
        a = int(rng.integers(nv))
        d = bfs_distances(pq.map, int(pq.corner_vertex[first_corner[a]]))
        for bv in rng.integers(nv, size=per):
            bv = int(bv)
            m1, m2 = route_min(a, bv)
            bound = lhat[a] + lhat[bv] - 2 * max(m1, m2)
            gap = bound - d[int(pq.corner_vertex[first_corner[bv]])]
            worst = max(worst, float(gap))
    return worst


@dataclass
class DistortionEstimate:
    """Result of a correspondence distortion evaluation."""

    value: float
    pairs_evaluated: int
    exact: bool


def correspondence_distortion(
    dx,
    dy,
    pairs: list[tuple[int, int]],
    sample_size: int | None = None,
    rng: np.random.Generator | None = None,
) -> DistortionEstimate:
    """sup |dx(a, a') - dy(b, b')| over pairs (a, b), (a', b') in R.

    dx and dy are callables on index pairs.  With sample_size set, only
    that many random pairs-of-pairs are inspected and the estimate is a
    lower bound on the true distortion.
    """
    k = len(pairs)
    exact = sample_size is None or sample_size >= k * (k - 1) // 2
    worst = 0.0
    if exact:
        count = 0
        for s in range(k):
            a, bv = pairs[s]
            for t in range(s, k):
                a2, b2 = pairs[t]
                worst = max(worst, abs(dx(a, a2) - dy(bv, b2)))
                count += 1
        return DistortionEstimate(worst, count, True)
    if rng is None:
        rng = np.random.default_rng(0)
    idx = rng.integers(k, size=(sample_size, 2))
    for s, t in idx:
        a, bv = pairs[int(s)]
        a2, b2 = pairs[int(t)]
        worst = max(worst, abs(dx(a, a2) - dy(bv, b2)))
    return DistortionEstimate(worst, sample_size, False)


def largest_tree_comparison(
    wlf: WellLabeledForest, b: Bridge, tail_bit: int
) -> dict:
    """Compare a forest's map with the map of its largest tree alone.

    The largest tree is re-encoded with sigma = 1 and the bridge
    (0, -tail_bit); every vertex outside that tree is matched to the
    tree's root, the others to themselves.  Returns the observed
    distortion of that matching together with the label-gap bound
    4 * (max - min + 1) computed over the vertices left out.
    """
    if tail_bit not in (0, 1):
        raise ValueError("tail_bit must be 0 or 1")
    from .bijection import bdg_forward
    from .forest import facial_sequence

    shape = wlf.shape
    offs = shape.tree_offsets()
    sizes = [len(t) for t in shape.child_counts]
    kbig = int(np.argmax(sizes))
    lo = offs[kbig]
    hi = lo + sizes[kbig]

    sub = WellLabeledForest(
        ForestShape((shape.child_counts[kbig],)), wlf.labels[lo:hi]
    )
    b_sub = Bridge((0, -tail_bit))

    pq_full = bdg_forward(wlf, b)
    pq_tree = bdg_forward(sub, b_sub)

    # shifted labels of everything outside the open largest tree
    tree = shape.tree_of()
    lhat = [wlf.labels[v] + b[tree[v] - 1] for v in range(shape.n_vertices)]
    outside = [lhat[v] for v in range(shape.n_vertices) if not (lo < v < hi)]
    outside.append(b[b.sigma])  # the phantom floor vertex
    gap = max(outside) - min(outside)
    bound = 4 * (gap + 1)

    # forest vertex -> map vertex in both maps
    fs_full = facial_sequence(shape)
    first_full = {}
    for i, v in enumerate(fs_full[:-1]):
        first_full.setdefault(v, int(pq_full.corner_vertex[i]))
    fs_tree = facial_sequence(sub.shape)
    first_tree = {}
    for i, v in enumerate(fs_tree[:-1]):
        first_tree.setdefault(v, int(pq_tree.corner_vertex[i]))

    d_full = dijkstra(
        pq_full.map.adjacency(), directed=False, unweighted=True
    ).astype(np.int64)
    d_tree = dijkstra(
        pq_tree.map.adjacency(), directed=False, unweighted=True
    ).astype(np.int64)

    root_img = first_tree[0]
    pairs = []
    for v in range(shape.n_vertices):
        if lo <= v < hi:
            pairs.append((first_full[v], first_tree[v - lo]))
        else:
            pairs.append((first_full[v], root_img))
    pairs.append((pq_full.pointed, pq_tree.pointed))

    est = correspondence_distortion(
        lambda a, a2: float(d_full[a, a2]),
        lambda c, c2: float(d_tree[c, c2]),
        pairs,
    )
    return {
        "distortion": est.value,
        "bound": float(bound),
        "tree_fraction": (sizes[kbig] - 1) / max(1, shape.n_edges),
        "pairs": est.pairs_evaluated,
    }
