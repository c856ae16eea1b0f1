"""Encoding of boundary quadrangulations by labeled forests and bridges.

A labeled forest with sigma trees and n edges plus a bridge walk of
length sigma encode a quadrangulation of the disk with n internal faces,
boundary length 2*sigma and a distinguished vertex.  The encoder walks
the forest contour, shifts each label by the bridge value of its tree,
and draws one chord from every corner to the next corner with a smaller
shifted label (or to a fresh distinguished vertex when none exists).
The decoder reads labels as graph distances to the distinguished vertex
and re-draws the forest edges inside the faces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forest import (
    Bridge,
    ForestShape,
    WellLabeledForest,
    contour_pair,
    facial_sequence,
)
from .planarmap import BoundaryMap, PointedBoundaryMap, RootedMap

__all__ = [
    "Encoding",
    "encoding_from_forest",
    "successor",
    "successor_table",
    "bdg_forward",
    "bdg_inverse",
]


@dataclass
class Encoding:
    """Array form of a labeled forest plus bridge.

    corner_vertex[i] is the vertex visited at contour step i (the last
    entry is the phantom floor vertex, id n + sigma); heights and
    labels follow the contour; bridge has length sigma + 1.
    """

    sigma: int
    n: int
    corner_vertex: np.ndarray
    heights: np.ndarray
    labels: np.ndarray
    bridge: np.ndarray

    @property
    def n_corners(self) -> int:
        """Number of genuine corners, 2n + sigma."""
        return 2 * self.n + self.sigma

    def tree_index(self) -> np.ndarray:
        """1-based tree index per contour position (phantom: sigma+1)."""
        run_min = np.minimum.accumulate(self.heights)
        return self.sigma - run_min + 1

    def shifted(self) -> np.ndarray:
        """Labels plus the bridge value of the previous floor vertex."""
        return self.labels + self.bridge[self.tree_index() - 1]

    def label_range(self) -> tuple[int, int]:
        return int(self.labels.min()), int(self.labels.max())

    def normalized(self) -> np.ndarray:
        """Shifted labels over genuine corners, minimum moved to 1.

        The phantom entry is excluded from the minimum: its shifted
        value b(sigma) can undercut every genuine corner, but the
        distinguished vertex must end up adjacent to the corners whose
        normalized label is 1.
        """
        sh = self.shifted()[: self.n_corners]
        return sh - sh.min() + 1


def encoding_from_forest(wlf: WellLabeledForest, b: Bridge) -> Encoding:
    if b.sigma != wlf.sigma:
        raise ValueError("bridge length must match the number of trees")
    cp = contour_pair(wlf)
    fs = facial_sequence(wlf.shape)
    return Encoding(
        sigma=wlf.sigma,
        n=wlf.n_edges,
        corner_vertex=np.asarray(fs, dtype=np.int64),
        heights=np.asarray(cp.heights, dtype=np.int64),
        labels=np.asarray(cp.labels, dtype=np.int64),
        bridge=np.asarray(b.values, dtype=np.int64),
    )


def successor_table(norm: np.ndarray) -> np.ndarray:
    """For each corner, the next corner (cyclically) one label down.

    norm holds the normalized labels over the corners (minimum 1).
    Corners at label 1 get -1: their chord goes to the distinguished
    vertex.
    """
    norm = np.asarray(norm)
    N = len(norm)
    top = int(norm.max())
    first_occ = np.full(top + 1, -1, dtype=np.int64)
    for i in range(N - 1, -1, -1):
        first_occ[norm[i]] = i
    nxt_occ = np.full(top + 1, -1, dtype=np.int64)
    succ = np.full(N, -1, dtype=np.int64)
    for i in range(N - 1, -1, -1):
        v = norm[i] - 1
        if v >= 1:
            k = nxt_occ[v]
            succ[i] = k if k >= 0 else first_occ[v]
        nxt_occ[norm[i]] = i
    return succ


def successor(enc: Encoding, i: int) -> int:
    """Chord target corner of corner i; -1 means the pointed vertex."""
    return int(successor_table(enc.normalized())[i])


def bdg_forward(wlf: WellLabeledForest, b: Bridge) -> PointedBoundaryMap:
    """Encode a labeled forest and bridge as a pointed quadrangulation."""
    return build_map(encoding_from_forest(wlf, b))


def build_map(enc: Encoding, check: bool = True) -> PointedBoundaryMap:
    """Chord construction: one arc per corner, rooted on the boundary.

    Arc i runs from corner i to corner succ(i) (or to the distinguished
    vertex); its half-edges are 2i at corner i and 2i+1 at the far end.
    Rotations follow the planar drawing of the forest: corners around a
    vertex come in contour order, and within one corner incoming arcs
    are nested by how far back their source corner sits, with the
    outgoing arc last.
    """
    N = enc.n_corners
    sigma, n = enc.sigma, enc.n
    norm = enc.normalized()
    succ = successor_table(norm)
    cv = enc.corner_vertex
    v_star = n + sigma

    incoming: list[list[int]] = [[] for _ in range(N)]
    for j in range(N):
        if succ[j] >= 0:
            incoming[succ[j]].append(j)

    corners_at: list[list[int]] = [[] for _ in range(v_star)]
    for i in range(N):
        corners_at[cv[i]].append(i)

    H = 2 * N
    nxt = np.empty(H, dtype=np.int64)

    def close_cycle(cyc: list[int]) -> None:
        for a, c in zip(cyc, cyc[1:] + cyc[:1]):
            nxt[a] = c

    for v in range(v_star):
        cyc: list[int] = []
        for c in corners_at[v]:
            inc = incoming[c]
            lo = [j for j in inc if j < c]
            hi = [j for j in inc if j > c]
            # nearest source first: below c descending, then above c
            # descending (wrapped sources are farther than any below)
            for j in reversed(lo):
                cyc.append(2 * j + 1)
            for j in reversed(hi):
                cyc.append(2 * j + 1)
            cyc.append(2 * c)
        close_cycle(cyc)
    star_cyc = [2 * i + 1 for i in range(N - 1, -1, -1) if succ[i] < 0]
    close_cycle(star_cyc)

    b = enc.bridge
    if b[sigma] > b[sigma - 1] - 1:
        i0 = 0
        for _ in range(-int(b[sigma])):
            i0 = succ[i0]
        root = 2 * i0
    else:
        root = 2 * (N - 1) + 1

    bmap = BoundaryMap(nxt, root, check=check)
    if check and (bmap.sigma != sigma or bmap.n_internal_faces != n):
        raise AssertionError("face census mismatch in chord construction")
    vo = bmap.vertex_of()
    pq = PointedBoundaryMap(bmap, int(vo[star_cyc[0]]))
    # map-internal vertex id at each corner of the forest walk
    pq.corner_vertex = np.asarray(vo[2 * np.arange(N)], dtype=np.int64)
    pq.shifted = enc.shifted()
    return pq


# ---------------------------------------------------------------------------
# Decoding


def bdg_inverse(pq: PointedBoundaryMap) -> tuple[WellLabeledForest, Bridge]:
    """Recover the labeled forest and bridge from a pointed map.

    Labels are the graph distances to the pointed vertex.  One forest
    edge is drawn inside each internal face between its corner of
    maximal distance and the preceding face corner (for faces with two
    distance-maximal corners, between those two); the tree roots are
    the boundary vertices followed by a step down in distance, linked
    through the external face.  Rotations of the drawn edges determine
    the plane structure of the forest.
    """
    from .metrics import bfs_distances

    m = pq.map
    sigma = m.sigma
    n = m.n_internal_faces
    dist = bfs_distances(m, pq.pointed)
    vo = m.vertex_of()

    ext = m.external_face()
    L = 2 * sigma
    walk = [ext[-j % L] for j in range(L)]  # reverse, keeping the root first
    bnd = [int(vo[h]) for h in walk]
    steps = [dist[bnd[(j + 1) % L]] - dist[bnd[j]] for j in range(L)]
    if any(abs(s) != 1 for s in steps):
        raise ValueError("boundary distances must change by one per step")
    # a tree root is a boundary vertex followed by a step down
    sel = [j for j in range(L) if steps[j] == -1]
    if len(sel) != sigma:
        raise ValueError("expected sigma descents along the boundary")
    roots_v = [bnd[j] for j in sel]
    base = dist[roots_v[0]]
    bridge_vals = [int(dist[v] - base) for v in roots_v]
    bridge_vals.append(int(dist[bnd[0]] - base))
    b = Bridge(tuple(bridge_vals))

    # position of each half-edge in the rotation around its origin
    pos = np.empty(m.n_half_edges, dtype=np.int64)
    seen = np.zeros(m.n_half_edges, dtype=bool)
    for h in range(m.n_half_edges):
        if seen[h]:
            continue
        g, r = h, 0
        while not seen[g]:
            seen[g] = True
            pos[g] = r
            r += 1
            g = int(m.nxt[g])

    # chord ends: (vertex, sort key) per endpoint
    v_floor = m.n_vertices  # the phantom vertex closing the floor
    ends_at: dict[int, list[tuple[tuple[int, int], int, int]]] = {}

    def add_end(vertex: int, anchor: int, rank: int, chord: int, side: int):
        ends_at.setdefault(vertex, []).append(((int(pos[anchor]), rank), chord, side))

    chords: list[list[int]] = []  # endpoint vertices per chord
    kind: list[str] = []

    ext_set = {int(h) for h in ext}
    for f in m.faces():
        if int(f[0]) in ext_set:
            continue
        hs = [int(h) for h in f]
        vs = [int(vo[h]) for h in hs]
        ls = [int(dist[v]) for v in vs]
        jmax = max(range(4), key=lambda j: ls[j])
        if ls[(jmax + 2) % 4] == ls[jmax]:
            ja, jb = jmax, (jmax + 2) % 4
        else:
            ja, jb = jmax, (jmax - 1) % 4
        cid = len(chords)
        chords.append([vs[ja], vs[jb]])
        kind.append("tree")
        add_end(vs[ja], hs[(ja - 1) % 4] ^ 1, 0, cid, 0)
        add_end(vs[jb], hs[(jb - 1) % 4] ^ 1, 0, cid, 1)

    # floor chords along the external face, ending at the phantom;
    # anchors index the same corner occurrence as the reversed walk
    floor_anchor = [ext[(-j - 1) % L] ^ 1 for j in range(L)]
    floor_chord_ids = []
    for k in range(sigma):
        cid = len(chords)
        floor_chord_ids.append(cid)
        if k + 1 < sigma:
            chords.append([roots_v[k], roots_v[k + 1]])
            add_end(roots_v[k], floor_anchor[sel[k]], 1, cid, 0)
            add_end(roots_v[k + 1], floor_anchor[sel[k + 1]], 0, cid, 1)
        else:
            chords.append([roots_v[k], v_floor])
            add_end(roots_v[k], floor_anchor[sel[k]], 1, cid, 0)
            add_end(v_floor, 0, 0, cid, 1)
        kind.append("floor")

    for v in ends_at:
        ends_at[v].sort()

    # peel the trees off, children in rotation order after the parent
    trees: list[tuple[int, ...]] = []
    labels: list[int] = []
    for k in range(sigma):
        r = roots_v[k]
        out_chord = floor_chord_ids[k]
        counts = _extract_tree(r, out_chord, ends_at, chords, kind, dist, labels)
        trees.append(tuple(counts))
    shape = ForestShape(tuple(trees))
    if shape.n_edges != n:
        raise AssertionError("decoded forest has the wrong number of edges")
    wlf = WellLabeledForest(shape, tuple(labels))
    return wlf, b


def _extract_tree(root, out_chord, ends_at, chords, kind, dist, labels):
    """Child counts in preorder for the tree hanging at one floor root."""
    counts: list[int] = []
    base = int(dist[root])

    def chord_cycle(v, ref_chord):
        ends = ends_at.get(v, [])
        ids = [c for (_, c, _) in ends]
        i0 = ids.index(ref_chord)
        rot = ids[i0 + 1 :] + ids[:i0]
        return [c for c in rot if kind[c] == "tree"]

    labels.append(0)
    children = chord_cycle(root, out_chord)
    counts.append(len(children))
    work = [(c, root) for c in reversed(children)]
    while work:
        chord, parent = work.pop()
        a, bb = chords[chord]
        child = bb if a == parent else a
        kids = chord_cycle(child, chord)
        counts.append(len(kids))
        labels.append(int(dist[child]) - base)
        work.extend((c, child) for c in reversed(kids))
    return counts
