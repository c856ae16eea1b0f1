"""Rooted planar maps stored as half-edge permutations.

A map on H half-edges (H even) is given by two permutations of
0..H-1: twin, pairing the two halves of each edge, and nxt, listing
for each half-edge the next one counterclockwise around its origin.
Internally half-edges are numbered so that twin(h) = h XOR 1; the
serialization still writes the twin array explicitly.

Vertices are the orbits of nxt, faces the orbits of h -> nxt(twin(h));
the latter walks a face keeping it on the left of every half-edge it
traverses.  The root half-edge of a boundary quadrangulation lies on
the external face, which is therefore the face to the left of the root.
"""

from __future__ import annotations

import json
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

__all__ = ["RootedMap", "BoundaryMap", "PointedBoundaryMap", "canonical_code"]

MAP_FORMAT = "bmap-v1"


class RootedMap:
    """A rooted combinatorial map with twin(h) = h ^ 1."""

    def __init__(self, nxt: Sequence[int], root: int, check: bool = True):
        self.nxt = np.asarray(nxt, dtype=np.int64)
        self.root = int(root)
        self._vertex_of: np.ndarray | None = None
        self._faces: list[np.ndarray] | None = None
        if check:
            self._check_permutation()

    # -- basic structure -------------------------------------------------

    @property
    def n_half_edges(self) -> int:
        return len(self.nxt)

    @property
    def n_edges(self) -> int:
        return len(self.nxt) // 2

    def twin(self, h: int) -> int:
        return h ^ 1

    def _check_permutation(self) -> None:
        H = len(self.nxt)
        if H == 0 or H % 2:
            raise ValueError("need a positive even number of half-edges")
        if not 0 <= self.root < H:
            raise ValueError("root out of range")
        seen = np.zeros(H, dtype=bool)
        if (self.nxt < 0).any() or (self.nxt >= H).any():
            raise ValueError("nxt out of range")
        seen[self.nxt] = True
        if not seen.all():
            raise ValueError("nxt is not a permutation")

    def vertex_of(self) -> np.ndarray:
        """Vertex id per half-edge; ids ordered by smallest half-edge."""
        if self._vertex_of is None:
            H = len(self.nxt)
            out = np.full(H, -1, dtype=np.int64)
            nxt = self.nxt
            vid = 0
            for h in range(H):
                if out[h] >= 0:
                    continue
                g = h
                while out[g] < 0:
                    out[g] = vid
                    g = nxt[g]
                vid += 1
            self._vertex_of = out
        return self._vertex_of

    @property
    def n_vertices(self) -> int:
        return int(self.vertex_of().max()) + 1

    def face_orbit(self, h: int) -> list[int]:
        """Half-edges of the face left of h, starting at h."""
        out = [h]
        g = self.nxt[h ^ 1]
        while g != h:
            out.append(int(g))
            g = self.nxt[g ^ 1]
        return out

    def faces(self) -> list[np.ndarray]:
        if self._faces is None:
            H = len(self.nxt)
            seen = np.zeros(H, dtype=bool)
            faces = []
            for h in range(H):
                if seen[h]:
                    continue
                orb = self.face_orbit(h)
                for g in orb:
                    seen[g] = True
                faces.append(np.asarray(orb, dtype=np.int64))
            self._faces = faces
        return self._faces

    @property
    def n_faces(self) -> int:
        return len(self.faces())

    def genus_is_zero(self) -> bool:
        return self.n_vertices - self.n_edges + self.n_faces == 2

    def is_connected(self) -> bool:
        vo = self.vertex_of()
        nv = self.n_vertices
        rows = vo[::2]
        cols = vo[1::2]
        data = np.ones(len(rows), dtype=np.int8)
        adj = csr_matrix((data, (rows, cols)), shape=(nv, nv))
        ncomp, _ = connected_components(adj, directed=False)
        return ncomp == 1

    def adjacency(self) -> csr_matrix:
        """Symmetric vertex adjacency matrix (multi-edges collapse)."""
        vo = self.vertex_of()
        nv = self.n_vertices
        rows = np.concatenate([vo[::2], vo[1::2]])
        cols = np.concatenate([vo[1::2], vo[::2]])
        data = np.ones(len(rows), dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(nv, nv))

    def degrees(self) -> np.ndarray:
        return np.bincount(self.vertex_of(), minlength=self.n_vertices)


def canonical_code(m: RootedMap, pointed: int | None = None) -> bytes:
    """Traversal code identifying a rooted map up to isomorphism.

    Half-edges are renumbered in the order a deterministic exploration
    from the root discovers them; the code lists the renumbered nxt and
    twin images, so two maps share a code exactly when a root-preserving
    isomorphism links them.  If a pointed vertex is given, its discovery
    rank is appended.
    """
    H = m.n_half_edges
    label = {m.root: 0}
    order = [m.root]
    i = 0
    nxt = m.nxt
    while i < len(order):
        h = order[i]
        g = h
        while True:
            t = g ^ 1
            if t not in label:
                label[t] = len(order)
                order.append(t)
            g = int(nxt[g])
            if g == h:
                break
        i += 1
    if len(order) != H:
        raise ValueError("map is not connected")
    code = bytearray()
    for h in order:
        code += int(label[int(nxt[h])]).to_bytes(4, "big")
        code += int(label[h ^ 1]).to_bytes(4, "big")
    if pointed is not None:
        vo = m.vertex_of()
        # rank of the pointed vertex by first discovered half-edge
        first = {}
        for h in order:
            v = int(vo[h])
            if v not in first:
                first[v] = len(first)
        code += b"@" + int(first[int(pointed)]).to_bytes(4, "big")
    return bytes(code)


class BoundaryMap(RootedMap):
    """A quadrangulation of the disk.

    All faces have degree 4 except the external one, of even degree
    2*sigma, which lies to the left of the root half-edge.  The
    boundary is not required to be simple.
    """

    def __init__(self, nxt: Sequence[int], root: int, check: bool = True):
        super().__init__(nxt, root, check=check)
        ext = self.face_orbit(self.root)
        if check:
            if len(ext) % 2:
                raise ValueError("external face degree must be even")
            if not self.is_connected():
                raise ValueError("map is not connected")
            if not self.genus_is_zero():
                raise ValueError("map is not planar")
            ext_set = set(ext)
            for f in self.faces():
                if int(f[0]) in ext_set:
                    continue
                if len(f) != 4:
                    raise ValueError("internal faces must be quadrangles")
        self._external = ext

    @property
    def sigma(self) -> int:
        return len(self._external) // 2

    @property
    def n_internal_faces(self) -> int:
        return self.n_faces - 1

    def external_face(self) -> list[int]:
        """Half-edges of the external face, starting at the root."""
        return list(self._external)

    def boundary_vertices(self) -> np.ndarray:
        vo = self.vertex_of()
        return np.unique(vo[np.asarray(self._external)])

    # -- serialization ---------------------------------------------------

    def to_json(self, pointed: int | None = None) -> str:
        doc = {
            "format": MAP_FORMAT,
            "sigma": self.sigma,
            "n": self.n_internal_faces,
            "twin": [h ^ 1 for h in range(self.n_half_edges)],
            "next": [int(x) for x in self.nxt],
            "root": self.root,
            "pointed": pointed,
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> tuple["BoundaryMap", int | None]:
        doc = json.loads(text)
        if doc.get("format") != MAP_FORMAT:
            raise ValueError("unsupported map format")
        nxt, root, relabel = _normalize_half_edges(
            doc["twin"], doc["next"], doc["root"]
        )
        m = cls(nxt, root)
        if int(doc["sigma"]) != m.sigma or int(doc["n"]) != m.n_internal_faces:
            raise ValueError("declared sigma/n do not match the map")
        pointed = doc.get("pointed")
        if pointed is not None:
            pointed = int(pointed)
            if not 0 <= pointed < m.n_vertices:
                raise ValueError("pointed vertex out of range")
        return m, pointed


def _normalize_half_edges(
    twin: Sequence[int], nxt: Sequence[int], root: int
) -> tuple[list[int], int, list[int]]:
    """Renumber half-edges so that twin(h) = h ^ 1."""
    H = len(twin)
    if len(nxt) != H:
        raise ValueError("twin and next must have equal length")
    twin = [int(x) for x in twin]
    for h in range(H):
        if not 0 <= twin[h] < H or twin[twin[h]] != h or twin[h] == h:
            raise ValueError("twin is not a fixed-point-free involution")
    relabel = [-1] * H
    k = 0
    for h in range(H):
        if relabel[h] < 0:
            relabel[h] = k
            relabel[twin[h]] = k + 1
            k += 2
    new_nxt = [0] * H
    for h in range(H):
        new_nxt[relabel[h]] = relabel[int(nxt[h])]
    return new_nxt, relabel[int(root)], relabel


class PointedBoundaryMap:
    """A boundary quadrangulation with a distinguished vertex."""

    def __init__(self, bmap: BoundaryMap, pointed: int):
        if not 0 <= pointed < bmap.n_vertices:
            raise ValueError("pointed vertex out of range")
        self.map = bmap
        self.pointed = int(pointed)
        # Optional extras attached by the encoder: the vertex visited at
        # each corner of the underlying forest walk.
        self.corner_vertex: np.ndarray | None = None
        self.shifted: np.ndarray | None = None

    def to_json(self) -> str:
        return self.map.to_json(pointed=self.pointed)

    @classmethod
    def from_json(cls, text: str) -> "PointedBoundaryMap":
        m, pointed = BoundaryMap.from_json(text)
        if pointed is None:
            raise ValueError("pointed vertex missing")
        return cls(m, pointed)

    def canonical_code(self) -> bytes:
        return canonical_code(self.map, pointed=self.pointed)
