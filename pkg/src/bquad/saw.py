"""Walk-decorated quadrangulations of the sphere.

Closing the boundary of a disk quadrangulation with a fan of new edges
produces a sphere map carrying a distinguished self-avoiding path: two
degree-2 faces (half-step tiles) at the ends, a chain of degree-4 step
tiles in between, and the original internal faces untouched.  Deleting
the distinguished edges recovers the disk map.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .planarmap import BoundaryMap, RootedMap, canonical_code

__all__ = ["SawConfiguration", "quadrangulation_to_saw", "saw_to_quadrangulation"]

SAW_FORMAT = "smap-v1"


@dataclass
class SawConfiguration:
    """A rooted sphere map with a marked matching of half-edges.

    Distinguished half-edges come in twin pairs and trace the walk; the
    root is the undistinguished side of one of the two half-step tiles.
    """

    map: RootedMap
    distinguished: frozenset[int]

    def __post_init__(self):
        self.distinguished = frozenset(int(h) for h in self.distinguished)
        for h in self.distinguished:
            if (h ^ 1) not in self.distinguished:
                raise ValueError("distinguished half-edges must pair up")
        if self.map.root in self.distinguished:
            raise ValueError("the root is never distinguished")

    @property
    def sigma(self) -> int:
        return len(self.distinguished) // 2

    @property
    def n(self) -> int:
        # faces: n plain + (sigma - 1) step + 2 half-step
        return self.map.n_faces - self.sigma - 1

    def tile_census(self) -> tuple[int, int, int]:
        """(half-step, step, plain quadrangle) face counts; validates."""
        half = step = plain = 0
        for f in self.map.faces():
            marked = [i for i, h in enumerate(f) if int(h) in self.distinguished]
            if len(f) == 2 and len(marked) == 1:
                half += 1
            elif len(f) == 4 and len(marked) == 2:
                if (marked[1] - marked[0]) != 2:
                    raise ValueError("step tile edges must be opposite")
                step += 1
            elif len(f) == 4 and not marked:
                plain += 1
            else:
                raise ValueError("face is not a recognized tile")
        return half, step, plain

    def validate(self) -> None:
        if not self.map.is_connected():
            raise ValueError("map is not connected")
        if not self.map.genus_is_zero():
            raise ValueError("map is not a sphere map")
        half, step, plain = self.tile_census()
        if half != 2:
            raise ValueError("need exactly two half-step tiles")
        root_face = self.map.face_orbit(self.map.root)
        if len(root_face) != 2:
            raise ValueError("root must sit on a half-step tile")
        # the distinguished edges must form one open chain between the
        # two half-step tiles, never a closed loop of step tiles
        face_of = {}
        for fid, f in enumerate(self.map.faces()):
            for h in f:
                face_of[int(h)] = fid
        faces = self.map.faces()
        start = next(
            int(h) for h in root_face if int(h) in self.distinguished
        )
        visited_steps = 0
        h = start
        for _ in range(step + 2):
            g = h ^ 1  # cross the walk edge
            f = faces[face_of[g]]
            if len(f) == 2:
                break  # reached the far half-step tile
            visited_steps += 1
            i = list(map(int, f)).index(g)
            h = int(f[(i + 2) % 4])  # leave through the opposite side
        else:
            raise ValueError("walk does not terminate")
        if visited_steps != step:
            raise ValueError("step tiles form a detached cycle")

    def to_json(self) -> str:
        doc = {
            "format": SAW_FORMAT,
            "sigma": self.sigma,
            "n": self.n,
            "twin": [h ^ 1 for h in range(self.map.n_half_edges)],
            "next": [int(x) for x in self.map.nxt],
            "root": self.map.root,
            "distinguished": sorted(self.distinguished),
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "SawConfiguration":
        from .planarmap import _normalize_half_edges

        doc = json.loads(text)
        if doc.get("format") != SAW_FORMAT:
            raise ValueError("unsupported format")
        nxt, root, relabel = _normalize_half_edges(
            doc["twin"], doc["next"], doc["root"]
        )
        cfg = cls(
            RootedMap(nxt, root),
            frozenset(relabel[int(h)] for h in doc["distinguished"]),
        )
        cfg.validate()
        return cfg

    def canonical_code(self) -> bytes:
        base = canonical_code(self.map)
        # append distinguished flags in traversal order for stability
        return base + bytes(
            1 if h in self.distinguished else 0
            for h in range(self.map.n_half_edges)
        )


def quadrangulation_to_saw(m: BoundaryMap) -> SawConfiguration:
    """Close the boundary with a fan of walk edges.

    Boundary corners are numbered 0..2*sigma-1 along the external face
    from the root; new edge i joins corner -i to corner i + 1, nesting
    the fan so that corner 0 and corner sigma end up on degree-2 faces.
    """
    sigma = m.sigma
    if sigma < 1:
        raise ValueError("empty boundary")
    L = 2 * sigma
    ext = m.external_face()
    H = m.n_half_edges
    nxt = list(int(x) for x in m.nxt)
    # corner j of the external face sits between anchor[j] and its
    # rotation successor at the origin of ext[j]
    anchor = [ext[(j - 1) % L] ^ 1 for j in range(L)]
    nxt = nxt + [0] * L
    for i in range(sigma):
        a = H + 2 * i
        bpos = (-i) % L
        cpos = i + 1
        for dart, p in ((a, bpos), (a ^ 1, cpos)):
            g = anchor[p]
            nxt[dart] = nxt[g]
            nxt[g] = dart
            anchor[p] = dart  # no second insertion lands on one corner
    cfg = SawConfiguration(
        RootedMap(nxt, m.root), frozenset(range(H, H + L))
    )
    return cfg


def saw_to_quadrangulation(cfg: SawConfiguration) -> BoundaryMap:
    """Delete the walk edges and re-open the boundary."""
    cfg.validate()
    H = cfg.map.n_half_edges
    keep = [h for h in range(H) if h not in cfg.distinguished]
    relabel = {h: i for i, h in enumerate(keep)}
    nxt = []
    for h in keep:
        g = int(cfg.map.nxt[h])
        while g in cfg.distinguished:
            g = int(cfg.map.nxt[g])
        nxt.append(relabel[g])
    # twin pairing survives: distinguished darts pair among themselves
    # and keep preserves the (2k, 2k+1) layout of the rest
    return BoundaryMap(nxt, relabel[cfg.map.root])
