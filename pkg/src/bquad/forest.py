"""Plane forests with integer labels, and boundary bridge walks.

A forest here is an ordered sequence of rooted plane trees.  The tree
roots sit on a "floor" and are numbered 1..sigma from left to right;
a phantom floor vertex sigma+1 closes the walk on the right but is
never stored.  Vertices are identified by dense integers in order of
first visit along the facial (contour) sequence, so the roots and the
vertices of tree k come before those of tree k+1.

A bridge is a lattice walk b(0..sigma) with b(0) = 0, increments
>= -1 and b(sigma) <= 0.  It carries the label shifts between
consecutive trees when the forest is glued into a planar map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

__all__ = [
    "ForestShape",
    "WellLabeledForest",
    "Bridge",
    "ContourPair",
    "ShiftedLabelSequence",
    "facial_sequence",
    "contour_pair",
    "forest_from_contour_pair",
    "shifted_labels",
    "oldest_ancestor",
    "bridge_to_pm1",
    "pm1_to_bridge",
]


def _check_lukasiewicz(counts: Sequence[int]) -> None:
    """Validate a preorder child-count sequence of a single plane tree."""
    open_slots = 1
    for c in counts:
        if c < 0:
            raise ValueError("negative child count")
        if open_slots <= 0:
            raise ValueError("child counts continue past the end of the tree")
        open_slots += c - 1
    if open_slots != 0:
        raise ValueError("child counts do not close the tree")


@dataclass(frozen=True)
class ForestShape:
    """An ordered forest of rooted plane trees.

    child_counts[k] lists the number of children of each vertex of tree
    k in preorder (depth first, children left to right).  A bare root is
    the sequence (0,).
    """

    child_counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.child_counts:
            raise ValueError("a forest needs at least one tree")
        object.__setattr__(
            self, "child_counts", tuple(tuple(t) for t in self.child_counts)
        )
        for t in self.child_counts:
            if not t:
                raise ValueError("empty tree")
            _check_lukasiewicz(t)

    @property
    def sigma(self) -> int:
        return len(self.child_counts)

    @property
    def n_edges(self) -> int:
        return self.n_vertices - self.sigma

    @property
    def n_vertices(self) -> int:
        return sum(len(t) for t in self.child_counts)

    def tree_offsets(self) -> list[int]:
        """Vertex id of the root of each tree."""
        out, acc = [], 0
        for t in self.child_counts:
            out.append(acc)
            acc += len(t)
        return out

    def parents(self) -> list[int]:
        """Parent vertex id per vertex; roots get -1.

        Vertex ids follow preorder, tree by tree, matching the order of
        first visits along the facial sequence.
        """
        par = [-1] * self.n_vertices
        v = 0
        for t in self.child_counts:
            stack: list[int] = []
            remaining: list[int] = []
            for c in t:
                if stack:
                    par[v] = stack[-1]
                    remaining[-1] -= 1
                stack.append(v)
                remaining.append(c)
                v += 1
                while remaining and remaining[-1] == 0:
                    stack.pop()
                    remaining.pop()
        return par

    def tree_of(self) -> list[int]:
        """1-based tree index per vertex id."""
        out = []
        for k, t in enumerate(self.child_counts, start=1):
            out.extend([k] * len(t))
        return out


@dataclass(frozen=True)
class WellLabeledForest:
    """A forest shape plus one integer label per vertex.

    Labels are listed in vertex-id order (preorder, tree by tree).
    Every root has label 0 and labels change by at most 1 along edges.
    """

    shape: ForestShape
    labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != self.shape.n_vertices:
            raise ValueError("one label per vertex required")
        par = self.shape.parents()
        for v, p in enumerate(par):
            if p < 0:
                if self.labels[v] != 0:
                    raise ValueError("root labels must be 0")
            elif abs(self.labels[v] - self.labels[p]) > 1:
                raise ValueError("labels must change by at most 1 along edges")

    @property
    def sigma(self) -> int:
        return self.shape.sigma

    @property
    def n_edges(self) -> int:
        return self.shape.n_edges


@dataclass(frozen=True)
class Bridge:
    """Walk b(0..sigma) with b(0)=0, steps >= -1 and b(sigma) <= 0."""

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) < 2:
            raise ValueError("a bridge has at least two values")
        if self.values[0] != 0:
            raise ValueError("bridge must start at 0")
        if self.values[-1] > 0:
            raise ValueError("bridge must end at a nonpositive value")
        for a, b in zip(self.values, self.values[1:]):
            if b - a < -1:
                raise ValueError("bridge steps are bounded below by -1")

    @property
    def sigma(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k: int) -> int:
        return self.values[k]


# Sentinel marker: the phantom floor vertex closing the facial sequence.
# Its id is always n_vertices (one past the stored vertices).


def facial_sequence(shape: ForestShape) -> list[int]:
    """Vertex ids in contour order around the forest.

    Each tree is walked depth first keeping the outer face on the left:
    a vertex with c children is visited c+1 times.  After finishing tree
    k the walk moves to the root of tree k+1; it ends on the phantom
    floor vertex, whose id is shape.n_vertices.  The result has length
    2*n_edges + sigma + 1.
    """
    seq: list[int] = []
    v = 0
    for t in shape.child_counts:
        stack: list[int] = []
        remaining: list[int] = []
        seq.append(v)
        stack.append(v)
        remaining.append(t[0])
        v += 1
        pos = 1
        while stack:
            if remaining[-1] > 0:
                remaining[-1] -= 1
                seq.append(v)
                stack.append(v)
                remaining.append(t[pos])
                pos += 1
                v += 1
            else:
                stack.pop()
                remaining.pop()
                if stack:
                    seq.append(stack[-1])
    seq.append(shape.n_vertices)
    return seq


@dataclass(frozen=True)
class ContourPair:
    """Height and label read along the facial sequence.

    heights[i] counts the tree distance to the floor plus the number of
    floor vertices still ahead, so it decreases from sigma to 0 across
    the walk and hits a new minimum exactly when the walk hops to the
    next tree.  labels[i] is the label of the visited vertex (0 at the
    final phantom entry).
    """

    heights: tuple[int, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "heights", tuple(self.heights))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.heights) != len(self.labels):
            raise ValueError("height and label sequences differ in length")
        h = self.heights
        if not h or h[-1] != 0:
            raise ValueError("contour must end at height 0")
        for a, b in zip(h, h[1:]):
            if abs(b - a) != 1:
                raise ValueError("contour steps are +-1")
        if min(h[:-1]) <= 0:
            raise ValueError("contour stays positive before the last step")

    @property
    def sigma(self) -> int:
        return self.heights[0]

    @property
    def n_edges(self) -> int:
        return (len(self.heights) - 1 - self.sigma) // 2


def contour_pair(wlf: WellLabeledForest) -> ContourPair:
    """Contour walk (height, label) of a labeled forest."""
    shape = wlf.shape
    fs = facial_sequence(shape)
    depth = [0] * shape.n_vertices
    par = shape.parents()
    for v, p in enumerate(par):
        if p >= 0:
            depth[v] = depth[p] + 1
    tree = shape.tree_of()
    sigma = shape.sigma
    heights, labels = [], []
    for v in fs[:-1]:
        heights.append(depth[v] + sigma - (tree[v] - 1))
        labels.append(wlf.labels[v])
    heights.append(0)
    labels.append(0)
    return ContourPair(tuple(heights), tuple(labels))


def forest_from_contour_pair(cp: ContourPair) -> WellLabeledForest:
    """Rebuild the labeled forest encoded by a contour walk."""
    h, lab = cp.heights, cp.labels
    child: list[int] = []  # child count per vertex, preorder
    labels: list[int] = []
    roots: list[int] = []
    stack: list[int] = []

    def new_vertex(label: int) -> int:
        child.append(0)
        labels.append(label)
        return len(child) - 1

    if lab[0] != 0:
        raise ValueError("root label must be 0")
    roots.append(new_vertex(lab[0]))
    stack.append(roots[0])
    for i in range(len(h) - 1):
        if h[i + 1] > h[i]:
            u = new_vertex(lab[i + 1])
            child[stack[-1]] += 1
            stack.append(u)
        else:
            stack.pop()
            if not stack and i + 1 < len(h) - 1:
                if lab[i + 1] != 0:
                    raise ValueError("root label must be 0")
                u = new_vertex(lab[i + 1])
                roots.append(u)
                stack.append(u)
    trees = []
    for k, r in enumerate(roots):
        end = roots[k + 1] if k + 1 < len(roots) else len(child)
        trees.append(tuple(child[r:end]))
    return WellLabeledForest(ForestShape(tuple(trees)), tuple(labels))


@dataclass(frozen=True)
class ShiftedLabelSequence:
    """Labels along the facial sequence after adding the bridge shifts.

    Entry i is label(f(i)) + b(tree(f(i)) - 1); the final entry belongs
    to the phantom vertex and equals b(sigma).  min_value is taken over
    the genuine entries 0..len-2, excluding the phantom.  Shifting by
    1 - min_value makes the smallest genuine value 1, which is the
    convention used when wiring chords to the distinguished vertex.
    """

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) < 2:
            raise ValueError("too short")

    @property
    def min_value(self) -> int:
        return min(self.values[:-1])

    def normalized(self) -> tuple[int, ...]:
        """Values over corners 0..len-2 shifted so the minimum is 1."""
        m = self.min_value
        return tuple(v - m + 1 for v in self.values[:-1])


def shifted_labels(wlf: WellLabeledForest, b: Bridge) -> ShiftedLabelSequence:
    """Bridge-shifted labels along the facial sequence."""
    if b.sigma != wlf.sigma:
        raise ValueError("bridge length must match the number of trees")
    shape = wlf.shape
    fs = facial_sequence(shape)
    tree = shape.tree_of()
    vals = [wlf.labels[v] + b[tree[v] - 1] for v in fs[:-1]]
    vals.append(b[b.sigma])
    return ShiftedLabelSequence(tuple(vals))


def oldest_ancestor(shape: ForestShape, v: int) -> int:
    """1-based index of the tree containing vertex v."""
    if not 0 <= v < shape.n_vertices:
        raise ValueError("vertex out of range")
    return shape.tree_of()[v]


def bridge_to_pm1(b: Bridge) -> list[int]:
    """Encode a bridge as a +-1 sequence of length 2*sigma.

    The walk is cut at its -1 steps: block 0 holds b(0)-b(sigma) many
    +1s, then for each k the k-th -1 is followed by b(k)-b(k-1)+1 many
    +1s.  The result has exactly sigma entries equal to -1 and sigma
    equal to +1, and every such sequence arises from exactly one bridge.
    """
    sigma = b.sigma
    out = [1] * (b[0] - b[sigma])
    for k in range(1, sigma + 1):
        out.append(-1)
        out.extend([1] * (b[k] - b[k - 1] + 1))
    assert len(out) == 2 * sigma
    return out


def pm1_to_bridge(seq: Sequence[int]) -> Bridge:
    """Decode a +-1 sequence with equally many signs into a bridge."""
    if len(seq) % 2:
        raise ValueError("even length required")
    sigma = len(seq) // 2
    if sum(1 for x in seq if x == -1) != sigma or any(x not in (1, -1) for x in seq):
        raise ValueError("need exactly sigma entries of each sign")
    vals = [0]
    run = 0
    pos = 0
    # skip block 0; each later block of +1s after a -1 gives one step
    while pos < len(seq) and seq[pos] == 1:
        pos += 1
    for _ in range(sigma):
        pos += 1  # the -1
        run = 0
        while pos < len(seq) and seq[pos] == 1:
            run += 1
            pos += 1
        vals.append(vals[-1] + run - 1)
    return Bridge(tuple(vals))
