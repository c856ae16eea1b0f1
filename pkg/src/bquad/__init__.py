"""Uniform boundary quadrangulations: sampling, encoding, experiments."""

from .forest import (
    Bridge,
    ContourPair,
    ForestShape,
    ShiftedLabelSequence,
    WellLabeledForest,
    bridge_to_pm1,
    contour_pair,
    facial_sequence,
    forest_from_contour_pair,
    oldest_ancestor,
    pm1_to_bridge,
    shifted_labels,
)
from .planarmap import BoundaryMap, PointedBoundaryMap, RootedMap, canonical_code
from .bijection import (
    Encoding,
    bdg_forward,
    bdg_inverse,
    encoding_from_forest,
    successor,
    successor_table,
)

__version__ = "0.1.0"
