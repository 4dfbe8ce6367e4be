"""Simultaneous-message sketches over structured inputs."""

from .arboricity import ArboricityAdjacency
from .hashing import HashedAdjacency
from .base import (
    ACCEPT,
    REJECT,
    SmpProtocol,
    SymmetrizedProtocol,
    TrialResult,
    Verdict,
    beyond_verdict,
    distance_verdict,
    symmetrize,
    verdict_max,
)
from .lattice import (
    UniversalLatticeDistance,
    WeakLatticeDistance,
    universal_sketch_params,
    weak_sketch_params,
)
from .planar import PlanarTwoDistance
from .registry import PROTOCOLS, protocol_from_document, protocol_to_document
from .toy import EqualitySketch
from .tree import TreeKDistance

__all__ = [
    "ACCEPT",
    "REJECT",
    "ArboricityAdjacency",
    "EqualitySketch",
    "HashedAdjacency",
    "PROTOCOLS",
    "PlanarTwoDistance",
    "SmpProtocol",
    "SymmetrizedProtocol",
    "TreeKDistance",
    "TrialResult",
    "UniversalLatticeDistance",
    "Verdict",
    "WeakLatticeDistance",
    "beyond_verdict",
    "distance_verdict",
    "protocol_from_document",
    "protocol_to_document",
    "symmetrize",
    "universal_sketch_params",
    "verdict_max",
    "weak_sketch_params",
]
