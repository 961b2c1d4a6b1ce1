"""Minimum-distance bounds for codes with planar Tanner graphs."""

from __future__ import annotations

from .bounds import BoundReport, certify_bound, p_of_rate, theta
from .checkgraph import CheckGraph, build_check_graph, build_check_inverse
from .dual import DualGraph, build_dual, girth, tree_params
from .embedding import Embedding, RotationSystem, test_planarity
from .errors import (
    ContractViolation,
    GirthError,
    InvalidArgument,
    InvalidSpec,
    InvalidStep,
    NonPlanarError,
    PlanarTannerError,
    TrivialCodeError,
    UnsupportedRate,
    UnsupportedSize,
)
from .oracle import min_distance_oracle
from .tanner import BitVector, TannerGraph, induced_bits, is_codeword_supporting

__version__ = "0.1.0"

__all__ = [
    "BitVector",
    "BoundReport",
    "CheckGraph",
    "ContractViolation",
    "DualGraph",
    "Embedding",
    "GirthError",
    "InvalidArgument",
    "InvalidSpec",
    "InvalidStep",
    "NonPlanarError",
    "PlanarTannerError",
    "RotationSystem",
    "TannerGraph",
    "TrivialCodeError",
    "UnsupportedRate",
    "UnsupportedSize",
    "build_check_graph",
    "build_check_inverse",
    "build_dual",
    "certify_bound",
    "girth",
    "induced_bits",
    "is_codeword_supporting",
    "min_distance_oracle",
    "p_of_rate",
    "test_planarity",
    "theta",
    "tree_params",
]
