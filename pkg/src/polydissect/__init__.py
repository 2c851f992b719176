"""Exact dissections and triangulations of point configurations."""

from .complexes import SimplexFamily, Status, family_report, mismatched_regions, validate
from .extremal import Budget, Mode, Sense, build_model, enumerate_optima, extremal, solve
from .families import Coords, FamilySpec, Kind, build
from .pointconfig import PointConfiguration, parse_polytope, read_polytope
from .simplexrel import PairRelation, classify_pair

__all__ = [
    "Budget", "Coords", "FamilySpec", "Kind", "Mode", "PairRelation", "PointConfiguration", "Sense",
    "SimplexFamily", "Status", "build", "build_model", "classify_pair", "enumerate_optima", "extremal",
    "family_report", "mismatched_regions", "parse_polytope", "read_polytope", "solve", "validate",
]
__version__ = "0.1.0"
