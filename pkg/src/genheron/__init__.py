"""Constrained sum-of-distances minimization over convex sets.

Find a point of a closed convex set minimizing the total Euclidean distance
to a family of closed convex target sets, by projected subgradient descent,
and check candidate points against first-order optimality conditions.
"""

from .geometry import (
    Affine,
    Ball,
    Box,
    ConvexSet,
    Halfspace,
    Singleton,
    distance,
    distance_subgradient,
    is_bounded,
    is_member,
    normal_cone_project,
    project,
)
from .objective import Scenario, check_existence, evaluate, subgradient
from .solver import Harmonic, Power, Explicit, SolverConfig, SolveResult, resume, solve
from .certify import Certificate, Verdict, cosine_sums, stationarity_residual, two_set_check
from .oracle import OracleConfig, grid_solve

__version__ = "0.1.0"

__all__ = [
    "Affine",
    "Ball",
    "Box",
    "ConvexSet",
    "Halfspace",
    "Singleton",
    "distance",
    "distance_subgradient",
    "is_bounded",
    "is_member",
    "normal_cone_project",
    "project",
    "Scenario",
    "check_existence",
    "evaluate",
    "subgradient",
    "Harmonic",
    "Power",
    "Explicit",
    "SolverConfig",
    "SolveResult",
    "resume",
    "solve",
    "Certificate",
    "Verdict",
    "cosine_sums",
    "stationarity_residual",
    "two_set_check",
    "OracleConfig",
    "grid_solve",
]
