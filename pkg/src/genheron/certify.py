"""Optimality certificates for candidate points.

When no target contains the candidate ``xbar``, write ``a_i`` for the unit
vector from the nearest point of target ``i`` to ``xbar``.  ``xbar`` is
optimal exactly when ``-sum_i a_i`` lies in the normal cone of the constraint
at ``xbar``.  The problem is convex, so a certificate here is global.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    MEMBER_TOL,
    Affine,
    Singleton,
    _unit_subgradient,
    normal_cone_project,
)
from .objective import Scenario

CERT_TOL = 1e-6


class InfeasiblePointError(ValueError):
    """The candidate point is not in the constraint set."""


class InapplicableError(ValueError):
    """The candidate point violates a hypothesis of the characterization."""


class Verdict(str, enum.Enum):
    CERTIFIED_OPTIMAL = "certified_optimal"
    NOT_STATIONARY = "not_stationary"
    INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class Certificate:
    point: np.ndarray
    unit_vectors: tuple[np.ndarray, ...]
    residual: float | None
    verdict: Verdict
    tol: float
    reason: str = ""
    cosine_sums: tuple[tuple[np.ndarray, float], ...] | None = None

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED_OPTIMAL

    def to_record(self) -> dict:
        """Plain dict suitable for JSON output."""
        rec = {
            "point": [float(v) for v in self.point],
            "unit_vectors": [[float(v) for v in a] for a in self.unit_vectors],
            "residual": self.residual,
            "verdict": self.verdict.value,
            "tol": self.tol,
        }
        if self.reason:
            rec["reason"] = self.reason
        if self.cosine_sums is not None:
            rec["cosine_sums"] = [
                {"direction": [float(v) for v in u], "sum": s} for u, s in self.cosine_sums
            ]
        return rec


def _check_feasible(sc: Scenario, xbar, member_tol: float) -> list[float]:
    xs = sc.constraint._check(xbar, "xbar")
    d = sc.constraint._residual(xs)[1]
    if d > member_tol:
        raise InfeasiblePointError(
            f"xbar is at distance {d:.3g} from the constraint set (tol {member_tol:g})"
        )
    return xs


def _unit_vectors(sc: Scenario, xs: list[float], member_tol: float):
    """Return ``(a_i list, None)`` or ``(None, reason)`` if xbar is inside a target."""
    out = []
    for i, t in enumerate(sc.targets):
        a, d = _unit_subgradient(t, xs)
        if a is None or d <= member_tol:
            return None, f"xbar lies in target {i} (distance {d:.3g})"
        out.append(np.array(a))
    return out, None


def _cos(v: np.ndarray, u: np.ndarray) -> float:
    return float(np.dot(v, u) / (np.linalg.norm(v) * np.linalg.norm(u)))


def _directions(dirs, dim: int) -> list[np.ndarray]:
    out = []
    for j, u in enumerate(dirs):
        u = np.asarray(u, dtype=float)
        if u.shape != (dim,):
            raise ValueError(f"direction {j} has shape {u.shape}, expected ({dim},)")
        if not np.any(u):
            raise ValueError(f"direction {j} is the zero vector")
        out.append(u)
    return out


def stationarity_residual(
    sc: Scenario,
    xbar,
    tol: float = CERT_TOL,
    directions=None,
    member_tol: float = MEMBER_TOL,
) -> Certificate:
    """Distance from ``-sum_i a_i(xbar)`` to the normal cone at ``xbar``.

    The verdict is ``certified_optimal`` when the residual is at most ``tol``.
    If ``xbar`` lies in one of the targets, the unit vectors are undefined and
    the verdict is ``inapplicable``.  Passing ``directions`` also attaches the
    cosine sums along them.

    Raises
    ------
    InfeasiblePointError
        If ``xbar`` is farther than ``member_tol`` from the constraint.
    """
    xs = _check_feasible(sc, xbar, member_tol)
    point = np.array(xs)
    a, reason = _unit_vectors(sc, xs, member_tol)
    if a is None:
        return Certificate(point, (), None, Verdict.INAPPLICABLE, tol, reason)
    g = -np.sum(a, axis=0)
    cone_part = normal_cone_project(sc.constraint, point, g, tol=member_tol)
    residual = float(np.linalg.norm(g - cone_part))
    cos = None
    if directions is not None:
        dirs = _directions(directions, sc.dim)
        cos = tuple((u, sum(_cos(ai, u) for ai in a)) for u in dirs)
    if residual <= tol:
        verdict = Verdict.CERTIFIED_OPTIMAL
    else:
        verdict = Verdict.NOT_STATIONARY
    return Certificate(point, tuple(a), residual, verdict, tol, cosine_sums=cos)


def cosine_sums(sc: Scenario, xbar, dirs, member_tol: float = MEMBER_TOL) -> list[float]:
    """``sum_i cos(a_i(xbar), u_j)`` for every direction ``u_j``.

    For an affine constraint and directions spanning its direction space, all
    sums vanish exactly at the minimizers.
    """
    xs = _check_feasible(sc, xbar, member_tol)
    dirs = _directions(dirs, sc.dim)
    a, reason = _unit_vectors(sc, xs, member_tol)
    if a is None:
        raise InapplicableError(reason)
    return [sum(_cos(ai, u) for ai in a) for u in dirs]


@dataclass(frozen=True)
class TwoSetResult:
    """Outcome of the two-target check.

    ``sufficient_holds`` is None when the sufficient test does not apply
    (dimension other than 2).  When ``inapplicable`` is nonempty both flags
    are None.
    """

    necessary_holds: bool | None
    sufficient_holds: bool | None
    opposite: bool = False
    cos1: float | None = None
    cos2: float | None = None
    inapplicable: str = ""


def _normal_line_check(sc: Scenario, a: np.ndarray, tol: float) -> str:
    """Empty string if the normal cone of the constraint is span{a}, else why not."""
    omega = sc.constraint
    if isinstance(omega, Singleton) and sc.dim == 1:
        return ""
    if not isinstance(omega, Affine):
        return f"cannot verify that the normal cone of a {type(omega).__name__} is a line"
    if omega.codim != 1:
        return f"normal space of the affine constraint has dimension {omega.codim}, not 1"
    along = sum(np.dot(a, d) ** 2 for d in omega.directions)
    if math.sqrt(along) > tol * np.linalg.norm(a):
        return "a is not normal to the affine constraint"
    return ""


def two_set_check(sc: Scenario, xbar, a, tol: float = 1e-9, member_tol: float = MEMBER_TOL) -> TwoSetResult:
    """Angle test for two targets when the normal cone at ``xbar`` is ``span{a}``.

    Necessary condition: ``a_1 + a_2 = 0`` or ``cos(a_1, a) = cos(a_2, a)``.
    In the plane the same test plus ``a_1 != a_2`` is also sufficient.
    """
    if sc.n != 2:
        raise ValueError(f"two_set_check needs exactly two targets, got {sc.n}")
    a = np.asarray(a, dtype=float)
    if a.shape != (sc.dim,):
        raise ValueError(f"a has shape {a.shape}, expected ({sc.dim},)")
    if not np.any(a):
        raise ValueError("a must be nonzero")
    xs = _check_feasible(sc, xbar, member_tol)
    why = _normal_line_check(sc, a, tol)
    if why:
        return TwoSetResult(None, None, inapplicable=why)
    vecs, reason = _unit_vectors(sc, xs, member_tol)
    if vecs is None:
        return TwoSetResult(None, None, inapplicable=reason)
    a1, a2 = vecs
    opposite = bool(np.linalg.norm(a1 + a2) <= tol)
    c1, c2 = _cos(a1, a), _cos(a2, a)
    equal_cos = abs(c1 - c2) <= tol
    necessary = opposite or equal_cos
    sufficient = None
    if sc.dim == 2:
        distinct = bool(np.linalg.norm(a1 - a2) > tol)
        sufficient = opposite or (distinct and equal_cos)
    return TwoSetResult(necessary, sufficient, opposite, c1, c2)
