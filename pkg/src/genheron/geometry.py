"""Euclidean geometry of the supported closed convex sets.

Every set exposes a pure-float core (``_project`` and friends work on lists of
floats) used by the iterative solver, and a vectorized numpy path
(``project_many``) used by the grid oracle.  The two paths are written
separately on purpose; tests check they agree.

The module-level functions (:func:`distance`, :func:`project`, ...) are the
public API.  They accept any array-like and return numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

#: Absolute tolerance (coordinate units) for membership preconditions.
MEMBER_TOL = 1e-9
#: Absolute tolerance used to decide whether a point lies on a face/boundary.
FACE_TOL = 1e-9
#: Residual norm below which a spanning vector is treated as dependent.
DEPENDENT_TOL = 1e-10
ORTHONORMAL_TOL = 1e-12
_ALREADY_ORTHONORMAL = 1e-14


class DimensionError(ValueError):
    """Raised when a point and a set live in different spaces."""


class NotInSetError(ValueError):
    """Raised when an operation needs a member of the set and gets an outsider."""


def _as_floats(x, name="x") -> tuple[float, ...]:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite coordinates")
    return tuple(float(v) for v in arr)


def _dot(u, v) -> float:
    return math.fsum(a * b for a, b in zip(u, v))


def _norm(u) -> float:
    return math.hypot(*u)


class ConvexSet:
    """Base class for nonempty closed convex subsets of R^s."""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    # -- pure float core -------------------------------------------------
    def _project(self, x: list[float]) -> list[float]:
        raise NotImplementedError

    def _residual(self, x: list[float]) -> tuple[list[float], float]:
        """``x - P(x)`` and its norm."""
        r = [a - b for a, b in zip(x, self._project(x))]
        return r, math.hypot(*r)

    def _normal_cone_project(self, xbar, v, tol) -> list[float]:
        raise NotImplementedError

    # -- vectorized ------------------------------------------------------
    def project_many(self, X: np.ndarray) -> np.ndarray:
        """Project each row of ``X`` (shape ``(m, s)``) onto the set."""
        raise NotImplementedError

    def distance_many(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return np.linalg.norm(X - self.project_many(X), axis=-1)

    # -- shape queries ---------------------------------------------------
    def is_bounded(self) -> bool:
        raise NotImplementedError

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray] | None:
        """Smallest axis-aligned box containing the set, or None if unbounded."""
        return None

    def anchor(self) -> np.ndarray:
        """A canonical member of the set (center, base point, ...)."""
        raise NotImplementedError

    def _check(self, x, name="x") -> list[float]:
        xs = _as_floats(x, name)
        if len(xs) != self.dim:
            raise DimensionError(
                f"{name} has dimension {len(xs)} but the set lives in R^{self.dim}"
            )
        return list(xs)


@dataclass(frozen=True)
class Singleton(ConvexSet):
    point: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "point", _as_floats(self.point, "point"))

    @property
    def dim(self):
        return len(self.point)

    def _project(self, x):
        return list(self.point)

    def _normal_cone_project(self, xbar, v, tol):
        # the normal cone of a point is the whole space
        return list(v)

    def project_many(self, X):
        X = np.asarray(X, dtype=float)
        return np.broadcast_to(np.asarray(self.point), X.shape).copy()

    def is_bounded(self):
        return True

    def bounding_box(self):
        p = np.asarray(self.point)
        return p.copy(), p.copy()

    def anchor(self):
        return np.asarray(self.point)


@dataclass(frozen=True)
class Ball(ConvexSet):
    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_floats(self.center, "center"))
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0):
            raise ValueError(f"radius must be positive and finite, got {self.radius!r}")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self):
        return len(self.center)

    def _project(self, x):
        w = [a - c for a, c in zip(x, self.center)]
        n = math.hypot(*w)
        if n <= self.radius:
            return list(x)
        f = self.radius / n
        return [c + f * wj for c, wj in zip(self.center, w)]

    def _residual(self, x):
        # scale the radial vector directly; x - P(x) would cancel near the
        # sphere and tilt the unit subgradient
        w = [a - c for a, c in zip(x, self.center)]
        n = math.hypot(*w)
        if n <= self.radius:
            return [0.0] * len(x), 0.0
        f = (n - self.radius) / n
        r = [f * wj for wj in w]
        return r, math.hypot(*r)

    def _project_radial(self, x):
        w = [a - c for a, c in zip(x, self.center)]
        n = math.hypot(*w)
        if n == 0.0:
            raise ValueError("radial projection is undefined at the ball center")
        f = self.radius / n
        return [c + f * wj for c, wj in zip(self.center, w)]

    def _normal_cone_project(self, xbar, v, tol):
        w = [a - c for a, c in zip(xbar, self.center)]
        n = math.hypot(*w)
        if n < self.radius - tol:
            return [0.0] * len(v)
        u = [wj / n for wj in w]
        t = _dot(v, u)
        if t <= 0.0:
            return [0.0] * len(v)
        return [t * uj for uj in u]

    def project_many(self, X):
        X = np.asarray(X, dtype=float)
        c = np.asarray(self.center)
        W = X - c
        n = np.linalg.norm(W, axis=-1, keepdims=True)
        scale = np.where(n > self.radius, self.radius / np.where(n > 0, n, 1.0), 1.0)
        return c + scale * W

    def is_bounded(self):
        return True

    def bounding_box(self):
        c = np.asarray(self.center)
        return c - self.radius, c + self.radius

    def anchor(self):
        return np.asarray(self.center)


@dataclass(frozen=True)
class Box(ConvexSet):
    """Axis-aligned box ``center +- half_widths``."""

    center: tuple[float, ...]
    half_widths: tuple[float, ...]
    lower: tuple[float, ...] = field(init=False, repr=False, compare=False)
    upper: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        c = _as_floats(self.center, "center")
        hw = np.atleast_1d(np.asarray(self.half_widths, dtype=float))
        if hw.size == 1 and len(c) > 1:
            hw = np.full(len(c), hw[0])
        if hw.shape != (len(c),):
            raise DimensionError(
                f"half_widths has {hw.size} entries, center has {len(c)}"
            )
        if not np.all(np.isfinite(hw) & (hw > 0)):
            raise ValueError("half_widths must all be positive and finite")
        hw = tuple(float(h) for h in hw)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "half_widths", hw)
        object.__setattr__(self, "lower", tuple(a - h for a, h in zip(c, hw)))
        object.__setattr__(self, "upper", tuple(a + h for a, h in zip(c, hw)))

    @property
    def dim(self):
        return len(self.center)

    def _project(self, x):
        return [
            lo if v < lo else (hi if v > hi else v)
            for v, lo, hi in zip(x, self.lower, self.upper)
        ]

    def _residual(self, x):
        # same floats as x - clamp(x), without the intermediate list
        r = [
            v - lo if v < lo else (v - hi if v > hi else 0.0)
            for v, lo, hi in zip(x, self.lower, self.upper)
        ]
        return r, math.hypot(*r)

    def _normal_cone_project(self, xbar, v, tol):
        out = []
        for xj, vj, lo, hi in zip(xbar, v, self.lower, self.upper):
            at_lo = xj <= lo + tol
            at_hi = xj >= hi - tol
            if at_lo and at_hi:
                out.append(vj)
            elif at_lo:
                out.append(min(vj, 0.0))
            elif at_hi:
                out.append(max(vj, 0.0))
            else:
                out.append(0.0)
        return out

    def project_many(self, X):
        return np.clip(np.asarray(X, dtype=float), self.lower, self.upper)

    def is_bounded(self):
        return True

    def bounding_box(self):
        return np.asarray(self.lower), np.asarray(self.upper)

    def anchor(self):
        return np.asarray(self.center)


def orthonormalize(vectors, dim: int, tol: float = DEPENDENT_TOL) -> tuple[tuple[float, ...], ...]:
    """Gram-Schmidt with one re-orthogonalization pass.

    Vectors whose residual norm drops below ``tol`` (relative to their
    original norm) are discarded as dependent.  Input that is already
    orthonormal to rounding is returned unchanged, so the map is idempotent.
    """
    basis: list[np.ndarray] = []
    for i, raw in enumerate(vectors):
        v = np.asarray(raw, dtype=float)
        if v.shape != (dim,):
            raise DimensionError(f"direction {i} has shape {v.shape}, expected ({dim},)")
        if not np.all(np.isfinite(v)):
            raise ValueError(f"direction {i} has non-finite coordinates")
        scale = np.linalg.norm(v)
        if scale == 0.0:
            continue
        w = v / scale
        for _ in range(2):
            for b in basis:
                w = w - np.dot(b, w) * b
        n = np.linalg.norm(w)
        if n < tol:
            continue
        basis.append(w / n)
    if len(basis) == len(vectors):
        G = np.array(vectors, dtype=float).reshape(len(basis), dim)
        if np.max(np.abs(G @ G.T - np.eye(len(basis))), initial=0.0) <= _ALREADY_ORTHONORMAL:
            return tuple(tuple(float(t) for t in g) for g in G)
    return tuple(tuple(float(t) for t in b) for b in basis)


@dataclass(frozen=True)
class Affine(ConvexSet):
    """Affine subspace ``base + span(directions)``.

    ``directions`` may be any spanning list; it is orthonormalized on
    construction, so the stored tuple is always an orthonormal basis.  An
    orthonormal basis of the normal space is kept alongside so residuals are
    built from normal components only and never pick up rounding noise along
    the subspace.
    """

    base: tuple[float, ...]
    directions: tuple[tuple[float, ...], ...] = ()
    normals: tuple[tuple[float, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        b = _as_floats(self.base, "base")
        s = len(b)
        dirs = orthonormalize(self.directions, s)
        G = np.array(dirs).reshape(len(dirs), s)
        if dirs and np.max(np.abs(G @ G.T - np.eye(len(dirs)))) > ORTHONORMAL_TOL:
            raise ValueError("failed to orthonormalize affine directions")
        q, _ = np.linalg.qr(np.column_stack([G.T, np.eye(s)]))
        normals = tuple(tuple(float(t) for t in q[:, j]) for j in range(len(dirs), s))
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "normals", normals)

    @property
    def dim(self):
        return len(self.base)

    @property
    def codim(self) -> int:
        return self.dim - len(self.directions)

    def _residual(self, x):
        w = [a - b for a, b in zip(x, self.base)]
        r = [0.0] * len(x)
        for nv in self.normals:
            t = _dot(w, nv)
            r = [rj + t * nj for rj, nj in zip(r, nv)]
        return r, math.hypot(*r)

    def _project(self, x):
        r, _ = self._residual(x)
        return [a - rj for a, rj in zip(x, r)]

    def _normal_cone_project(self, xbar, v, tol):
        # N = L-perp
        out = [0.0] * len(v)
        for nv in self.normals:
            t = _dot(v, nv)
            out = [o + t * nj for o, nj in zip(out, nv)]
        return out

    def project_many(self, X):
        X = np.asarray(X, dtype=float)
        if not self.normals:
            return X.copy()
        N = np.asarray(self.normals)
        return X - ((X - np.asarray(self.base)) @ N.T) @ N

    def is_bounded(self):
        return not self.directions

    def bounding_box(self):
        if self.directions:
            return None
        b = np.asarray(self.base)
        return b.copy(), b.copy()

    def anchor(self):
        return np.asarray(self._project([0.0] * self.dim))


@dataclass(frozen=True)
class Halfspace(ConvexSet):
    """``{x : <normal, x> <= offset}``."""

    normal: tuple[float, ...]
    offset: float

    def __post_init__(self):
        n = _as_floats(self.normal, "normal")
        if _norm(n) == 0.0:
            raise ValueError("halfspace normal must be nonzero")
        off = float(self.offset)
        if not math.isfinite(off):
            raise ValueError("halfspace offset must be finite")
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", off)

    @property
    def dim(self):
        return len(self.normal)

    @property
    def _nn(self) -> float:
        return _dot(self.normal, self.normal)

    def _project(self, x):
        t = _dot(self.normal, x) - self.offset
        if t <= 0.0:
            return list(x)
        f = t / self._nn
        return [a - f * nj for a, nj in zip(x, self.normal)]

    def _residual(self, x):
        # a multiple of the normal, exact in direction even when t is tiny
        t = _dot(self.normal, x) - self.offset
        if t <= 0.0:
            return [0.0] * len(x), 0.0
        f = t / self._nn
        r = [f * nj for nj in self.normal]
        return r, math.hypot(*r)

    def _normal_cone_project(self, xbar, v, tol):
        nrm = _norm(self.normal)
        gap = (self.offset - _dot(self.normal, xbar)) / nrm
        if gap > tol:
            return [0.0] * len(v)
        u = [nj / nrm for nj in self.normal]
        t = _dot(v, u)
        if t <= 0.0:
            return [0.0] * len(v)
        return [t * uj for uj in u]

    def project_many(self, X):
        X = np.asarray(X, dtype=float)
        n = np.asarray(self.normal)
        t = np.maximum(X @ n - self.offset, 0.0)
        return X - (t / self._nn)[..., None] * n

    def is_bounded(self):
        return False

    def anchor(self):
        n = np.asarray(self.normal)
        return n * (self.offset / self._nn)


# ---------------------------------------------------------------------------
# public operations


def project(s: ConvexSet, x) -> np.ndarray:
    """Metric projection of ``x`` onto ``s``; the identity on members."""
    return np.array(s._project(s._check(x)))


def project_radial(ball: Ball, x) -> np.ndarray:
    """Map ``x`` to the sphere bounding ``ball`` along the ray from its center.

    This agrees with :func:`project` outside the ball but also pushes interior
    points out to the sphere.  It is not a projection onto the ball; it exists
    to reproduce reference runs that used this map.
    """
    if not isinstance(ball, Ball):
        raise TypeError("radial projection is only defined for Ball sets")
    return np.array(ball._project_radial(ball._check(x)))


def distance(s: ConvexSet, x) -> float:
    """Euclidean distance from ``x`` to ``s``."""
    return s._residual(s._check(x))[1]


def _unit_subgradient(s: ConvexSet, x: list[float]) -> tuple[list[float] | None, float]:
    r, d = s._residual(x)
    if d == 0.0:
        return None, 0.0
    return [rj / d for rj in r], d


def distance_subgradient(s: ConvexSet, x) -> np.ndarray:
    """A subgradient of ``d(.; s)`` at ``x``.

    Outside the set this is the unique unit vector ``(x - P(x)) / d(x)``; on
    the set the zero vector is returned.
    """
    xs = s._check(x)
    u, _ = _unit_subgradient(s, xs)
    return np.zeros(len(xs)) if u is None else np.array(u)


def is_member(s: ConvexSet, x, tol: float = MEMBER_TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return distance(s, x) <= tol


def is_bounded(s: ConvexSet) -> bool:
    return s.is_bounded()


def normal_cone_project(s: ConvexSet, xbar, v, tol: float = MEMBER_TOL) -> np.ndarray:
    """Project ``v`` onto the normal cone of ``s`` at the member ``xbar``.

    Points within ``tol`` of a face or of the boundary are treated as lying
    on it, which enlarges the cone.
    """
    xs = s._check(xbar, "xbar")
    vs = s._check(v, "v")
    d = s._residual(xs)[1]
    if d > tol:
        raise NotInSetError(f"xbar is at distance {d:.3g} from the set (tol {tol:g})")
    return np.array(s._normal_cone_project(xs, vs, max(tol, FACE_TOL)))


def tangent_basis(s: ConvexSet, xbar, tol: float = MEMBER_TOL) -> np.ndarray:
    """Orthonormal basis (rows) of a tangent space ``L`` with ``N(xbar) = L-perp``.

    Defined for affine sets (their direction space) and for points on the
    sphere of a ball (the tangent hyperplane).  Returns an empty ``(0, s)``
    array when the normal cone is all of R^s.
    """
    xs = s._check(xbar, "xbar")
    if s._residual(xs)[1] > tol:
        raise NotInSetError("xbar is not in the set")
    if isinstance(s, Affine):
        return np.array(s.directions).reshape(len(s.directions), s.dim)
    if isinstance(s, Singleton):
        return np.zeros((0, s.dim))
    if isinstance(s, Ball):
        w = np.asarray(xs) - np.asarray(s.center)
        n = np.linalg.norm(w)
        if n < s.radius - max(tol, FACE_TOL):
            raise ValueError("interior points of a ball have no proper tangent space")
        u = w / n
        # complete u to an orthonormal basis; the trailing columns span u-perp
        q, _ = np.linalg.qr(np.column_stack([u, np.eye(s.dim)]))
        return q[:, 1 : s.dim].T.copy()
    raise ValueError(f"{type(s).__name__} has no tangent space description")


__all__ = [
    "Affine",
    "Ball",
    "Box",
    "ConvexSet",
    "DimensionError",
    "Halfspace",
    "NotInSetError",
    "Singleton",
    "distance",
    "distance_subgradient",
    "is_bounded",
    "is_member",
    "normal_cone_project",
    "orthonormalize",
    "project",
    "project_radial",
    "tangent_basis",
]
