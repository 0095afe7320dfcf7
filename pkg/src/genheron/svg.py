"""Static SVG rendering of a 2-D scenario and an iterate path."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import quoteattr

import numpy as np

from . import geometry as geo
from .objective import Scenario

WIDTH = 640
MARGIN = 0.10
CONSTRAINT_STYLE = 'fill="none" stroke="#1f4e9c" stroke-width="2"'
TARGET_STYLE = 'fill="#e8a33d" fill-opacity="0.6" stroke="#8a5a12" stroke-width="1"'
PATH_STYLE = 'fill="none" stroke="#c0392b" stroke-width="1.5"'


def viewport(sc: Scenario, points: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Box around every bounded set and every path point, padded by 10%."""
    boxes = [s.bounding_box() for s in (sc.constraint, *sc.targets)]
    los = [b[0] for b in boxes if b is not None]
    his = [b[1] for b in boxes if b is not None]
    if points is not None and len(points):
        los.append(np.min(points, axis=0))
        his.append(np.max(points, axis=0))
    if not los:
        los, his = [np.full(2, -1.0)], [np.full(2, 1.0)]
    lo, hi = np.min(los, axis=0), np.max(his, axis=0)
    span = np.maximum(hi - lo, 1e-9)
    span = np.full(2, max(span))  # square viewport keeps circles round
    mid = (lo + hi) / 2
    half = span * (0.5 + MARGIN)
    return mid - half, mid + half


def _clip_halfplane(poly: list[np.ndarray], n: np.ndarray, c: float) -> list[np.ndarray]:
    """Sutherland-Hodgman clip of a convex polygon against ``<n, x> <= c``."""
    out = []
    for i, p in enumerate(poly):
        q = poly[(i + 1) % len(poly)]
        fp, fq = n @ p - c, n @ q - c
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append(p + t * (q - p))
    return out


class _Canvas:
    def __init__(self, lo, hi):
        self.lo, self.hi = lo, hi
        self.scale = WIDTH / (hi[0] - lo[0])

    def xy(self, p) -> str:
        X = (p[0] - self.lo[0]) * self.scale
        Y = (self.hi[1] - p[1]) * self.scale
        return f"{X:.3f},{Y:.3f}"

    def polygon(self, pts) -> str:
        if len(pts) == 0:
            return ""
        return "M " + " L ".join(self.xy(p) for p in pts) + " Z"

    def circle(self, c, r) -> str:
        R = r * self.scale
        left, right = self.xy((c[0] - r, c[1])), self.xy((c[0] + r, c[1]))
        return f"M {left} A {R:.3f} {R:.3f} 0 1 0 {right} A {R:.3f} {R:.3f} 0 1 0 {left} Z"

    def rect_corners(self):
        lo, hi = self.lo, self.hi
        return [np.array(p, float) for p in ((lo[0], lo[1]), (hi[0], lo[1]), (hi[0], hi[1]), (lo[0], hi[1]))]

    def set_path(self, s: geo.ConvexSet) -> str:
        marker = 0.006 * (self.hi[0] - self.lo[0])
        if isinstance(s, geo.Singleton):
            return self.circle(s.point, marker)
        if isinstance(s, geo.Ball):
            return self.circle(s.center, s.radius)
        if isinstance(s, geo.Box):
            lo, hi = s.lower, s.upper
            return self.polygon([(lo[0], lo[1]), (hi[0], lo[1]), (hi[0], hi[1]), (lo[0], hi[1])])
        if isinstance(s, geo.Halfspace):
            poly = _clip_halfplane(self.rect_corners(), np.asarray(s.normal), s.offset)
            return self.polygon(poly)
        if isinstance(s, geo.Affine):
            if not s.directions:
                return self.circle(s.base, marker)
            if len(s.directions) >= 2:
                return self.polygon(self.rect_corners())
            # a line: clip base + t*d to the viewport as a thin slab
            b, d = np.asarray(s.base), np.asarray(s.directions[0])
            nrm = np.array([-d[1], d[0]])
            eps = 1e-9 * (self.hi[0] - self.lo[0])
            poly = _clip_halfplane(self.rect_corners(), nrm, nrm @ b + eps)
            poly = _clip_halfplane(poly, -nrm, -(nrm @ b) + eps)
            if not poly:
                return ""
            ts = [float(d @ (p - b)) for p in poly]
            return f"M {self.xy(b + min(ts) * d)} L {self.xy(b + max(ts) * d)}"
        raise TypeError(f"cannot draw {type(s).__name__}")


def render(sc: Scenario, path: Sequence[Sequence[float]] | None = None) -> str:
    """Return an SVG 1.1 document: one ``<path>`` per set, one ``<polyline>`` for the iterates."""
    if sc.dim != 2:
        raise ValueError(f"SVG output is 2-D only; scenario has dim {sc.dim}")
    pts = None if path is None else np.asarray(path, dtype=float).reshape(-1, 2)
    lo, hi = viewport(sc, pts)
    cv = _Canvas(lo, hi)
    height = WIDTH * (hi[1] - lo[1]) / (hi[0] - lo[0])
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{height:.0f}" viewBox="0 0 {WIDTH} {height:.3f}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
    ]
    for i, t in enumerate(sc.targets):
        out.append(f'<path id="target-{i}" d={quoteattr(cv.set_path(t))} {TARGET_STYLE}/>')
    out.append(f'<path id="constraint" d={quoteattr(cv.set_path(sc.constraint))} {CONSTRAINT_STYLE}/>')
    if pts is not None and len(pts):
        coords = " ".join(cv.xy(p) for p in pts)
        out.append(f'<polyline id="iterates" points="{coords}" {PATH_STYLE}/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write(sc: Scenario, dest: str, path=None) -> None:
    with open(dest, "w") as f:
        f.write(render(sc, path))
