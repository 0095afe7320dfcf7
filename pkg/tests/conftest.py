import os

import numpy as np
from hypothesis import settings, strategies as st

from genheron.geometry import Affine, Ball, Box, Halfspace, Singleton

settings.register_profile("default", max_examples=200, deadline=None)
settings.register_profile("stress", max_examples=3000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []

coord = st.floats(-20, 20, allow_nan=False, allow_infinity=False)


def vectors(dim):
    return st.lists(coord, min_size=dim, max_size=dim).map(np.array)


@st.composite
def convex_sets(draw, dim=None, kinds=("singleton", "ball", "box", "affine", "halfspace")):
    dim = dim or draw(st.integers(1, 4))
    kind = draw(st.sampled_from(kinds))
    c = tuple(draw(vectors(dim)))
    if kind == "singleton":
        return Singleton(c)
    if kind == "ball":
        return Ball(c, draw(st.floats(0.1, 10)))
    if kind == "box":
        return Box(c, tuple(draw(st.lists(st.floats(0.1, 10), min_size=dim, max_size=dim))))
    if kind == "affine":
        k = draw(st.integers(0, dim))
        dirs = [tuple(draw(vectors(dim))) for _ in range(k)]
        return Affine(c, tuple(dirs))
    normal = draw(vectors(dim).filter(lambda v: np.linalg.norm(v) > 1e-3))
    return Halfspace(tuple(normal), draw(coord))


@st.composite
def set_and_points(draw, n_points=2, kinds=("singleton", "ball", "box", "affine", "halfspace")):
    s = draw(convex_sets(kinds=kinds))
    pts = [draw(vectors(s.dim)) for _ in range(n_points)]
    return (s, *pts)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
