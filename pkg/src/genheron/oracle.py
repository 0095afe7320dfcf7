"""Brute-force grid minimizer used to cross-check the solver.

The objective is n-Lipschitz, so evaluating it at the projections of a grid
with spacing ``h`` onto the constraint lands within ``n * h * sqrt(s) / 2`` of
the optimum whenever a minimizer lies inside the gridded box.  The reported
``error_bound`` is ``n * h * sqrt(s)``, twice that.

This path shares no code with the solver beyond the vectorized
``project_many``/``distance_many`` set methods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .objective import Scenario, evaluate_many

MAX_EVALUATIONS = 10**8
_CHUNK = 1 << 18


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    """Grid resolution and refinement.

    Each refinement round shrinks the box by a factor of 4 around the current
    incumbent.  The refined bound assumes the minimizer stays inside the
    shrunken box, which holds when the incumbent is close to it.
    """

    grid_points_per_axis: int = 65
    refinement_rounds: int = 6
    bounding_box: tuple[tuple[float, ...], tuple[float, ...]] | None = None

    def __post_init__(self):
        if self.grid_points_per_axis < 8:
            raise ValueError("grid_points_per_axis must be at least 8")
        if self.refinement_rounds < 0:
            raise ValueError("refinement_rounds must be nonnegative")
        if self.bounding_box is not None:
            lo, hi = (tuple(float(v) for v in b) for b in self.bounding_box)
            if len(lo) != len(hi) or any(l > h for l, h in zip(lo, hi)):
                raise ValueError("bounding_box needs lo <= hi coordinate-wise")
            object.__setattr__(self, "bounding_box", (lo, hi))


class OracleResult(NamedTuple):
    point: np.ndarray
    value: float
    error_bound: float


def default_box(sc: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """A box guaranteed to contain a minimizer.

    If the constraint is bounded this is its bounding box.  Otherwise take any
    feasible ``y``: a minimizer ``x*`` has ``d(x*, T) <= D(x*) <= D(y)`` for
    every bounded target ``T``, so it lies in each such target's box inflated
    by ``D(y)``, and hence in their intersection.
    """
    box = sc.constraint.bounding_box()
    if box is not None:
        return box
    bounded = [t.bounding_box() for t in sc.targets if t.is_bounded()]
    if not bounded:
        raise OracleError("no bounded set to derive a search box from; pass bounding_box")
    anchor = np.mean([t.anchor() for t in sc.targets], axis=0)
    y = sc.constraint.project_many(anchor[None, :])
    reach = float(evaluate_many(sc, y)[0])
    lo = np.max([b[0] for b in bounded], axis=0) - reach
    hi = np.min([b[1] for b in bounded], axis=0) + reach
    return lo, hi


def _grid_argmin(sc: Scenario, lo: np.ndarray, hi: np.ndarray, m: int):
    axes = [np.linspace(l, h, m) for l, h in zip(lo, hi)]
    total = m ** sc.dim
    best_val, best_pt = math.inf, None
    # C-order flat index == lexicographic grid index; strict < keeps the first
    for start in range(0, total, _CHUNK):
        idx = np.unravel_index(np.arange(start, min(start + _CHUNK, total)), (m,) * sc.dim)
        G = np.stack([ax[i] for ax, i in zip(axes, idx)], axis=-1)
        P = sc.constraint.project_many(G)
        vals = evaluate_many(sc, P)
        j = int(np.argmin(vals))
        if vals[j] < best_val:
            best_val, best_pt = float(vals[j]), P[j]
    return best_pt, best_val


def grid_solve(sc: Scenario, cfg: OracleConfig = OracleConfig()) -> OracleResult:
    """Grid search with refinement; returns incumbent, value and error bound.

    Raises
    ------
    OracleError
        If no search box can be derived or the evaluation budget is exceeded.
    """
    m = cfg.grid_points_per_axis
    evaluations = (m**sc.dim) * (cfg.refinement_rounds + 1)
    if evaluations > MAX_EVALUATIONS:
        raise OracleError(f"{evaluations} evaluations exceeds the budget of {MAX_EVALUATIONS}")
    if cfg.bounding_box is not None:
        lo, hi = (np.asarray(b, dtype=float) for b in cfg.bounding_box)
        if lo.shape != (sc.dim,):
            raise OracleError(f"bounding_box has dimension {lo.size}, scenario dim is {sc.dim}")
    else:
        lo, hi = default_box(sc)
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)

    best_pt, best_val = _grid_argmin(sc, lo, hi, m)
    h = float(np.max(hi - lo)) / (m - 1)
    for _ in range(cfg.refinement_rounds):
        half = (hi - lo) / 8.0
        lo, hi = best_pt - half, best_pt + half
        pt, val = _grid_argmin(sc, lo, hi, m)
        if val < best_val:
            best_pt, best_val = pt, val
        h = float(np.max(hi - lo)) / (m - 1)
    return OracleResult(np.array(best_pt), best_val, sc.n * h * math.sqrt(sc.dim))
