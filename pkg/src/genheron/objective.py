"""Problem instances and the sum-of-distances objective."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import ConvexSet, DimensionError


@dataclass(frozen=True)
class Scenario:
    """Minimize ``sum_i d(x; targets[i])`` over ``x`` in ``constraint``."""

    dim: int
    constraint: ConvexSet
    targets: tuple[ConvexSet, ...]

    def __post_init__(self):
        targets = tuple(self.targets)
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")
        if not targets:
            raise ValueError("a scenario needs at least one target set")
        for name, s in [("constraint", self.constraint)] + [
            (f"targets[{i}]", t) for i, t in enumerate(targets)
        ]:
            if not isinstance(s, ConvexSet):
                raise TypeError(f"{name} is not a ConvexSet")
            if s.dim != self.dim:
                raise DimensionError(f"{name} lives in R^{s.dim}, scenario dim is {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "targets", targets)

    @property
    def n(self) -> int:
        return len(self.targets)


def _value_and_subgradient(sc: Scenario, x: list[float]) -> tuple[float, list[float]]:
    # shared by evaluate/subgradient and the solver loop so that all three
    # accumulate in the same order and agree bit for bit
    g = [0.0] * sc.dim
    value = 0.0
    for t in sc.targets:
        r, d = t._residual(x)
        if d != 0.0:
            value += d
            g = [gj + rj / d for gj, rj in zip(g, r)]
    return value, g


def evaluate(sc: Scenario, x) -> float:
    """Sum of Euclidean distances from ``x`` to the target sets."""
    return _value_and_subgradient(sc, sc.constraint._check(x))[0]


def subgradient(sc: Scenario, x) -> np.ndarray:
    """Sum of the per-target distance subgradients (zero for targets containing x)."""
    return np.array(_value_and_subgradient(sc, sc.constraint._check(x))[1])


def evaluate_many(sc: Scenario, X) -> np.ndarray:
    """Vectorized objective over the rows of ``X``."""
    X = np.asarray(X, dtype=float)
    if X.shape[-1] != sc.dim:
        raise DimensionError(f"points have dimension {X.shape[-1]}, expected {sc.dim}")
    total = np.zeros(X.shape[:-1])
    for t in sc.targets:
        total += t.distance_many(X)
    return total


def check_existence(sc: Scenario) -> bool:
    """Sufficient condition for a minimizer to exist: some set is bounded.

    ``False`` does not mean there is no solution, only that boundedness
    cannot vouch for one.
    """
    return sc.constraint.is_bounded() or any(t.is_bounded() for t in sc.targets)
