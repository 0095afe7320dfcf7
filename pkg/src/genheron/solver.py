"""Projected subgradient method for the sum-of-distances problem.

Each step is

    x_{k+1} = P_Omega(x_k - alpha_k * sum_i v_ik)

where ``v_ik`` is the unit vector pointing from the nearest point of target
``i`` to ``x_k`` (zero if ``x_k`` is inside the target).  The method is not a
descent method, so the best objective value seen so far is tracked alongside
the iterates.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, TextIO, Union

import numpy as np

from .geometry import Ball, MEMBER_TOL, DimensionError, _as_floats
from .objective import Scenario, _value_and_subgradient

log = logging.getLogger(__name__)

PROJECTIONS = ("metric", "radial")


# ---------------------------------------------------------------------------
# step schedules


@dataclass(frozen=True)
class Harmonic:
    """``alpha_k = c / k``."""

    c: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError(f"harmonic schedule needs c > 0, got {self.c!r}")

    def step(self, k: int) -> float:
        return self.c / k

    def __str__(self):
        return f"harmonic:{self.c:g}"


@dataclass(frozen=True)
class Power:
    """``alpha_k = c / k**p`` with ``0.5 < p <= 1``.

    That range is exactly where the steps are square summable but not
    summable.
    """

    c: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError(f"power schedule needs c > 0, got {self.c!r}")
        if not (0.5 < self.p <= 1.0):
            raise ValueError(f"power schedule needs 0.5 < p <= 1, got {self.p!r}")

    def step(self, k: int) -> float:
        return self.c / k**self.p

    def __str__(self):
        return f"power:{self.c:g},{self.p:g}"


@dataclass(frozen=True)
class Explicit:
    """A finite list of step sizes.

    Nothing about the tail can be verified, so runs using it are flagged
    ``unchecked``.
    """

    steps: tuple[float, ...]
    unchecked: bool = field(default=True, init=False)

    def __post_init__(self):
        steps = tuple(float(a) for a in self.steps)
        if not steps:
            raise ValueError("explicit schedule is empty")
        if not all(math.isfinite(a) and a > 0 for a in steps):
            raise ValueError("explicit step sizes must be positive and finite")
        object.__setattr__(self, "steps", steps)

    def step(self, k: int) -> float:
        if k > len(self.steps):
            raise ValueError(f"explicit schedule has {len(self.steps)} steps, step {k} requested")
        return self.steps[k - 1]

    def __str__(self):
        return f"explicit[{len(self.steps)}]"


StepSchedule = Union[Harmonic, Power, Explicit]


def parse_schedule(text: str) -> StepSchedule:
    """Parse ``harmonic:c`` or ``power:c,p`` (``harmonic`` alone means c=1)."""
    kind, _, params = text.strip().partition(":")
    try:
        values = [float(v) for v in params.split(",")] if params else []
    except ValueError:
        raise ValueError(f"bad step schedule parameters in {text!r}") from None
    if kind == "harmonic" and len(values) <= 1:
        return Harmonic(*values)
    if kind == "power" and len(values) == 2:
        return Power(*values)
    raise ValueError(f"unknown step schedule {text!r}; use harmonic:c or power:c,p")


# ---------------------------------------------------------------------------
# configuration and results


@dataclass(frozen=True)
class SolverConfig:
    """Settings for :func:`solve`.

    ``start=None`` uses :func:`default_start`.  ``projection="radial"`` maps
    every trial point onto the bounding sphere of a ball constraint instead of
    using the metric projection.  ``stagnation_window``, when set, stops the
    run once the best value has not improved by more than ``1e-12`` for that
    many consecutive iterations.
    """

    schedule: StepSchedule = field(default_factory=Harmonic)
    max_iters: int = 1000
    trace_stride: int = 1
    start: tuple[float, ...] | None = None
    projection: str = "metric"
    stagnation_window: int | None = None

    def __post_init__(self):
        if not hasattr(self.schedule, "step"):
            raise TypeError(f"not a step schedule: {self.schedule!r}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 0:
            raise ValueError(f"max_iters must be a nonnegative integer, got {self.max_iters!r}")
        if int(self.trace_stride) != self.trace_stride or self.trace_stride < 1:
            raise ValueError(f"trace_stride must be a positive integer, got {self.trace_stride!r}")
        if self.projection not in PROJECTIONS:
            raise ValueError(f"projection must be one of {PROJECTIONS}, got {self.projection!r}")
        if self.stagnation_window is not None and self.stagnation_window < 1:
            raise ValueError("stagnation_window must be positive")
        if self.start is not None:
            object.__setattr__(self, "start", _as_floats(self.start, "start"))


class TraceRow(NamedTuple):
    k: int
    x: tuple[float, ...]
    d_value: float
    v_best: float


@dataclass(frozen=True)
class _State:
    k: int  # index of the next iterate to evaluate
    x: tuple[float, ...]  # that iterate
    best_x: tuple[float, ...] | None
    best_value: float
    best_k: int
    stall: int


@dataclass(frozen=True)
class SolveResult:
    best_x: np.ndarray
    best_value: float
    best_k: int
    iterations: int
    trace: tuple[TraceRow, ...]
    scenario: Scenario
    config: SolverConfig
    warnings: tuple[str, ...] = ()
    stopped_early: bool = False
    state: _State | None = field(default=None, repr=False)

    @property
    def unchecked(self) -> bool:
        """True when the step schedule gives no convergence guarantee."""
        return getattr(self.config.schedule, "unchecked", False)


def default_start(sc: Scenario) -> np.ndarray:
    """Project the centroid of the targets' anchor points onto the constraint."""
    centroid = np.mean([t.anchor() for t in sc.targets], axis=0)
    return np.array(sc.constraint._project([float(v) for v in centroid]))


def _projector(sc: Scenario, cfg: SolverConfig):
    if cfg.projection == "radial":
        if not isinstance(sc.constraint, Ball):
            raise ValueError("radial projection requires a Ball constraint")
        return sc.constraint._project_radial
    return sc.constraint._project


def _initial_state(sc: Scenario, cfg: SolverConfig) -> tuple[_State, list[str]]:
    warnings = []
    if cfg.start is None:
        x = default_start(sc)
    else:
        if len(cfg.start) != sc.dim:
            raise DimensionError(f"start has dimension {len(cfg.start)}, scenario dim is {sc.dim}")
        x = np.asarray(cfg.start)
        p = np.array(sc.constraint._project(list(cfg.start)))
        gap = float(np.linalg.norm(x - p))
        if gap > MEMBER_TOL:
            msg = f"start point is infeasible (distance {gap:.3g}); projected onto the constraint"
            log.warning(msg)
            warnings.append(msg)
            x = p
    state = _State(k=1, x=tuple(float(v) for v in x), best_x=None,
                   best_value=math.inf, best_k=0, stall=0)
    return state, warnings


def _run(sc: Scenario, cfg: SolverConfig, state: _State, n_iters: int):
    proj = _projector(sc, cfg)
    step = cfg.schedule.step
    stride = cfg.trace_stride
    window = cfg.stagnation_window

    residuals = [t._residual for t in sc.targets]
    zero = [0.0] * sc.dim

    k = state.k
    x = list(state.x)
    best_x, best_value, best_k, stall = state.best_x, state.best_value, state.best_k, state.stall
    rows = []
    stopped = False
    for k in range(state.k, state.k + n_iters):
        # inlined copy of objective._value_and_subgradient; the one-step
        # tests hold the two to bit equality
        g = zero
        value = 0.0
        for res in residuals:
            r, d = res(x)
            if d != 0.0:
                value += d
                g = [gj + rj / d for gj, rj in zip(g, r)]
        if value < best_value:
            stall = 0 if best_value - value > 1e-12 else stall + 1
            best_x, best_value, best_k = x, value, k
        else:
            stall += 1
        if k == 1 or k % stride == 0:
            rows.append(TraceRow(k, tuple(x), value, best_value))
        a = step(k)
        x = proj([xj - a * gj for xj, gj in zip(x, g)])
        if window is not None and stall >= window:
            stopped = True
            break
    else:
        k = state.k + n_iters - 1
    if best_x is not None:
        best_x = tuple(best_x)
    new_state = _State(k=k + 1, x=tuple(x), best_x=best_x, best_value=best_value,
                       best_k=best_k, stall=stall)
    return new_state, rows, stopped


def solve(sc: Scenario, cfg: SolverConfig) -> SolveResult:
    """Run the projected subgradient method for ``cfg.max_iters`` iterations.

    The trace records iterate ``k`` when ``k == 1`` or ``k`` is a multiple of
    ``trace_stride``; the best value is tracked over every iterate regardless.
    """
    state, warnings = _initial_state(sc, cfg)
    if isinstance(cfg.schedule, Explicit):
        warnings.append("explicit step schedule: convergence conditions unchecked")
    new_state, rows, stopped = _run(sc, cfg, state, cfg.max_iters)
    return _result(sc, cfg, new_state, tuple(rows), tuple(warnings), stopped)


def resume(sc: Scenario, result: SolveResult, extra_iters: int) -> SolveResult:
    """Continue a run as if it had been started with more iterations."""
    if result.scenario != sc:
        raise ValueError("result was produced from a different scenario")
    if extra_iters < 0:
        raise ValueError("extra_iters must be nonnegative")
    if extra_iters == 0:
        return result
    new_state, rows, stopped = _run(sc, result.config, result.state, extra_iters)
    cfg = replace(result.config, max_iters=result.config.max_iters + extra_iters)
    return _result(sc, cfg, new_state, result.trace + tuple(rows), result.warnings, stopped)


def _result(sc, cfg, state: _State, trace, warnings, stopped) -> SolveResult:
    if state.best_x is None:
        # zero iterations: report the start point
        x0 = state.x
        value, _ = _value_and_subgradient(sc, list(x0))
        state = replace(state, best_x=x0, best_value=value, best_k=1)
    return SolveResult(
        best_x=np.array(state.best_x),
        best_value=state.best_value,
        best_k=state.best_k,
        iterations=state.k - 1,
        trace=trace,
        scenario=sc,
        config=cfg,
        warnings=warnings,
        stopped_early=stopped,
        state=state,
    )


def trace_array(result: SolveResult) -> np.ndarray:
    """Trace as an array with columns ``k, x_0..x_{s-1}, D, V``."""
    return np.array([(r.k, *r.x, r.d_value, r.v_best) for r in result.trace], dtype=float)


# ---------------------------------------------------------------------------
# CSV trace export


def trace_header(dim: int) -> list[str]:
    return ["k", *(f"x_{j}" for j in range(dim)), "D", "V"]


def write_trace_csv(result: SolveResult, dest: str | TextIO) -> None:
    """Write the trace with 17 significant digits per value."""
    if isinstance(dest, str):
        with open(dest, "w", newline="") as f:
            write_trace_csv(result, f)
        return
    w = csv.writer(dest, lineterminator="\n")
    w.writerow(trace_header(result.scenario.dim))
    for r in result.trace:
        w.writerow([r.k, *(f"{v:.17g}" for v in (*r.x, r.d_value, r.v_best))])


def read_trace_csv(src: str | TextIO) -> list[TraceRow]:
    if isinstance(src, str):
        with open(src, newline="") as f:
            return read_trace_csv(f)
    reader = csv.reader(src)
    header = next(reader)
    dim = len(header) - 3
    if dim < 1 or header != trace_header(dim):
        raise ValueError(f"unexpected trace header {header}")
    rows = []
    for line in reader:
        if len(line) != len(header):
            raise ValueError(f"trace row has {len(line)} fields, expected {len(header)}")
        vals = [float(v) for v in line[1:]]
        rows.append(TraceRow(int(line[0]), tuple(vals[:dim]), vals[dim], vals[dim + 1]))
    return rows
