"""Reading and writing scenario documents (YAML).

A scenario document looks like::

    dim: 2
    constraint: {kind: ball, center: [-3, 4], radius: 1.5}
    targets:
      - {kind: box, center: [-7, 1], half_widths: [1, 1]}
      - {kind: singleton, point: [0, 1]}
    solver:                      # optional
      schedule: {kind: harmonic, c: 1.0}
      max_iters: 100000
      start: [-3, 5.5]
      trace_stride: 10
      projection: metric         # or radial (ball constraints only)
    certify:                     # optional
      tolerance: 1.0e-6
      directions: [[1, 0]]
    oracle:                      # optional
      grid_points_per_axis: 65
      refinement_rounds: 6
      bounding_box: {lo: [-5, 2], hi: [-1, 6]}

Unknown keys are rejected.  Errors name the offending field.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

import yaml

from . import geometry as geo
from .certify import CERT_TOL
from .objective import Scenario
from .oracle import OracleConfig
from .solver import Explicit, Harmonic, Power, SolverConfig, parse_schedule


class ScenarioError(ValueError):
    """Schema or validation failure in a scenario document."""


_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")

SET_FIELDS = {
    "singleton": {"point"},
    "ball": {"center", "radius"},
    "box": {"center", "half_widths"},
    "affine": {"base", "directions"},
    "halfspace": {"normal", "offset"},
}
OPTIONAL_SET_FIELDS = {"affine": {"directions"}}


@dataclass(frozen=True)
class CertifySettings:
    tolerance: float = CERT_TOL
    directions: tuple[tuple[float, ...], ...] | None = None


@dataclass(frozen=True)
class ScenarioFile:
    scenario: Scenario
    solver: SolverConfig | None = None
    certify: CertifySettings | None = None
    oracle: OracleConfig | None = None


# ---------------------------------------------------------------------------
# field helpers


def _number(v: Any, where: str) -> float:
    if isinstance(v, bool):
        raise ScenarioError(f"{where}: expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        return float(v)
    # PyYAML reads "1e-6" (no dot) as a string
    if isinstance(v, str) and _DECIMAL.match(v.strip()):
        return float(v)
    raise ScenarioError(f"{where}: expected a decimal number, got {v!r}")


def _integer(v: Any, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ScenarioError(f"{where}: expected an integer, got {v!r}")
    return v


def _vector(v: Any, where: str, dim: int | None = None) -> tuple[float, ...]:
    if not isinstance(v, (list, tuple)) or not v:
        raise ScenarioError(f"{where}: expected a nonempty list of numbers")
    out = tuple(_number(x, f"{where}[{i}]") for i, x in enumerate(v))
    if dim is not None and len(out) != dim:
        raise ScenarioError(f"{where}: expected {dim} coordinates, got {len(out)}")
    return out


def _mapping(v: Any, where: str, allowed: set[str], required: set[str] = frozenset()) -> dict:
    if not isinstance(v, dict):
        raise ScenarioError(f"{where}: expected a mapping")
    unknown = set(v) - allowed
    if unknown:
        raise ScenarioError(f"{where}: unknown field(s) {', '.join(sorted(map(str, unknown)))}")
    missing = set(required) - set(v)
    if missing:
        raise ScenarioError(f"{where}: missing field(s) {', '.join(sorted(missing))}")
    return v


def parse_set(rec: Any, where: str, dim: int) -> geo.ConvexSet:
    if not isinstance(rec, dict) or "kind" not in rec:
        raise ScenarioError(f"{where}: expected a mapping with a 'kind' field")
    kind = rec["kind"]
    if kind not in SET_FIELDS:
        raise ScenarioError(f"{where}.kind: unknown set kind {kind!r}; expected one of {sorted(SET_FIELDS)}")
    fields = SET_FIELDS[kind]
    required = fields - OPTIONAL_SET_FIELDS.get(kind, set())
    _mapping(rec, where, fields | {"kind"}, required)
    try:
        if kind == "singleton":
            return geo.Singleton(_vector(rec["point"], f"{where}.point", dim))
        if kind == "ball":
            return geo.Ball(_vector(rec["center"], f"{where}.center", dim),
                            _number(rec["radius"], f"{where}.radius"))
        if kind == "box":
            hw = rec["half_widths"]
            hw = (_number(hw, f"{where}.half_widths"),) * dim if not isinstance(hw, list) \
                else _vector(hw, f"{where}.half_widths", dim)
            return geo.Box(_vector(rec["center"], f"{where}.center", dim), hw)
        if kind == "affine":
            dirs = rec.get("directions") or []
            if not isinstance(dirs, list):
                raise ScenarioError(f"{where}.directions: expected a list of vectors")
            dirs = [_vector(d, f"{where}.directions[{i}]", dim) for i, d in enumerate(dirs)]
            return geo.Affine(_vector(rec["base"], f"{where}.base", dim), tuple(dirs))
        return geo.Halfspace(_vector(rec["normal"], f"{where}.normal", dim),
                             _number(rec["offset"], f"{where}.offset"))
    except ScenarioError:
        raise
    except ValueError as e:
        raise ScenarioError(f"{where}: {e}") from None


def _parse_schedule(v: Any, where: str):
    try:
        if isinstance(v, str):
            return parse_schedule(v)
        rec = _mapping(v, where, {"kind", "c", "p", "steps"}, {"kind"})
        kind = rec["kind"]
        if kind == "harmonic":
            _mapping(rec, where, {"kind", "c"})
            return Harmonic(_number(rec.get("c", 1.0), f"{where}.c"))
        if kind == "power":
            _mapping(rec, where, {"kind", "c", "p"}, {"kind", "c", "p"})
            return Power(_number(rec["c"], f"{where}.c"), _number(rec["p"], f"{where}.p"))
        if kind == "explicit":
            _mapping(rec, where, {"kind", "steps"}, {"kind", "steps"})
            return Explicit(_vector(rec["steps"], f"{where}.steps"))
        raise ScenarioError(f"{where}.kind: unknown schedule kind {kind!r}")
    except ScenarioError:
        raise
    except ValueError as e:
        raise ScenarioError(f"{where}: {e}") from None


def _parse_solver(v: Any, dim: int) -> SolverConfig:
    where = "solver"
    rec = _mapping(v, where, {"schedule", "max_iters", "start", "trace_stride",
                              "projection", "stagnation_window"})
    kw = {}
    if "schedule" in rec:
        kw["schedule"] = _parse_schedule(rec["schedule"], f"{where}.schedule")
    if "max_iters" in rec:
        kw["max_iters"] = _integer(rec["max_iters"], f"{where}.max_iters")
    if "trace_stride" in rec:
        kw["trace_stride"] = _integer(rec["trace_stride"], f"{where}.trace_stride")
    if rec.get("start") is not None:
        kw["start"] = _vector(rec["start"], f"{where}.start", dim)
    if "projection" in rec:
        kw["projection"] = rec["projection"]
    if rec.get("stagnation_window") is not None:
        kw["stagnation_window"] = _integer(rec["stagnation_window"], f"{where}.stagnation_window")
    try:
        return SolverConfig(**kw)
    except ValueError as e:
        raise ScenarioError(f"{where}: {e}") from None


def _parse_certify(v: Any, dim: int) -> CertifySettings:
    rec = _mapping(v, "certify", {"tolerance", "directions"})
    tol = _number(rec.get("tolerance", CERT_TOL), "certify.tolerance")
    if tol < 0:
        raise ScenarioError("certify.tolerance: must be nonnegative")
    dirs = rec.get("directions")
    if dirs is not None:
        if not isinstance(dirs, list):
            raise ScenarioError("certify.directions: expected a list of vectors")
        dirs = tuple(_vector(d, f"certify.directions[{i}]", dim) for i, d in enumerate(dirs))
        for i, d in enumerate(dirs):
            if not any(d):
                raise ScenarioError(f"certify.directions[{i}]: zero vector")
    return CertifySettings(tol, dirs)


def _parse_oracle(v: Any, dim: int) -> OracleConfig:
    rec = _mapping(v, "oracle", {"grid_points_per_axis", "refinement_rounds", "bounding_box"})
    kw = {}
    if "grid_points_per_axis" in rec:
        kw["grid_points_per_axis"] = _integer(rec["grid_points_per_axis"], "oracle.grid_points_per_axis")
    if "refinement_rounds" in rec:
        kw["refinement_rounds"] = _integer(rec["refinement_rounds"], "oracle.refinement_rounds")
    if rec.get("bounding_box") is not None:
        bb = _mapping(rec["bounding_box"], "oracle.bounding_box", {"lo", "hi"}, {"lo", "hi"})
        kw["bounding_box"] = (_vector(bb["lo"], "oracle.bounding_box.lo", dim),
                              _vector(bb["hi"], "oracle.bounding_box.hi", dim))
    try:
        return OracleConfig(**kw)
    except ValueError as e:
        raise ScenarioError(f"oracle: {e}") from None


def parse_scenario(doc: Any) -> ScenarioFile:
    """Validate a decoded document and build the scenario objects."""
    rec = _mapping(doc, "scenario", {"dim", "constraint", "targets", "solver", "certify", "oracle"},
                   {"dim", "constraint", "targets"})
    dim = _integer(rec["dim"], "dim")
    if dim < 1:
        raise ScenarioError("dim: must be positive")
    constraint = parse_set(rec["constraint"], "constraint", dim)
    targets = rec["targets"]
    if not isinstance(targets, list) or not targets:
        raise ScenarioError("targets: expected a nonempty list of set records")
    targets = tuple(parse_set(t, f"targets[{i}]", dim) for i, t in enumerate(targets))
    sc = Scenario(dim, constraint, targets)
    return ScenarioFile(
        sc,
        _parse_solver(rec["solver"], dim) if rec.get("solver") is not None else None,
        _parse_certify(rec["certify"], dim) if rec.get("certify") is not None else None,
        _parse_oracle(rec["oracle"], dim) if rec.get("oracle") is not None else None,
    )


def loads(text: str) -> ScenarioFile:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ScenarioError(f"not a valid scenario document: {e}") from None
    return parse_scenario(doc)


def load(path: str) -> ScenarioFile:
    with open(path) as f:
        return loads(f.read())


# ---------------------------------------------------------------------------
# serialization


def _vec(v) -> list[float]:
    return [float(x) for x in v]


def set_to_dict(s: geo.ConvexSet) -> dict:
    if isinstance(s, geo.Singleton):
        return {"kind": "singleton", "point": _vec(s.point)}
    if isinstance(s, geo.Ball):
        return {"kind": "ball", "center": _vec(s.center), "radius": s.radius}
    if isinstance(s, geo.Box):
        return {"kind": "box", "center": _vec(s.center), "half_widths": _vec(s.half_widths)}
    if isinstance(s, geo.Affine):
        return {"kind": "affine", "base": _vec(s.base), "directions": [_vec(d) for d in s.directions]}
    if isinstance(s, geo.Halfspace):
        return {"kind": "halfspace", "normal": _vec(s.normal), "offset": s.offset}
    raise TypeError(f"cannot serialize {type(s).__name__}")


def _schedule_to_dict(sch) -> dict:
    if isinstance(sch, Harmonic):
        return {"kind": "harmonic", "c": sch.c}
    if isinstance(sch, Power):
        return {"kind": "power", "c": sch.c, "p": sch.p}
    return {"kind": "explicit", "steps": list(sch.steps)}


def to_dict(sf: ScenarioFile) -> dict:
    sc = sf.scenario
    out: dict[str, Any] = {
        "dim": sc.dim,
        "constraint": set_to_dict(sc.constraint),
        "targets": [set_to_dict(t) for t in sc.targets],
    }
    if sf.solver is not None:
        cfg = sf.solver
        solver = {
            "schedule": _schedule_to_dict(cfg.schedule),
            "max_iters": cfg.max_iters,
            "trace_stride": cfg.trace_stride,
            "projection": cfg.projection,
        }
        if cfg.start is not None:
            solver["start"] = _vec(cfg.start)
        if cfg.stagnation_window is not None:
            solver["stagnation_window"] = cfg.stagnation_window
        out["solver"] = solver
    if sf.certify is not None:
        cert: dict[str, Any] = {"tolerance": sf.certify.tolerance}
        if sf.certify.directions is not None:
            cert["directions"] = [_vec(d) for d in sf.certify.directions]
        out["certify"] = cert
    if sf.oracle is not None:
        o = sf.oracle
        orc: dict[str, Any] = {
            "grid_points_per_axis": o.grid_points_per_axis,
            "refinement_rounds": o.refinement_rounds,
        }
        if o.bounding_box is not None:
            orc["bounding_box"] = {"lo": _vec(o.bounding_box[0]), "hi": _vec(o.bounding_box[1])}
        out["oracle"] = orc
    return out


def dumps(sf: ScenarioFile) -> str:
    return yaml.safe_dump(to_dict(sf), sort_keys=False, default_flow_style=None)


def dump(sf: ScenarioFile, path: str) -> None:
    with open(path, "w") as f:
        f.write(dumps(sf))
