"""Command line entry point: ``genheron {solve,certify,oracle} SCENARIO``.

Exit status is 0 on success, 1 for schema or argument errors and 2 when a
numeric precondition fails (for instance certifying an infeasible point).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import geometry as geo
from . import scenario_file, svg
from .certify import InapplicableError, InfeasiblePointError, stationarity_residual, two_set_check
from .objective import check_existence
from .oracle import OracleConfig, OracleError, grid_solve
from .solver import SolverConfig, parse_schedule, solve, write_trace_csv

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2

EXISTENCE_WARNING = (
    "warning: neither the constraint nor any target is bounded; "
    "a minimizer is not guaranteed to exist"
)


class UsageError(Exception):
    pass


class NumericError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _vector_arg(text: str, dim: int, flag: str) -> tuple[float, ...]:
    try:
        v = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated numbers, got {text!r}") from None
    if len(v) != dim:
        raise UsageError(f"{flag}: expected {dim} coordinates, got {len(v)}")
    return v


def _fmt(v, p: int) -> str:
    return "(" + ", ".join(f"{x:.{p}f}" for x in v) + ")"


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="genheron", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("scenario", help="scenario file (YAML)")
        p.add_argument("--precision", type=int, default=5, help="decimals in printed numbers")

    p = sub.add_parser("solve", help="run the projected subgradient method")
    common(p)
    p.add_argument("--iters", type=int, help="iteration budget")
    p.add_argument("--step", help="harmonic:c or power:c,p")
    p.add_argument("--start", help="starting point x0,x1,...")
    p.add_argument("--stride", type=int, help="keep every N-th iterate in the trace")
    p.add_argument("--trace", metavar="PATH", help="write the trace as CSV")
    p.add_argument("--plot", metavar="PATH", help="write an SVG of sets and iterates (2-D)")

    p = sub.add_parser("certify", help="check optimality of a point")
    common(p)
    p.add_argument("--at", required=True, help="candidate point x0,x1,...")
    p.add_argument("--tol", type=float, help="certificate tolerance")
    p.add_argument("--json", action="store_true", help="print a JSON record instead of text")

    p = sub.add_parser("oracle", help="brute-force grid minimization")
    common(p)
    p.add_argument("--grid", type=int, help="grid points per axis")
    p.add_argument("--rounds", type=int, help="refinement rounds")
    return ap


def _solve(args, sf, out) -> int:
    sc = sf.scenario
    cfg = sf.solver or SolverConfig()
    kw = {}
    try:
        if args.iters is not None:
            kw["max_iters"] = args.iters
        if args.step is not None:
            kw["schedule"] = parse_schedule(args.step)
        if args.stride is not None:
            kw["trace_stride"] = args.stride
        if args.start is not None:
            kw["start"] = _vector_arg(args.start, sc.dim, "--start")
        cfg = replace(cfg, **kw)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.plot and sc.dim != 2:
        raise UsageError("--plot is only available for 2-D scenarios")
    try:
        res = solve(sc, cfg)
    except ValueError as e:
        raise NumericError(str(e)) from None
    p = args.precision
    if not check_existence(sc):
        print(EXISTENCE_WARNING, file=out)
    for w in res.warnings:
        print(f"warning: {w}", file=out)
    print(f"iterations: {res.iterations}", file=out)
    print(f"best_k: {res.best_k}", file=out)
    print(f"best_x: {_fmt(res.best_x, p)}", file=out)
    print(f"V: {res.best_value:.{p}f}", file=out)
    if res.stopped_early:
        print("stopped: best value stagnated", file=out)
    if args.trace:
        write_trace_csv(res, args.trace)
    if args.plot:
        svg.write(sc, args.plot, [r.x for r in res.trace])
    return EXIT_OK


def _auto_directions(sc, x):
    """Tangent directions for affine constraints and ball boundaries, else None."""
    try:
        basis = geo.tangent_basis(sc.constraint, x)
    except ValueError:
        return None
    return [tuple(b) for b in basis] if len(basis) else None


def _certify(args, sf, out) -> int:
    sc = sf.scenario
    x = _vector_arg(args.at, sc.dim, "--at")
    settings = sf.certify or scenario_file.CertifySettings()
    tol = args.tol if args.tol is not None else settings.tolerance
    dirs = settings.directions if settings.directions is not None else _auto_directions(sc, x)
    try:
        cert = stationarity_residual(sc, x, tol=tol, directions=dirs)
    except (InfeasiblePointError, InapplicableError) as e:
        raise NumericError(str(e)) from None
    two = None
    omega = sc.constraint
    if sc.n == 2 and isinstance(omega, geo.Affine) and omega.codim == 1 and cert.residual is not None:
        # the normal line of a hyperplane
        q, _ = np.linalg.qr(np.column_stack([*np.array(omega.directions).reshape(-1, sc.dim), np.eye(sc.dim)]))
        two = two_set_check(sc, x, q[:, sc.dim - 1], tol=max(tol, 1e-12))

    if args.json:
        rec = cert.to_record()
        if two is not None:
            rec["two_set"] = {"necessary_holds": two.necessary_holds,
                              "sufficient_holds": two.sufficient_holds,
                              "inapplicable": two.inapplicable or None}
        json.dump(rec, out, indent=2)
        out.write("\n")
        return EXIT_OK
    p = args.precision
    print(f"point: {_fmt(cert.point, p)}", file=out)
    for i, a in enumerate(cert.unit_vectors, 1):
        print(f"a_{i}: {_fmt(a, p)}", file=out)
    if cert.residual is not None:
        print(f"residual: {cert.residual:.{p}e}", file=out)
    for u, s in cert.cosine_sums or ():
        print(f"cosine_sum along {_fmt(u, p)}: {s:.{p}e}", file=out)
    if two is not None and not two.inapplicable:
        print(f"two_set: necessary={two.necessary_holds} sufficient={two.sufficient_holds}", file=out)
    line = f"verdict: {cert.verdict.value} (tol {cert.tol:g})"
    if cert.reason:
        line += f": {cert.reason}"
    print(line, file=out)
    return EXIT_OK


def _oracle(args, sf, out) -> int:
    sc = sf.scenario
    cfg = sf.oracle or OracleConfig()
    try:
        if args.grid is not None:
            cfg = replace(cfg, grid_points_per_axis=args.grid)
        if args.rounds is not None:
            cfg = replace(cfg, refinement_rounds=args.rounds)
    except ValueError as e:
        raise UsageError(str(e)) from None
    try:
        res = grid_solve(sc, cfg)
    except OracleError as e:
        raise NumericError(str(e)) from None
    p = args.precision
    print(f"point: {_fmt(res.point, p)}", file=out)
    print(f"value: {res.value:.{p}f}", file=out)
    print(f"error_bound: {res.error_bound:.{p}e}", file=out)
    return EXIT_OK


COMMANDS = {"solve": _solve, "certify": _certify, "oracle": _oracle}


_VECTOR_FLAGS = ("--at", "--start")


def _join_negative_vectors(argv: list[str]) -> list[str]:
    """Rewrite ``--at -1,2`` as ``--at=-1,2``.

    argparse takes any token starting with ``-`` that is not a plain number
    for an option, and ``-1,2`` is not a plain number.
    """
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VECTOR_FLAGS and i + 1 < len(argv) and argv[i + 1][:1] == "-":
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_join_negative_vectors(argv))
        sf = scenario_file.load(args.scenario)
        return COMMANDS[args.command](args, sf, out)
    except (UsageError, scenario_file.ScenarioError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except NumericError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERIC


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
