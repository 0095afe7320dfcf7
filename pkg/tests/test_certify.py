import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from genheron.certify import (
    InapplicableError,
    InfeasiblePointError,
    Verdict,
    cosine_sums,
    stationarity_residual,
    two_set_check,
)
from genheron.geometry import Affine, Ball, Singleton, project, tangent_basis
from genheron.objective import Scenario, evaluate
from genheron.oracle import OracleConfig, grid_solve
from genheron.solver import Harmonic, SolverConfig, solve

from oracles import (
    CLASSICAL,
    CUBES_BALL,
    SQUARES_DISK,
    X_AXIS,
    golden_section,
    heron_reflection,
    random_ball_scenario,
)

OPPOSITE = Scenario(2, X_AXIS, (Singleton((1, 1)), Singleton((1, -1))))


# -- worked examples -----------------------------------------------------------


def test_classical_heron_optimum_certified():
    xopt, value = heron_reflection((0, 1), (4, 3), (0, 0), (1, 0))
    np.testing.assert_allclose(xopt, (1, 0), atol=1e-15)
    assert value == pytest.approx(math.sqrt(32))
    cert = stationarity_residual(CLASSICAL, (1, 0))
    assert cert.verdict is Verdict.CERTIFIED_OPTIMAL
    assert cert.residual <= 1e-15
    np.testing.assert_allclose(cert.unit_vectors[0], np.array([1, -1]) / math.sqrt(2))
    np.testing.assert_allclose(cert.unit_vectors[1], np.array([-1, -1]) / math.sqrt(2))


def test_classical_heron_origin_not_stationary():
    t = golden_section(lambda s: evaluate(CLASSICAL, (s, 0)), -10, 10)
    assert t == pytest.approx(1.0, abs=1e-6)
    cert = stationarity_residual(CLASSICAL, (0, 0))
    assert cert.verdict is Verdict.NOT_STATIONARY
    # a1 = (0,-1), a2 = (-4,-3)/5; the along-line part of -(a1+a2) is 4/5
    assert cert.residual == pytest.approx(0.8, abs=1e-15)
    assert cert.residual > 0.2


def test_opposite_sides():
    cert = stationarity_residual(OPPOSITE, (1, 0))
    assert cert.residual == 0.0
    np.testing.assert_array_equal(cert.unit_vectors[0] + cert.unit_vectors[1], (0, 0))


def test_cosine_sum_examples():
    assert cosine_sums(CLASSICAL, (1, 0), [(1, 0)]) == [pytest.approx(0, abs=1e-15)]
    foot = Scenario(2, X_AXIS, (Singleton((2.5, 3)),))
    assert cosine_sums(foot, (2.5, 0), [(1, 0)]) == [0.0]
    # hand evaluation with a1 = (0,-1), a2 = (-4,-3)/5
    assert cosine_sums(CLASSICAL, (0, 0), [(1, 0)]) == [pytest.approx(-0.8, abs=1e-15)]


def test_two_set_examples():
    r = two_set_check(CLASSICAL, (1, 0), (0, 1))
    assert r.necessary_holds and r.sufficient_holds and not r.opposite
    assert r.cos1 == pytest.approx(-1 / math.sqrt(2)) and r.cos2 == pytest.approx(-1 / math.sqrt(2))
    r = two_set_check(OPPOSITE, (1, 0), (0, 1))
    assert r.opposite and r.necessary_holds and r.sufficient_holds
    r = two_set_check(CLASSICAL, (0, 0), (0, 1))
    assert r.cos1 == pytest.approx(-1) and r.cos2 == pytest.approx(-0.6)
    assert not r.necessary_holds and not r.sufficient_holds


def test_two_set_equal_vectors_not_sufficient():
    # both targets seen in the same direction, which is not normal to the line
    sc = Scenario(2, X_AXIS, (Singleton((1, 1)), Singleton((2, 2))))
    r = two_set_check(sc, (0, 0), (0, 1))
    assert r.necessary_holds and not r.sufficient_holds
    assert stationarity_residual(sc, (0, 0)).residual > 1


def test_two_set_in_three_dimensions_only_necessary():
    plane = Affine((0, 0, 0), ((1, 0, 0), (0, 1, 0)))
    sc = Scenario(3, plane, (Singleton((0, 0, 1)), Singleton((2, 0, 1))))
    r = two_set_check(sc, (1, 0, 0), (0, 0, 1))
    assert r.necessary_holds and r.sufficient_holds is None


def test_two_set_inapplicable_cases():
    assert two_set_check(Scenario(2, Ball((0, 0), 1), CLASSICAL.targets), (1, 0), (1, 0)).inapplicable
    assert two_set_check(CLASSICAL, (1, 0), (1, 1)).inapplicable
    inside = Scenario(2, X_AXIS, (Ball((0, 0), 1), Singleton((4, 3))))
    r = two_set_check(inside, (0, 0), (0, 1))
    assert r.inapplicable and r.necessary_holds is None


def test_errors():
    with pytest.raises(InfeasiblePointError):
        stationarity_residual(CLASSICAL, (1, 1))
    with pytest.raises(ValueError):
        cosine_sums(CLASSICAL, (1, 0), [(0, 0)])
    with pytest.raises(ValueError):
        two_set_check(SQUARES_DISK, (-3, 5.5), (0, 1))
    with pytest.raises(ValueError):
        two_set_check(CLASSICAL, (1, 0), (0, 0))
    inside = Scenario(2, X_AXIS, (Ball((0, 0), 1), Singleton((4, 3))))
    with pytest.raises(InapplicableError):
        cosine_sums(inside, (0, 0), [(1, 0)])


def test_inside_target_is_inapplicable():
    inside = Scenario(2, X_AXIS, (Ball((0, 0), 1), Singleton((4, 3))))
    cert = stationarity_residual(inside, (0.5, 0))
    assert cert.verdict is Verdict.INAPPLICABLE
    assert cert.residual is None and "target 0" in cert.reason
    assert cert.to_record()["verdict"] == "inapplicable"


def test_ball_tangent_directions():
    res = solve(SQUARES_DISK, SolverConfig(max_iters=100_000, start=(-3, 5.5), trace_stride=100_000))
    T = tangent_basis(SQUARES_DISK.constraint, res.best_x)
    cert = stationarity_residual(SQUARES_DISK, res.best_x, directions=T)
    (u, s), = cert.cosine_sums
    # on a ball boundary the tangential part of -sum a_i is the whole residual
    assert abs(s) == pytest.approx(cert.residual, rel=1e-6)
    rec = cert.to_record()
    assert set(rec) == {"point", "unit_vectors", "residual", "verdict", "tol", "cosine_sums"}


# -- properties ----------------------------------------------------------------


@st.composite
def affine_scenarios(draw):
    dim = draw(st.integers(2, 4))
    m = draw(st.integers(1, dim - 1))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    omega = Affine(tuple(rng.uniform(-3, 3, dim)), tuple(map(tuple, rng.normal(size=(m, dim)))))
    n = draw(st.integers(1, 4))
    targets = []
    for _ in range(n):
        c = tuple(rng.uniform(-6, 6, dim))
        targets.append(Singleton(c) if rng.random() < 0.5 else Ball(c, rng.uniform(0.1, 1)))
    x = project(omega, rng.uniform(-6, 6, dim))
    return Scenario(dim, omega, tuple(targets)), x


@given(affine_scenarios())
def test_affine_residual_matches_cosine_sums(args):
    sc, x = args
    cert = stationarity_residual(sc, x)
    if cert.verdict is Verdict.INAPPLICABLE:
        return
    m = len(sc.constraint.directions)
    c = np.abs(cosine_sums(sc, x, sc.constraint.directions))
    # with an orthonormal basis of L, the residual is the norm of the sums
    assert c.max() <= cert.residual + 1e-12
    assert cert.residual <= math.sqrt(m) * c.max() + 1e-12
    assert cert.residual == pytest.approx(math.hypot(*c), rel=1e-9, abs=1e-12)


@given(affine_scenarios(), st.lists(st.floats(1e-3, 1e3), min_size=3, max_size=3))
def test_cosine_sums_scale_invariant(args, scales):
    sc, x = args
    if stationarity_residual(sc, x).verdict is Verdict.INAPPLICABLE:
        return
    dirs = [np.array(d) for d in sc.constraint.directions]
    base = cosine_sums(sc, x, dirs)
    scaled = cosine_sums(sc, x, [s * d for s, d in zip(scales, dirs)])
    np.testing.assert_allclose(scaled, base, atol=1e-12, rtol=0)


def test_verdict_agrees_with_cosines_at_constructed_optima():
    # two points on one side of a line: certified iff all cosine sums vanish
    rng = np.random.default_rng(7)
    for _ in range(50):
        base = rng.uniform(-3, 3, 2)
        ang = rng.uniform(0, np.pi)
        u = np.array([np.cos(ang), np.sin(ang)])
        n = np.array([-u[1], u[0]])
        A = base + rng.uniform(-4, 4) * u + rng.uniform(0.5, 4) * n
        B = base + rng.uniform(-4, 4) * u + rng.uniform(0.5, 4) * n
        sc = Scenario(2, Affine(tuple(base), (tuple(u),)), (Singleton(tuple(A)), Singleton(tuple(B))))
        xopt, _ = heron_reflection(A, B, base, u)
        for x, expect in ((xopt, True), (xopt + 0.5 * u, False)):
            x = project(sc.constraint, x)
            cert = stationarity_residual(sc, x)
            cos_ok = all(abs(c) <= cert.tol for c in cosine_sums(sc, x, [u]))
            assert cert.certified == cos_ok == expect


def test_certificate_sound_against_oracle():
    rng = np.random.default_rng(11)
    for _ in range(6):
        sc = random_ball_scenario(rng)
        ref = grid_solve(sc, OracleConfig())
        ball = sc.constraint
        candidates = []
        for ang in np.linspace(0, 2 * np.pi, 24, endpoint=False):
            candidates.append(np.array(ball.center) + ball.radius * np.array([np.cos(ang), np.sin(ang)]))
        candidates += list(rng.uniform(-1, 1, (8, 2)) * ball.radius * 0.6 + ball.center)
        res = solve(sc, SolverConfig(schedule=Harmonic(10.0), max_iters=100_000, trace_stride=100_000))
        candidates.append(res.best_x)
        seen_small = seen_large = 0
        for x in candidates:
            r = stationarity_residual(sc, x).residual
            if r <= 1e-6:
                seen_small += 1
                assert evaluate(sc, x) <= ref.value + ref.error_bound
            elif r >= 0.1:
                seen_large += 1
                assert evaluate(sc, x) - ref.value > 0
        assert seen_large > 0


def test_certificate_small_residual_branch():
    # the classical optimum is exact, so the low-residual branch is exercised
    ref = grid_solve(CLASSICAL, OracleConfig(bounding_box=((-5, 5), (-5, 5))))
    cert = stationarity_residual(CLASSICAL, (1, 0))
    assert cert.residual <= 1e-6
    assert evaluate(CLASSICAL, (1, 0)) <= ref.value + ref.error_bound


@pytest.mark.parametrize(
    "sc, cfg",
    [
        (SQUARES_DISK, dict(start=(-3, 5.5), projection="radial")),
        (SQUARES_DISK, dict(start=(-3, 5.5))),
        (CUBES_BALL, dict(start=(2, 2, 0), projection="radial")),
        (CLASSICAL, dict(start=(0, 0))),
    ],
    ids=["squares-radial", "squares-metric", "cubes-radial", "classical"],
)
def test_solver_certificate_agreement(sc, cfg):
    res = []
    for n in (1000, 100_000):
        out = solve(sc, SolverConfig(max_iters=n, trace_stride=n, **cfg))
        res.append(stationarity_residual(sc, out.best_x).residual)
    assert res[1] <= 1e-2
    assert res[1] < res[0]
