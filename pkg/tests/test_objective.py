import numpy as np
import pytest
from hypothesis import given, strategies as st

from genheron.geometry import Affine, Ball, Box, DimensionError, Halfspace, Singleton
from genheron.objective import Scenario, check_existence, evaluate, evaluate_many, subgradient

from conftest import convex_sets, vectors
from oracles import CUBES_BALL, SQUARES_DISK, clamp_residual


def test_evaluate_reference_start_values():
    assert evaluate(SQUARES_DISK, (-3, 5.5)) == pytest.approx(30.99674, abs=1e-5)
    assert evaluate(CUBES_BALL, (2, 2, 0)) == pytest.approx(27.35281, abs=1e-5)


def test_evaluate_zero_inside_all_targets():
    sc = Scenario(2, Ball((0, 0), 5), (Box((0, 0), (1, 1)), Ball((0.5, 0), 1)))
    assert evaluate(sc, (0.2, 0.1)) == 0.0
    np.testing.assert_array_equal(subgradient(sc, (0.2, 0.1)), (0, 0))


def test_subgradient_single_point():
    sc = Scenario(2, Ball((0, 0), 10), (Singleton((0, 0)),))
    np.testing.assert_allclose(subgradient(sc, (3, 4)), (0.6, 0.8))


def test_subgradient_matches_clamp_oracle():
    x = np.array([-3.0, 5.5])
    expected = np.zeros(2)
    for t in SQUARES_DISK.targets:
        r = clamp_residual(t.center, t.half_widths, x)
        expected += r / np.linalg.norm(r)
    np.testing.assert_allclose(subgradient(SQUARES_DISK, x), expected, atol=1e-14)


def test_check_existence():
    line = Affine((0, 0), ((1, 0),))
    assert check_existence(SQUARES_DISK)
    assert check_existence(Scenario(2, line, (Box((0, 3), (1, 1)), Halfspace((0, 1), 5))))
    assert not check_existence(
        Scenario(2, Halfspace((1, 0), 0), (Halfspace((0, 1), 0), Halfspace((-1, -1), 3)))
    )


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(2, Ball((0, 0), 1), ())
    with pytest.raises(DimensionError):
        Scenario(2, Ball((0, 0), 1), (Singleton((1, 2, 3)),))
    with pytest.raises(DimensionError):
        evaluate(SQUARES_DISK, (1, 2, 3))


@st.composite
def scenarios(draw):
    dim = draw(st.integers(1, 3))
    n = draw(st.integers(1, 5))
    constraint = draw(convex_sets(dim=dim))
    targets = tuple(draw(convex_sets(dim=dim)) for _ in range(n))
    return Scenario(dim, constraint, targets)


@st.composite
def scenario_and_points(draw):
    sc = draw(scenarios())
    return sc, draw(vectors(sc.dim)), draw(vectors(sc.dim))


@given(scenario_and_points())
def test_lipschitz(args):
    sc, x, y = args
    assert abs(evaluate(sc, x) - evaluate(sc, y)) <= sc.n * np.linalg.norm(x - y) + 1e-9


@given(scenario_and_points())
def test_subgradient_inequality(args):
    sc, x, y = args
    g = subgradient(sc, x)
    assert np.linalg.norm(g) <= sc.n + 1e-12
    assert np.dot(g, y - x) <= evaluate(sc, y) - evaluate(sc, x) + 1e-9


@given(scenario_and_points(), st.floats(0, 1))
def test_convex_along_segments(args, lam):
    sc, x, y = args
    mid = lam * x + (1 - lam) * y
    assert evaluate(sc, mid) <= lam * evaluate(sc, x) + (1 - lam) * evaluate(sc, y) + 1e-9


@given(scenario_and_points())
def test_vectorized_objective_agrees(args):
    sc, x, y = args
    vals = evaluate_many(sc, np.stack([x, y]))
    assert vals[0] == pytest.approx(evaluate(sc, x), rel=1e-12, abs=1e-9)
    assert vals[1] == pytest.approx(evaluate(sc, y), rel=1e-12, abs=1e-9)
