"""
/tests/test_problem.py

积分方程实例、配点集与残差装配测试
"""
import sys
import os

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from problem import (
    EXPERIMENT_IDS,
    ProblemDefinitionError,
    ProblemSpec,
    build_collocation,
    exact_surrogate,
    make_experiment,
    residual,
    residual_batch,
)
from problem.registry import FORCING, KERNELS, NONLINEARITIES, closest_name, lookup


def test_experiment_exact_values():
    _, exact1 = make_experiment(1)
    _, exact3 = make_experiment(3)
    _, exact4 = make_experiment(4)
    assert exact1(0.0) == 1.0
    assert exact3(0.4) == pytest.approx(-1.84, abs=1e-15)
    assert exact4(1.0) == pytest.approx(1.5, abs=1e-15)


def test_unknown_experiment_rejected():
    with pytest.raises(ValueError):
        make_experiment(5)


def test_exp1_exact_residual_single_point():
    problem, _ = make_experiment(1)
    colloc = build_collocation([0.5], 50, 50, problem)
    value = residual(problem, exact_surrogate(problem), 0.5, colloc).value
    assert abs(value) < 1e-12


def test_exp3_exact_residual_single_point():
    problem, _ = make_experiment(3)
    colloc = build_collocation([0.7], 50, 50, problem)
    value = residual(problem, exact_surrogate(problem), 0.7, colloc).value
    assert abs(value) < 1e-12


@pytest.mark.parametrize("experiment_id", EXPERIMENT_IDS)
def test_exact_solution_satisfies_discrete_equation(experiment_id):
    problem, _ = make_experiment(experiment_id)
    points = np.sort(np.random.default_rng(experiment_id).uniform(0.0, 1.0, 50))
    colloc = build_collocation(points, 50, 50, problem)
    values = np.asarray(residual_batch(problem, exact_surrogate(problem), colloc).value)
    assert values.shape == (len(colloc),)
    assert np.max(np.abs(values)) < 1e-10


@pytest.mark.parametrize("experiment_id", EXPERIMENT_IDS)
def test_single_point_matches_batch(experiment_id):
    problem, _ = make_experiment(experiment_id)
    points = np.linspace(0.05, 1.0, 6)
    colloc = build_collocation(points, 12, 12, problem)
    surrogate = lambda z: np.asarray(np.sin(3.0 * np.asarray(z)) + 0.5)
    batch = np.asarray(residual_batch(problem, surrogate, colloc).value)
    single = [residual(problem, surrogate, x, colloc).value for x in points]
    assert np.allclose(batch, single, atol=1e-12)


def test_residual_converges_with_quadrature_order():
    problem, _ = make_experiment(1)
    errors = []
    for order in (2, 4, 8, 16):
        colloc = build_collocation([1.0], order, order, problem)
        errors.append(abs(residual(problem, exact_surrogate(problem), 1.0, colloc).value))
    for previous, current in zip(errors, errors[1:]):
        assert current <= previous or current < 1e-14


def test_regular_kernel_at_origin_has_no_volterra_term():
    problem, _ = make_experiment(1)
    colloc = build_collocation([0.0, 0.5], 8, 8, problem)
    surrogate = lambda z: np.full(np.shape(z), 2.0) if np.ndim(z) else 2.0
    value = residual_batch(problem, surrogate, colloc).value
    # R(0) = -y(0) + g(0)
    assert value[0] == pytest.approx(-2.0 + 1.0, abs=1e-15)
    assert residual(problem, surrogate, 0.0, colloc).value == pytest.approx(-1.0, abs=1e-15)


def test_singular_problem_excludes_origin():
    problem, _ = make_experiment(4)
    colloc = build_collocation([0.0, 1e-9, 0.5, 1.0], 8, 8, problem)
    assert list(colloc.points) == [0.5, 1.0]
    with pytest.raises(ValueError):
        residual(problem, exact_surrogate(problem), 0.0, colloc)


def test_singular_kernel_without_flag_rejected():
    with pytest.raises(ProblemDefinitionError):
        ProblemSpec(1.0, 0.0, FORCING["one"], k1=KERNELS["half_inverse_x"],
                    phi1=NONLINEARITIES["square"])


def test_both_coefficients_zero_rejected():
    with pytest.raises(ProblemDefinitionError) as info:
        ProblemSpec(0.0, 0.0, FORCING["one"])
    assert info.value.error_list[1] == "未知位置"


def test_fredholm_only_problem():
    problem = ProblemSpec(0.0, 1.0, FORCING["zero"], k2=KERNELS["one"])
    colloc = build_collocation([0.25, 0.75], 6, 6, problem)
    # y = 1: R = -1 + int_0^1 1 ds = 0
    values = residual_batch(problem, lambda z: np.ones(np.shape(z)), colloc).value
    assert np.allclose(values, 0.0, atol=1e-14)


@pytest.mark.parametrize("points", [[0.5, 0.2], [-0.1, 0.5], [0.5, 1.2], [0.1, np.nan]])
def test_bad_collocation_points_rejected(points):
    problem, _ = make_experiment(1)
    with pytest.raises(ValueError):
        build_collocation(points, 8, 8, problem)


def test_collocation_arrays_are_read_only():
    problem, _ = make_experiment(3)
    colloc = build_collocation(np.linspace(0.0, 1.0, 5), 6, 6, problem)
    assert colloc.volterra_coeff.shape == (5, 7)
    assert colloc.fredholm_coeff.shape == (5, 7)
    with pytest.raises(ValueError):
        colloc.g_values[0] = 1.0


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-2.0, max_value=2.0), st.floats(min_value=0.0, max_value=1.0))
def test_residual_is_linear_in_forcing(shift, x):
    problem, exact = make_experiment(3)
    shifted = ProblemSpec(problem.xi1, problem.xi2,
                          lambda z: problem.g(z) + shift * np.cos(z),
                          k1=problem.k1, k2=problem.k2, phi1=problem.phi1, phi2=problem.phi2,
                          exact=exact)
    colloc = build_collocation([x], 10, 10, problem)
    surrogate = exact_surrogate(problem)
    base = residual(problem, surrogate, x, colloc).value
    moved = residual(shifted, surrogate, x, colloc).value
    assert moved - base == pytest.approx(shift * np.cos(x), abs=1e-12)


def test_registry_lookup_suggests_name():
    assert lookup("kernel", "diff") is KERNELS["diff"]
    with pytest.raises(KeyError) as info:
        lookup("kernel", "dif")
    assert "diff" in str(info.value)
    assert closest_name("sqare", sorted(NONLINEARITIES)) == "square"
    assert closest_name("completely_unrelated", sorted(NONLINEARITIES)) is None


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
