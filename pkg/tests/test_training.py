"""
/tests/test_training.py

训练配置、目标函数、Adam 与完整训练流程测试（缩小的网络与点数）
"""
import sys
import os

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from autodiff import Tape, central_difference
from network import NetworkConfig, ParameterSet, init_params
from problem import build_collocation, make_experiment, parse_problem
from solver_logging import LogManager
from training import (
    ConfigurationError,
    HISTORY_COLUMNS,
    Trainer,
    TrainConfig,
    TrainState,
    TrainingDivergenceError,
    adam_step,
    cost,
    evaluate_cost,
    sample_test_points,
    sample_train_points,
    train,
)

SMALL_NET = [1, 4, 4, 1]


def _small_config(**overrides) -> TrainConfig:
    settings = dict(m1=10, m2=5, n1=8, n2=8, adam_iters=20, lbfgs_max_iters=10)
    settings.update(overrides)
    return TrainConfig(**settings).validate()


def _quadratic_net(constant_coeff: float):
    """[1,3,1] 网络精确表示 x^2 + c：(2/3) L2 + (c + 1/3) L0"""
    config = NetworkConfig([1, 3, 1], [0, 1, 2]).validate()
    params = ParameterSet([np.ones((3, 1)), np.array([[constant_coeff + 1.0 / 3.0, 0.0, 2.0 / 3.0]])],
                          [np.zeros(3), np.zeros(1)])
    return config, params


def test_table1_defaults():
    config = TrainConfig.table1(1)
    assert (config.m1, config.m2, config.n1, config.n2) == (500, 100, 50, None)
    assert config.adam_iters == 5000
    assert config.fredholm_order == 0
    assert TrainConfig.table1(3, m1=20).m1 == 20
    with pytest.raises(ConfigurationError):
        TrainConfig.table1(7)


@pytest.mark.parametrize("overrides", [
    {"m1": 0},
    {"n1": -1},
    {"adam_iters": -1},
    {"adam_lr": 0.0},
    {"lbfgs_memory": 0},
    {"loss_weights": (0.0, 0.0)},
    {"loss_weights": (-1.0, 1.0)},
    {"supervised": False, "loss_weights": (1.0, 0.0)},
    {"sampling": "sobol"},
    {"workers": 0},
])
def test_invalid_train_configs(overrides):
    with pytest.raises(ConfigurationError):
        TrainConfig(**overrides).validate()


def test_unsupervised_drops_data_weight():
    config = TrainConfig(supervised=False, loss_weights=(3.0, 2.0))
    assert config.effective_weights() == (0.0, 2.0)
    assert config.replace(m1=7).m1 == 7


def test_sampling():
    config = TrainConfig(m1=11, m2=4)
    assert np.allclose(sample_train_points(config), np.linspace(0.0, 1.0, 11))
    assert np.allclose(sample_test_points(config), [0.125, 0.375, 0.625, 0.875])
    random_config = TrainConfig(m1=30, sampling="random", seed=4)
    points = sample_train_points(random_config)
    assert np.all(np.diff(points) >= 0)
    assert points.min() >= 0.0 and points.max() <= 1.0
    assert np.array_equal(points, sample_train_points(random_config))


def test_default_test_points_avoid_training_points():
    config = TrainConfig()
    train_points = sample_train_points(config)
    test_points = sample_test_points(config)
    assert np.min(np.abs(test_points[:, None] - train_points[None, :])) > 1e-6


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=600), st.integers(min_value=1, max_value=300))
def test_test_grid_never_meets_training_grid(m1, m2):
    config = TrainConfig(m1=m1, m2=m2)
    train_points = sample_train_points(config)
    test_points = sample_test_points(config)
    assert len(test_points) == m2
    assert test_points.min() > 0.0 and test_points.max() < 1.0
    assert np.min(np.abs(test_points[:, None] - train_points[None, :])) > 1e-9


def test_test_grid_shifts_when_half_offset_collides():
    # m1-1 = 2*m2 时半间距偏移的测试点全部落在训练网格上
    config = TrainConfig(m1=201, m2=100)
    test_points = sample_test_points(config)
    assert np.allclose(test_points[:2], [0.0075, 0.0175])
    assert len(np.intersect1d(test_points, sample_train_points(config))) == 0


@pytest.mark.parametrize("experiment_id,constant", [(3, -2.0), (4, 0.5)])
def test_exact_network_has_zero_cost(experiment_id, constant):
    problem, _ = make_experiment(experiment_id)
    net_config, params = _quadratic_net(constant)
    config = TrainConfig(m1=20, n1=50, n2=50)
    points = np.linspace(0.0, 1.0, config.m1)
    colloc = build_collocation(points, config.n1, config.n2, problem)
    evaluation = evaluate_cost(problem, config, net_config, params, points, colloc)
    assert evaluation.total < 1e-20
    residual_only = config.replace(loss_weights=(1.0, 0.0))
    assert evaluate_cost(problem, residual_only, net_config, params, points, colloc).total < 1e-20


def test_cost_scales_with_weights():
    problem, _ = make_experiment(3)
    net_config = NetworkConfig(SMALL_NET, seed=1).validate()
    params = init_params(net_config)
    points = np.linspace(0.0, 1.0, 8)
    colloc = build_collocation(points, 6, 6, problem)
    single = cost(problem, TrainConfig(loss_weights=(1.0, 1.0)), params, points, colloc, Tape(), net_config)
    double = cost(problem, TrainConfig(loss_weights=(2.0, 2.0)), params, points, colloc, Tape(), net_config)
    assert double.value == 2.0 * single.value


def test_supervised_cost_requires_exact_solution():
    problem = parse_problem("xi1 = 1; xi2 = 0; g = one; k1 = one;")
    net_config = NetworkConfig(SMALL_NET).validate()
    with pytest.raises(ConfigurationError):
        Trainer(problem, net_config, _small_config())
    trainer = Trainer(problem, net_config, _small_config(supervised=False))
    evaluation = trainer.evaluate(init_params(net_config))
    assert evaluation.data_mse == 0.0
    assert evaluation.total == evaluation.residual_mse


@pytest.mark.parametrize("experiment_id", [1, 3, 4])
def test_cost_gradient_matches_central_difference(experiment_id):
    problem, _ = make_experiment(experiment_id)
    net_config = NetworkConfig(SMALL_NET, seed=experiment_id).validate()
    params = init_params(net_config)
    params = params.unflatten(params.flatten() + 0.05)
    config = _small_config(m1=6)
    points = np.linspace(0.0, 1.0, config.m1)
    colloc = build_collocation(points, config.n1, config.n2, problem)
    evaluation = evaluate_cost(problem, config, net_config, params, points, colloc)
    total = lambda v: evaluate_cost(problem, config, net_config, params.unflatten(v), points, colloc).total
    fd = central_difference(total, params.flatten())
    assert np.allclose(evaluation.gradient, fd, rtol=1e-5, atol=1e-8)


def test_worker_chunks_reduce_to_same_cost():
    problem, _ = make_experiment(3)
    net_config = NetworkConfig(SMALL_NET, seed=2).validate()
    params = init_params(net_config)
    points = np.linspace(0.0, 1.0, 13)
    colloc = build_collocation(points, 8, 8, problem)
    serial = evaluate_cost(problem, _small_config(), net_config, params, points, colloc)
    with ThreadPoolExecutor(max_workers=3) as pool:
        parallel = evaluate_cost(problem, _small_config(workers=3), net_config, params, points, colloc, pool)
        again = evaluate_cost(problem, _small_config(workers=3), net_config, params, points, colloc, pool)
    assert parallel.total == pytest.approx(serial.total, rel=1e-12)
    assert np.allclose(parallel.gradient, serial.gradient, rtol=1e-10, atol=1e-14)
    assert parallel.total == again.total
    assert np.array_equal(parallel.gradient, again.gradient)


def _one_weight_state(value: float) -> TrainState:
    return TrainState(ParameterSet([np.array([[value]])], [np.array([0.0])]))


def test_adam_first_step():
    state = adam_step(_one_weight_state(1.0), np.array([2.0, 0.0]), lr=0.1)
    assert state.params.weights[0][0, 0] == pytest.approx(0.9, abs=1e-6)
    assert state.params.biases[0][0] == 0.0
    assert state.step == 1
    assert np.all(state.second_moment >= 0)


def test_adam_zero_gradient_keeps_parameters():
    state = adam_step(_one_weight_state(0.4), np.zeros(2))
    assert state.params.weights[0][0, 0] == 0.4


def test_adam_is_deterministic_and_shares_history():
    start = _one_weight_state(1.0)
    start.record(0, 0.0, 1.0, 1.0)
    a = adam_step(start, np.array([0.3, -0.7]))
    b = adam_step(start, np.array([0.3, -0.7]))
    assert a.params == b.params
    assert a.history is start.history


def test_snapshot_is_independent():
    state = _one_weight_state(1.0)
    state.record(0, 0.0, 1.0, 1.0)
    copy = state.snapshot()
    state.record(1, 0.0, 0.5, 0.5)
    state.params.weights[0][0, 0] = 5.0
    state.first_moment[0] = 3.0
    assert len(copy.history) == 1
    assert copy.params.weights[0][0, 0] == 1.0
    assert copy.first_moment[0] == 0.0
    assert copy.step == state.step


def test_adam_rejects_non_finite_gradient():
    state = _one_weight_state(1.0)
    with pytest.raises(TrainingDivergenceError) as info:
        adam_step(state, np.array([np.nan, 0.0]))
    assert info.value.state is state
    with pytest.raises(ValueError):
        adam_step(state, np.zeros(3))


def test_history_must_increase(tmp_path):
    state = _one_weight_state(1.0)
    state.record(0, 1.0, 2.0, 3.0)
    with pytest.raises(ValueError):
        state.record(0, 1.0, 2.0, 3.0)
    path = tmp_path / "history.csv"
    state.write_history_csv(str(path))
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(HISTORY_COLUMNS)
    assert lines[1] == "0,1.0,2.0,3.0"


def test_zero_budget_returns_initial_parameters():
    problem, _ = make_experiment(3)
    net_config = NetworkConfig(SMALL_NET).validate()
    params, state = train(problem, net_config, _small_config(adam_iters=0, lbfgs_max_iters=0))
    assert params == init_params(net_config)
    assert len(state.history) == 1


def test_training_reduces_cost(tmp_path):
    problem, _ = make_experiment(3)
    net_config = NetworkConfig(SMALL_NET, seed=3).validate()
    config = _small_config(adam_iters=30, lbfgs_max_iters=15, log_every=10)
    log_manager = LogManager("train-test", str(tmp_path))
    trainer = Trainer(problem, net_config, config)
    trainer.set_log_manager(log_manager)
    params, state = trainer.train()
    log_manager.close()

    iterations = [entry.iteration for entry in state.history]
    assert iterations[:31] == list(range(31))
    assert all(b > a for a, b in zip(iterations, iterations[1:]))
    best_adam = min(entry.total for entry in state.history[:31])
    assert trainer.evaluate(params).total <= best_adam
    assert state.history[-1].total < state.history[0].total
    assert params.is_finite()

    lbfgs_totals = trainer.lbfgs_result.history
    assert all(b <= a for a, b in zip(lbfgs_totals, lbfgs_totals[1:]))
    log_text = (tmp_path / "train-test.log").read_text(encoding="utf-8")
    assert "[TRAINER]" in log_text


def test_adam_loss_decreases_early_on_experiment_three():
    problem, _ = make_experiment(3)
    net_config = NetworkConfig(SMALL_NET, seed=0).validate()
    config = _small_config(m1=20, adam_iters=100, lbfgs_max_iters=0)
    _, state = Trainer(problem, net_config, config).train()
    totals = [entry.total for entry in state.history[:101]]
    assert len(totals) == 101
    decreases = sum(b < a for a, b in zip(totals, totals[1:]))
    assert decreases >= 95


def test_training_is_reproducible():
    problem, _ = make_experiment(1)
    net_config = NetworkConfig(SMALL_NET, seed=5).validate()
    config = _small_config(adam_iters=5, lbfgs_max_iters=3)
    first, _ = train(problem, net_config, config)
    second, _ = train(problem, net_config, config)
    assert first == second


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
