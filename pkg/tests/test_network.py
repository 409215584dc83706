"""
/tests/test_network.py

网络结构配置、参数初始化、前向传播与参数文件测试
"""
import sys
import os

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import numpy as np
import pytest

from autodiff import Tape, TapeError, check_gradient
from network import (
    ConfigurationError,
    NetworkConfig,
    ParameterSet,
    bind_inputs,
    bind_parameters,
    forward,
    forward_batch,
    init_params,
    load_parameters,
    parameter_count,
    predict,
    save_parameters,
)
from spectral import legendre_eval


def _toy_params(output_weights):
    """[1,p,1] 网络：W(1) 全为 1、偏置为零，输出层取给定行向量"""
    p = len(output_weights)
    return ParameterSet(
        [np.ones((p, 1)), np.array([output_weights], dtype=float)],
        [np.zeros(p), np.zeros(1)],
    )


def test_default_degrees_and_depth():
    config = NetworkConfig.table1()
    assert config.layer_sizes == [1, 10, 30, 20, 10, 1]
    assert config.legendre_degrees == list(range(10))
    assert config.depth == 5
    assert parameter_count(config) == 1191


@pytest.mark.parametrize("kwargs", [
    {"layer_sizes": [2, 3, 1]},
    {"layer_sizes": [1, 3, 2]},
    {"layer_sizes": [1, 1]},
    {"layer_sizes": [1, 3, 1], "legendre_degrees": [0, 1]},
    {"layer_sizes": [1, 3, 1], "legendre_degrees": [0, -1, 2]},
    {"layer_sizes": [1, 3, 1], "hidden_activation": "relu"},
    {"layer_sizes": [1, 3, 1], "first_layer": "chebyshev"},
])
def test_invalid_configs_rejected(kwargs):
    with pytest.raises(ConfigurationError):
        NetworkConfig(**kwargs).validate()


def test_init_shapes_and_zero_biases():
    params = init_params(NetworkConfig.table1())
    assert params.shapes == [(10, 1), (30, 10), (20, 30), (10, 20), (1, 10)]
    assert all(np.all(b == 0) for b in params.biases)
    assert params.flatten().size == 1191


def test_init_is_seeded():
    a = init_params(NetworkConfig.table1(seed=3))
    b = init_params(NetworkConfig.table1(seed=3))
    c = init_params(NetworkConfig.table1(seed=4))
    assert a == b
    assert a != c


def test_init_variance_matches_glorot():
    samples = np.concatenate([
        init_params(NetworkConfig.table1(seed=seed)).weights[1].ravel() for seed in range(10)
    ])
    expected = 2.0 / (10 + 30)
    assert expected / 3 < np.var(samples) < expected * 3


def test_zero_parameters_give_zero_output():
    config = NetworkConfig.table1()
    params = init_params(config)
    zero = params.unflatten(np.zeros(parameter_count(config)))
    tape = Tape()
    assert forward(config, zero, 0.37, tape).value == 0.0


def test_toy_network_returns_first_degree_term():
    config = NetworkConfig([1, 2, 1], [0, 1]).validate()
    out = forward(config, _toy_params([0.0, 1.0]), 0.3, Tape())
    assert out.value == pytest.approx(0.3, abs=1e-15)


@pytest.mark.parametrize("degree", range(6))
def test_first_layer_is_legendre_basis(degree):
    config = NetworkConfig([1, 6, 1]).validate()
    weights = [0.0] * 6
    weights[degree] = 1.0
    xs = np.linspace(-1.0, 1.0, 9)
    values = predict(config, _toy_params(weights), xs)
    assert np.allclose(values, legendre_eval(degree, xs), atol=1e-14)


def test_predict_matches_forward():
    config = NetworkConfig([1, 4, 5, 3, 1], seed=2).validate()
    params = init_params(config)
    xs = np.linspace(0.0, 1.0, 7)
    tape = Tape()
    taped = [forward(config, params, float(x), tape).value for x in xs]
    assert np.allclose(predict(config, params, xs), taped, atol=1e-12)


def test_lane_forward_matches_pointwise():
    config = NetworkConfig([1, 4, 5, 1], seed=1).validate()
    params = init_params(config)
    xs = np.linspace(0.0, 1.0, 5)
    tape = Tape()
    lanes = forward(config, params, xs, tape).value
    assert np.allclose(lanes, predict(config, params, xs), atol=1e-14)


def test_forward_batch():
    config = NetworkConfig([1, 3, 2, 1], seed=5).validate()
    params = init_params(config)
    assert forward_batch(config, params, [], Tape()) == []
    outputs = forward_batch(config, params, [0.1, 0.9], Tape())
    assert [o.value for o in outputs] == pytest.approx(list(predict(config, params, [0.1, 0.9])))


def test_parameters_bound_to_other_tape_rejected():
    config = NetworkConfig([1, 2, 1]).validate()
    bound = bind_parameters(Tape(), init_params(config))
    with pytest.raises(TapeError):
        forward(config, bound, 0.5, Tape())


def test_shape_mismatch_rejected():
    config = NetworkConfig([1, 3, 1]).validate()
    other = init_params(NetworkConfig([1, 2, 1]).validate())
    with pytest.raises(ValueError):
        forward(config, other, 0.5, Tape())


@pytest.mark.parametrize("seed", range(20))
def test_parameter_gradient_matches_central_difference(seed):
    config = NetworkConfig([1, 4, 5, 1], seed=seed).validate()
    point = init_params(config).flatten()
    point = point + np.random.default_rng(50 + seed).normal(0.0, 0.1, size=point.size)

    def f(inputs):
        bound = bind_inputs(config, inputs)
        return forward(config, bound, 0.7, bound.tape)

    assert check_gradient(f, point) <= 1e-5


def test_tape_length_does_not_depend_on_lane_count():
    config = NetworkConfig([1, 4, 5, 1], seed=4).validate()
    params = init_params(config)
    lengths = []
    for size in (5, 500):
        tape = Tape()
        forward(config, params, np.linspace(0.0, 1.0, size), tape)
        lengths.append(len(tape))
    # 6 个参数节点，每层一个 affine，两个激活，输出一次求和
    assert lengths == [12, 12]


def test_bound_gradient_follows_flatten_order():
    config = NetworkConfig([1, 3, 2, 1], seed=6).validate()
    params = init_params(config)
    tape = Tape()
    bound = bind_parameters(tape, params)
    out = forward(config, bound, 0.4, tape)
    flat = params.flatten()
    fd = np.zeros_like(flat)
    for i in range(flat.size):
        up, down = flat.copy(), flat.copy()
        up[i] += 1e-6
        down[i] -= 1e-6
        fd[i] = (predict(config, params.unflatten(up), [0.4])[0]
                 - predict(config, params.unflatten(down), [0.4])[0]) / 2e-6
    assert np.allclose(tape.gradient(out, bound.inputs), fd, rtol=1e-6, atol=1e-9)


def test_fnn_variant_has_same_parameter_count():
    config = NetworkConfig.table1()
    fnn = config.with_first_layer("tanh").validate()
    assert parameter_count(fnn) == parameter_count(config)
    params = init_params(fnn)
    values = predict(fnn, params, [0.2, 0.4])
    assert np.all(np.isfinite(values))


def test_flatten_order_and_round_trip():
    config = NetworkConfig([1, 2, 1]).validate()
    params = ParameterSet([np.array([[1.0], [2.0]]), np.array([[3.0, 4.0]])],
                          [np.array([5.0, 6.0]), np.array([7.0])])
    flat = params.flatten()
    assert list(flat) == [1.0, 2.0, 5.0, 6.0, 3.0, 4.0, 7.0]
    assert ParameterSet.from_flat(config, flat) == params
    with pytest.raises(ValueError):
        ParameterSet.from_flat(config, flat[:-1])


def test_save_and_load_parameters(tmp_path):
    config = NetworkConfig([1, 3, 4, 1], seed=9).validate()
    params = init_params(config)
    path = tmp_path / "params.csv"
    save_parameters(str(path), config, params)
    loaded_config, loaded = load_parameters(str(path))
    assert loaded_config.layer_sizes == config.layer_sizes
    assert loaded == params


def test_load_rejects_missing_header(tmp_path):
    path = tmp_path / "broken.csv"
    path.write_text("0.1\n0.2\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_parameters(str(path))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
