"""
前向传播

H_0 = x
H_1[k] = L_{deg(k)}((W(1) H_0 + b(1))[k])
H_i = tanh(W(i) H_{i-1} + b(i)),  2 <= i <= M-1
H_M = W(M) H_{M-1} + b(M)          输出层为纯仿射

每层在计算带上只记录一个 affine 节点和一个激活节点，神经元轴在首轴。
"""

from typing import List, Sequence, Union

import numpy as np

from autodiff import Tape, Scalar, TapeError, affine, lane_sum, legendre_rows, stack, tanh
from spectral.legendre import legendre_eval
from .config import NetworkConfig
from .params import ParameterSet


class BoundParameters:
    """
    登记在某条计算带上的参数

    weights[i] / biases[i] 是整层的矩阵、向量节点；inputs 按展平顺序排列，用于取梯度。
    """

    def __init__(self, tape: Tape, weights: List[Scalar], biases: List[Scalar],
                 inputs: List[Scalar]):
        self.tape = tape
        self.weights = weights
        self.biases = biases
        self.inputs = inputs


def bind_parameters(tape: Tape, params: ParameterSet, constant: bool = False) -> BoundParameters:
    """每层的权重矩阵与偏置向量各登记为一个自变量（constant=True 时作为常量，不占节点）"""
    make = Tape.constant if constant else tape.variable
    weights, biases, inputs = [], [], []
    for w, b in zip(params.weights, params.biases):
        weight = make(np.array(w, dtype=float))
        bias = make(np.array(b, dtype=float))
        weights.append(weight)
        biases.append(bias)
        inputs.extend([weight, bias])
    return BoundParameters(tape, weights, biases, inputs)


def bind_inputs(config: NetworkConfig, inputs: Sequence[Scalar]) -> BoundParameters:
    """把已登记的展平参数列表按网络结构堆叠成每层的矩阵与向量"""
    tape = next((v.tape for v in inputs if not v.is_constant), None)
    sizes = config.layer_sizes
    expected = sum(o * (i + 1) for i, o in zip(sizes[:-1], sizes[1:]))
    if len(inputs) != expected:
        raise ValueError(f"参数个数 {len(inputs)} 与网络结构要求的 {expected} 不一致")

    weights, biases = [], []
    offset = 0
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        rows = []
        for _ in range(fan_out):
            rows.append(stack(inputs[offset:offset + fan_in]))
            offset += fan_in
        weights.append(stack(rows))
        biases.append(stack(inputs[offset:offset + fan_out]))
        offset += fan_out
    return BoundParameters(tape, weights, biases, list(inputs))


def _check_shapes(config: NetworkConfig, params: Union[ParameterSet, BoundParameters]):
    sizes = config.layer_sizes
    if isinstance(params, ParameterSet):
        shapes = params.shapes
    else:
        shapes = [np.shape(w.value) for w in params.weights]
    expected = [(o, i) for i, o in zip(sizes[:-1], sizes[1:])]
    if shapes != expected:
        raise ValueError(f"参数形状 {shapes} 与网络结构 {expected} 不一致")


def forward(config: NetworkConfig, params: Union[ParameterSet, BoundParameters],
            x, tape: Tape) -> Scalar:
    """在 tape 上记录一次前向传播；x 可以是逐通道的数组"""
    _check_shapes(config, params)
    if isinstance(params, ParameterSet):
        params = bind_parameters(tape, params)
    elif params.tape is not None and params.tape is not tape:
        raise TapeError("参数登记在另一条计算带上")

    hidden = stack([x])
    depth = config.depth
    for layer in range(depth):
        pre = affine(params.weights[layer], hidden, params.biases[layer])
        if layer == depth - 1:
            # 输出层只有一个神经元，去掉首轴
            return lane_sum(pre, axis=0)
        if layer == 0 and config.first_layer == "legendre":
            hidden = legendre_rows(config.legendre_degrees, pre)
        else:
            hidden = tanh(pre)
    raise ValueError("网络至少需要一个隐层")


def forward_batch(config: NetworkConfig, params: Union[ParameterSet, BoundParameters],
                  xs: Sequence[float], tape: Tape) -> List[Scalar]:
    """对每个 x 各记录一次独立的前向传播，参数只登记一次"""
    if len(xs) == 0:
        return []
    if isinstance(params, ParameterSet):
        params = bind_parameters(tape, params)
    return [forward(config, params, float(x), tape) for x in xs]


def predict(config: NetworkConfig, params: ParameterSet, xs) -> np.ndarray:
    """不经过计算带的纯数值求值，用于报告"""
    _check_shapes(config, params)
    hidden = np.atleast_1d(np.asarray(xs, dtype=float))[None, :]
    depth = config.depth
    for layer, (w, b) in enumerate(zip(params.weights, params.biases)):
        pre = w @ hidden + b[:, None]
        if layer == depth - 1:
            return pre[0]
        if layer == 0 and config.first_layer == "legendre":
            hidden = np.stack([legendre_eval(deg, pre[k])
                               for k, deg in enumerate(config.legendre_degrees)])
        else:
            hidden = np.tanh(pre)
    raise ValueError("网络至少需要一个隐层")
