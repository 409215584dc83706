"""
用中心差分核对反向模式梯度
"""

from typing import Callable, Sequence

import numpy as np

from .tape import Tape, Scalar, gradient


def central_difference(f: Callable[[np.ndarray], float], point: Sequence[float],
                       step: float = 1e-6) -> np.ndarray:
    """对普通浮点函数 f 做逐分量中心差分"""
    point = np.asarray(point, dtype=float)
    grad = np.zeros_like(point)
    for i in range(point.size):
        up = point.copy()
        down = point.copy()
        up[i] += step
        down[i] -= step
        grad[i] = (f(up) - f(down)) / (2.0 * step)
    return grad


def check_gradient(f: Callable[[Sequence[Scalar]], Scalar], point: Sequence[float],
                   step: float = 1e-6) -> float:
    """
    返回 max_i |AD_i - CD_i| / (|CD_i| + 1e-12)

    f 接收计算带上的变量列表，返回一个标量节点；差分时同一个 f 以常量调用。
    """
    point = np.asarray(point, dtype=float)
    tape = Tape()
    inputs = tape.variables(point)
    output = f(inputs)
    ad = gradient(tape, output, inputs)

    def plain(values: np.ndarray) -> float:
        result = f([Scalar(float(v)) for v in values])
        return float(np.sum(result.value if isinstance(result, Scalar) else result))

    cd = central_difference(plain, point, step)
    return float(np.max(np.abs(ad - cd) / (np.abs(cd) + 1e-12)))
