"""
求积离散后的残差 R_m

R_m(x) = -y(x) + g(x)
         + xi1 * sum_j (x/2) w1_j K1(x, s1_j) phi1(s1_j, y(s1_j))     s1_j = (x/2)(t1_j + 1)
         + xi2 * sum_j (1/2) w2_j K2(x, s2_j) phi2(s2_j, y(s2_j))     s2_j = (t2_j + 1)/2

Fredholm 节点取 s = (t+1)/2，与 t = 2s-1 的变量替换一致；
另一种写法把 Fredholm 节点也乘上 x/2，那样精确解不再满足离散方程，这里不采用。

net 是把（逐通道的）自变量映射为计算带值的可微代理；传入普通 numpy 函数时
整个残差按常量求值，不在带上留下节点。
"""

from typing import Callable

import numpy as np

from autodiff import Scalar, Tape, TapeError, lane_sum
from spectral.quadrature import map_volterra, map_fredholm
from .spec import ProblemSpec, CollocationSet

Surrogate = Callable[[object], object]


def _as_scalar(value) -> Scalar:
    return value if isinstance(value, Scalar) else Scalar(value)


def _on_tape(result: Scalar, tape: Tape) -> Scalar:
    if tape is not None and not result.is_constant and result.tape is not tape:
        raise TapeError("残差记录在了另一条计算带上")
    return result


def residual(problem: ProblemSpec, net: Surrogate, x: float, colloc: CollocationSet,
             tape: Tape = None) -> Scalar:
    """单个配点处的残差"""
    x = float(x)
    if x < problem.domain[0] or x > problem.domain[1]:
        raise ValueError(f"配点 {x} 超出定义域")
    y_x = _as_scalar(net(x))
    total = -y_x + float(problem.g(x))

    if problem.has_volterra and x > 0.0:
        mapped = map_volterra(colloc.volterra_rule, x)
        coeff = mapped.scaled_weights * problem.k1(x, mapped.nodes_s)
        y_s = _as_scalar(net(np.array(mapped.nodes_s)))
        term = lane_sum(coeff * problem.phi1(mapped.nodes_s, y_s), axis=None)
        total = total + problem.xi1 * term
    elif problem.has_volterra and problem.singular_at_zero:
        raise ValueError("奇异核问题不能在 x=0 处计算残差")

    if problem.has_fredholm:
        mapped = map_fredholm(colloc.fredholm_rule)
        coeff = mapped.scaled_weights * problem.k2(x, mapped.nodes_s)
        y_s = _as_scalar(net(np.array(mapped.nodes_s)))
        term = lane_sum(coeff * problem.phi2(mapped.nodes_s, y_s), axis=None)
        total = total + problem.xi2 * term
    return _on_tape(total, tape)


def residual_batch(problem: ProblemSpec, net: Surrogate, colloc: CollocationSet,
                   tape: Tape = None) -> Scalar:
    """
    一次性装配全部配点的残差，返回逐通道（每个配点一条通道）的值

    y 在配点处、在 (m, N1+1) 个 Volterra 节点处各求值一次，
    Fredholm 节点与 x 无关，只求值一次后广播到所有配点。
    """
    if len(colloc) == 0:
        return Scalar(np.zeros(0))
    y_x = _as_scalar(net(np.array(colloc.points)))
    total = -y_x + np.array(colloc.g_values)

    if problem.has_volterra:
        nodes = np.array(colloc.volterra_nodes)
        y_s = _as_scalar(net(nodes))
        term = lane_sum(np.array(colloc.volterra_coeff) * problem.phi1(nodes, y_s), axis=-1)
        total = total + problem.xi1 * term

    if problem.has_fredholm:
        nodes = np.array(colloc.fredholm_nodes)
        y_s = _as_scalar(net(nodes))
        term = lane_sum(np.array(colloc.fredholm_coeff) * problem.phi2(nodes, y_s), axis=-1)
        total = total + problem.xi2 * term
    return _on_tape(total, tape)


def exact_surrogate(problem: ProblemSpec) -> Surrogate:
    """用精确解替代网络，用于残差校验"""
    if problem.exact is None:
        raise ValueError(f"问题 {problem.name!r} 没有精确解")
    return lambda z: np.asarray(problem.exact(z), dtype=float)
