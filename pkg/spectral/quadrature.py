"""
Gauss-Legendre求积规则及其到 [0,x] / [0,1] 区间的仿射映射
"""

from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .legendre import legendre_eval, legendre_derivative

# Newton迭代的残差阈值与最大迭代次数
NODE_TOLERANCE = 1e-14
MAX_NEWTON_ITERATIONS = 100


class QuadratureError(RuntimeError):
    """求积节点的Newton迭代未收敛"""


class QuadratureRule(NamedTuple):
    """[-1,1] 上的 (order+1) 点Gauss-Legendre规则"""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return self.order + 1


class MappedRule(NamedTuple):
    """映射到物理变量 s 上的求积规则，权重已包含区间的Jacobian"""

    nodes_s: np.ndarray
    scaled_weights: np.ndarray


def _readonly(values: np.ndarray) -> np.ndarray:
    values = np.ascontiguousarray(values, dtype=float)
    values.setflags(write=False)
    return values


def _newton_root(degree: int, guess: float) -> float:
    """对 L_degree 做Newton迭代求根"""
    x = guess
    for _ in range(MAX_NEWTON_ITERATIONS):
        value = legendre_eval(degree, x)
        if abs(value) < NODE_TOLERANCE:
            return x
        step = value / legendre_derivative(degree, x)
        x -= step
        # 步长已到舍入误差量级，继续迭代不会再改善
        if abs(step) <= 4.0 * np.finfo(float).eps * max(1.0, abs(x)):
            return x
    raise QuadratureError(
        f"L_{degree} 的根在 {MAX_NEWTON_ITERATIONS} 次Newton迭代内未收敛 (初值 {guess})"
    )


@lru_cache(maxsize=64)
def gauss_legendre_rule(order: int) -> QuadratureRule:
    """生成 (order+1) 点Gauss-Legendre规则

    节点是 L_{order+1} 的根，权重 w_j = 2 / ((1 - X_j^2) L'_{order+1}(X_j)^2)。
    只求非负半轴的根，负半轴按对称性镜像，保证节点与权重严格对称。
    """
    if order < 0:
        raise ValueError(f"求积阶数必须非负: {order}")

    degree = order + 1
    half = degree // 2
    positive = []
    for j in range(half):
        # 渐近初值，第j个根按降序排列
        guess = np.cos(np.pi * (j + 0.75) / (degree + 0.5))
        positive.append(_newton_root(degree, guess))

    roots = [-r for r in positive] + ([0.0] if degree % 2 == 1 else []) + positive[::-1]
    nodes = np.array(roots, dtype=float)
    derivative = legendre_derivative(degree, nodes)
    weights = 2.0 / ((1.0 - nodes ** 2) * derivative ** 2)

    return QuadratureRule(order, _readonly(nodes), _readonly(weights))


def integrate(rule: QuadratureRule, integrand: Callable) -> float:
    """sum_j w_j * integrand(X_j)"""
    values = np.array([integrand(x) for x in rule.nodes], dtype=float)
    return float(np.dot(rule.weights, values))


def map_volterra(rule: QuadratureRule, x: float) -> MappedRule:
    """把规则映射到 [0,x]: s = (x/2)(t+1)，权重乘以 x/2"""
    if not x > 0:
        raise ValueError(f"Volterra积分上限必须为正: {x}")
    half = 0.5 * x
    return MappedRule(
        _readonly(half * (rule.nodes + 1.0)), _readonly(half * rule.weights)
    )


def map_fredholm(rule: QuadratureRule) -> MappedRule:
    """把规则映射到 [0,1]: s = (t+1)/2，权重乘以 1/2"""
    return MappedRule(
        _readonly(0.5 * (rule.nodes + 1.0)), _readonly(0.5 * rule.weights)
    )
