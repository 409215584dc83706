"""
Legendre多项式求值

所有函数既接受浮点数也接受numpy数组（逐元素求值），返回值形状与输入一致。
区间[-1,1]之外同样可以求值，多项式在整个实轴上有定义。
"""

from math import factorial
from typing import List, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


def _check_degree(n: int):
    if n < 0:
        raise ValueError(f"Legendre多项式次数必须非负: {n}")


def legendre_eval(n: int, eta: ArrayLike) -> ArrayLike:
    """三项递推计算 L_n(eta)

    (k+1) L_{k+1} = (2k+1) eta L_k - k L_{k-1}，L_0 = 1，L_1 = eta
    """
    _check_degree(n)
    if n == 0:
        return np.ones_like(eta, dtype=float) if isinstance(eta, np.ndarray) else 1.0
    if n == 1:
        return eta * 1.0

    p_prev = np.ones_like(eta, dtype=float) if isinstance(eta, np.ndarray) else 1.0
    p_cur = eta * 1.0
    for k in range(1, n):
        p_next = ((2 * k + 1) * eta * p_cur - k * p_prev) / (k + 1)
        p_prev, p_cur = p_cur, p_next
    return p_cur


def legendre_eval_all(p: int, eta: ArrayLike) -> List[ArrayLike]:
    """返回 [L_0(eta), ..., L_p(eta)]，一次递推得到全部次数"""
    _check_degree(p)
    first = np.ones_like(eta, dtype=float) if isinstance(eta, np.ndarray) else 1.0
    values = [first]
    if p == 0:
        return values
    values.append(eta * 1.0)
    for k in range(1, p):
        values.append(((2 * k + 1) * eta * values[k] - k * values[k - 1]) / (k + 1))
    return values


def legendre_derivative(n: int, eta: ArrayLike) -> ArrayLike:
    """计算 L'_n(eta)

    由 (2k+1) L_k = L'_{k+1} - L'_{k-1} 递推，种子 L'_0 = 0，L'_1 = 1。
    该形式在端点 ±1 处同样适用，不含 1/(1-eta^2) 因子。
    """
    _check_degree(n)
    zeros = np.zeros_like(eta, dtype=float) if isinstance(eta, np.ndarray) else 0.0
    if n == 0:
        return zeros
    ones = zeros + 1.0
    if n == 1:
        return ones

    values = legendre_eval_all(n - 1, eta)
    d_prev, d_cur = zeros, ones  # L'_0, L'_1
    for k in range(1, n):
        d_next = d_prev + (2 * k + 1) * values[k]
        d_prev, d_cur = d_cur, d_next
    return d_cur


def legendre_explicit(n: int, eta: ArrayLike) -> ArrayLike:
    """按阶乘级数的显式公式求值，仅作为独立的校验基准

    L_n(eta) = 2^{-n} sum_l (-1)^l (2n-2l)! / (l! (n-l)! (n-2l)!) eta^{n-2l}
    """
    _check_degree(n)
    total = np.zeros_like(eta, dtype=float) if isinstance(eta, np.ndarray) else 0.0
    for ell in range(n // 2 + 1):
        coeff = (-1) ** ell * factorial(2 * n - 2 * ell) / (
            factorial(ell) * factorial(n - ell) * factorial(n - 2 * ell)
        )
        total = total + coeff * eta ** (n - 2 * ell)
    return total / 2 ** n
