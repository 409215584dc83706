"""
内置的右端项、核函数、非线性项与精确解

问题定义文件和编号实验都从这里按名字取函数。
"""

from typing import Callable, Dict, List, Optional

import numpy as np

from autodiff import Scalar


def _levenshtein(a: str, b: str) -> int:
    a, b = a or "", b or ""
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    dp = list(range(lb + 1))
    for i in range(1, la + 1):
        prev = dp[0]
        dp[0] = i
        for j in range(1, lb + 1):
            cur = dp[j]
            cost = 0 if a[i - 1].lower() == b[j - 1].lower() else 1
            dp[j] = min(dp[j] + 1, dp[j - 1] + 1, prev + cost)
            prev = cur
    return dp[-1]


def closest_name(name: str, candidates: List[str]) -> Optional[str]:
    if not candidates:
        return None
    best = min(candidates, key=lambda c: (_levenshtein(name, c), c))
    dist = _levenshtein(name, best)
    limit = 1 if len(name) <= 4 else (2 if len(name) <= 8 else 3)
    return best if dist <= limit else None


# 右端项 g(x)
FORCING: Dict[str, Callable] = {
    "zero": lambda x: np.zeros_like(np.asarray(x, dtype=float)),
    "one": lambda x: np.ones_like(np.asarray(x, dtype=float)),
    "exp_minus_third_exp3": lambda x: np.exp(x) - np.exp(3.0 * np.asarray(x)) / 3.0 + 1.0 / 3.0,
    "one_plus_sin_squared": lambda x: 1.0 + np.sin(x) ** 2,
    "sextic_poly": lambda x: (-np.asarray(x) ** 6 / 30.0 + np.asarray(x) ** 4 / 3.0
                              - np.asarray(x) ** 2 + 5.0 * np.asarray(x) / 3.0 - 5.0 / 4.0),
    "quartic_poly": lambda x: -np.asarray(x) ** 4 / 10.0 + 5.0 * np.asarray(x) ** 2 / 6.0 + 3.0 / 8.0,
}

# 核函数 K(x, s)
KERNELS: Dict[str, Callable] = {
    "zero": lambda x, s: np.zeros(np.broadcast(np.asarray(x), np.asarray(s)).shape),
    "one": lambda x, s: np.ones(np.broadcast(np.asarray(x), np.asarray(s)).shape),
    "minus_three_sin_diff": lambda x, s: -3.0 * np.sin(np.asarray(x) - np.asarray(s)),
    "diff": lambda x, s: np.asarray(x) - np.asarray(s),
    "sum": lambda x, s: np.asarray(x) + np.asarray(s),
    "half_inverse_x": lambda x, s: np.broadcast_to(
        1.0 / (2.0 * np.asarray(x, dtype=float)),
        np.broadcast(np.asarray(x), np.asarray(s)).shape),
}

# 非线性项 phi(s, y)，y 可以是计算带上的值，也可以是普通数组
NONLINEARITIES: Dict[str, Callable[[np.ndarray, Scalar], Scalar]] = {
    "identity": lambda s, y: y,
    "square": lambda s, y: y ** 2,
    "cube": lambda s, y: y ** 3,
}

EXACT_SOLUTIONS: Dict[str, Callable] = {
    "exp": lambda x: np.exp(x),
    "cos": lambda x: np.cos(x),
    "x2_minus_2": lambda x: np.asarray(x) ** 2 - 2.0,
    "x2_plus_half": lambda x: np.asarray(x) ** 2 + 0.5,
}

# 在 x=0 处奇异、需要剔除配点的核
SINGULAR_KERNELS = ("half_inverse_x",)

CATEGORIES: Dict[str, Dict[str, Callable]] = {
    "forcing": FORCING,
    "kernel": KERNELS,
    "nonlinearity": NONLINEARITIES,
    "exact": EXACT_SOLUTIONS,
}


def lookup(category: str, name: str) -> Callable:
    """按名字取内置函数；找不到时 KeyError 的消息带上最接近的候选名"""
    table = CATEGORIES[category]
    if name in table:
        return table[name]
    hint = closest_name(name, sorted(table))
    message = f"未知的{category}名称 '{name}'"
    if hint:
        message += f"，是否想写 '{hint}'"
    raise KeyError(message)


def constant_forcing(value: float) -> Callable:
    return lambda x: np.full(np.shape(x), float(value)) if np.ndim(x) else float(value)


def constant_kernel(value: float) -> Callable:
    return lambda x, s: np.full(np.broadcast(np.asarray(x), np.asarray(s)).shape, float(value))
