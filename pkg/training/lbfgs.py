"""
L-BFGS：两循环递推 + 强 Wolfe 线搜索 (c1=1e-4, c2=0.9)

线搜索按 Nocedal-Wright 的 bracket/zoom 两阶段实现，插值先试三次、再试二次、最后二分。
线搜索失败时退回带回溯的最速下降步；回溯也失败则返回当前最优点并置 warning。
"""

from collections import deque
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np

Objective = Callable[[np.ndarray], Tuple[float, np.ndarray]]

C1 = 1e-4
C2 = 0.9
MAX_BRACKET_ITERATIONS = 20
MAX_ZOOM_ITERATIONS = 20
MAX_BACKTRACKS = 60
# |phi'(alpha)| 已不超过 |phi'(0)| 的这一比例时不再外推
REFINE_TOLERANCE = 1e-8


class LBFGSResult(NamedTuple):
    x: np.ndarray
    value: float
    gradient: np.ndarray
    iterations: int
    converged: bool
    warning: bool
    history: List[float]


class _LineFunction:
    """phi(alpha) = f(x + alpha d)，缓存每个 alpha 的函数值与梯度"""

    def __init__(self, objective: Objective, x: np.ndarray, direction: np.ndarray):
        self.objective = objective
        self.x = x
        self.direction = direction
        self.cache = {}

    def evaluate(self, alpha: float) -> Tuple[float, float, np.ndarray]:
        if alpha not in self.cache:
            value, grad = self.objective(self.x + alpha * self.direction)
            value = float(value)
            if not np.isfinite(value) or not np.all(np.isfinite(grad)):
                value = np.inf
            self.cache[alpha] = (value, float(np.dot(grad, self.direction)), np.asarray(grad))
        return self.cache[alpha]

    def phi(self, alpha: float) -> float:
        return self.evaluate(alpha)[0]

    def derphi(self, alpha: float) -> float:
        return self.evaluate(alpha)[1]


def _cubicmin(a, fa, fpa, b, fb, c, fc) -> Optional[float]:
    """过 (a,fa),(b,fb),(c,fc) 且在 a 处斜率为 fpa 的三次多项式的极小点"""
    with np.errstate(divide="raise", over="raise", invalid="raise"):
        try:
            C = fpa
            db = b - a
            dc = c - a
            denom = (db * dc) ** 2 * (db - dc)
            d1 = np.array([[dc ** 2, -db ** 2], [-dc ** 3, db ** 3]])
            A, B = d1 @ np.array([fb - fa - C * db, fc - fa - C * dc])
            A /= denom
            B /= denom
            radical = B * B - 3 * A * C
            xmin = a + (-B + np.sqrt(radical)) / (3 * A)
        except (ArithmeticError, FloatingPointError):
            return None
    return float(xmin) if np.isfinite(xmin) else None


def _quadmin(a, fa, fpa, b, fb) -> Optional[float]:
    with np.errstate(divide="raise", over="raise", invalid="raise"):
        try:
            db = b - a
            B = (fb - fa - fpa * db) / (db * db)
            xmin = a - fpa / (2.0 * B)
        except (ArithmeticError, FloatingPointError):
            return None
    return float(xmin) if np.isfinite(xmin) else None


def _zoom(line: _LineFunction, a_lo, a_hi, phi_lo, phi_hi, derphi_lo, phi0, derphi0):
    delta1 = 0.2  # 三次插值的端点保护
    delta2 = 0.1  # 二次插值的端点保护
    phi_rec = phi0
    a_rec = 0.0
    for i in range(MAX_ZOOM_ITERATIONS):
        dalpha = a_hi - a_lo
        a, b = (a_hi, a_lo) if dalpha < 0 else (a_lo, a_hi)

        a_j = None
        if i > 0:
            cchk = delta1 * dalpha
            a_j = _cubicmin(a_lo, phi_lo, derphi_lo, a_hi, phi_hi, a_rec, phi_rec)
            if a_j is not None and (a_j > b - cchk or a_j < a + cchk):
                a_j = None
        if a_j is None:
            qchk = delta2 * dalpha
            a_j = _quadmin(a_lo, phi_lo, derphi_lo, a_hi, phi_hi)
            if a_j is None or a_j > b - qchk or a_j < a + qchk:
                a_j = a_lo + 0.5 * dalpha

        phi_aj = line.phi(a_j)
        if phi_aj > phi0 + C1 * a_j * derphi0 or phi_aj >= phi_lo:
            phi_rec, a_rec = phi_hi, a_hi
            a_hi, phi_hi = a_j, phi_aj
        else:
            derphi_aj = line.derphi(a_j)
            if abs(derphi_aj) <= -C2 * derphi0:
                return a_j
            if derphi_aj * (a_hi - a_lo) >= 0:
                phi_rec, a_rec = phi_hi, a_hi
                a_hi, phi_hi = a_lo, phi_lo
            else:
                phi_rec, a_rec = phi_lo, a_lo
            a_lo, phi_lo, derphi_lo = a_j, phi_aj, derphi_aj
    return None


def strong_wolfe(line: _LineFunction, phi0: float, derphi0: float,
                 old_phi0: Optional[float] = None) -> Optional[float]:
    """返回满足强 Wolfe 条件的步长，失败时返回 None"""
    alpha0 = 0.0
    alpha1 = 1.0
    if old_phi0 is not None and derphi0 != 0:
        alpha1 = min(1.0, 1.01 * 2 * (phi0 - old_phi0) / derphi0)
    if not alpha1 > 0:
        alpha1 = 1.0

    phi_a0, derphi_a0 = phi0, derphi0
    phi_a1 = line.phi(alpha1)
    for i in range(MAX_BRACKET_ITERATIONS):
        if alpha1 == 0:
            return None
        if phi_a1 > phi0 + C1 * alpha1 * derphi0 or (i > 0 and phi_a1 >= phi_a0):
            return _zoom(line, alpha0, alpha1, phi_a0, phi_a1, derphi_a0, phi0, derphi0)
        derphi_a1 = line.derphi(alpha1)
        if abs(derphi_a1) <= -C2 * derphi0:
            return alpha1
        if derphi_a1 >= 0:
            return _zoom(line, alpha1, alpha0, phi_a1, phi_a0, derphi_a1, phi0, derphi0)
        alpha0, alpha1 = alpha1, 2.0 * alpha1
        phi_a0, derphi_a0 = phi_a1, derphi_a1
        phi_a1 = line.phi(alpha1)
    return None


def refine_step(line: _LineFunction, alpha: float, phi0: float, derphi0: float) -> float:
    """
    用 phi'(0) 与 phi'(alpha) 的割线外推一维极小点，目标值更低时替换 alpha

    二次目标上 phi' 是线性的，割线点即精确线搜索的步长，L-BFGS 随之在有限步内终止。
    """
    phi_a, derphi_a, _ = line.evaluate(alpha)
    curvature = derphi_a - derphi0
    if not curvature > 0 or abs(derphi_a) <= REFINE_TOLERANCE * abs(derphi0):
        return alpha
    candidate = alpha * -derphi0 / curvature
    if not np.isfinite(candidate) or candidate <= 0:
        return alpha
    value = line.phi(candidate)
    if value < phi_a and value <= phi0 + C1 * candidate * derphi0:
        return candidate
    return alpha


def _backtracking(line: _LineFunction, phi0: float, derphi0: float) -> Optional[float]:
    alpha = 1.0
    for _ in range(MAX_BACKTRACKS):
        value = line.phi(alpha)
        # 步长小到不再改变目标值时视为失败
        if value <= phi0 + C1 * alpha * derphi0 and value < phi0:
            return alpha
        alpha *= 0.5
    return None


def two_loop_direction(grad: np.ndarray, s_list, y_list) -> np.ndarray:
    """两循环递推计算 -H grad；初始矩阵取 (s'y / y'y) I"""
    q = grad.copy()
    rhos = [1.0 / float(np.dot(y, s)) for s, y in zip(s_list, y_list)]
    alphas = []
    for s, y, rho in reversed(list(zip(s_list, y_list, rhos))):
        a = rho * float(np.dot(s, q))
        alphas.append(a)
        q -= a * y
    if s_list:
        s, y = s_list[-1], y_list[-1]
        q *= float(np.dot(s, y)) / float(np.dot(y, y))
    for (s, y, rho), a in zip(zip(s_list, y_list, rhos), reversed(alphas)):
        b = rho * float(np.dot(y, q))
        q += (a - b) * s
    return -q


def run_lbfgs(objective: Objective, start, memory: int = 10, tol: float = 1e-9,
              max_iters: int = 2000, log_manager=None,
              callback: Callable[[int, np.ndarray, float, np.ndarray], None] = None) -> LBFGSResult:
    """
    最小化 objective(x) -> (值, 梯度)

    梯度无穷范数 < tol 或达到 max_iters 时停止；接受的迭代点目标值单调不增。
    """
    if memory < 1:
        raise ValueError(f"memory 至少为 1: {memory}")
    x = np.array(start, dtype=float)
    value, grad = objective(x)
    value = float(value)
    grad = np.asarray(grad, dtype=float)
    if not np.isfinite(value) or not np.all(np.isfinite(grad)):
        raise ValueError("L-BFGS 起点的目标值或梯度非有限")

    history = [value]
    s_list: deque = deque(maxlen=memory)
    y_list: deque = deque(maxlen=memory)
    # 首步的初始步长按 scipy 的做法由 |g|/2 的假想下降量推出，再由 refine_step 修正
    old_value = value + float(np.linalg.norm(grad)) / 2.0
    iterations = 0
    warning = False
    converged = float(np.max(np.abs(grad))) < tol if grad.size else True

    while not converged and iterations < max_iters:
        direction = two_loop_direction(grad, s_list, y_list)
        derphi0 = float(np.dot(grad, direction))
        if not derphi0 < 0:
            s_list.clear()
            y_list.clear()
            direction = -grad
            derphi0 = -float(np.dot(grad, grad))

        line = _LineFunction(objective, x, direction)
        alpha = strong_wolfe(line, value, derphi0, old_value)
        if alpha is not None:
            alpha = refine_step(line, alpha, value, derphi0)
        else:
            s_list.clear()
            y_list.clear()
            direction = -grad
            line = _LineFunction(objective, x, direction)
            alpha = _backtracking(line, value, -float(np.dot(grad, grad)))
            if log_manager:
                log_manager.log_line_search_fallback(iterations + 1, alpha is not None)
            if alpha is None:
                warning = True
                break

        new_value, _, new_grad = line.evaluate(alpha)
        step = alpha * direction
        delta_grad = new_grad - grad
        if float(np.dot(step, delta_grad)) > 1e-12 * float(np.dot(delta_grad, delta_grad)):
            s_list.append(step)
            y_list.append(delta_grad)

        iterations += 1
        old_value = value
        x = x + step
        value, grad = new_value, new_grad
        history.append(value)
        grad_norm = float(np.max(np.abs(grad)))
        if log_manager:
            log_manager.log_lbfgs_iteration(iterations, value, grad_norm)
        if callback:
            callback(iterations, x, value, grad)
        converged = grad_norm < tol

    return LBFGSResult(x, value, grad, iterations, converged, warning, history)
