"""
非线性 Volterra-Fredholm-Hammerstein 积分方程实例与配点集

    y(x) = g(x) + xi1 * int_0^x K1(x,s) phi1(s, y(s)) ds + xi2 * int_0^1 K2(x,s) phi2(s, y(s)) ds

核函数和右端项是普通实数上的 numpy 闭包（可广播），不参与求导；
phi1/phi2 作用在计算带的值上。
"""

from typing import Callable, Optional, Tuple

import numpy as np

from spectral.quadrature import QuadratureRule, gauss_legendre_rule, map_volterra, map_fredholm

# 奇异核问题从配点集中剔除 x < SINGULAR_EXCLUSION 的点
SINGULAR_EXCLUSION = 1e-8
CHECK_POINTS = 11


class ProblemDefinitionError(Exception):
    def __init__(self, reason, line=None, column=None):
        """
        问题定义错误
        参数:
            reason: 错误原因描述
            line: 问题定义文件中的行号(可选)
            column: 列号(可选)
        """
        error_type = "ProblemDefinitionError"
        position = f"行{line},列{column}" if line is not None and column is not None else "未知位置"
        self.error_list = [error_type, position, reason]
        super().__init__(self.error_list)

    def __str__(self):
        return str(self.error_list)


def _zero_kernel(x, s):
    return np.zeros(np.broadcast(np.asarray(x), np.asarray(s)).shape)


def _identity_phi(s, y):
    return y


class ProblemSpec:
    """一个积分方程实例，定义域固定为 [0,1]"""

    def __init__(self, xi1: float, xi2: float, g: Callable,
                 k1: Callable = None, k2: Callable = None,
                 phi1: Callable = None, phi2: Callable = None,
                 exact: Optional[Callable] = None, name: str = "",
                 singular_at_zero: bool = False):
        self.xi1 = float(xi1)
        self.xi2 = float(xi2)
        self.g = g
        self.k1 = k1 or _zero_kernel
        self.k2 = k2 or _zero_kernel
        self.phi1 = phi1 or _identity_phi
        self.phi2 = phi2 or _identity_phi
        self.exact = exact
        self.name = name
        self.singular_at_zero = bool(singular_at_zero)
        self.domain: Tuple[float, float] = (0.0, 1.0)
        self._validate()

    @property
    def has_volterra(self) -> bool:
        return self.xi1 != 0.0

    @property
    def has_fredholm(self) -> bool:
        return self.xi2 != 0.0

    def _validate(self):
        if not np.isfinite(self.xi1) or not np.isfinite(self.xi2):
            raise ProblemDefinitionError(f"xi1/xi2 必须是有限实数: {self.xi1}, {self.xi2}")
        if self.xi1 == 0.0 and self.xi2 == 0.0:
            raise ProblemDefinitionError("xi1 与 xi2 同时为零，方程中不再含有积分项")

        grid = np.linspace(0.0, 1.0, CHECK_POINTS)
        if self.singular_at_zero:
            grid = grid[grid >= SINGULAR_EXCLUSION]
        with np.errstate(all="ignore"):
            g_values = np.asarray(self.g(grid), dtype=float)
            x, s = np.meshgrid(grid, grid, indexing="ij")
            inner = s * x  # Volterra 核只在 0 <= s <= x 上取值
            checks = [("g", g_values)]
            if self.has_volterra:
                checks.append(("K1", np.asarray(self.k1(x, inner), dtype=float)))
            if self.has_fredholm:
                checks.append(("K2", np.asarray(self.k2(x, s), dtype=float)))
        for label, values in checks:
            if not np.all(np.isfinite(values)):
                raise ProblemDefinitionError(f"{label} 在探测网格上出现非有限值")

    def __repr__(self):
        return f"ProblemSpec({self.name!r}, xi1={self.xi1}, xi2={self.xi2})"


class CollocationSet:
    """
    配点与两套求积规则，并预先算好残差装配所需的宿主侧常量：

    volterra_nodes/volterra_coeff:  形状 (m, N1+1)，coeff = (x/2) w_j K1(x, s_j)
    fredholm_nodes:                 形状 (N2+1,)，所有配点共用
    fredholm_coeff:                 形状 (m, N2+1)，coeff = w_j/2 K2(x, s_j)
    """

    def __init__(self, points: np.ndarray, volterra_rule: QuadratureRule,
                 fredholm_rule: QuadratureRule, problem: ProblemSpec):
        self.points = np.asarray(points, dtype=float)
        self.volterra_rule = volterra_rule
        self.fredholm_rule = fredholm_rule
        self.g_values = np.asarray(problem.g(self.points), dtype=float) * np.ones_like(self.points)

        m = self.points.size
        n1 = volterra_rule.size
        self.volterra_nodes = np.zeros((m, n1))
        self.volterra_coeff = np.zeros((m, n1))
        if problem.has_volterra:
            for row, x in enumerate(self.points):
                if x == 0.0:
                    # [0,0] 上的积分为零；节点取 0，系数保持 0
                    continue
                mapped = map_volterra(volterra_rule, float(x))
                self.volterra_nodes[row] = mapped.nodes_s
                # 先把核与缩放权重相乘，奇异核 1/(2x) 在这里与 x/2 抵消
                self.volterra_coeff[row] = mapped.scaled_weights * problem.k1(x, mapped.nodes_s)

        mapped = map_fredholm(fredholm_rule)
        self.fredholm_nodes = np.array(mapped.nodes_s)
        if problem.has_fredholm:
            self.fredholm_coeff = mapped.scaled_weights[None, :] * \
                problem.k2(self.points[:, None], self.fredholm_nodes[None, :])
            self.fredholm_coeff = np.broadcast_to(self.fredholm_coeff, (m, fredholm_rule.size)).copy()
        else:
            self.fredholm_coeff = np.zeros((m, fredholm_rule.size))

        for arr in (self.points, self.g_values, self.volterra_nodes, self.volterra_coeff,
                    self.fredholm_nodes, self.fredholm_coeff):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return int(self.points.size)

    def subset(self, start: int, stop: int) -> "CollocationSet":
        """连续的一段配点，供工作线程分块使用"""
        part = object.__new__(CollocationSet)
        part.volterra_rule = self.volterra_rule
        part.fredholm_rule = self.fredholm_rule
        part.points = self.points[start:stop]
        part.g_values = self.g_values[start:stop]
        part.volterra_nodes = self.volterra_nodes[start:stop]
        part.volterra_coeff = self.volterra_coeff[start:stop]
        part.fredholm_nodes = self.fredholm_nodes
        part.fredholm_coeff = self.fredholm_coeff[start:stop]
        return part


def build_collocation(points, n1: int, n2: int, problem: ProblemSpec) -> CollocationSet:
    """校验配点（有序、落在 [0,1] 内），对奇异核问题剔除 x < 1e-8 后构造配点集"""
    points = np.asarray(points, dtype=float).ravel()
    if points.size and not np.all(np.isfinite(points)):
        raise ValueError("配点中含有非有限值")
    if points.size and (points.min() < problem.domain[0] or points.max() > problem.domain[1]):
        raise ValueError(f"配点超出定义域 [{problem.domain[0]}, {problem.domain[1]}]")
    if np.any(np.diff(points) < 0):
        raise ValueError("配点必须按升序排列")
    if problem.singular_at_zero:
        points = points[points >= SINGULAR_EXCLUSION]
    return CollocationSet(points, gauss_legendre_rule(n1), gauss_legendre_rule(n2), problem)
