"""
性质校验套件（CLI 的 verify 子命令）

全部检查都是确定性的，使用缩小的网络与点数，整体在一分钟内完成。
"""

from typing import Callable, List, NamedTuple

import numpy as np

from autodiff import Tape, check_gradient
from network.config import NetworkConfig
from network.model import bind_inputs
from network.params import ParameterSet, init_params
from problem.experiments import EXPERIMENT_IDS, make_experiment
from problem.residual import exact_surrogate, residual_batch
from problem.spec import SINGULAR_EXCLUSION, build_collocation
from spectral.legendre import legendre_derivative, legendre_eval, legendre_explicit
from spectral.quadrature import gauss_legendre_rule, integrate
from training.adam import TrainState, adam_step
from training.config import TrainConfig
from training.cost import cost
from training.lbfgs import run_lbfgs
from .reference import REFERENCE

GRADIENT_TOLERANCE = 1e-5
GRADIENT_INITS = 5


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def check_orthogonality() -> CheckResult:
    rule = gauss_legendre_rule(12)
    worst = 0.0
    for n in range(11):
        for m in range(11):
            value = integrate(rule, lambda t: legendre_eval(n, t) * legendre_eval(m, t))
            expected = 2.0 / (2 * n + 1) if n == m else 0.0
            worst = max(worst, abs(value - expected))
    return CheckResult("Legendre 正交性 (n,m<=10, N=12)", worst <= 1e-12, f"最大偏差 {worst:.2e}")


def check_legendre_properties() -> CheckResult:
    rng = np.random.default_rng(0)
    eta = rng.uniform(-1.0, 1.0, size=1000)
    parity = bound = explicit = 0.0
    for n in range(16):
        values = legendre_eval(n, eta)
        parity = max(parity, float(np.max(np.abs(legendre_eval(n, -eta[:100]) - (-1) ** n * values[:100]))))
        bound = max(bound, float(np.max(np.abs(values))) - 1.0)
        explicit = max(explicit, float(np.max(np.abs(values[:100] - legendre_explicit(n, eta[:100])))))
    passed = parity <= 1e-13 and bound <= 1e-12 and explicit <= 1e-10
    return CheckResult("Legendre 奇偶性/有界性/显式公式", passed,
                       f"奇偶 {parity:.1e}, 越界 {max(bound, 0.0):.1e}, 显式 {explicit:.1e}")


def check_derivative() -> CheckResult:
    eta = np.linspace(-0.9, 0.9, 19)
    step = 1e-6
    worst = 0.0
    for n in range(11):
        fd = (legendre_eval(n, eta + step) - legendre_eval(n, eta - step)) / (2 * step)
        exact = legendre_derivative(n, eta)
        worst = max(worst, float(np.max(np.abs(exact - fd) / np.maximum(np.abs(exact), 1.0))))
    return CheckResult("Legendre 导数与中心差分", worst <= 1e-7, f"最大相对偏差 {worst:.2e}")


def check_quadrature() -> CheckResult:
    worst = 0.0
    for order in range(21):
        rule = gauss_legendre_rule(order)
        worst = max(worst, abs(float(np.sum(rule.weights)) - 2.0))
        worst = max(worst, float(np.max(np.abs(rule.nodes + rule.nodes[::-1]))))
        worst = max(worst, float(np.max(np.abs(rule.weights - rule.weights[::-1]))))
        for k in range(2 * order + 2):
            expected = 0.0 if k % 2 else 2.0 / (k + 1)
            worst = max(worst, abs(integrate(rule, lambda t: t ** k) - expected))
    return CheckResult("Gauss-Legendre 精确度与对称性 (N<=20)", worst <= 1e-12, f"最大偏差 {worst:.2e}")


def check_exact_residuals() -> List[CheckResult]:
    results = []
    rng = np.random.default_rng(1)
    points = np.sort(rng.uniform(SINGULAR_EXCLUSION, 1.0, size=50))
    for experiment_id in EXPERIMENT_IDS:
        problem, _ = make_experiment(experiment_id)
        colloc = build_collocation(points, 50, 50, problem)
        values = np.asarray(residual_batch(problem, exact_surrogate(problem), colloc).value)
        worst = float(np.max(np.abs(values)))
        results.append(CheckResult(f"实验{experiment_id} 精确解残差", worst < 1e-10, f"max|R| = {worst:.2e}"))
    return results


def _cost_closure(experiment_id: int, net_config: NetworkConfig) -> Callable:
    problem, _ = make_experiment(experiment_id)
    config = TrainConfig(m1=6, m2=4, n1=6, n2=6, adam_iters=0)
    points = np.linspace(0.0, 1.0, config.m1)
    colloc = build_collocation(points, config.n1, config.n2, problem)

    def f(inputs):
        bound = bind_inputs(net_config, inputs)
        tape = bound.tape or Tape()
        return cost(problem, config, bound, points, colloc, tape, net_config)

    return f


def check_cost_gradients() -> List[CheckResult]:
    results = []
    for experiment_id in EXPERIMENT_IDS:
        worst = 0.0
        for seed in range(GRADIENT_INITS):
            net_config = NetworkConfig([1, 4, 5, 1], seed=seed)
            start = init_params(net_config).flatten()
            # 偏置不为零，使每个参数的梯度都不退化
            start = start + np.random.default_rng(100 + seed).normal(0.0, 0.1, size=start.size)
            worst = max(worst, check_gradient(_cost_closure(experiment_id, net_config), start))
        results.append(CheckResult(f"实验{experiment_id} 目标函数梯度", worst <= GRADIENT_TOLERANCE,
                                   f"最大相对误差 {worst:.2e}"))
    return results


def check_optimizers() -> List[CheckResult]:
    rng = np.random.default_rng(7)
    q, _ = np.linalg.qr(rng.normal(size=(5, 5)))
    matrix = q @ np.diag([1.0, 1.25, 1.5, 1.75, 2.0]) @ q.T
    start = rng.normal(size=5)
    # 极小点在原点，目标值趋于零时仍能分辨下降量
    result = run_lbfgs(lambda x: (0.5 * x @ matrix @ x, matrix @ x),
                       start, memory=5, tol=1e-12, max_iters=10)
    lbfgs_error = float(np.max(np.abs(result.x)))

    state = TrainState(ParameterSet([np.array([[1.0]])], [np.array([0.0])]))
    state = adam_step(state, np.array([2.0, 0.0]), lr=0.1)
    adam_error = abs(float(state.params.weights[0][0, 0]) - 0.9)
    return [
        CheckResult("L-BFGS 五维二次型", lbfgs_error <= 1e-10,
                    f"{result.iterations} 步, 偏差 {lbfgs_error:.2e}"),
        CheckResult("Adam 首步手算", adam_error <= 1e-6, f"偏差 {adam_error:.2e}"),
    ]


def check_reference() -> CheckResult:
    checks = REFERENCE.check_transcription()
    failed = [c for c in checks if not c.passed]
    notes = [f"实验{c.experiment_id} x={c.x}: {c.detail}" for c in checks if c.skipped]
    detail = f"{len(checks) - len(failed)}/{len(checks)} 行一致"
    if notes:
        detail += "；" + "；".join(notes)
    return CheckResult("发表数值转录", not failed, detail)


def run_verification(log_manager=None) -> dict:
    checks: List[CheckResult] = [
        check_orthogonality(),
        check_legendre_properties(),
        check_derivative(),
        check_quadrature(),
    ]
    checks.extend(check_exact_residuals())
    checks.extend(check_cost_gradients())
    checks.extend(check_optimizers())
    checks.append(check_reference())

    failed = [c for c in checks if not c.passed]
    if log_manager:
        for c in checks:
            if c.passed:
                log_manager.logger.info(f"{c.name}: 通过 ({c.detail})", "CLI")
            else:
                log_manager.log_error("CLI", f"{c.name}: 未通过", c.detail)
    message = f"{len(checks) - len(failed)}/{len(checks)} 项检查通过"
    return {"success": not failed, "message": message, "checks": checks}
