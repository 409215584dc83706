"""
训练流程：采样 -> 配点集 -> Adam -> L-BFGS
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Tuple

import numpy as np

from network.config import NetworkConfig
from network.params import ParameterSet, init_params
from problem.spec import CollocationSet, ProblemSpec, build_collocation
from .adam import TrainState, TrainingDivergenceError, adam_step
from .config import TrainConfig
from .cost import CostEvaluation, check_supervision, evaluate_cost
from .lbfgs import LBFGSResult, run_lbfgs


def sample_train_points(config: TrainConfig) -> np.ndarray:
    """m1 个训练点：默认含端点的等距网格，random 模式为按种子均匀采样后排序"""
    if config.sampling == "random":
        rng = np.random.default_rng(config.seed)
        return np.sort(rng.uniform(0.0, 1.0, size=config.m1))
    return np.linspace(0.0, 1.0, config.m1)


def _test_offset(config: TrainConfig) -> float:
    """
    测试网格 (k+θ)/m2 的偏移 θ

    θ 与等距训练网格重合的位置是间距 d = gcd(m2, m1-1)/(m1-1) 的格点，
    取离 0.5 最近的两格点中点，使测试点与训练点的最小距离为 d/(2 m2)。
    """
    if config.sampling == "random" or config.m1 < 2:
        return 0.5
    intervals = config.m1 - 1
    spacing = math.gcd(config.m2, intervals) / intervals
    return (math.floor(0.5 / spacing) + 0.5) * spacing


def sample_test_points(config: TrainConfig) -> np.ndarray:
    """m2 个等距测试点，偏移量保证不与训练网格重合"""
    return (np.arange(config.m2) + _test_offset(config)) / config.m2


class Trainer:
    """单次训练运行；日志管理器可选"""

    def __init__(self, problem: ProblemSpec, net_config: NetworkConfig, train_config: TrainConfig):
        self.problem = problem
        self.net_config = net_config.validate()
        self.config = train_config.validate()
        check_supervision(problem, train_config)

        self.points = sample_train_points(train_config)
        self.colloc: CollocationSet = build_collocation(
            self.points, train_config.n1, train_config.fredholm_order, problem
        )
        self.log_manager = None
        self._executor: Optional[ThreadPoolExecutor] = None
        self.lbfgs_result: Optional[LBFGSResult] = None

    def set_log_manager(self, log_manager):
        self.log_manager = log_manager
        if self.log_manager:
            self.log_manager.logger.info(
                f"训练器初始化: 训练点 {len(self.points)}, 配点 {len(self.colloc)}, "
                f"N1={self.config.n1}, N2={self.config.n2}, workers={self.config.workers}",
                "TRAINER",
            )

    def evaluate(self, params: ParameterSet) -> CostEvaluation:
        return evaluate_cost(self.problem, self.config, self.net_config, params,
                             self.points, self.colloc, self._executor)

    def train(self, initial_params: ParameterSet = None) -> Tuple[ParameterSet, TrainState]:
        params = initial_params if initial_params is not None else init_params(self.net_config)
        state = TrainState(params)
        if self.config.workers > 1:
            self._executor = ThreadPoolExecutor(max_workers=self.config.workers)
        try:
            state = self._run_adam(state)
            state = self._run_lbfgs(state)
        finally:
            if self._executor is not None:
                self._executor.shutdown(wait=True)
                self._executor = None
        return state.params, state

    def _run_adam(self, state: TrainState) -> TrainState:
        if self.log_manager:
            self.log_manager.log_phase("Adam", f"{self.config.adam_iters} 步, lr={self.config.adam_lr}")
        best_params = state.params
        best_total = None
        for iteration in range(self.config.adam_iters + 1):
            evaluation = self.evaluate(state.params)
            if not np.isfinite(evaluation.total):
                if self.log_manager:
                    self.log_manager.log_error("ADAM", f"第{iteration}步损失出现非有限值")
                raise TrainingDivergenceError(f"Adam 第{iteration}步损失出现非有限值", state)
            state.record(iteration, evaluation.data_mse, evaluation.residual_mse, evaluation.total)
            if best_total is None or evaluation.total < best_total:
                best_total = evaluation.total
                best_params = state.params
            if self.log_manager and iteration % max(self.config.log_every, 1) == 0:
                self.log_manager.log_adam_progress(
                    iteration, evaluation.data_mse, evaluation.residual_mse, evaluation.total
                )
            if iteration == self.config.adam_iters:
                break
            try:
                state = adam_step(state, evaluation.gradient, self.config.adam_lr)
            except TrainingDivergenceError as e:
                if self.log_manager:
                    self.log_manager.log_error("ADAM", str(e))
                raise
        # L-BFGS 从 Adam 阶段损失最小的参数出发
        return TrainState(best_params, state.first_moment, state.second_moment,
                          state.step, state.history)

    def _run_lbfgs(self, state: TrainState) -> TrainState:
        if self.log_manager:
            self.log_manager.log_phase(
                "L-BFGS", f"memory={self.config.lbfgs_memory}, tol={self.config.lbfgs_tol}"
            )
        template = state.params
        terms = {}

        def objective(vector: np.ndarray):
            evaluation = self.evaluate(template.unflatten(vector))
            terms[vector.tobytes()] = evaluation
            return evaluation.total, evaluation.gradient

        offset = state.history[-1].iteration if state.history else 0

        def record(iteration, x, value, grad):
            evaluation = terms.get(x.tobytes())
            data_mse = evaluation.data_mse if evaluation else float("nan")
            residual_mse = evaluation.residual_mse if evaluation else float("nan")
            state.record(offset + iteration, data_mse, residual_mse, value)
            terms.clear()

        result = run_lbfgs(objective, template.flatten(), memory=self.config.lbfgs_memory,
                           tol=self.config.lbfgs_tol, max_iters=self.config.lbfgs_max_iters,
                           log_manager=self.log_manager, callback=record)
        self.lbfgs_result = result
        if result.warning and self.log_manager:
            self.log_manager.logger.warning(
                f"L-BFGS 在第{result.iterations}步无法继续下降，返回当前最优点", "LBFGS"
            )
        if not np.isfinite(result.value):
            raise TrainingDivergenceError("L-BFGS 目标值出现非有限值", state)
        return TrainState(template.unflatten(result.x), state.first_moment,
                          state.second_moment, state.step, state.history)


def train(problem: ProblemSpec, net_config: NetworkConfig, train_config: TrainConfig,
          log_manager=None, initial_params: ParameterSet = None) -> Tuple[ParameterSet, TrainState]:
    trainer = Trainer(problem, net_config, train_config)
    trainer.set_log_manager(log_manager)
    return trainer.train(initial_params)
