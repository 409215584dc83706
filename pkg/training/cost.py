"""
目标函数：数据项 MSE 与残差项 MSE 的加权和

    cost = w_data * mean_j (y_t(x_j) - y_p(x_j))^2 + w_res * mean_j R_m(x_j)^2
"""

from concurrent.futures import Executor
from typing import List, NamedTuple, Optional

import numpy as np

from autodiff import Scalar, Tape, lane_sum
from network.config import NetworkConfig, ConfigurationError
from network.model import BoundParameters, bind_parameters, forward
from network.params import ParameterSet
from problem.residual import residual_batch
from problem.spec import CollocationSet, ProblemSpec
from .config import TrainConfig


class CostTerms(NamedTuple):
    data: Scalar
    residual: Scalar
    total: Scalar


class CostEvaluation(NamedTuple):
    total: float
    data_mse: float
    residual_mse: float
    gradient: np.ndarray


def check_supervision(problem: ProblemSpec, config: TrainConfig):
    if config.supervised and config.loss_weights[0] > 0 and problem.exact is None:
        raise ConfigurationError(f"问题 {problem.name!r} 没有精确解，不能使用监督模式")


def _terms(problem: ProblemSpec, config: TrainConfig, net_config: NetworkConfig,
           bound: BoundParameters, train_points: np.ndarray, colloc: CollocationSet,
           tape: Tape, data_count: int, residual_count: int) -> CostTerms:
    """按总点数归一化的部分和，分块后各块的 CostTerms 相加即为整体"""
    data_w, residual_w = config.effective_weights()
    net = lambda z: forward(net_config, bound, z, tape)

    data = Scalar(0.0)
    if data_w > 0 and len(train_points) > 0:
        targets = np.asarray(problem.exact(train_points), dtype=float)
        diff = net(np.array(train_points)) - targets
        data = lane_sum(diff * diff, axis=None) * (1.0 / data_count)

    res = Scalar(0.0)
    if residual_w > 0 and len(colloc) > 0:
        r = residual_batch(problem, net, colloc, tape)
        res = lane_sum(r * r, axis=None) * (1.0 / residual_count)

    total = data * data_w + res * residual_w
    return CostTerms(data, res, total)


def cost(problem: ProblemSpec, config: TrainConfig, params, train_points, colloc: CollocationSet,
         tape: Tape, net_config: NetworkConfig) -> Scalar:
    """在 tape 上记录整个目标函数；params 可以是 ParameterSet 或已登记的参数"""
    check_supervision(problem, config)
    if isinstance(params, ParameterSet):
        params = bind_parameters(tape, params)
    train_points = np.asarray(train_points, dtype=float)
    return _terms(problem, config, net_config, params, train_points, colloc, tape,
                  max(len(train_points), 1), max(len(colloc), 1)).total


def _chunk_bounds(size: int, chunks: int) -> List[tuple]:
    edges = np.linspace(0, size, chunks + 1).astype(int)
    return list(zip(edges[:-1], edges[1:]))


def evaluate_cost(problem: ProblemSpec, config: TrainConfig, net_config: NetworkConfig,
                  params: ParameterSet, train_points, colloc: CollocationSet,
                  executor: Optional[Executor] = None) -> CostEvaluation:
    """
    计算目标值、两项 MSE 与对全部参数的梯度

    有 executor 且 workers > 1 时把训练点和配点各切成 workers 段连续块，
    每块在自己的计算带上求值；结果按块序号顺序相加，与完成先后无关。
    """
    check_supervision(problem, config)
    train_points = np.asarray(train_points, dtype=float)
    data_count = max(len(train_points), 1)
    residual_count = max(len(colloc), 1)
    chunks = config.workers if executor is not None else 1

    data_bounds = _chunk_bounds(len(train_points), chunks)
    colloc_bounds = _chunk_bounds(len(colloc), chunks)

    def run_chunk(index: int):
        tape = Tape()
        bound = bind_parameters(tape, params)
        d0, d1 = data_bounds[index]
        c0, c1 = colloc_bounds[index]
        terms = _terms(problem, config, net_config, bound, train_points[d0:d1],
                       colloc.subset(c0, c1), tape, data_count, residual_count)
        grad = tape.gradient(terms.total, bound.inputs)
        return float(terms.data.value), float(terms.residual.value), float(terms.total.value), grad

    if chunks == 1:
        results = [run_chunk(0)]
    else:
        futures = [executor.submit(run_chunk, i) for i in range(chunks)]
        results = [f.result() for f in futures]

    data_mse = residual_mse = total = 0.0
    gradient = np.zeros(params.flatten().size)
    for data_part, residual_part, total_part, grad in results:
        data_mse += data_part
        residual_mse += residual_part
        total += total_part
        gradient += grad
    return CostEvaluation(total, data_mse, residual_mse, gradient)
