"""
Adam 优化器与训练状态
"""

import csv
import io
from typing import List, NamedTuple, Optional

import numpy as np

from network.params import ParameterSet

HISTORY_COLUMNS = ("iteration", "data_mse", "residual_mse", "total")


class HistoryEntry(NamedTuple):
    iteration: int
    data_mse: float
    residual_mse: float
    total: float


class TrainingDivergenceError(RuntimeError):
    """梯度或损失出现非有限值；state 保留出错前的训练状态与历史"""

    def __init__(self, message: str, state: Optional["TrainState"] = None):
        super().__init__(message)
        self.state = state


class TrainState:
    """
    参数、Adam 一二阶矩、步数与损失历史

    adam_step 返回新状态，但与旧状态共享同一份只追加的历史列表。
    """

    def __init__(self, params: ParameterSet, first_moment: np.ndarray = None,
                 second_moment: np.ndarray = None, step: int = 0,
                 history: List[HistoryEntry] = None):
        size = params.flatten().size
        self.params = params
        self.first_moment = np.zeros(size) if first_moment is None else np.asarray(first_moment, dtype=float)
        self.second_moment = np.zeros(size) if second_moment is None else np.asarray(second_moment, dtype=float)
        self.step = int(step)
        self.history: List[HistoryEntry] = [] if history is None else history
        if self.first_moment.shape != (size,) or self.second_moment.shape != (size,):
            raise ValueError("矩向量长度与参数个数不一致")

    def record(self, iteration: int, data_mse: float, residual_mse: float, total: float):
        if self.history and iteration <= self.history[-1].iteration:
            raise ValueError(
                f"历史迭代号必须递增: {iteration} <= {self.history[-1].iteration}"
            )
        self.history.append(HistoryEntry(int(iteration), float(data_mse),
                                         float(residual_mse), float(total)))

    def snapshot(self) -> "TrainState":
        return TrainState(
            ParameterSet(self.params.weights, self.params.biases),
            self.first_moment.copy(),
            self.second_moment.copy(),
            self.step,
            list(self.history),
        )

    def history_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(HISTORY_COLUMNS)
        for entry in self.history:
            writer.writerow([entry.iteration, repr(entry.data_mse),
                             repr(entry.residual_mse), repr(entry.total)])
        return buffer.getvalue()

    def write_history_csv(self, path: str):
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(self.history_csv())


def adam_step(state: TrainState, grad, lr: float = 1e-3, beta1: float = 0.9,
              beta2: float = 0.999, eps: float = 1e-8) -> TrainState:
    """带偏差修正的 Adam 更新"""
    grad = np.asarray(grad, dtype=float)
    if grad.shape != state.first_moment.shape:
        raise ValueError(f"梯度长度 {grad.size} 与参数个数 {state.first_moment.size} 不一致")
    if not np.all(np.isfinite(grad)):
        raise TrainingDivergenceError(f"Adam 第{state.step + 1}步梯度出现非有限值", state)

    step = state.step + 1
    m = beta1 * state.first_moment + (1.0 - beta1) * grad
    v = beta2 * state.second_moment + (1.0 - beta2) * grad * grad
    m_hat = m / (1.0 - beta1 ** step)
    v_hat = v / (1.0 - beta2 ** step)
    theta = state.params.flatten() - lr * m_hat / (np.sqrt(v_hat) + eps)
    return TrainState(state.params.unflatten(theta), m, v, step, state.history)
