"""
端到端实验：构造问题、训练、在测试网格与六个报告点上评估
"""

import time
from typing import Dict, List, NamedTuple, Optional

import numpy as np

from network.config import NetworkConfig
from network.model import predict
from network.params import ParameterSet, parameter_count
from problem.experiments import make_experiment
from problem.spec import ProblemSpec
from training.adam import TrainState
from training.config import TrainConfig
from training.trainer import Trainer, sample_test_points
from .metrics import l2_norm
from .reference import REPORT_POINTS

METHOD_LDNN = "LDNN"
METHOD_FNN = "FNN"


class ReportRow(NamedTuple):
    x: float
    y_exact: float
    y_pred: float
    abs_error: float


class ExperimentReport:
    """一次实验运行的结果"""

    def __init__(self, experiment_id: int, rows: List[ReportRow], l2_train: float, l2_test: float,
                 wall_time_seconds: float = 0.0, config: Optional[Dict] = None,
                 method: str = METHOD_LDNN):
        self.experiment_id = experiment_id
        self.rows = list(rows)
        self.l2_train = float(l2_train)
        self.l2_test = float(l2_test)
        self.wall_time_seconds = float(wall_time_seconds)
        self.config = dict(config or {})
        self.method = method
        self.params: Optional[ParameterSet] = None
        self.state: Optional[TrainState] = None

    def row_at(self, x: float) -> Optional[ReportRow]:
        for row in self.rows:
            if abs(row.x - x) < 1e-12:
                return row
        return None

    @property
    def reporting_rows(self) -> List[ReportRow]:
        return [row for row in (self.row_at(x) for x in REPORT_POINTS) if row is not None]

    def is_consistent(self) -> bool:
        """abs_error 可由 exact 与 pred 重新算出，L2 非负"""
        for row in self.rows:
            if np.isnan(row.y_exact):
                continue
            if row.abs_error != abs(row.y_exact - row.y_pred):
                return False
        return not (self.l2_train < 0 or self.l2_test < 0)

    def __repr__(self):
        return (f"ExperimentReport({self.method} #{self.experiment_id}, rows={len(self.rows)}, "
                f"l2_test={self.l2_test:.3e})")


def evaluation_grid(config: TrainConfig) -> np.ndarray:
    """测试网格与六个报告点的并集，升序"""
    return np.union1d(sample_test_points(config), np.array(REPORT_POINTS))


def build_report(experiment_id: int, problem: ProblemSpec, net_config: NetworkConfig,
                 train_config: TrainConfig, params: ParameterSet, train_points: np.ndarray,
                 wall_time: float, method: str) -> ExperimentReport:
    grid = evaluation_grid(train_config)
    y_pred = predict(net_config, params, grid)
    if problem.exact is not None:
        y_exact = np.asarray(problem.exact(grid), dtype=float)
        l2_train = l2_norm(problem.exact(train_points), predict(net_config, params, train_points))
        test = sample_test_points(train_config)
        l2_test = l2_norm(problem.exact(test), predict(net_config, params, test))
    else:
        y_exact = np.full(grid.shape, np.nan)
        l2_train = l2_test = float("nan")
    rows = [ReportRow(float(x), float(ye), float(yp), float(abs(ye - yp)))
            for x, ye, yp in zip(grid, y_exact, y_pred)]

    snapshot = dict(train_config.to_dict())
    snapshot.update(net_config.to_dict())
    snapshot["parameter_count"] = parameter_count(net_config)
    snapshot["problem"] = problem.name
    return ExperimentReport(experiment_id, rows, l2_train, l2_test, wall_time, snapshot, method)


def run_experiment(experiment_id: int, train_config: TrainConfig = None,
                   net_config: NetworkConfig = None, log_manager=None,
                   problem: ProblemSpec = None, initial_params: ParameterSet = None,
                   method: str = METHOD_LDNN) -> ExperimentReport:
    """
    训练并生成报告；problem 为空时按编号构造内置实验

    训练发散时 TrainingDivergenceError 原样抛出，异常上带有出错前的 TrainState。
    """
    if problem is None:
        problem, _ = make_experiment(experiment_id)
    train_config = train_config or TrainConfig.table1(experiment_id)
    net_config = net_config or NetworkConfig.table1()

    if log_manager:
        settings = dict(train_config.to_dict())
        settings["layers"] = net_config.layer_sizes
        settings["method"] = method
        log_manager.log_experiment_start(experiment_id, settings)

    start = time.perf_counter()
    trainer = Trainer(problem, net_config, train_config)
    trainer.set_log_manager(log_manager)
    try:
        params, state = trainer.train(initial_params)
    except Exception as e:
        if log_manager:
            log_manager.log_error("BENCH", f"实验{experiment_id}训练失败", str(e))
        raise
    wall_time = time.perf_counter() - start

    report = build_report(experiment_id, problem, net_config, train_config, params,
                          trainer.points, wall_time, method)
    report.params = params
    report.state = state
    if log_manager:
        log_manager.log_experiment_end(experiment_id, report.l2_train, report.l2_test, wall_time)
    return report


def run_fnn_baseline(experiment_id: int, train_config: TrainConfig = None,
                     net_config: NetworkConfig = None, log_manager=None,
                     problem: ProblemSpec = None, initial_params: ParameterSet = None) -> ExperimentReport:
    """
    普通前馈网络对照：第一隐层换成同宽的 tanh 层，只用数据项训练

    参数个数与同结构的 LDNN 相同。
    """
    train_config = train_config or TrainConfig.table1(experiment_id)
    net_config = net_config or NetworkConfig.table1()
    baseline_net = net_config.with_first_layer("tanh")
    baseline_train = train_config.replace(loss_weights=(1.0, 0.0), supervised=True)
    return run_experiment(experiment_id, baseline_train, baseline_net, log_manager,
                          problem, initial_params, METHOD_FNN)
