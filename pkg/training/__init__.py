"""
目标函数与优化器：Adam 预热后接 L-BFGS
"""

from network.config import ConfigurationError
from .config import TrainConfig, SAMPLING_MODES, TABLE1_ORDERS
from .adam import TrainState, HistoryEntry, TrainingDivergenceError, adam_step, HISTORY_COLUMNS
from .lbfgs import LBFGSResult, run_lbfgs, strong_wolfe, two_loop_direction
from .cost import CostEvaluation, cost, evaluate_cost, check_supervision
from .trainer import Trainer, train, sample_train_points, sample_test_points

__all__ = [
    "ConfigurationError",
    "TrainConfig",
    "SAMPLING_MODES",
    "TABLE1_ORDERS",
    "TrainState",
    "HistoryEntry",
    "TrainingDivergenceError",
    "adam_step",
    "HISTORY_COLUMNS",
    "LBFGSResult",
    "run_lbfgs",
    "strong_wolfe",
    "two_loop_direction",
    "CostEvaluation",
    "cost",
    "evaluate_cost",
    "check_supervision",
    "Trainer",
    "train",
    "sample_train_points",
    "sample_test_points",
]
