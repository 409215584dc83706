"""
误差度量
"""

import numpy as np


def l2_norm(y_true, y_pred) -> float:
    """未归一化的 2-范数 [sum_j (y_t - y_p)^2]^(1/2)，不是 RMSE"""
    y_true = np.asarray(y_true, dtype=float).ravel()
    y_pred = np.asarray(y_pred, dtype=float).ravel()
    if y_true.shape != y_pred.shape:
        raise ValueError(f"长度不一致: {y_true.size} != {y_pred.size}")
    return float(np.sqrt(np.sum((y_true - y_pred) ** 2)))


def abs_errors(y_true, y_pred) -> np.ndarray:
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    if y_true.shape != y_pred.shape:
        raise ValueError(f"长度不一致: {y_true.size} != {y_pred.size}")
    return np.abs(y_true - y_pred)
