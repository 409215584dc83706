"""
反向模式自动微分层
"""

from .tape import (
    Tape,
    Scalar,
    TapeError,
    DomainError,
    OPS,
    record,
    gradient,
    exp,
    sin,
    cos,
    tanh,
    legendre,
    dot,
    stack,
    affine,
    legendre_rows,
    lane_sum,
    lane_mean,
)
from .gradcheck import check_gradient, central_difference

__all__ = [
    "Tape",
    "Scalar",
    "TapeError",
    "DomainError",
    "OPS",
    "record",
    "gradient",
    "exp",
    "sin",
    "cos",
    "tanh",
    "legendre",
    "dot",
    "stack",
    "affine",
    "legendre_rows",
    "lane_sum",
    "lane_mean",
    "check_gradient",
    "central_difference",
]
