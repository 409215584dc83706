"""
LDNN 第一网络：正交 Legendre 第一隐层 + tanh 深层的前馈网络
"""

from .config import NetworkConfig, ConfigurationError, ACTIVATIONS, FIRST_LAYERS
from .params import (
    ParameterSet,
    init_params,
    parameter_count,
    save_parameters,
    load_parameters,
)
from .model import BoundParameters, bind_parameters, bind_inputs, forward, forward_batch, predict

__all__ = [
    "NetworkConfig",
    "ConfigurationError",
    "ACTIVATIONS",
    "FIRST_LAYERS",
    "ParameterSet",
    "init_params",
    "parameter_count",
    "save_parameters",
    "load_parameters",
    "BoundParameters",
    "bind_parameters",
    "bind_inputs",
    "forward",
    "forward_batch",
    "predict",
]
