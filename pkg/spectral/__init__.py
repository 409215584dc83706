"""
谱方法基础层：Legendre多项式与Gauss-Legendre求积
"""

from .legendre import (
    legendre_eval,
    legendre_eval_all,
    legendre_derivative,
    legendre_explicit,
)
from .quadrature import (
    QuadratureRule,
    MappedRule,
    QuadratureError,
    gauss_legendre_rule,
    integrate,
    map_volterra,
    map_fredholm,
)

__all__ = [
    "legendre_eval",
    "legendre_eval_all",
    "legendre_derivative",
    "legendre_explicit",
    "QuadratureRule",
    "MappedRule",
    "QuadratureError",
    "gauss_legendre_rule",
    "integrate",
    "map_volterra",
    "map_fredholm",
]
