"""
积分方程实例、配点集与残差装配
"""

from .spec import (
    ProblemSpec,
    CollocationSet,
    ProblemDefinitionError,
    build_collocation,
    SINGULAR_EXCLUSION,
)
from .residual import residual, residual_batch, exact_surrogate
from .experiments import make_experiment, EXPERIMENT_IDS, EXPERIMENT_FORMS
from .lexer import ProblemLexer, Token, TokenType
from .parser import ProblemParser, parse_problem, load_problem

__all__ = [
    "ProblemSpec",
    "CollocationSet",
    "ProblemDefinitionError",
    "build_collocation",
    "SINGULAR_EXCLUSION",
    "residual",
    "residual_batch",
    "exact_surrogate",
    "make_experiment",
    "EXPERIMENT_IDS",
    "EXPERIMENT_FORMS",
    "ProblemLexer",
    "Token",
    "TokenType",
    "ProblemParser",
    "parse_problem",
    "load_problem",
]
