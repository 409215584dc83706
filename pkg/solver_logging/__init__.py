"""
求解器日志模块
"""

from .logger import SolverLogger, LogLevel
from .log_manager import LogManager

__all__ = ["SolverLogger", "LogLevel", "LogManager"]
