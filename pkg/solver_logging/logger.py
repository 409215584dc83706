"""
求解器日志器

一次运行（一个实验或一次校验）对应一个日志文件 <log_dir>/<run_name>.log，
每行格式为 [时间] [级别] [组件] 消息。关闭时追加本次运行的耗时与告警统计。
"""

import os
import time
from collections import Counter
from datetime import datetime
from enum import Enum
from functools import partialmethod

TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S"


class LogLevel(Enum):
    """日志级别"""

    DEBUG = 1
    INFO = 2
    WARNING = 3
    ERROR = 4
    CRITICAL = 5

    @classmethod
    def from_name(cls, name: str) -> "LogLevel":
        """按名称解析日志级别（不区分大小写）"""
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"未知的日志级别: {name}")


class SolverLogger:
    """单次求解运行的文件日志器；写文件失败只提示一次，不向调用方抛出"""

    def __init__(self, run_name: str, log_dir: str = "logs"):
        self.run_name = run_name
        self.log_dir = log_dir
        self.log_file = os.path.join(log_dir, f"{run_name}.log")
        self.min_level = LogLevel.INFO
        self.counts: Counter = Counter()
        self._started = time.perf_counter()
        self._write_failed = False

        os.makedirs(log_dir, exist_ok=True)
        self._emit(LogLevel.INFO, f"运行 {self.run_name} 启动 (pid {os.getpid()})", "SYSTEM")

    def _emit(self, level: LogLevel, message: str, component: str):
        stamp = datetime.now().strftime(TIMESTAMP_FORMAT)
        try:
            with open(self.log_file, "a", encoding="utf-8") as f:
                f.write(f"[{stamp}] [{level.name}] [{component}] {message}\n")
        except OSError as e:
            if not self._write_failed:
                print(f"写入日志 {self.log_file} 失败: {e}")
            self._write_failed = True

    def log(self, level: LogLevel, message: str, component: str = "SYSTEM"):
        """低于 min_level 的记录丢弃，其余计数后写入"""
        if level.value < self.min_level.value:
            return
        self.counts[level] += 1
        self._emit(level, message, component)

    debug = partialmethod(log, LogLevel.DEBUG)
    info = partialmethod(log, LogLevel.INFO)
    warning = partialmethod(log, LogLevel.WARNING)
    error = partialmethod(log, LogLevel.ERROR)
    critical = partialmethod(log, LogLevel.CRITICAL)

    def set_log_level(self, level: LogLevel):
        self.min_level = level

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self._started

    def close(self):
        problems = self.counts[LogLevel.WARNING]
        failures = self.counts[LogLevel.ERROR] + self.counts[LogLevel.CRITICAL]
        self._emit(
            LogLevel.INFO,
            f"运行 {self.run_name} 结束: 耗时 {self.elapsed:.1f}s, 警告 {problems} 条, 错误 {failures} 条",
            "SYSTEM",
        )
