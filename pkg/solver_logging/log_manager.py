"""
日志管理器 - 为训练、优化器和基准测试组件提供统一的日志接口
"""

from typing import Any, Dict

from .logger import SolverLogger, LogLevel


class LogManager:
    """日志管理器"""

    def __init__(self, run_name: str, log_dir: str = "logs"):
        self.logger = SolverLogger(run_name, log_dir)

    def log_experiment_start(self, experiment_id: int, settings: Dict[str, Any]):
        """记录实验开始及其配置快照"""
        items = ", ".join(f"{k}={v}" for k, v in settings.items())
        self.logger.info(f"实验{experiment_id}开始: {items}", "BENCH")

    def log_experiment_end(
        self, experiment_id: int, l2_train: float, l2_test: float, wall_time: float
    ):
        message = (
            f"实验{experiment_id}完成: L2_train={l2_train:.6e}, "
            f"L2_test={l2_test:.6e} (耗时: {wall_time:.1f}s)"
        )
        self.logger.info(message, "BENCH")

    def log_adam_progress(
        self, iteration: int, data_mse: float, residual_mse: float, total: float
    ):
        """记录Adam迭代进度"""
        message = (
            f"Adam 第{iteration}步: data={data_mse:.3e}, "
            f"residual={residual_mse:.3e}, total={total:.3e}"
        )
        self.logger.debug(message, "ADAM")

    def log_lbfgs_iteration(self, iteration: int, value: float, grad_norm: float):
        message = f"L-BFGS 第{iteration}步: f={value:.6e}, |g|_inf={grad_norm:.3e}"
        self.logger.debug(message, "LBFGS")

    def log_line_search_fallback(self, iteration: int, recovered: bool):
        """记录强Wolfe线搜索失败后的回退"""
        status = "成功" if recovered else "失败"
        message = f"L-BFGS 第{iteration}步线搜索失败，回退最速下降{status}"
        if recovered:
            self.logger.warning(message, "LBFGS")
        else:
            self.logger.error(message, "LBFGS")

    def log_phase(self, phase: str, details: str = ""):
        """记录训练阶段切换"""
        message = f"进入阶段: {phase}"
        if details:
            message += f" - {details}"
        self.logger.info(message, "TRAINER")

    def log_checkpoint(self, path: str, saved: bool = True):
        action = "保存" if saved else "加载"
        self.logger.info(f"参数检查点{action}: {path}", "TRAINER")

    def log_error(self, component: str, error_message: str, details: str = ""):
        """记录错误"""
        message = f"{error_message}"
        if details:
            message += f" - {details}"
        self.logger.error(message, component)

    def set_log_level(self, level: LogLevel):
        """设置日志级别"""
        self.logger.set_log_level(level)

    def close(self):
        self.logger.close()
