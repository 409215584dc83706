"""
训练配置
"""

from typing import Optional, Tuple

from network.config import ConfigurationError

SAMPLING_MODES = ("equispaced", "random")

# 各实验的求积阶数 (N1, N2)；None 表示方程中没有该积分项
TABLE1_ORDERS = {
    1: (50, None),
    2: (50, 50),
    3: (50, 50),
    4: (50, 50),
}


class TrainConfig:
    """训练超参数；构造时给出默认值，validate() 做一致性检查"""

    def __init__(self, m1: int = 500, m2: int = 100, n1: int = 50, n2: Optional[int] = 50,
                 adam_iters: int = 5000, adam_lr: float = 1e-3,
                 lbfgs_memory: int = 10, lbfgs_tol: float = 1e-9, lbfgs_max_iters: int = 2000,
                 loss_weights: Tuple[float, float] = (1.0, 1.0), seed: int = 0,
                 supervised: bool = True, sampling: str = "equispaced", workers: int = 1,
                 log_every: int = 100):
        self.m1 = int(m1)
        self.m2 = int(m2)
        self.n1 = int(n1)
        self.n2 = None if n2 is None else int(n2)
        self.adam_iters = int(adam_iters)
        self.adam_lr = float(adam_lr)
        self.lbfgs_memory = int(lbfgs_memory)
        self.lbfgs_tol = float(lbfgs_tol)
        self.lbfgs_max_iters = int(lbfgs_max_iters)
        self.loss_weights = (float(loss_weights[0]), float(loss_weights[1]))
        self.seed = int(seed)
        self.supervised = bool(supervised)
        self.sampling = sampling
        self.workers = int(workers)
        self.log_every = int(log_every)

    @classmethod
    def table1(cls, experiment_id: int, **overrides) -> "TrainConfig":
        if experiment_id not in TABLE1_ORDERS:
            raise ConfigurationError(f"未知的实验编号: {experiment_id}")
        n1, n2 = TABLE1_ORDERS[experiment_id]
        settings = dict(m1=500, m2=100, n1=n1, n2=n2, adam_iters=5000)
        settings.update(overrides)
        return cls(**settings)

    @property
    def fredholm_order(self) -> int:
        """没有 Fredholm 项时仍构造一个零阶规则占位"""
        return 0 if self.n2 is None else self.n2

    def replace(self, **overrides) -> "TrainConfig":
        settings = self.to_dict()
        settings["log_every"] = self.log_every
        settings.update(overrides)
        return TrainConfig(**settings)

    def validate(self) -> "TrainConfig":
        if self.m1 <= 0 or self.m2 <= 0:
            raise ConfigurationError(f"m1、m2 必须为正: m1={self.m1}, m2={self.m2}")
        if self.n1 < 0 or (self.n2 is not None and self.n2 < 0):
            raise ConfigurationError(f"求积阶数不能为负: N1={self.n1}, N2={self.n2}")
        if self.adam_iters < 0:
            raise ConfigurationError(f"adam_iters 不能为负: {self.adam_iters}")
        if self.adam_lr <= 0:
            raise ConfigurationError(f"adam_lr 必须为正: {self.adam_lr}")
        if self.lbfgs_memory < 1:
            raise ConfigurationError(f"lbfgs_memory 至少为 1: {self.lbfgs_memory}")
        if self.lbfgs_tol < 0 or self.lbfgs_max_iters < 0:
            raise ConfigurationError("L-BFGS 停止条件不能为负")
        data_w, residual_w = self.loss_weights
        if data_w < 0 or residual_w < 0:
            raise ConfigurationError(f"损失权重不能为负: {self.loss_weights}")
        if data_w == 0 and residual_w == 0:
            raise ConfigurationError("损失权重不能同时为零")
        if not self.supervised and residual_w == 0:
            raise ConfigurationError("无监督模式下残差权重为零，目标函数恒为零")
        if self.sampling not in SAMPLING_MODES:
            raise ConfigurationError(
                f"未知的采样方式 '{self.sampling}'，可选: {', '.join(SAMPLING_MODES)}"
            )
        if self.workers < 1:
            raise ConfigurationError(f"workers 至少为 1: {self.workers}")
        return self

    def effective_weights(self) -> Tuple[float, float]:
        """无监督模式强制数据项权重为 0"""
        data_w, residual_w = self.loss_weights
        return (data_w if self.supervised else 0.0, residual_w)

    def to_dict(self) -> dict:
        return {
            "m1": self.m1,
            "m2": self.m2,
            "n1": self.n1,
            "n2": self.n2,
            "adam_iters": self.adam_iters,
            "adam_lr": self.adam_lr,
            "lbfgs_memory": self.lbfgs_memory,
            "lbfgs_tol": self.lbfgs_tol,
            "lbfgs_max_iters": self.lbfgs_max_iters,
            "loss_weights": self.loss_weights,
            "seed": self.seed,
            "supervised": self.supervised,
            "sampling": self.sampling,
            "workers": self.workers,
        }
