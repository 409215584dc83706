"""
网络结构配置
"""

from typing import List, Optional

ACTIVATIONS = ("tanh",)
FIRST_LAYERS = ("legendre", "tanh")

# 基准实验统一使用的结构
TABLE1_LAYERS = [1, 10, 30, 20, 10, 1]


class ConfigurationError(ValueError):
    """配置项之间不相容或取值非法"""


class NetworkConfig:
    """
    layer_sizes = [d, NL(1), ..., NL(M-1), 1]

    第一隐层的第 k 个神经元使用 L_{legendre_degrees[k]}；
    first_layer="tanh" 时第一隐层退化为普通 tanh 层（FNN 对照网络）。
    """

    def __init__(self, layer_sizes: List[int], legendre_degrees: Optional[List[int]] = None,
                 hidden_activation: str = "tanh", first_layer: str = "legendre", seed: int = 0):
        self.layer_sizes = [int(n) for n in layer_sizes]
        if legendre_degrees is None and len(self.layer_sizes) > 1:
            legendre_degrees = list(range(self.layer_sizes[1]))
        self.legendre_degrees = [int(k) for k in (legendre_degrees or [])]
        self.hidden_activation = hidden_activation
        self.first_layer = first_layer
        self.seed = int(seed)

    @classmethod
    def table1(cls, seed: int = 0) -> "NetworkConfig":
        return cls(list(TABLE1_LAYERS), seed=seed)

    @property
    def depth(self) -> int:
        """M：含输出层在内的层数"""
        return len(self.layer_sizes) - 1

    def validate(self) -> "NetworkConfig":
        sizes = self.layer_sizes
        if len(sizes) < 3:
            raise ConfigurationError(f"layer_sizes 至少需要三项: {sizes}")
        if sizes[0] != 1:
            raise ConfigurationError(f"仅支持一维输入 (d=1)，得到 d={sizes[0]}")
        if sizes[-1] != 1:
            raise ConfigurationError(f"输出层宽度必须为 1，得到 {sizes[-1]}")
        if any(n <= 0 for n in sizes):
            raise ConfigurationError(f"层宽必须为正: {sizes}")
        if len(self.legendre_degrees) != sizes[1]:
            raise ConfigurationError(
                f"legendre_degrees 长度 {len(self.legendre_degrees)} 与第一隐层宽度 {sizes[1]} 不一致"
            )
        if any(k < 0 for k in self.legendre_degrees):
            raise ConfigurationError(f"Legendre 次数不能为负: {self.legendre_degrees}")
        if self.hidden_activation not in ACTIVATIONS:
            raise ConfigurationError(
                f"未知的隐层激活函数 '{self.hidden_activation}'，可选: {', '.join(ACTIVATIONS)}"
            )
        if self.first_layer not in FIRST_LAYERS:
            raise ConfigurationError(
                f"未知的第一隐层类型 '{self.first_layer}'，可选: {', '.join(FIRST_LAYERS)}"
            )
        return self

    def with_first_layer(self, first_layer: str) -> "NetworkConfig":
        return NetworkConfig(list(self.layer_sizes), list(self.legendre_degrees),
                             self.hidden_activation, first_layer, self.seed)

    def to_dict(self) -> dict:
        return {
            "layer_sizes": list(self.layer_sizes),
            "legendre_degrees": list(self.legendre_degrees),
            "hidden_activation": self.hidden_activation,
            "first_layer": self.first_layer,
            "seed": self.seed,
        }

    def __repr__(self):
        return f"NetworkConfig({self.layer_sizes}, first_layer={self.first_layer!r}, seed={self.seed})"
