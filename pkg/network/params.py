"""
网络参数的初始化、展平与 CSV 持久化

展平顺序：W(1) 按行、b(1)、W(2) 按行、b(2)、……
"""

from typing import List, Tuple

import numpy as np

from .config import NetworkConfig, ConfigurationError

HEADER_PREFIX = "# layer_sizes="


class ParameterSet:
    """weights[i] 形状为 NL(i+1) x NL(i)，biases[i] 长度为 NL(i+1)"""

    def __init__(self, weights: List[np.ndarray], biases: List[np.ndarray]):
        if len(weights) != len(biases):
            raise ValueError("权重与偏置的层数不一致")
        self.weights = [np.array(w, dtype=float) for w in weights]
        self.biases = [np.array(b, dtype=float) for b in biases]
        for w, b in zip(self.weights, self.biases):
            if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
                raise ValueError(f"参数形状不一致: W{w.shape}, b{b.shape}")

    @property
    def shapes(self) -> List[Tuple[int, int]]:
        return [w.shape for w in self.weights]

    def flatten(self) -> np.ndarray:
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.ravel())
            parts.append(b)
        return np.concatenate(parts) if parts else np.zeros(0)

    @classmethod
    def from_flat(cls, config: NetworkConfig, vector) -> "ParameterSet":
        vector = np.asarray(vector, dtype=float)
        expected = parameter_count(config)
        if vector.shape != (expected,):
            raise ValueError(f"参数向量长度 {vector.size} 与结构要求的 {expected} 不一致")
        weights, biases = [], []
        offset = 0
        sizes = config.layer_sizes
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            count = fan_in * fan_out
            weights.append(vector[offset:offset + count].reshape(fan_out, fan_in))
            offset += count
            biases.append(vector[offset:offset + fan_out])
            offset += fan_out
        return cls(weights, biases)

    def unflatten(self, vector) -> "ParameterSet":
        """按本参数集的形状把展平向量还原"""
        vector = np.asarray(vector, dtype=float)
        if vector.size != sum(w.size + b.size for w, b in zip(self.weights, self.biases)):
            raise ValueError(f"参数向量长度 {vector.size} 与形状 {self.shapes} 不一致")
        weights, biases = [], []
        offset = 0
        for w, b in zip(self.weights, self.biases):
            weights.append(vector[offset:offset + w.size].reshape(w.shape))
            offset += w.size
            biases.append(vector[offset:offset + b.size])
            offset += b.size
        return ParameterSet(weights, biases)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.flatten())))

    def __eq__(self, other):
        if not isinstance(other, ParameterSet) or self.shapes != other.shapes:
            return False
        return bool(np.array_equal(self.flatten(), other.flatten()))

    def __repr__(self):
        return f"ParameterSet(shapes={self.shapes})"


def parameter_count(config: NetworkConfig) -> int:
    sizes = config.layer_sizes
    return sum(fan_in * fan_out + fan_out for fan_in, fan_out in zip(sizes[:-1], sizes[1:]))


def init_params(config: NetworkConfig) -> ParameterSet:
    """Glorot 正态初始化：方差 2/(fan_in+fan_out)，偏置为零"""
    config.validate()
    rng = np.random.default_rng(config.seed)
    weights, biases = [], []
    sizes = config.layer_sizes
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        std = np.sqrt(2.0 / (fan_in + fan_out))
        weights.append(rng.normal(0.0, std, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return ParameterSet(weights, biases)


def save_parameters(path: str, config: NetworkConfig, params: ParameterSet):
    """第一行记录 layer_sizes，其后每行一个参数（repr 精度，可无损读回）"""
    if params.shapes != [(o, i) for i, o in zip(config.layer_sizes[:-1], config.layer_sizes[1:])]:
        raise ValueError("参数形状与网络结构不一致")
    lines = [HEADER_PREFIX + ",".join(str(n) for n in config.layer_sizes)]
    lines.extend(repr(float(v)) for v in params.flatten())
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


def load_parameters(path: str) -> Tuple[NetworkConfig, ParameterSet]:
    with open(path, "r", encoding="utf-8") as f:
        lines = [line.strip() for line in f if line.strip()]
    if not lines or not lines[0].startswith(HEADER_PREFIX):
        raise ConfigurationError(f"参数文件缺少 layer_sizes 表头: {path}")
    try:
        sizes = [int(n) for n in lines[0][len(HEADER_PREFIX):].split(",")]
        values = [float(v) for v in lines[1:]]
    except ValueError as e:
        raise ConfigurationError(f"参数文件格式错误 {path}: {e}")
    config = NetworkConfig(sizes)
    return config, ParameterSet.from_flat(config, values)
