"""
标量计算带（Wengert list）与反向扫描

每个节点只保存操作数编号和局部偏导数；反向扫描按记录的逆序逐个访问节点一次。
节点的值可以是浮点数，也可以是numpy数组。数组的每个元素是一条独立的"通道"，
所有运算都逐通道进行，因此一个数组节点等价于并排记录的许多相同标量子图。
标量（如网络参数）参与通道运算时按广播处理，反向时对通道求和。

网络层用 stack / affine 节点整层记录：affine 的首轴是神经元轴，其余轴才是通道，
一层的前向与反向各是一次矩阵乘法。

一条计算带只能在一个线程内记录和反向扫描；不同线程使用各自的计算带。
"""

from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from spectral.legendre import legendre_eval, legendre_derivative

Value = Union[float, np.ndarray]

OPS = (
    "input",
    "add",
    "sub",
    "mul",
    "div",
    "neg",
    "pow_int",
    "exp",
    "sin",
    "cos",
    "tanh",
    "legendre_n",
    "dot",
    "stack",
    "affine",
    "sum",
    "mean",
)

# 常量没有带上的节点
CONSTANT = -1


class TapeError(RuntimeError):
    """计算带的使用错误：混用计算带、未知运算等"""


class DomainError(ArithmeticError):
    """运算超出定义域，例如除数为零"""


class Scalar:
    """计算带上的可微值；node_id 为 CONSTANT 时表示常量"""

    __slots__ = ("value", "node_id", "tape")
    # 让 ndarray 与 Scalar 的混合运算回落到 Scalar 的反射运算符
    __array_ufunc__ = None

    def __init__(self, value: Value, node_id: int = CONSTANT, tape: "Tape" = None):
        self.value = value
        self.node_id = node_id
        self.tape = tape

    @property
    def is_constant(self) -> bool:
        return self.node_id == CONSTANT

    def __add__(self, other):
        return _binary("add", self, other)

    def __radd__(self, other):
        return _binary("add", other, self)

    def __sub__(self, other):
        return _binary("sub", self, other)

    def __rsub__(self, other):
        return _binary("sub", other, self)

    def __mul__(self, other):
        return _binary("mul", self, other)

    def __rmul__(self, other):
        return _binary("mul", other, self)

    def __truediv__(self, other):
        return _binary("div", self, other)

    def __rtruediv__(self, other):
        return _binary("div", other, self)

    def __neg__(self):
        return _unary("neg", self)

    def __pow__(self, power):
        if not isinstance(power, (int, np.integer)):
            raise TapeError(f"仅支持整数次幂: {power!r}")
        return _unary("pow_int", self, power=int(power))

    def __repr__(self):
        kind = "const" if self.is_constant else f"node={self.node_id}"
        return f"Scalar({self.value!r}, {kind})"


def _lift(value) -> Scalar:
    if isinstance(value, Scalar):
        return value
    return Scalar(value)


def _unbroadcast(adjoint: Value, shape: tuple) -> Value:
    """把广播后的伴随量按求和规约回操作数的形状"""
    if np.shape(adjoint) == shape:
        return adjoint
    if shape == ():
        return float(np.sum(adjoint))
    adjoint = np.asarray(adjoint)
    while adjoint.ndim > len(shape):
        adjoint = adjoint.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and adjoint.shape[axis] != 1:
            adjoint = adjoint.sum(axis=axis, keepdims=True)
    return adjoint


class Tape:
    """只追加的运算记录"""

    def __init__(self):
        self._ops: List[str] = []
        self._operands: List[Tuple[int, ...]] = []
        self._partials: List[Tuple[Value, ...]] = []
        self._shapes: List[tuple] = []
        self._axes: List[Optional[int]] = []
        self.visit_count = 0

    def __len__(self) -> int:
        return len(self._ops)

    def _append(self, op, operand_ids, partials, value, axis=None) -> Scalar:
        self._ops.append(op)
        self._operands.append(tuple(operand_ids))
        self._partials.append(tuple(partials))
        self._shapes.append(np.shape(value))
        self._axes.append(axis)
        return Scalar(value, len(self._ops) - 1, self)

    def variable(self, value: Value) -> Scalar:
        """登记一个自变量（叶子节点）"""
        return self._append("input", (), (), value)

    def variables(self, values: Sequence[float]) -> List[Scalar]:
        return [self.variable(float(v)) for v in values]

    @staticmethod
    def constant(value: Value) -> Scalar:
        return Scalar(value)

    def _operand_id(self, operand: Scalar) -> int:
        if operand.is_constant:
            return CONSTANT
        if operand.tape is not self:
            raise TapeError("操作数属于另一条计算带")
        return operand.node_id

    def record(self, op: str, operands: Sequence, degree: int = None,
               power: int = None, axis: Optional[int] = -1) -> Scalar:
        """记录一次运算，返回结果及其局部偏导数登记在带上的节点"""
        if op not in OPS or op == "input":
            raise TapeError(f"未知的运算: {op}")
        operands = [_lift(v) for v in operands]
        ids = [self._operand_id(v) for v in operands]
        values = [v.value for v in operands]

        if op == "add":
            a, b = values
            value, partials = a + b, (1.0, 1.0)
        elif op == "sub":
            a, b = values
            value, partials = a - b, (1.0, -1.0)
        elif op == "mul":
            a, b = values
            value, partials = a * b, (b, a)
        elif op == "div":
            a, b = values
            if np.any(np.asarray(b) == 0):
                raise DomainError("除数为零")
            value = a / b
            partials = (1.0 / b, -value / b)
        elif op == "neg":
            value, partials = -values[0], (-1.0,)
        elif op == "pow_int":
            a = values[0]
            if power is None:
                raise TapeError("pow_int 需要指定整数次幂")
            value = a ** power
            partials = (power * a ** (power - 1) if power != 0 else 0.0 * a,)
        elif op == "exp":
            value = np.exp(values[0])
            partials = (value,)
        elif op == "sin":
            value, partials = np.sin(values[0]), (np.cos(values[0]),)
        elif op == "cos":
            value, partials = np.cos(values[0]), (-np.sin(values[0]),)
        elif op == "tanh":
            value = np.tanh(values[0])
            partials = (1.0 - value * value,)
        elif op == "legendre_n":
            if degree is None:
                raise TapeError("legendre_n 需要指定次数")
            a = values[0]
            if isinstance(degree, tuple):
                # 首轴第 k 行用 L_{degree[k]}
                a = np.asarray(a, dtype=float)
                if a.shape[:1] != (len(degree),):
                    raise TapeError(f"legendre_n 的次数个数 {len(degree)} 与首轴长度 {a.shape[:1]} 不一致")
                value = np.stack([np.asarray(legendre_eval(d, a[k]), dtype=float) for k, d in enumerate(degree)])
                partials = (np.stack([np.asarray(legendre_derivative(d, a[k]), dtype=float)
                                      for k, d in enumerate(degree)]),)
            else:
                value = legendre_eval(degree, a)
                partials = (legendre_derivative(degree, a),)
        elif op == "dot":
            # 操作数布局: [w_1..w_k, h_1..h_k, b]
            k = (len(values) - 1) // 2
            if len(values) != 2 * k + 1:
                raise TapeError("dot 的操作数必须是 k 个权重、k 个输入和一个偏置")
            weights, inputs, bias = values[:k], values[k:2 * k], values[-1]
            value = bias
            for w, h in zip(weights, inputs):
                value = value + w * h
            partials = tuple(inputs) + tuple(weights) + (1.0,)
        elif op == "stack":
            value = np.stack([np.asarray(v, dtype=float) for v in values])
            partials = ()
        elif op == "affine":
            w, h, b = (np.asarray(v, dtype=float) for v in values)
            if w.ndim != 2 or h.shape[:1] != (w.shape[1],) or b.shape != (w.shape[0],):
                raise TapeError(f"affine 形状不一致: W{w.shape}, H{h.shape}, b{b.shape}")
            value = (w @ h.reshape(h.shape[0], -1) + b[:, None]).reshape((w.shape[0],) + h.shape[1:])
            # 反向扫描时由 W 与 H 直接算出三个操作数的伴随量
            partials = (w, h)
        elif op == "sum":
            a = np.asarray(values[0])
            value = a.sum() if axis is None else a.sum(axis=axis)
            partials = (1.0,)
        else:  # mean
            a = np.asarray(values[0])
            value = a.mean()
            partials = (1.0 / max(a.size, 1),)
            axis = None

        if all(i == CONSTANT for i in ids):
            return Scalar(value)
        return self._append(op, ids, partials, value, axis if op == "sum" else None)

    def backward(self, output: Scalar) -> List[Optional[Value]]:
        """从 output 出发做一次反向扫描，返回每个节点的伴随量"""
        if output.is_constant:
            return [None] * len(self)
        if output.tape is not self:
            raise TapeError("输出不在此计算带上")

        adjoints: List[Optional[Value]] = [None] * len(self)
        adjoints[output.node_id] = np.ones_like(output.value, dtype=float) \
            if isinstance(output.value, np.ndarray) else 1.0
        self.visit_count = 0

        for node in range(len(self) - 1, -1, -1):
            self.visit_count += 1
            adj = adjoints[node]
            if adj is None or self._ops[node] == "input":
                continue
            op = self._ops[node]
            if op in ("sum", "mean"):
                operand_shape = self._shapes[self._operands[node][0]]
                axis = self._axes[node]
                if axis is not None:
                    adj = np.expand_dims(adj, axis)
                adj = np.broadcast_to(adj, operand_shape) * self._partials[node][0]
                self._accumulate(adjoints, self._operands[node][0], adj)
                continue
            if op == "stack":
                adj = np.broadcast_to(adj, self._shapes[node])
                for j, operand in enumerate(self._operands[node]):
                    if operand != CONSTANT:
                        self._accumulate(adjoints, operand, adj[j])
                continue
            if op == "affine":
                w, h = self._partials[node]
                lanes = np.broadcast_to(adj, self._shapes[node]).reshape(w.shape[0], -1)
                contributions = (
                    lanes @ h.reshape(h.shape[0], -1).T,
                    (w.T @ lanes).reshape(h.shape),
                    lanes.sum(axis=1),
                )
                for operand, contribution in zip(self._operands[node], contributions):
                    if operand != CONSTANT:
                        self._accumulate(adjoints, operand, contribution)
                continue
            for operand, partial in zip(self._operands[node], self._partials[node]):
                if operand == CONSTANT:
                    continue
                self._accumulate(adjoints, operand, adj * partial)
        return adjoints

    def _accumulate(self, adjoints, operand: int, contribution: Value):
        contribution = _unbroadcast(contribution, self._shapes[operand])
        if adjoints[operand] is None:
            adjoints[operand] = contribution
        else:
            adjoints[operand] = adjoints[operand] + contribution

    def gradient(self, output: Scalar, inputs: Sequence[Scalar]) -> np.ndarray:
        """
        d output / d input_i，常量输入的梯度为 0

        数组值的输入（如整层权重矩阵）按行优先展开，依次拼接。
        """
        adjoints = self.backward(output)
        parts = []
        for item in inputs:
            shape = np.shape(item.value)
            if not item.is_constant and item.tape is not self:
                raise TapeError("输入不在此计算带上")
            adj = None if item.is_constant else adjoints[item.node_id]
            if adj is None:
                parts.append(np.zeros(int(np.prod(shape))))
            else:
                parts.append(np.broadcast_to(np.asarray(adj, dtype=float), shape).ravel())
        if not parts:
            return np.zeros(0)
        return np.concatenate(parts)


def _tape_of(operands) -> Optional[Tape]:
    tape = None
    for operand in operands:
        if isinstance(operand, Scalar) and not operand.is_constant:
            if tape is None:
                tape = operand.tape
            elif operand.tape is not tape:
                raise TapeError("不能混用不同计算带上的值")
    return tape


def _record_any(op: str, operands, **kwargs) -> Scalar:
    tape = _tape_of(operands)
    if tape is None:
        # 全是常量：借用一条临时计算带求值，不留下节点
        return Tape().record(op, operands, **kwargs)
    return tape.record(op, operands, **kwargs)


def _binary(op: str, a, b) -> Scalar:
    return _record_any(op, (a, b))


def _unary(op: str, a, **kwargs) -> Scalar:
    return _record_any(op, (a,), **kwargs)


def record(tape: Tape, op: str, operands: Sequence, **kwargs) -> Scalar:
    """在指定计算带上记录运算"""
    for operand in operands:
        if isinstance(operand, Scalar) and not operand.is_constant and operand.tape is not tape:
            raise TapeError("操作数属于另一条计算带")
    return tape.record(op, operands, **kwargs)


def gradient(tape: Tape, output: Scalar, inputs: Sequence[Scalar]) -> np.ndarray:
    return tape.gradient(output, inputs)


def exp(x) -> Scalar:
    return _unary("exp", x)


def sin(x) -> Scalar:
    return _unary("sin", x)


def cos(x) -> Scalar:
    return _unary("cos", x)


def tanh(x) -> Scalar:
    return _unary("tanh", x)


def legendre(n: int, x) -> Scalar:
    """以 L_n 作为带上的原子运算，局部导数取 L'_n"""
    return _unary("legendre_n", x, degree=n)


def dot(weights: Sequence, inputs: Sequence, bias) -> Scalar:
    """bias + sum_k weights[k] * inputs[k]，作为一个节点记录"""
    if len(weights) != len(inputs):
        raise TapeError(f"权重与输入个数不一致: {len(weights)} != {len(inputs)}")
    return _record_any("dot", list(weights) + list(inputs) + [bias])


def stack(items: Sequence) -> Scalar:
    """沿新的首轴把若干值堆叠成一个节点，例如由单个参数组成整层权重矩阵"""
    return _record_any("stack", list(items))


def affine(weight, hidden, bias) -> Scalar:
    """
    整层仿射变换 W H + b，作为一个节点记录

    W 形状 (out, in)，H 形状 (in, *lanes)，b 形状 (out,)；结果形状 (out, *lanes)。
    """
    return _record_any("affine", (weight, hidden, bias))


def legendre_rows(degrees: Sequence[int], x) -> Scalar:
    """首轴第 k 行取 L_{degrees[k]}，整层正交激活只占一个节点"""
    return _unary("legendre_n", x, degree=tuple(int(d) for d in degrees))


def lane_sum(x, axis: Optional[int] = -1) -> Scalar:
    """沿通道轴求和（axis=None 时对全部通道求和）"""
    return _record_any("sum", (x,), axis=axis)


def lane_mean(x) -> Scalar:
    return _record_any("mean", (x,))
