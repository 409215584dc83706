"""
四个编号实验

1: y = e^x - e^{3x}/3 + 1/3 + int_0^x y^3 ds                       精确解 e^x
2: y = 1 + sin^2 x + int_0^x -3 sin(x-s) y^2 ds                      精确解 cos x
   原题把该项写成 [0,1] 上的分段核（s > x 时为零），等价地改写为 Volterra 项，
   避免 Gauss 规则跨过折点失去谱精度。
3: y = g(x) + int_0^x (x-s) y^2 ds + int_0^1 (x+s) y ds              精确解 x^2 - 2
4: y = g(x) + int_0^x 1/(2x) y^2 ds                                  精确解 x^2 + 1/2，核在 x=0 奇异
"""

from typing import Callable, Dict, Tuple

from .registry import FORCING, KERNELS, NONLINEARITIES, EXACT_SOLUTIONS
from .spec import ProblemSpec

EXPERIMENT_IDS = (1, 2, 3, 4)

# 每个实验对应的内置函数名，问题定义文件使用同一套名字
EXPERIMENT_FORMS: Dict[int, dict] = {
    1: {"xi1": 1.0, "xi2": 0.0, "g": "exp_minus_third_exp3",
        "k1": "one", "phi1": "cube", "exact": "exp", "singular": False},
    2: {"xi1": 1.0, "xi2": 0.0, "g": "one_plus_sin_squared",
        "k1": "minus_three_sin_diff", "phi1": "square", "exact": "cos", "singular": False},
    3: {"xi1": 1.0, "xi2": 1.0, "g": "sextic_poly",
        "k1": "diff", "phi1": "square", "k2": "sum", "phi2": "identity",
        "exact": "x2_minus_2", "singular": False},
    4: {"xi1": 1.0, "xi2": 0.0, "g": "quartic_poly",
        "k1": "half_inverse_x", "phi1": "square", "exact": "x2_plus_half", "singular": True},
}


def make_experiment(experiment_id: int) -> Tuple[ProblemSpec, Callable]:
    """返回 (问题实例, 精确解)"""
    if experiment_id not in EXPERIMENT_FORMS:
        raise ValueError(f"未知的实验编号: {experiment_id}，可选: {list(EXPERIMENT_IDS)}")
    forms = EXPERIMENT_FORMS[experiment_id]
    exact = EXACT_SOLUTIONS[forms["exact"]]
    problem = ProblemSpec(
        xi1=forms["xi1"],
        xi2=forms["xi2"],
        g=FORCING[forms["g"]],
        k1=KERNELS[forms.get("k1", "zero")],
        k2=KERNELS[forms.get("k2", "zero")],
        phi1=NONLINEARITIES[forms.get("phi1", "identity")],
        phi2=NONLINEARITIES[forms.get("phi2", "identity")],
        exact=exact,
        name=f"experiment-{experiment_id}",
        singular_at_zero=forms["singular"],
    )
    return problem, exact
