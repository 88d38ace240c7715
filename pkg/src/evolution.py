"""
双线性交换哈密顿量 H_I = g(a†b + ab†) 的相空间演化

U_g(t) 在相空间中等价于透射率 τ = cos²(gt) 的分束器:
    a → √τ a + √(1−τ) b,  b → −√(1−τ) a + √τ b
这里取实正交混合（没有 −i 相位），与其他约定之间只差模式 2 上的一个相空间旋转，
不影响纠缠判定。

注意: 关联块取 Σ12 = √(τ(1−τ)) (σ2 − σ1)。只有平方根形式来自辛变换，
直接与原始公式中的 τ(1−τ) 系数比较矩阵元时会看到差异。
"""
import math
from dataclasses import dataclass

import numpy as np

from errors import InvalidParameter
from gaussian_core import SingleModeState, TwoModeState


@dataclass(frozen=True)
class CouplingSpec:
    """有效耦合 τ ∈ [0, 1]，可选地记录来源 (g, t)。"""
    tau: float
    g: float | None = None
    t: float | None = None

    def __post_init__(self):
        tau = float(self.tau)
        if not math.isfinite(tau) or tau < 0.0 or tau > 1.0:
            raise InvalidParameter(f"tau must lie in [0, 1], got {self.tau}")
        object.__setattr__(self, 'tau', tau)

    @classmethod
    def from_gt(cls, g: float, t: float) -> 'CouplingSpec':
        return cls(tau=tau_from_coupling(g, t), g=g, t=t)

    @property
    def no_interaction(self) -> bool:
        return self.tau == 0.0 or self.tau == 1.0


def tau_from_coupling(g: float, t: float) -> float:
    """τ = cos²(gt)"""
    g, t = float(g), float(t)
    if not (math.isfinite(g) and math.isfinite(t)):
        raise InvalidParameter(f"g 与 t 必须是有限值, 收到 g={g}, t={t}")
    tau = math.cos(g * t) ** 2
    # cos² 的舍入可能略超 1
    return min(max(tau, 0.0), 1.0)


def as_coupling(c) -> CouplingSpec:
    if isinstance(c, CouplingSpec):
        return c
    return CouplingSpec(tau=c)


def beam_splitter_matrix(tau: float) -> np.ndarray:
    """4×4 辛矩阵 S，满足 S Ω Sᵀ = Ω。"""
    c = as_coupling(tau)
    t = math.sqrt(c.tau)
    r = math.sqrt(1.0 - c.tau)
    return np.kron(np.array([[t, r], [-r, t]]), np.eye(2))


def mix(s1: SingleModeState, s2: SingleModeState, c) -> TwoModeState:
    """
    Σ1 = τσ1 + (1−τ)σ2
    Σ2 = τσ2 + (1−τ)σ1
    Σ12 = √(τ(1−τ)) (σ2 − σ1)

    分块直接按公式逐元素计算，所以两个输入相同时 Σ12 严格为零。
    """
    c = as_coupling(c)
    tau = c.tau
    rest = 1.0 - tau
    k = math.sqrt(tau * rest)
    (p00, p01), (_, p11) = s1.cm.tolist()
    (q00, q01), (_, q11) = s2.cm.tolist()
    x00, x01, x11 = tau * p00 + rest * q00, tau * p01 + rest * q01, tau * p11 + rest * q11
    y00, y01, y11 = tau * q00 + rest * p00, tau * q01 + rest * p01, tau * q11 + rest * p11
    z00, z01, z11 = k * (q00 - p00), k * (q01 - p01), k * (q11 - p11)
    cm = [[x00, x01, z00, z01],
          [x01, x11, z01, z11],
          [z00, z01, y00, y01],
          [z01, z11, y01, y11]]

    t = math.sqrt(tau)
    r = math.sqrt(rest)
    (m0, m1), (n0, n1) = s1.mean.tolist(), s2.mean.tolist()
    mean = [t * m0 + r * n0, t * m1 + r * n1, -r * m0 + t * n0, -r * m1 + t * n1]
    return TwoModeState(mean=mean, cm=cm)


def reduce(t: TwoModeState, keep: int) -> SingleModeState:
    """保留模式 keep 的边缘态 ρ̃_keep（对另一个模式求偏迹）。"""
    if keep == 1:
        return SingleModeState(mean=t.mean[0:2], cm=t.sigma1)
    if keep == 2:
        return SingleModeState(mean=t.mean[2:4], cm=t.sigma2)
    raise InvalidParameter(f"mode index must be 1 or 2, got {keep!r}")
