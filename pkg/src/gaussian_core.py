"""
单模 / 两模高斯态的数据类型与构造

约定（所有阈值都依赖这个归一化）:
    ħ = 1, q = (a + a†)/√2, p = (a − a†)/(i√2)
    真空协方差矩阵 σ = I/2，可分性边界 λ̃ < 1/2
    两模向量排序 (q1, p1, q2, p2)，因此分块 Σ1、Σ2、Σ12 都是连续的 2×2 子矩阵
"""
import math
from dataclasses import dataclass, replace

import numpy as np

from errors import DimensionMismatch, InvalidParameter, NonPhysicalState
from symplectic import entries, leading_minor3, two_mode_invariants

TWO_PI = 2.0 * math.pi
PHYSICAL_TOL = 1e-10
SYMMETRY_TOL = 1e-12
EPSILON = float(np.finfo(float).eps)

PARAM_FIELDS = ('alpha_re', 'alpha_im', 'r', 'psi', 'n_th')


def normalize_phase(psi: float) -> float:
    psi = math.fmod(psi, TWO_PI)
    if psi < 0.0:
        psi += TWO_PI
    # fmod 对 -1e-17 之类的输入会得到 2π 本身
    if psi >= TWO_PI:
        psi = 0.0
    return psi


@dataclass(frozen=True)
class GaussianParams:
    """
    单模高斯态 ρ(α, ξ, N) = D(α) S(ξ) ν_th(N) S†(ξ) D†(α) 的物理参数，ξ = r e^{iψ}。

    psi 在构造时被归一化到 [0, 2π)。
    """
    alpha_re: float = 0.0
    alpha_im: float = 0.0
    r: float = 0.0
    psi: float = 0.0
    n_th: float = 0.0

    def __post_init__(self):
        for name in PARAM_FIELDS:
            value = getattr(self, name)
            if type(value) is float:
                if not math.isfinite(value):
                    raise InvalidParameter(f"{name} 必须是有限值, 收到 {value!r}")
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
                raise InvalidParameter(f"{name} 必须是实数, 收到 {value!r}")
            if not math.isfinite(value):
                raise InvalidParameter(f"{name} 必须是有限值, 收到 {value!r}")
            object.__setattr__(self, name, float(value))
        if self.r < 0:
            raise InvalidParameter(f"squeezing r must be >= 0, got {self.r}")
        if self.n_th < 0:
            raise InvalidParameter(f"thermal photon number n_th must be >= 0, got {self.n_th}")
        object.__setattr__(self, 'psi', normalize_phase(self.psi))

    @property
    def mu(self) -> float:
        """纯度 μ = (1+2N)⁻¹"""
        return 1.0 / (1.0 + 2.0 * self.n_th)

    @property
    def has_mean(self) -> bool:
        return self.alpha_re != 0.0 or self.alpha_im != 0.0

    def with_psi(self, psi: float) -> 'GaussianParams':
        return replace(self, psi=psi)

    def without_mean(self) -> 'GaussianParams':
        return replace(self, alpha_re=0.0, alpha_im=0.0)

    @classmethod
    def from_dict(cls, data: dict) -> 'GaussianParams':
        if not isinstance(data, dict):
            raise InvalidParameter(f"高斯态参数必须是 JSON 对象, 收到 {type(data).__name__}")
        unknown = set(data) - set(PARAM_FIELDS)
        if unknown:
            raise InvalidParameter(f"未知字段: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in PARAM_FIELDS}


def vacuum() -> GaussianParams:
    return GaussianParams()


def thermal(n_th: float) -> GaussianParams:
    return GaussianParams(n_th=n_th)


def squeezed(r: float, psi: float = 0.0, n_th: float = 0.0) -> GaussianParams:
    return GaussianParams(r=r, psi=psi, n_th=n_th)


def coherent(alpha_re: float, alpha_im: float = 0.0) -> GaussianParams:
    return GaussianParams(alpha_re=alpha_re, alpha_im=alpha_im)


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class SingleModeState:
    """一阶矩 X̄ (2 维) 与 2×2 协方差矩阵 σ，构造时检查不确定关系。"""
    mean: np.ndarray
    cm: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'mean', _frozen(self.mean))
        object.__setattr__(self, 'cm', _frozen(self.cm))
        if self.mean.shape != (2,) or self.cm.shape != (2, 2):
            raise DimensionMismatch(f"单模态需要 2 维均值和 2×2 CM, 收到 {self.mean.shape}, {self.cm.shape}")
        if not validate_physical(self.cm, 1):
            raise NonPhysicalState(f"σ 违反不确定关系: {self.cm.tolist()}")

    def isclose(self, other: 'SingleModeState', atol: float = 1e-14) -> bool:
        return (np.allclose(self.mean, other.mean, rtol=0.0, atol=atol)
                and np.allclose(self.cm, other.cm, rtol=0.0, atol=atol))


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """4 维均值与 4×4 协方差矩阵 Σ = [[Σ1, Σ12], [Σ12ᵀ, Σ2]]，构造时检查不确定关系。"""
    mean: np.ndarray
    cm: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'mean', _frozen(self.mean))
        object.__setattr__(self, 'cm', _frozen(self.cm))
        if self.mean.shape != (4,) or self.cm.shape != (4, 4):
            raise DimensionMismatch(f"两模态需要 4 维均值和 4×4 CM, 收到 {self.mean.shape}, {self.cm.shape}")
        if not validate_physical(self.cm, 2):
            raise NonPhysicalState(f"Σ 违反不确定关系: {self.cm.tolist()}")

    @property
    def sigma1(self) -> np.ndarray:
        return self.cm[0:2, 0:2]

    @property
    def sigma2(self) -> np.ndarray:
        return self.cm[2:4, 2:4]

    @property
    def sigma12(self) -> np.ndarray:
        return self.cm[0:2, 2:4]


def state_from_params(p: GaussianParams) -> SingleModeState:
    """
    [σ]kk = (2μ)⁻¹ [cosh 2r − (−1)^k cos ψ sinh 2r]
    [σ]12 = [σ]21 = −(2μ)⁻¹ sin ψ sinh 2r
    X̄ = √2 (Re α, Im α)
    """
    if p.r < 0 or p.n_th < 0:
        raise InvalidParameter(f"非法参数: r={p.r}, n_th={p.n_th}")
    half_inv_mu = 0.5 * (1.0 + 2.0 * p.n_th)
    ch = math.cosh(2.0 * p.r)
    sh = math.sinh(2.0 * p.r)
    c = math.cos(p.psi)
    s = math.sin(p.psi)
    off = -half_inv_mu * s * sh
    cm = [[half_inv_mu * (ch + c * sh), off],
          [off, half_inv_mu * (ch - c * sh)]]
    mean = [math.sqrt(2.0) * p.alpha_re, math.sqrt(2.0) * p.alpha_im]
    return SingleModeState(mean=mean, cm=cm)


def _rounding_tol(scale: float) -> float:
    # 行列式由量级为 scale 的乘积相减得到，压缩越大舍入误差越大；scale 取迹的平方
    return PHYSICAL_TOL + 8.0 * EPSILON * abs(scale)


def uncertainty_excess(cm) -> float:
    """
    det σ − 1/4（单模）。舍入范围内的负值归零。

    Raises:
        NonPhysicalState: det σ 低于 1/4 超出舍入范围
    """
    (a, b), (_, d) = entries(cm)
    excess = a * d - b * b - 0.25
    if excess < 0.0:
        if excess < -_rounding_tol((a + d) ** 2):
            raise NonPhysicalState(f"det σ = {excess + 0.25:.6g} < 1/4, 违反不确定关系")
        excess = 0.0
    return excess


def purity(s: SingleModeState) -> float:
    """μ = (2√det σ)⁻¹"""
    # 纯态的舍入可能给出 1 + 2e-16
    return min(1.0, 1.0 / (2.0 * math.sqrt(uncertainty_excess(s.cm) + 0.25)))


# 上三角下标，对称性检查用
_UPPER = {2: ((0, 1),), 4: ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))}
_SHAPES = {1: (2, 2), 2: (4, 4)}


def _check_symmetric(m: list):
    for i, j in _UPPER[len(m)]:
        if abs(m[i][j] - m[j][i]) > SYMMETRY_TOL:
            raise InvalidParameter("协方差矩阵不对称")


def _single_mode_physical(m: list) -> bool:
    (a, b), (_, d) = m
    return a > 0.0 and a * d - b * b >= 0.25 - _rounding_tol((a + d) ** 2)


def _two_mode_physical(m: list) -> bool:
    """
    Σ > 0（Sylvester 顺序主子式）时 ν− ≥ 1/2 等价于两个不变量条件:
        Δ = det A + det B + 2 det C ≥ 1/2
        4 det Σ + 1/4 − Δ ≥ 0
    """
    det_a, det_b, det_c, det_cm = two_mode_invariants(m)
    if not (m[0][0] > 0.0 and det_a > 0.0 and leading_minor3(m) > 0.0 and det_cm > 0.0):
        return False
    delta = det_a + det_b + 2.0 * det_c
    scale = (m[0][0] + m[1][1] + m[2][2] + m[3][3]) ** 2
    return (delta >= 0.5 - _rounding_tol(scale)
            and 4.0 * det_cm + 0.25 - delta >= -_rounding_tol(16.0 * scale * scale))


def validate_physical(cm, modes: int) -> bool:
    """矩阵正定且所有辛本征值 ≥ 1/2（舍入容差内）时返回 True。"""
    cm = np.asarray(cm, dtype=float)
    expected = _SHAPES.get(modes)
    if expected is None or cm.shape != expected:
        raise DimensionMismatch(f"modes={modes} 与矩阵形状 {cm.shape} 不匹配")
    m = cm.tolist()
    # NaN / inf 会传播到和里
    if not math.isfinite(sum(map(sum, m))):
        return False
    _check_symmetric(m)
    if modes == 1:
        return _single_mode_physical(m)
    return _two_mode_physical(m)
