"""
单模高斯态之间的 Uhlmann 保真度，以及纠缠阈值相关的全部闭式量

    F(ρ1, ρ2) = Γ(X̄1, X̄2) / (√(Δ+δ) − √δ)
    Δ = det(σ1 + σ2),  δ = 4 ∏(det σk − 1/4)
    Γ = exp[−½ X̄12ᵀ (σ1+σ2)⁻¹ X̄12]

阈值 F_e 只依赖纯度 μ1、μ2 和耦合 τ，与压缩参数无关。
"""
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from entanglement import BOUNDARY_TOL, SEPARABILITY_BOUND, lambda_min_closed_form, proof_gamma
from errors import DomainError, InvalidParameter, SingularMatrix
from gaussian_core import TWO_PI, SingleModeState, purity, uncertainty_excess
from symplectic import det2

ARCCOS_ROUNDING = 1e-12
# F 与阈值在舍入意义上相等时按可分处理（严格不等式）
FIDELITY_TIE_REL = 1e-12


class PsiMarker(str, Enum):
    """psi_threshold 在 arccos 参数越界时返回的判定标记（不做截断）。"""
    NEVER_ENTANGLED = "never-entangled"
    ALWAYS_ENTANGLED = "always-entangled"


@dataclass(frozen=True)
class FidelityBreakdown:
    fidelity: float
    delta_cap: float
    delta_small: float
    gamma_factor: float
    mean_diff: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            'fidelity': self.fidelity,
            'delta_cap': self.delta_cap,
            'delta_small': self.delta_small,
            'gamma_factor': self.gamma_factor,
            'mean_diff': [float(x) for x in self.mean_diff],
        }


@dataclass(frozen=True)
class ThresholdReport:
    f_e: float
    f_coupling: float
    g_minus: float
    g_plus: float
    psi_e: float | PsiMarker | None = None
    f_min: float | None = None
    lambda_min: float | None = None
    gamma_proof: float | None = None
    gamma_bound: float | None = None

    @property
    def entangled_interval(self) -> tuple[float, float] | None:
        """ψ ∈ (ψ_e, 2π − ψ_e) 时输出纠缠；没有数值 ψ_e 时返回 None。"""
        if isinstance(self.psi_e, PsiMarker) or self.psi_e is None:
            return None
        return self.psi_e, TWO_PI - self.psi_e

    @property
    def entangled_at_minimum(self) -> bool | None:
        if self.lambda_min is None:
            return None
        return self.lambda_min < SEPARABILITY_BOUND - BOUNDARY_TOL

    @property
    def fidelity_below_at_minimum(self) -> bool | None:
        if self.f_min is None:
            return None
        return fidelity_below(self.f_min, self.f_e)

    @property
    def gamma_condition(self) -> bool | None:
        # γ > 1 + μ1²μ2² 与 λ̃_min < 1/2 等价
        if self.gamma_proof is None or self.gamma_bound is None:
            return None
        return self.gamma_proof > self.gamma_bound

    def to_dict(self) -> dict:
        psi_e = self.psi_e.value if isinstance(self.psi_e, PsiMarker) else self.psi_e
        return {
            'f_e': self.f_e,
            'psi_e': psi_e,
            'f_coupling': self.f_coupling,
            'g_minus': self.g_minus,
            'g_plus': self.g_plus,
            'f_min': self.f_min,
            'lambda_min': self.lambda_min,
            'gamma_proof': self.gamma_proof,
            'entangled_interval': list(self.entangled_interval) if self.entangled_interval else None,
            'entangled_at_minimum': self.entangled_at_minimum,
            'fidelity_below_at_minimum': self.fidelity_below_at_minimum,
            'gamma_condition': self.gamma_condition,
        }


def _inverse_form(m, x) -> float:
    """xᵀ m⁻¹ x，m 为对称 2×2 矩阵（嵌套 list），x 为二元序列"""
    d = det2(m)
    if not math.isfinite(d) or d <= 0.0:
        raise SingularMatrix(f"σ1+σ2 不可逆: det = {d!r}")
    x0, x1 = x
    return (m[1][1] * x0 * x0 - 2.0 * m[0][1] * x0 * x1 + m[0][0] * x1 * x1) / d


def gamma_factor(s1: SingleModeState, s2: SingleModeState) -> float:
    """Γ(X̄1, X̄2) = exp[−½ X̄12ᵀ (σ1+σ2)⁻¹ X̄12]"""
    x12 = (s1.mean - s2.mean).tolist()
    return math.exp(-0.5 * _inverse_form((s1.cm + s2.cm).tolist(), x12))


def gaussian_fidelity(s1: SingleModeState, s2: SingleModeState) -> FidelityBreakdown:
    total = (s1.cm + s2.cm).tolist()
    x12 = s1.mean - s2.mean
    delta_cap = det2(total)
    gamma = math.exp(-0.5 * _inverse_form(total, x12.tolist()))
    delta_small = 4.0 * uncertainty_excess(s1.cm) * uncertainty_excess(s2.cm)
    # Γ / (√(Δ+δ) − √δ) 的有理化形式
    fid = gamma * (math.sqrt(delta_cap + delta_small) + math.sqrt(delta_small)) / delta_cap
    return FidelityBreakdown(
        fidelity=fid,
        delta_cap=delta_cap,
        delta_small=delta_small,
        gamma_factor=gamma,
        mean_diff=x12,
    )


def _check_purities(mu1: float, mu2: float):
    if not (0.0 < mu1 <= 1.0 and 0.0 < mu2 <= 1.0):
        raise InvalidParameter(f"purities must lie in (0, 1], got mu1={mu1}, mu2={mu2}")


def _check_open_tau(tau: float):
    if not 0.0 <= tau <= 1.0:
        raise InvalidParameter(f"tau must lie in [0, 1], got {tau}")
    if tau == 0.0 or tau == 1.0:
        raise DomainError(f"tau={tau}: no interaction, threshold undefined")


def coupling_function(mu1: float, mu2: float, tau: float) -> float:
    """f(μ1,μ2,τ) = [1 + μ1²μ2² − (μ1²+μ2²)(1−2τ)²] / [8μ1μ2 τ(1−τ)]"""
    _check_purities(mu1, mu2)
    _check_open_tau(tau)
    num = 1.0 + (mu1 * mu2) ** 2 - (mu1 ** 2 + mu2 ** 2) * (1.0 - 2.0 * tau) ** 2
    return num / (8.0 * mu1 * mu2 * tau * (1.0 - tau))


def psi_threshold(r1: float, r2: float, mu1: float, mu2: float, tau: float) -> float | PsiMarker:
    """
    ψ_e = arccos{[cosh 2r1 cosh 2r2 − f] / [sinh 2r1 sinh 2r2]}

    输出纠缠 ⟺ cos ψ < 参数 ⟺ ψ ∈ (ψ_e, 2π − ψ_e)。
    参数 > 1 时任何 ψ 都纠缠，返回 ALWAYS_ENTANGLED；< −1 时返回 NEVER_ENTANGLED。
    r1 或 r2 为零时 ψ 无关，只看分子符号。
    """
    if r1 < 0 or r2 < 0:
        raise InvalidParameter(f"squeezing must be >= 0, got r1={r1}, r2={r2}")
    f = coupling_function(mu1, mu2, tau)
    num = math.cosh(2.0 * r1) * math.cosh(2.0 * r2) - f
    if r1 == 0.0 or r2 == 0.0:
        # 边界（num == 0）按严格不等式算作可分
        return PsiMarker.ALWAYS_ENTANGLED if num > 0.0 else PsiMarker.NEVER_ENTANGLED
    arg = num / (math.sinh(2.0 * r1) * math.sinh(2.0 * r2))
    # 纯态且 r1 = r2 时参数恰为 1，舍入可能给出 1 + 2e-16
    if 1.0 < abs(arg) <= 1.0 + ARCCOS_ROUNDING:
        arg = math.copysign(1.0, arg)
    if arg > 1.0:
        return PsiMarker.ALWAYS_ENTANGLED
    if arg < -1.0:
        return PsiMarker.NEVER_ENTANGLED
    return math.acos(arg)


def g_products(mu1: float, mu2: float) -> tuple[float, float]:
    """g± = ∏(1 ± μk²)"""
    return (1.0 - mu1 ** 2) * (1.0 - mu2 ** 2), (1.0 + mu1 ** 2) * (1.0 + mu2 ** 2)


def fidelity_threshold(mu1: float, mu2: float, tau: float) -> ThresholdReport:
    """F_e = 4μ1μ2√(τ(1−τ)) / [√(g− + 4τ(1−τ)g+) − √(4τ(1−τ)g−)]"""
    _check_purities(mu1, mu2)
    _check_open_tau(tau)
    g_minus, g_plus = g_products(mu1, mu2)
    k = 4.0 * tau * (1.0 - tau)
    f_e = 4.0 * mu1 * mu2 * math.sqrt(tau * (1.0 - tau)) / (
        math.sqrt(g_minus + k * g_plus) - math.sqrt(k * g_minus))
    return ThresholdReport(
        f_e=f_e,
        f_coupling=coupling_function(mu1, mu2, tau),
        g_minus=g_minus,
        g_plus=g_plus,
    )


def fidelity_min_over_psi(r1: float, r2: float, mu1: float, mu2: float) -> float:
    """F_min = 2μ1μ2 / [√(1 + μ1²μ2² + 2μ1μ2 cosh 2(r1+r2)) − √g−]，即 ψ = π 处的保真度"""
    if r1 < 0 or r2 < 0:
        raise InvalidParameter(f"squeezing must be >= 0, got r1={r1}, r2={r2}")
    _check_purities(mu1, mu2)
    g_minus, _ = g_products(mu1, mu2)
    m = mu1 * mu2
    return 2.0 * m / (math.sqrt(1.0 + m * m + 2.0 * m * math.cosh(2.0 * (r1 + r2))) - math.sqrt(g_minus))


def threshold_report(r1: float, r2: float, mu1: float, mu2: float, tau: float) -> ThresholdReport:
    """fidelity_threshold 加上依赖压缩参数的全部量（ψ_e、F_min、λ̃_min、γ）。"""
    base = fidelity_threshold(mu1, mu2, tau)
    return ThresholdReport(
        f_e=base.f_e,
        f_coupling=base.f_coupling,
        g_minus=base.g_minus,
        g_plus=base.g_plus,
        psi_e=psi_threshold(r1, r2, mu1, mu2, tau),
        f_min=fidelity_min_over_psi(r1, r2, mu1, mu2),
        lambda_min=lambda_min_closed_form(r1, r2, mu1, mu2, tau),
        gamma_proof=proof_gamma(r1, r2, mu1, mu2, tau),
        gamma_bound=1.0 + (mu1 * mu2) ** 2,
    )


def displaced_threshold(s1: SingleModeState, s2: SingleModeState, tau: float) -> float:
    """Γ(X̄1, X̄2) · F_e(μ1, μ2; τ)"""
    f_e = fidelity_threshold(purity(s1), purity(s2), tau).f_e
    return gamma_factor(s1, s2) * f_e


def fidelity_below(fid: float, threshold: float) -> bool:
    """F < 阈值（严格），相对差 1e-12 以内的并列按可分处理。"""
    return fid < threshold * (1.0 - FIDELITY_TIE_REL)
