"""
两模高斯态的可分性判定（Simon 判据）

态纠缠当且仅当部分转置后协方差矩阵的最小辛本征值 λ̃ < 1/2。
部分转置取为模式 2 的动量反号 Λ = diag(1, 1, 1, −1)。
"""
import math
from dataclasses import dataclass

import numpy as np

from errors import InvalidParameter, NumericError
from gaussian_core import TwoModeState
from symplectic import numeric_spectrum, two_mode_spectrum

# λ̃ 落在 [1/2 − BOUNDARY_TOL, 1/2) 内按可分处理
BOUNDARY_TOL = 1e-9
SEPARABILITY_BOUND = 0.5

PT_DIAG = np.array([1.0, 1.0, 1.0, -1.0])
# Λ Σ Λ 的逐元素形式
PT_SIGNS = np.outer(PT_DIAG, PT_DIAG)


@dataclass(frozen=True)
class EntanglementReport:
    lambda_tilde: float
    entangled: bool
    margin: float

    def to_dict(self) -> dict:
        return {'lambda_tilde': self.lambda_tilde, 'entangled': self.entangled, 'margin': self.margin}


def symplectic_eigenvalues(cm) -> tuple[float, float]:
    """(ν−, ν+)，ν− ≤ ν+，由两模分块闭式计算。"""
    cm = np.asarray(cm, dtype=float)
    return two_mode_spectrum(cm)


def symplectic_spectrum_numeric(cm) -> tuple[float, float]:
    """iΩΣ 特征值模长，作为闭式结果的对照。"""
    nu = numeric_spectrum(np.asarray(cm, dtype=float))
    return float(nu[0]), float(nu[1])


def partial_transpose(t: TwoModeState) -> np.ndarray:
    return t.cm * PT_SIGNS


def is_entangled(t: TwoModeState) -> EntanglementReport:
    lam, _ = symplectic_eigenvalues(partial_transpose(t))
    return EntanglementReport(
        lambda_tilde=lam,
        entangled=lam < SEPARABILITY_BOUND - BOUNDARY_TOL,
        margin=lam - SEPARABILITY_BOUND,
    )


def lambda_min_closed_form(r1: float, r2: float, mu1: float, mu2: float, tau: float) -> float:
    """
    ψ = π 处 λ̃ 的最小值:
        γ = (μ1²+μ2²)(1−2τ)² + 8μ1μ2 τ(1−τ) cosh[2(r1+r2)]
        λ̃_min = ½ √(γ − √(γ² − (2μ1μ2)²)) / (√2 μ1μ2)
    """
    _check_ranges(r1, r2, mu1, mu2, tau)
    gamma = proof_gamma(r1, r2, mu1, mu2, tau)
    c = (2.0 * mu1 * mu2) ** 2
    disc = gamma * gamma - c
    if disc < 0.0:
        if disc < -1e-12 * max(1.0, gamma * gamma):
            raise NumericError(f"γ² < (2μ1μ2)²: γ={gamma:.6g}, μ1={mu1}, μ2={mu2}")
        disc = 0.0
    # γ − √(γ²−c) 写成 c / (γ + √(γ²−c))，r 较大时避免相消
    inner = c / (gamma + math.sqrt(disc))
    return 0.5 * math.sqrt(inner) / (math.sqrt(2.0) * mu1 * mu2)


def proof_gamma(r1: float, r2: float, mu1: float, mu2: float, tau: float) -> float:
    return ((mu1 ** 2 + mu2 ** 2) * (1.0 - 2.0 * tau) ** 2
            + 8.0 * mu1 * mu2 * tau * (1.0 - tau) * math.cosh(2.0 * (r1 + r2)))


def _check_ranges(r1, r2, mu1, mu2, tau):
    if r1 < 0 or r2 < 0:
        raise InvalidParameter(f"squeezing must be >= 0, got r1={r1}, r2={r2}")
    if not (0.0 < mu1 <= 1.0 and 0.0 < mu2 <= 1.0):
        raise InvalidParameter(f"purities must lie in (0, 1], got mu1={mu1}, mu2={mu2}")
    if not 0.0 <= tau <= 1.0:
        raise InvalidParameter(f"tau must lie in [0, 1], got {tau}")
