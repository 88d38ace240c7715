"""
小尺寸矩阵工具：辛形式、2×2 行列式、两模辛不变量与辛谱

所有相空间矩阵采用 (q1, p1, q2, p2) 排序，真空协方差矩阵为 I/2。
逐样本调用的函数都在 Python 浮点数上计算，不为 2×2 / 4×4 矩阵调用 LAPACK。
"""
import math

import numpy as np

from errors import DimensionMismatch, NumericError

OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA_2 = np.kron(np.eye(2), OMEGA_1)

# 判别式允许的负向舍入误差（相对 max(1, Δ̃²) 缩放）
DISCRIMINANT_TOL = 1e-10
# 判别式低于 Δ̃² 的这个比例时，ν∓ 的分裂被舍入误差主导
DEGENERATE_REL = 1e-4


def symplectic_form(modes: int) -> np.ndarray:
    if modes == 1:
        return OMEGA_1
    if modes == 2:
        return OMEGA_2
    raise DimensionMismatch(f"只支持 1 或 2 个模式, 收到 modes={modes}")


def entries(cm) -> list:
    """ndarray 转成嵌套 list，之后的标量运算不再经过 numpy 索引。"""
    if isinstance(cm, np.ndarray):
        return cm.tolist()
    return cm


def det2(m) -> float:
    # m 可以是 ndarray 或嵌套 list
    return float(m[0][0] * m[1][1] - m[0][1] * m[1][0])


def _square4(cm) -> list:
    if isinstance(cm, np.ndarray) and cm.shape != (4, 4):
        raise DimensionMismatch(f"需要 4×4 矩阵, 实际为 {cm.shape}")
    m = entries(cm)
    if len(m) != 4 or any(len(row) != 4 for row in m):
        raise DimensionMismatch("需要 4×4 矩阵")
    return m


def two_mode_invariants(cm) -> tuple[float, float, float, float]:
    """
    返回 (det A, det B, det C, det Σ)，Σ = [[A, C], [Cᵀ, B]]。

    det Σ 按前两行的 2×2 子式做 Laplace 展开。
    """
    (a00, a01, a02, a03), (a10, a11, a12, a13), (a20, a21, a22, a23), (a30, a31, a32, a33) = _square4(cm)
    s01 = a00 * a11 - a01 * a10
    s02 = a00 * a12 - a02 * a10
    s03 = a00 * a13 - a03 * a10
    s12 = a01 * a12 - a02 * a11
    s13 = a01 * a13 - a03 * a11
    s23 = a02 * a13 - a03 * a12
    c01 = a20 * a31 - a21 * a30
    c02 = a20 * a32 - a22 * a30
    c03 = a20 * a33 - a23 * a30
    c12 = a21 * a32 - a22 * a31
    c13 = a21 * a33 - a23 * a31
    c23 = a22 * a33 - a23 * a32
    det = s01 * c23 - s02 * c13 + s03 * c12 + s12 * c03 - s13 * c02 + s23 * c01
    return s01, c23, s23, det


def leading_minor3(cm) -> float:
    """左上 3×3 顺序主子式"""
    m = entries(cm)
    (a00, a01, a02), (a10, a11, a12), (a20, a21, a22) = m[0][:3], m[1][:3], m[2][:3]
    return (a00 * (a11 * a22 - a12 * a21)
            - a01 * (a10 * a22 - a12 * a20)
            + a02 * (a10 * a21 - a11 * a20))


def two_mode_spectrum(cm) -> tuple[float, float]:
    """
    两模闭式辛谱 ν∓。

    ν±² = (Δ̃ ± √(Δ̃² − 4 det Σ)) / 2，Δ̃ = det A + det B + 2 det C。
    ν−² 用 det Σ / ν+² 计算，避免 ν− 很小时的相消误差。
    ν− ≈ ν+（例如纯态的乘积）时改用 williamson_spectrum。

    Raises:
        NumericError: 判别式为负且超出容差
    """
    det_a, det_b, det_c, det_cm = two_mode_invariants(cm)
    delta_tilde = det_a + det_b + 2.0 * det_c
    disc = delta_tilde * delta_tilde - 4.0 * det_cm
    if disc < 0.0:
        if disc < -DISCRIMINANT_TOL * max(1.0, delta_tilde * delta_tilde):
            raise NumericError(f"辛谱判别式为负: Δ̃²−4detΣ = {disc:.3e}")
        disc = 0.0
    if disc < DEGENERATE_REL * delta_tilde * delta_tilde:
        nu = williamson_spectrum(np.asarray(cm, dtype=float))
        return float(nu[0]), float(nu[1])
    nu_plus_sq = 0.5 * (delta_tilde + math.sqrt(disc))
    if nu_plus_sq <= 0.0:
        raise NumericError(f"辛谱非正: ν+² = {nu_plus_sq:.3e}")
    nu_minus_sq = det_cm / nu_plus_sq
    if nu_minus_sq < 0.0:
        raise NumericError(f"辛谱非正: ν−² = {nu_minus_sq:.3e}")
    return math.sqrt(nu_minus_sq), math.sqrt(nu_plus_sq)


def numeric_spectrum(cm: np.ndarray) -> np.ndarray:
    """iΩΣ 特征值模长（升序，每个辛本征值只保留一次）。仅用于交叉验证。"""
    n = cm.shape[0]
    if cm.shape not in ((2, 2), (4, 4)):
        raise DimensionMismatch(f"需要 2×2 或 4×4 矩阵, 实际为 {cm.shape}")
    omega = symplectic_form(n // 2)
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * omega @ cm)))
    # 特征值成对出现 ±ν
    return moduli[::2]


def williamson_spectrum(cm: np.ndarray) -> np.ndarray:
    """
    正定 Σ = L Lᵀ 时 iΩΣ 与 i Lᵀ Ω L 相似，后者是 Hermitian 矩阵，
    特征值 ±ν 对舍入误差是 Lipschitz 稳定的。返回升序的正半部分。

    Raises:
        NumericError: Σ 不正定
    """
    n = cm.shape[0]
    if cm.shape not in ((2, 2), (4, 4)):
        raise DimensionMismatch(f"需要 2×2 或 4×4 矩阵, 实际为 {cm.shape}")
    try:
        lower = np.linalg.cholesky(cm)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"协方差矩阵不正定: {e}") from e
    k = lower.T @ symplectic_form(n // 2) @ lower
    return np.linalg.eigvalsh(1j * k)[n // 2:]
