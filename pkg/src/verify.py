"""
定理验证器

对每个样本用两条互不依赖的计算链给出判定:
    保真度链: state_from_params → gaussian_fidelity / fidelity_threshold（不碰辛谱）
    Simon 链: state_from_params → mix → is_entangled（不碰保真度）
两条链只共享 gaussian_core 的构造函数。
"""
import math
import concurrent.futures
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import bisect

from entanglement import SEPARABILITY_BOUND, is_entangled
from errors import VerificationError
from evolution import as_coupling, mix, reduce
from fidelity import fidelity_below, fidelity_threshold, gamma_factor, gaussian_fidelity
from gaussian_core import TWO_PI, GaussianParams, purity, state_from_params

FIDELITY_BAND_REL = 1e-7
LAMBDA_BAND = 1e-9
BISECTION_XTOL = 1e-12
MEAN_GAP_TOL = 1e-12

IO_PAIRS = ((1, 1), (1, 2), (2, 1), (2, 2))


@dataclass(frozen=True)
class SweepSample:
    params1: GaussianParams
    params2: GaussianParams
    tau: float
    fidelity: float
    threshold: float
    lambda_tilde: float
    verdict_fidelity: bool
    verdict_simon: bool
    boundary_excluded: bool
    check: str = 'theorem'
    psi: float = 0.0
    no_interaction: bool = False
    lambda_mean_gap: float = 0.0
    io_fidelities: tuple | None = None

    @property
    def agrees(self) -> bool:
        return self.verdict_fidelity == self.verdict_simon

    @property
    def margin(self) -> float:
        return self.lambda_tilde - SEPARABILITY_BOUND

    @property
    def disagreement(self) -> bool:
        return not self.boundary_excluded and not self.agrees


@dataclass(frozen=True)
class IoFidelityReport:
    """四个输入-输出保真度 F(ρ_h, ρ̃_k)，顺序为 (1,1), (1,2), (2,1), (2,2)。"""
    fidelities: tuple
    thresholds: tuple | None
    psi_e_numeric: float | None
    sign_consistent: bool | None = None
    grid_mismatches: int = 0
    grid_points: int = 0

    @property
    def has_threshold(self) -> bool:
        return self.psi_e_numeric is not None

    def to_dict(self) -> dict:
        return {
            'fidelities': {f"f_io_{h}{k}": v for (h, k), v in zip(IO_PAIRS, self.fidelities)},
            'thresholds': ({f"f_io_{h}{k}": v for (h, k), v in zip(IO_PAIRS, self.thresholds)}
                           if self.thresholds else None),
            'psi_e_numeric': self.psi_e_numeric,
            'sign_consistent': self.sign_consistent,
            'grid_mismatches': self.grid_mismatches,
            'grid_points': self.grid_points,
        }


def _in_band(fid, threshold, f_e, lam, band_rel, lambda_band):
    return abs(fid - threshold) < band_rel * f_e or abs(lam - SEPARABILITY_BOUND) < lambda_band


def _evaluate(params1, params2, tau, displaced, band_rel, lambda_band, logger=None):
    c = as_coupling(tau)
    s1 = state_from_params(params1)
    s2 = state_from_params(params2)

    # Simon 链
    report = is_entangled(mix(s1, s2, c))
    lam = report.lambda_tilde

    # 保真度链
    fid = gaussian_fidelity(s1, s2).fidelity
    if c.no_interaction:
        return report, dict(
            tau=c.tau, fidelity=fid, threshold=math.nan, lambda_tilde=lam,
            verdict_fidelity=False, verdict_simon=report.entangled,
            boundary_excluded=False, no_interaction=True,
        )
    f_e = fidelity_threshold(purity(s1), purity(s2), c.tau).f_e
    threshold = gamma_factor(s1, s2) * f_e if displaced else f_e

    excluded = _in_band(fid, threshold, f_e, lam, band_rel, lambda_band)
    if excluded and logger:
        logger.debug(f"边界样本不计入统计: F={fid:.15g}, 阈值={threshold:.15g}, λ̃={lam:.15g}")
    return report, dict(
        tau=c.tau, fidelity=fid, threshold=threshold, lambda_tilde=lam,
        verdict_fidelity=fidelity_below(fid, threshold), verdict_simon=report.entangled,
        boundary_excluded=excluded, no_interaction=False,
    )


def check_theorem(params1: GaussianParams, params2: GaussianParams, tau,
                  band_rel=FIDELITY_BAND_REL, lambda_band=LAMBDA_BAND,
                  mean_gap=MEAN_GAP_TOL, logger=None) -> SweepSample:
    """零均值输入: (F < F_e) 与 (λ̃ < 1/2) 是否一致。含非零均值时转到 check_corollary。"""
    if params1.has_mean or params2.has_mean:
        if logger: logger.debug("输入含非零一阶矩，改用推论的阈值 Γ·F_e")
        return check_corollary(params1, params2, tau, band_rel, lambda_band, mean_gap, logger)
    _, fields = _evaluate(params1, params2, tau, False, band_rel, lambda_band, logger)
    sample = SweepSample(params1=params1, params2=params2, check='theorem', psi=params2.psi, **fields)
    if logger and sample.disagreement:
        logger.warning(f"判定不一致: {sample}")
    return sample


def check_corollary(params1: GaussianParams, params2: GaussianParams, tau,
                    band_rel=FIDELITY_BAND_REL, lambda_band=LAMBDA_BAND,
                    mean_gap=MEAN_GAP_TOL, logger=None) -> SweepSample:
    """任意一阶矩: (F < Γ·F_e) 与 (λ̃ < 1/2) 是否一致，并确认 λ̃ 与均值无关。"""
    report, fields = _evaluate(params1, params2, tau, True, band_rel, lambda_band, logger)

    bare = is_entangled(mix(state_from_params(params1.without_mean()),
                            state_from_params(params2.without_mean()), fields['tau']))
    gap = abs(bare.lambda_tilde - report.lambda_tilde)
    if gap > mean_gap:
        raise VerificationError(f"λ̃ 依赖于一阶矩: 差值 {gap:.3e} > {mean_gap:.1e}")

    sample = SweepSample(params1=params1, params2=params2, check='corollary', psi=params2.psi,
                         lambda_mean_gap=gap, **fields)
    if logger and sample.disagreement:
        logger.warning(f"判定不一致: {sample}")
    return sample


def io_fidelities(params1: GaussianParams, params2: GaussianParams, tau) -> tuple:
    """(F(ρ1,ρ̃1), F(ρ1,ρ̃2), F(ρ2,ρ̃1), F(ρ2,ρ̃2))"""
    inputs = {1: state_from_params(params1), 2: state_from_params(params2)}
    out = mix(inputs[1], inputs[2], tau)
    outputs = {1: reduce(out, 1), 2: reduce(out, 2)}
    return tuple(gaussian_fidelity(inputs[h], outputs[k]).fidelity for h, k in IO_PAIRS)


def lambda_tilde_at(params1: GaussianParams, params2: GaussianParams, tau, psi: float) -> float:
    s1 = state_from_params(params1)
    s2 = state_from_params(params2.with_psi(psi))
    return is_entangled(mix(s1, s2, tau)).lambda_tilde


def io_fidelity_thresholds(params1: GaussianParams, params2: GaussianParams, tau,
                           n_grid: int = 1000, xtol: float = BISECTION_XTOL,
                           lambda_band: float = LAMBDA_BAND, band_rel: float = FIDELITY_BAND_REL,
                           logger=None) -> IoFidelityReport:
    """
    数值求出 λ̃(ψ) = 1/2 的根 ψ_e（在 [0, π] 上二分），
    阈值取四个输入-输出保真度在 ψ_e 处的值，并在 ψ 网格上逐点检验符号等价。

    当前 params2.psi 处的保真度放在 fidelities 中。无法括住根时 thresholds 为 None。
    """
    current = io_fidelities(params1, params2, tau)

    def excess(psi):
        return lambda_tilde_at(params1, params2, tau, psi) - SEPARABILITY_BOUND

    lo, hi = excess(0.0), excess(math.pi)
    if not (lo > 0.0 and hi < 0.0):
        if logger: logger.info(f"λ̃(ψ)−1/2 在 [0, π] 上不变号 ({lo:.3e}, {hi:.3e})，没有输入-输出阈值")
        return IoFidelityReport(fidelities=current, thresholds=None, psi_e_numeric=None)

    psi_e = bisect(excess, 0.0, math.pi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    thresholds = io_fidelities(params1, params2.with_psi(psi_e), tau)
    if logger: logger.info(f"ψ_e (数值) = {psi_e:.12f}, 阈值 = {thresholds}")

    mismatches = 0
    counted = 0
    for psi in np.linspace(0.0, TWO_PI, n_grid):
        lam = lambda_tilde_at(params1, params2, tau, psi)
        if abs(lam - SEPARABILITY_BOUND) < lambda_band:
            continue
        entangled = lam < SEPARABILITY_BOUND
        fids = io_fidelities(params1, params2.with_psi(psi), tau)
        for fid, thr in zip(fids, thresholds):
            if abs(fid - thr) < band_rel * thr:
                continue
            counted += 1
            if (fid < thr) != entangled:
                mismatches += 1
    if mismatches and logger:
        logger.warning(f"输入-输出保真度在 {mismatches}/{counted} 个网格点上与 Simon 判定不一致")
    return IoFidelityReport(
        fidelities=current,
        thresholds=thresholds,
        psi_e_numeric=psi_e,
        sign_consistent=mismatches == 0,
        grid_mismatches=mismatches,
        grid_points=counted,
    )


def _map(func, items, workers):
    # executor.map 保持输入顺序，CSV 行序与网格顺序一致
    if workers and workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(func, items))
    return [func(item) for item in items]


def _check(params1, params2, tau, mode, band_rel, lambda_band, logger):
    if mode == 'corollary':
        sample = check_corollary(params1, params2, tau, band_rel, lambda_band, logger=logger)
    else:
        sample = check_theorem(params1, params2, tau, band_rel, lambda_band, logger=logger)
    if mode == 'io-fidelity':
        sample = replace(sample, io_fidelities=io_fidelities(params1, params2, tau))
    return sample


def sweep_psi(params1: GaussianParams, params2: GaussianParams, tau, n_points: int,
              mode: str = 'theorem', psi_from: float = 0.0, psi_to: float = TWO_PI,
              band_rel=FIDELITY_BAND_REL, lambda_band=LAMBDA_BAND,
              workers: int = 1, logger=None) -> list[SweepSample]:
    """在均匀 ψ 网格上（默认 [0, 2π]，含端点）改变 params2 的压缩相位。"""
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points}")
    grid = np.linspace(psi_from, psi_to, n_points)

    def run(psi):
        sample = _check(params1, params2.with_psi(psi), tau, mode, band_rel, lambda_band, logger)
        # 归一化会把 2π 记成 0，这里保留网格上的原值
        return replace(sample, psi=float(psi))

    if logger: logger.info(f"ψ 扫描: {n_points} 点, τ={as_coupling(tau).tau}, 模式={mode}")
    return _map(run, grid, workers)


def sweep_tau(params1: GaussianParams, params2: GaussianParams, taus,
              mode: str = 'theorem', band_rel=FIDELITY_BAND_REL, lambda_band=LAMBDA_BAND,
              workers: int = 1, logger=None) -> list[SweepSample]:
    taus = [float(t) for t in taus]
    if len(taus) < 2:
        raise ValueError("a tau sweep needs at least 2 points")
    if logger: logger.info(f"τ 扫描: {len(taus)} 点, 模式={mode}")
    return _map(lambda t: _check(params1, params2, t, mode, band_rel, lambda_band, logger), taus, workers)


@dataclass
class CertificationSummary:
    samples: int = 0
    corollary_samples: int = 0
    disagreements: int = 0
    boundary_excluded_count: int = 0
    max_margin_violation: float = 0.0
    seed: int | None = None
    details: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.disagreements == 0

    @property
    def boundary_fraction(self) -> float:
        total = self.samples + self.corollary_samples
        return self.boundary_excluded_count / total if total else 0.0

    def to_dict(self) -> dict:
        return {
            'samples': self.samples,
            'corollary_samples': self.corollary_samples,
            'disagreements': self.disagreements,
            'boundary_excluded_count': self.boundary_excluded_count,
            'max_margin_violation': self.max_margin_violation,
            'seed': self.seed,
        }


def draw_params(rng: np.random.Generator, count: int, with_mean: bool = False,
               r_max: float = 2.0, n_max: float = 2.0, alpha_max: float = 2.0) -> list[tuple]:
    """
    一次性抽取 count 组 (params1, params2, τ)。

    r ∈ [0, r_max], ψ ∈ [0, 2π), N ∈ [0, n_max], τ ∈ (0, 1)，有均值时 |α| ≤ alpha_max。
    抽样顺序固定，相同种子得到逐位相同的参数。
    """
    tiny = np.nextafter(0.0, 1.0)
    r = rng.uniform(0.0, r_max, size=(count, 2))
    psi = rng.uniform(0.0, TWO_PI, size=(count, 2))
    n = rng.uniform(0.0, n_max, size=(count, 2))
    tau = rng.uniform(tiny, 1.0, size=count)
    if with_mean:
        radius = alpha_max * np.sqrt(rng.uniform(0.0, 1.0, size=(count, 2)))
        angle = rng.uniform(0.0, TWO_PI, size=(count, 2))
        alpha_re, alpha_im = radius * np.cos(angle), radius * np.sin(angle)
    else:
        alpha_re = alpha_im = np.zeros((count, 2))

    columns = [x.tolist() for x in (alpha_re, alpha_im, r, psi, n)]
    draws = []
    for (are, aim, rr, pp, nn), t in zip(zip(*columns), tau.tolist()):
        p1 = GaussianParams(alpha_re=are[0], alpha_im=aim[0], r=rr[0], psi=pp[0], n_th=nn[0])
        p2 = GaussianParams(alpha_re=are[1], alpha_im=aim[1], r=rr[1], psi=pp[1], n_th=nn[1])
        draws.append((p1, p2, t))
    return draws


def certify(samples: int, seed: int, corollary_samples: int | None = None,
            r_max: float = 2.0, n_max: float = 2.0, alpha_max: float = 2.0,
            band_rel=FIDELITY_BAND_REL, lambda_band=LAMBDA_BAND, mean_gap=MEAN_GAP_TOL,
            workers: int = 1, keep_details: bool = False, logger=None) -> CertificationSummary:
    """
    随机验证：samples 个零均值样本走 check_theorem，
    corollary_samples 个带均值样本走 check_corollary。
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if corollary_samples is None:
        corollary_samples = max(1, samples // 10)

    rng = np.random.default_rng(seed)
    theorem_draws = draw_params(rng, samples, False, r_max, n_max)
    corollary_draws = draw_params(rng, corollary_samples, True, r_max, n_max, alpha_max)
    if logger: logger.info(f"开始随机验证: 定理 {samples} 个样本, 推论 {corollary_samples} 个样本, 种子 {seed}")

    def run_theorem(draw):
        return check_theorem(*draw, band_rel=band_rel, lambda_band=lambda_band, mean_gap=mean_gap, logger=logger)

    def run_corollary(draw):
        return check_corollary(*draw, band_rel=band_rel, lambda_band=lambda_band, mean_gap=mean_gap, logger=logger)

    results = _map(run_theorem, theorem_draws, workers) + _map(run_corollary, corollary_draws, workers)

    # 串行汇总，不需要共享计数器
    summary = CertificationSummary(samples=samples, corollary_samples=corollary_samples, seed=seed)
    for sample in results:
        if sample.boundary_excluded:
            summary.boundary_excluded_count += 1
        elif not sample.agrees:
            summary.disagreements += 1
            summary.max_margin_violation = max(summary.max_margin_violation, abs(sample.margin))
    if keep_details:
        summary.details = results

    if logger:
        logger.info(f"验证完成: 不一致 {summary.disagreements}, 边界排除 {summary.boundary_excluded_count} "
                    f"({summary.boundary_fraction:.4%})")
    return summary
