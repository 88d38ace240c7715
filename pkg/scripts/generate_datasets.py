#!/usr/bin/env python3
"""
独立脚本：重新生成 ψ 扫描数据集（CSV），输出到 data/datasets/

    phase_sweep_tau05.csv    ψ 扫描，τ = 0.5
    phase_sweep_tau08.csv    ψ 扫描，τ = 0.8
    io_fidelity_tau08.csv    ψ 扫描，τ = 0.8，附带四个输入-输出保真度

态参数: r1 = 0.5, N1 = 0.2; r2 = 0.7, N2 = 0.3，ψ 作用在第二个态上
"""

import os
import sys
import math

sys.path.append(os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'src'))

from commands.sweep import IO_COLUMNS, csv_header, csv_row
from gaussian_core import GaussianParams
from utils import check_dirs, write_csv
from verify import io_fidelity_thresholds, sweep_psi

POINTS = 1000
DIGITS = 12

STATE1 = GaussianParams(r=0.5, n_th=0.2)
STATE2 = GaussianParams(r=0.7, n_th=0.3)

DATASETS = (
    ('phase_sweep_tau05.csv', 0.5, 'theorem'),
    ('phase_sweep_tau08.csv', 0.8, 'theorem'),
    ('io_fidelity_tau08.csv', 0.8, 'io-fidelity'),
)


def entangled_interval(samples):
    psis = [s.psi for s in samples if s.verdict_simon]
    return (min(psis), max(psis)) if psis else None


def generate_datasets(out_dir=os.path.join("data", "datasets")):
    check_dirs(out_dir)
    for filename, tau, mode in DATASETS:
        path = os.path.join(out_dir, filename)
        io_mode = mode == 'io-fidelity'
        samples = sweep_psi(STATE1, STATE2, tau, POINTS, mode=mode)
        write_csv(path, csv_header(io_mode), [csv_row(s, DIGITS, io_mode) for s in samples])

        interval = entangled_interval(samples)
        print(f"✓ {path}: {len(samples)} 行, τ = {tau}")
        if interval:
            print(f"  纠缠区间 ψ ∈ [{interval[0]:.6f}, {interval[1]:.6f}] (π = {math.pi:.6f})")
        if io_mode:
            report = io_fidelity_thresholds(STATE1, STATE2, tau, n_grid=POINTS)
            print(f"  ψ_e (数值) = {report.psi_e_numeric}")
            for name, thr in zip(IO_COLUMNS, report.thresholds or ()):
                print(f"  {name} 阈值 = {thr:.12g}")
            print(f"  网格符号一致: {report.sign_consistent} ({report.grid_mismatches}/{report.grid_points})")


if __name__ == "__main__":
    try:
        generate_datasets()
    except KeyboardInterrupt:
        print("\n操作已取消")
