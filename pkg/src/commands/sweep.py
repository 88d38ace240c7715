"""
sweep / io-fidelity 子命令：沿 ψ 或 τ 扫描，结果写成 CSV
"""
from errors import ScenarioError
from scenario import load_for_run
from utils import format_float, json_output, write_csv
from verify import IO_PAIRS, io_fidelity_thresholds, sweep_psi, sweep_tau

BASE_COLUMNS = ['psi', 'tau', 'fidelity', 'threshold', 'lambda_tilde', 'entangled']
IO_COLUMNS = [f"f_io_{h}{k}" for h, k in IO_PAIRS]


def csv_header(io_mode: bool) -> list[str]:
    return BASE_COLUMNS + IO_COLUMNS if io_mode else list(BASE_COLUMNS)


def csv_row(sample, digits: int, io_mode: bool) -> list[str]:
    row = [
        format_float(sample.psi, digits),
        format_float(sample.tau, digits),
        format_float(sample.fidelity, digits),
        format_float(sample.threshold, digits),
        format_float(sample.lambda_tilde, digits),
        format_float(sample.verdict_simon),
    ]
    if io_mode:
        row += [format_float(v, digits) for v in sample.io_fidelities]
    return row


def run_sweep(scenario, config, logger=None) -> list:
    tolerances = config['tolerances']
    spec = scenario.sweep
    kwargs = dict(
        mode=scenario.mode,
        band_rel=tolerances['fidelity_band_rel'],
        lambda_band=tolerances['lambda_band'],
        workers=config['general']['workers'],
        logger=logger,
    )
    if spec.variable == 'tau':
        if logger: logger.info("τ 扫描忽略场景中的 τ / (g, t)")
        return sweep_tau(scenario.state1, scenario.state2, spec.grid(), **kwargs)
    return sweep_psi(scenario.state1, scenario.state2, scenario.coupling, spec.points,
                     psi_from=spec.start, psi_to=spec.stop, **kwargs)


def run(args, config, logger) -> int:
    tolerances = config['tolerances']
    scenario = load_for_run(args.scenario, tau=args.tau, points=args.points, mode=args.preset_mode,
                            soft_r_max=tolerances['soft_r_max'],
                            default_points=config['sweep']['default_points'], logger=logger)
    if scenario.sweep is None:
        raise ScenarioError("sweep 需要场景中存在 sweep 段")

    io_mode = scenario.mode == 'io-fidelity'
    samples = run_sweep(scenario, config, logger)
    digits = config['general']['float_digits']
    write_csv(args.out, csv_header(io_mode), (csv_row(s, digits, io_mode) for s in samples))
    logger.info(f"已写入 {len(samples)} 行到 '{args.out}'")

    summary = {
        'out': args.out,
        'rows': len(samples),
        'variable': scenario.sweep.variable,
        'mode': scenario.mode,
        'entangled_rows': sum(1 for s in samples if s.verdict_simon),
        'boundary_excluded_count': sum(1 for s in samples if s.boundary_excluded),
        'disagreements': sum(1 for s in samples if s.disagreement),
    }
    if io_mode and scenario.sweep.variable == 'psi' and not scenario.coupling.no_interaction:
        summary['io_fidelity'] = io_fidelity_thresholds(
            scenario.state1, scenario.state2, scenario.coupling,
            n_grid=scenario.sweep.points,
            xtol=tolerances['bisection_xtol'],
            lambda_band=tolerances['lambda_band'],
            band_rel=tolerances['fidelity_band_rel'],
            logger=logger,
        ).to_dict()
    print(json_output(summary))
    return 0


def _add_arguments(parser):
    parser.add_argument('--scenario', required=True, help='场景 JSON 文件路径（需要 sweep 段）')
    parser.add_argument('--out', required=True, help='输出 CSV 路径')
    parser.add_argument('--points', type=int, default=None, help='覆盖 sweep.points')
    parser.add_argument('--tau', type=float, default=None, help='覆盖场景中的 τ')


def register(subparsers, parents):
    parser = subparsers.add_parser('sweep', parents=parents, help='沿 ψ 或 τ 扫描并输出 CSV')
    _add_arguments(parser)
    parser.set_defaults(handler=run, preset_mode=None)

    io_parser = subparsers.add_parser('io-fidelity', parents=parents,
                                      help='sweep 的别名，mode 固定为 io-fidelity')
    _add_arguments(io_parser)
    io_parser.set_defaults(handler=run, preset_mode='io-fidelity')
    return parser
