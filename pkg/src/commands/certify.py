"""
certify 子命令：随机抽样验证保真度判定与 Simon 判定的等价性
"""
from config import resolve_seed
from scenario import load_for_run
from utils import format_float, json_output, write_csv
from verify import certify

DEFAULT_SAMPLES = 100000
EXIT_DISAGREEMENT = 5

SAMPLE_COLUMNS = [
    'sample', 'check',
    'r1', 'psi1', 'n1', 'alpha1_re', 'alpha1_im',
    'r2', 'psi2', 'n2', 'alpha2_re', 'alpha2_im',
    'tau', 'fidelity', 'threshold', 'lambda_tilde',
    'verdict_fidelity', 'verdict_simon', 'boundary_excluded',
]


def sample_row(index, sample, digits) -> list[str]:
    row = [str(index), sample.check]
    for p in (sample.params1, sample.params2):
        row += [format_float(v, digits) for v in (p.r, p.psi, p.n_th, p.alpha_re, p.alpha_im)]
    row += [format_float(v, digits) for v in (sample.tau, sample.fidelity, sample.threshold, sample.lambda_tilde)]
    row += [format_float(sample.verdict_fidelity), format_float(sample.verdict_simon),
            format_float(sample.boundary_excluded)]
    return row


def run(args, config, logger) -> int:
    flag_seed = args.seed
    if flag_seed is None and args.scenario:
        scenario = load_for_run(args.scenario, soft_r_max=config['tolerances']['soft_r_max'], logger=logger)
        flag_seed = scenario.seed
    seed = resolve_seed(config, flag_seed)
    if args.samples < 1:
        raise ValueError(f"--samples must be >= 1, got {args.samples}")

    sampling = config['sampling']
    tolerances = config['tolerances']
    corollary_samples = max(1, round(args.samples * sampling['corollary_fraction']))
    summary = certify(
        args.samples, seed,
        corollary_samples=corollary_samples,
        r_max=sampling['r_max'],
        n_max=sampling['n_max'],
        alpha_max=sampling['alpha_max'],
        band_rel=tolerances['fidelity_band_rel'],
        lambda_band=tolerances['lambda_band'],
        mean_gap=tolerances['mean_gap'],
        workers=config['general']['workers'],
        keep_details=bool(args.out),
        logger=logger,
    )

    if args.out:
        digits = config['general']['float_digits']
        write_csv(args.out, SAMPLE_COLUMNS, (sample_row(i, s, digits) for i, s in enumerate(summary.details)))
        logger.info(f"逐样本结果已写入 '{args.out}'")

    print(json_output(summary.to_dict()))
    if not summary.passed:
        logger.error(f"发现 {summary.disagreements} 个不一致样本 (种子 {seed})")
        return EXIT_DISAGREEMENT
    return 0


def register(subparsers, parents):
    parser = subparsers.add_parser('certify', parents=parents, help='随机验证，存在不一致时退出码为 5')
    parser.add_argument('--samples', type=int, default=DEFAULT_SAMPLES, help=f'零均值样本数（默认 {DEFAULT_SAMPLES}）')
    parser.add_argument('--seed', default=None, help='64 位无符号种子，优先于 GAUSSMIX_SEED 与配置文件')
    parser.add_argument('--scenario', default=None, help='可选场景文件，只读取其中的 seed')
    parser.add_argument('--out', default=None, help='逐样本 CSV 输出路径')
    parser.set_defaults(handler=run)
    return parser
