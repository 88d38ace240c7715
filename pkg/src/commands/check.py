"""
check 子命令：对单个场景给出保真度判定与 Simon 判定
"""
from entanglement import SEPARABILITY_BOUND
from fidelity import threshold_report
from scenario import load_for_run
from utils import Verdict, json_output
from verify import check_corollary, check_theorem, io_fidelity_thresholds


def verdict_of(sample) -> Verdict:
    if sample.no_interaction:
        return Verdict.NO_INTERACTION
    if sample.boundary_excluded:
        return Verdict.BOUNDARY
    return Verdict.ENTANGLED if sample.verdict_simon else Verdict.SEPARABLE


def build_payload(scenario, sample, tolerances, logger=None) -> dict:
    payload = {
        'check': sample.check,
        'tau': sample.tau,
        'fidelity': sample.fidelity,
        'threshold': None if sample.no_interaction else sample.threshold,
        'lambda_tilde': sample.lambda_tilde,
        'entangled': sample.verdict_simon,
        'margin': sample.lambda_tilde - SEPARABILITY_BOUND,
        'boundary_excluded': sample.boundary_excluded,
        'verdict_fidelity': sample.verdict_fidelity,
        'verdict': verdict_of(sample),
    }
    if sample.check == 'corollary':
        payload['lambda_mean_gap'] = sample.lambda_mean_gap
    if sample.no_interaction:
        payload['note'] = Verdict.NO_INTERACTION.value
        return payload

    p1, p2 = scenario.state1, scenario.state2
    payload['thresholds'] = threshold_report(p1.r, p2.r, p1.mu, p2.mu, sample.tau).to_dict()
    if scenario.mode == 'io-fidelity':
        payload['io_fidelity'] = io_fidelity_thresholds(
            p1, p2, scenario.coupling,
            xtol=tolerances['bisection_xtol'],
            lambda_band=tolerances['lambda_band'],
            band_rel=tolerances['fidelity_band_rel'],
            logger=logger,
        ).to_dict()
    return payload


def run(args, config, logger) -> int:
    tolerances = config['tolerances']
    scenario = load_for_run(args.scenario, tau=args.tau, soft_r_max=tolerances['soft_r_max'], logger=logger)

    kwargs = dict(
        band_rel=tolerances['fidelity_band_rel'],
        lambda_band=tolerances['lambda_band'],
        mean_gap=tolerances['mean_gap'],
        logger=logger,
    )
    if scenario.mode == 'corollary':
        sample = check_corollary(scenario.state1, scenario.state2, scenario.coupling, **kwargs)
    else:
        sample = check_theorem(scenario.state1, scenario.state2, scenario.coupling, **kwargs)

    payload = build_payload(scenario, sample, tolerances, logger)
    logger.info(f"判定: {payload['verdict'].value}, F={sample.fidelity:.12g}, λ̃={sample.lambda_tilde:.12g}")
    print(json_output(payload))
    return 0


def register(subparsers, parents):
    parser = subparsers.add_parser('check', parents=parents, help='单个场景的纠缠判定，结果以 JSON 输出到 stdout')
    parser.add_argument('--scenario', required=True, help='场景 JSON 文件路径')
    parser.add_argument('--tau', type=float, default=None, help='覆盖场景中的 τ')
    parser.set_defaults(handler=run)
    return parser
