"""
命令行入口

    python src/main.py check   --scenario data/scenarios/squeezed_thermal_tau05.json
    python src/main.py sweep   --scenario data/scenarios/squeezed_thermal_tau05.json --out data/datasets/phase_sweep_tau05.csv
    python src/main.py io-fidelity --scenario data/scenarios/io_fidelity_tau08.json --out data/datasets/io_fidelity_tau08.csv
    python src/main.py certify --samples 100000 --seed 20110519

退出码: 0 成功（与判定结果无关）; 2 输入错误; 3 数值/定义域错误; 4 输出不可写; 5 随机验证发现不一致
"""
import sys
import argparse

from commands import certify as certify_cmd
from commands import check as check_cmd
from commands import sweep as sweep_cmd
from config import load_config
from errors import (DimensionMismatch, DomainError, InvalidParameter, NonPhysicalState,
                    NumericError, OutputError, VerificationError)
from utils import get_logger

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_OUTPUT = 4

# 顺序有意义：DomainError 等同样继承自 ValueError，必须先于输入错误匹配
EXIT_CODES = (
    (OutputError, EXIT_OUTPUT),
    ((DomainError, NumericError, NonPhysicalState, DimensionMismatch, VerificationError), EXIT_NUMERIC),
    ((InvalidParameter, FileNotFoundError, ValueError), EXIT_INPUT),
)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--quiet', action='store_true', help='控制台只输出 WARNING 及以上')

    parser = argparse.ArgumentParser(
        prog='gaussmix',
        description='两个单模高斯态经交换型相互作用混合后的纠缠判定与保真度阈值验证',
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    for module in (check_cmd, sweep_cmd, certify_cmd):
        module.register(subparsers, [common])
    return parser


def exit_code_for(error) -> int:
    for types, code in EXIT_CODES:
        if isinstance(error, types):
            return code
    raise error


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = load_config()
    logger = get_logger(config['logging'], quiet=args.quiet)

    try:
        return args.handler(args, config, logger)
    except Exception as e:
        code = exit_code_for(e)
        logger.error(f"{type(e).__name__}: {e}")
        return code


if __name__ == '__main__':
    sys.exit(main())
