import os, csv, json, math
import logging
from logging.handlers import RotatingFileHandler
from enum import Enum

import numpy as np

from errors import OutputError

LOGGER_NAME = 'gaussmix'
LOG_FORMAT = '%(asctime)s %(levelname)s: %(message)s'


class Verdict(str, Enum):
    ENTANGLED = "entangled"
    SEPARABLE = "separable"
    NO_INTERACTION = "no-interaction"
    BOUNDARY = "boundary"


def _default(obj):
    # numpy 标量/数组与 Enum 的 JSON 序列化
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def json_output(data):
    return json.dumps(data, indent=4, ensure_ascii=False, default=_default)


# 检查目录是否存在
def check_dirs(path):
    if path and not os.path.exists(path):
        os.makedirs(path)
    return path


def format_float(value, digits: int = 12) -> str:
    """CSV 数值格式：固定有效数字，小数点固定为 '.'，不带千位分隔符。"""
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    value = float(value)
    if math.isnan(value):
        return 'nan'
    return format(value, f'.{digits}g')


def get_logger(log_config=None, quiet=False):
    """
    获取应用日志记录器

    Args:
        log_config: config.yaml 中的 logging 段，为 None 时只输出到控制台
        quiet: True 时控制台只输出 WARNING 及以上

    Returns:
        logging.Logger
    """
    log_config = log_config or {}
    logger = logging.getLogger(LOGGER_NAME)
    level = getattr(logging, str(log_config.get('level', 'INFO')).upper(), logging.INFO)
    logger.setLevel(level)
    logger.handlers = []
    logger.propagate = False

    formatter = logging.Formatter(LOG_FORMAT)

    if log_config.get('file', False):
        log_dir = check_dirs(log_config.get('dir', 'logs'))
        fh = RotatingFileHandler(
            os.path.join(log_dir, f"{LOGGER_NAME}.log"),
            mode='a',
            maxBytes=int(log_config.get('max_bytes', 2 * 1024 * 1024)),
            backupCount=int(log_config.get('backup_count', 3)),
            encoding='utf-8'
        )
        fh.setFormatter(formatter)
        logger.addHandler(fh)

    # 控制台输出走 stderr，stdout 留给 JSON 结果
    ch = logging.StreamHandler()
    ch.setFormatter(formatter)
    if quiet:
        ch.setLevel(logging.WARNING)
    logger.addHandler(ch)

    return logger


def write_csv(path, header, rows):
    """
    写入 CSV，行尾固定为 '\\n'，保证同样的输入得到逐字节相同的文件

    Raises:
        OutputError: 目录不存在或不可写
    """
    try:
        check_dirs(os.path.dirname(path))
        with open(path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise OutputError(f"无法写入 '{path}': {e}") from e
    return path
