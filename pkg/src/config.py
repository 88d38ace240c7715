# src/config.py
import yaml
import os
import logging

# 定义配置文件的路径
CONFIG_DIR = 'data'
CONFIG_PATH = os.path.join(CONFIG_DIR, 'config.yaml')

SEED_ENV = 'GAUSSMIX_SEED'
CONFIG_ENV = 'GAUSSMIX_CONFIG'
MAX_SEED = 2 ** 64 - 1


def get_default_config():
    return {
        'general': {
            'default_seed': 20110519,
            'workers': 1,
            'float_digits': 12
        },
        'sampling': {
            'r_max': 2.0,
            'n_max': 2.0,
            'alpha_max': 2.0,
            'corollary_fraction': 0.1 # 每个定理样本对应的推论样本比例
        },
        'tolerances': {
            'fidelity_band_rel': 1e-7, # |F − 阈值| < 1e-7·F_e 的样本不计入等价性统计
            'lambda_band': 1e-9,
            'bisection_xtol': 1e-12,
            'mean_gap': 1e-12,
            'soft_r_max': 5.0 # 超过时只警告，双曲函数的条件数开始变差
        },
        'sweep': {
            'default_points': 1000
        },
        'logging': {
            'dir': 'logs',
            'level': 'INFO',
            'file': 'true',
            'max_bytes': 2 * 1024 * 1024,
            'backup_count': 3
        }
    }


# 需要保持数值类型的字段
INT_FIELDS = {
    ('general', 'default_seed'), ('general', 'workers'), ('general', 'float_digits'),
    ('sweep', 'default_points'), ('logging', 'max_bytes'), ('logging', 'backup_count'),
}
FLOAT_FIELDS = {
    ('sampling', 'r_max'), ('sampling', 'n_max'), ('sampling', 'alpha_max'),
    ('sampling', 'corollary_fraction'),
    ('tolerances', 'fidelity_band_rel'), ('tolerances', 'lambda_band'),
    ('tolerances', 'bisection_xtol'), ('tolerances', 'mean_gap'), ('tolerances', 'soft_r_max'),
}


def get_config_path():
    return os.environ.get(CONFIG_ENV) or CONFIG_PATH


def save_config(config_data, path=None):
    # 将配置数据保存到 config.yaml 文件
    path = path or get_config_path()
    config_dir = os.path.dirname(path)
    if config_dir:
        os.makedirs(config_dir, exist_ok=True)

    try:
        with open(path, 'w', encoding='utf-8') as configfile:
            # 逐个 section 写入，并在它们之间添加空行以提高可读性
            for i, (section, data) in enumerate(config_data.items()):
                if i > 0:
                    configfile.write('\n')
                yaml.dump({section: data}, configfile, allow_unicode=True, sort_keys=False)
    except Exception as e:
        logging.error(f"Error saving config file: {e}")
        raise


def lowercase_keys(obj):
    if isinstance(obj, dict):
        return {str(k).lower(): lowercase_keys(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [lowercase_keys(elem) for elem in obj]
    return obj


def deep_merge_dicts(source, defaults):
    """
    Recursively merges a `source` dictionary into a `defaults` dictionary.
    - If a key from `defaults` is missing in `source`, it's added.
    - If values are dictionaries, they are merged recursively.
    - `source` values take precedence.
    - Returns the merged dictionary and a boolean indicating if changes were made.
    """
    updated = False
    merged = defaults.copy()

    for key, default_value in defaults.items():
        if key not in source:
            updated = True
            continue

        source_value = source[key]

        if isinstance(default_value, dict) and isinstance(source_value, dict):
            merged[key], sub_updated = deep_merge_dicts(source_value, default_value)
            if sub_updated:
                updated = True
        else:
            merged[key] = source_value

    # 保留用户自定义的额外字段
    for key, source_value in source.items():
        if key not in defaults:
            merged[key] = source_value

    return merged, updated


def convert_types(config_data, defaults=None):
    """字符串布尔值转换为 bool，数值字段转换为 int/float，非法值回退为默认值。"""
    defaults = defaults or get_default_config()
    TRUE_VALUES = {'true', 'yes', 'on', '1', True}
    FALSE_VALUES = {'false', 'no', 'off', '0', False}

    converted_config = {}
    for section, section_items in config_data.items():
        if not isinstance(section_items, dict):
            converted_config[section] = section_items
            continue

        converted_section = {}
        for key, value in section_items.items():
            if (section, key) in INT_FIELDS or (section, key) in FLOAT_FIELDS:
                cast = int if (section, key) in INT_FIELDS else float
                try:
                    if isinstance(value, bool):
                        raise TypeError("bool is not a number")
                    converted_section[key] = cast(value)
                except (ValueError, TypeError):
                    fallback = defaults.get(section, {}).get(key)
                    logging.warning(f"Invalid value for {section}.{key} ('{value}'), using default {fallback}")
                    converted_section[key] = fallback
            elif isinstance(value, str):
                lower_value = value.lower()
                if lower_value in TRUE_VALUES:
                    converted_section[key] = True
                elif lower_value in FALSE_VALUES:
                    converted_section[key] = False
                else:
                    converted_section[key] = value
            else:
                converted_section[key] = value
        converted_config[section] = converted_section
    return converted_config


def load_config(path=None):
    # 加载 config.yaml 文件，如果不存在则创建并使用默认值
    path = path or get_config_path()
    default_config = get_default_config()

    if not os.path.exists(path):
        logging.info(f"'{path}' not found. Creating a new one with default settings.")
        save_config(default_config, path)
        return convert_types(default_config)

    try:
        with open(path, 'r', encoding='utf-8') as configfile:
            user_config_raw = yaml.safe_load(configfile) or {}
        if not isinstance(user_config_raw, dict):
            raise ValueError("Config file is not a valid dictionary.")
        user_config = lowercase_keys(user_config_raw)
    except Exception as e:
        logging.warning(f"Error reading or parsing config file '{path}', using default config: {e}")
        return convert_types(default_config)

    config_data, config_updated = deep_merge_dicts(user_config, default_config)

    if config_updated:
        logging.info(f"Config file '{path}' has been updated with missing default entries.")
        save_config(config_data, path)

    return convert_types(config_data, default_config)


def parse_seed(value):
    """解析 64 位无符号种子，非法时抛出 ValueError"""
    if isinstance(value, bool):
        raise ValueError(f"invalid seed: {value!r}")
    seed = int(str(value).strip(), 0) if isinstance(value, str) else int(value)
    if seed < 0 or seed > MAX_SEED:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {value!r}")
    return seed


def resolve_seed(config_data, flag_value=None):
    """种子优先级: --seed 参数 > 环境变量 GAUSSMIX_SEED > 配置中的 default_seed"""
    if flag_value is not None:
        return parse_seed(flag_value)
    env_value = os.environ.get(SEED_ENV)
    if env_value:
        return parse_seed(env_value)
    return parse_seed(config_data['general']['default_seed'])
