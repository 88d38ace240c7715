"""
场景文件（JSON）的严格解析

    {
        "state1": {"r": 0.5, "psi": 0, "n_th": 0.2},
        "state2": {"r": 0.7, "psi": 3.14159, "n_th": 0.3},
        "tau": 0.5,                      # 或者 "g": ..., "t": ...（二选一）
        "sweep": {"variable": "psi", "from": 0, "to": 6.283185307179586, "points": 1000},
        "seed": 20110519,
        "mode": "theorem"                # theorem | corollary | io-fidelity
    }

未知字段一律拒绝。
"""
import json
import math
from dataclasses import dataclass, replace

import numpy as np

from config import parse_seed
from errors import InvalidParameter, ScenarioError
from evolution import CouplingSpec
from gaussian_core import GaussianParams

MODES = ('theorem', 'corollary', 'io-fidelity')
SWEEP_VARIABLES = ('psi', 'tau')
SCENARIO_FIELDS = {'state1', 'state2', 'tau', 'g', 't', 'sweep', 'seed', 'mode'}
SWEEP_FIELDS = {'variable', 'from', 'to', 'points'}
SWEEP_REQUIRED = {'variable', 'from', 'to'}
DEFAULT_POINTS = 1000


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    def to_dict(self) -> dict:
        return {'variable': self.variable, 'from': self.start, 'to': self.stop, 'points': self.points}


@dataclass(frozen=True)
class Scenario:
    state1: GaussianParams
    state2: GaussianParams
    coupling: CouplingSpec
    sweep: SweepSpec | None = None
    seed: int | None = None
    mode: str = 'theorem'

    @property
    def tau(self) -> float:
        return self.coupling.tau

    def with_tau(self, tau: float) -> 'Scenario':
        return replace(self, coupling=CouplingSpec(tau=tau))

    def with_points(self, points: int) -> 'Scenario':
        if self.sweep is None:
            raise ScenarioError("--points 需要场景中存在 sweep 段")
        return replace(self, sweep=_sweep_spec({**self.sweep.to_dict(), 'points': points}))

    def with_mode(self, mode: str) -> 'Scenario':
        if mode not in MODES:
            raise ScenarioError(f"mode must be one of {MODES}, got {mode!r}")
        return replace(self, mode=mode)


def _number(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{name} 必须是数值, 收到 {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(f"{name} 必须是有限值, 收到 {value!r}")
    return float(value)


def _state(data, name):
    if data is None:
        raise ScenarioError(f"缺少字段 {name}")
    try:
        return GaussianParams.from_dict(data)
    except ScenarioError:
        raise
    except (InvalidParameter, TypeError) as e:
        raise ScenarioError(f"{name}: {e}") from e


def _coupling(data):
    has_tau = 'tau' in data
    has_gt = 'g' in data or 't' in data
    if has_tau == has_gt:
        raise ScenarioError("tau 与 (g, t) 必须且只能给出其中一个")
    try:
        if has_tau:
            return CouplingSpec(tau=_number(data['tau'], 'tau'))
        if 'g' not in data or 't' not in data:
            raise ScenarioError("g 与 t 必须同时给出")
        return CouplingSpec.from_gt(_number(data['g'], 'g'), _number(data['t'], 't'))
    except ScenarioError:
        raise
    except InvalidParameter as e:
        raise ScenarioError(str(e)) from e


def _sweep_spec(data, default_points=DEFAULT_POINTS):
    if not isinstance(data, dict):
        raise ScenarioError(f"sweep 必须是 JSON 对象, 收到 {type(data).__name__}")
    unknown = set(data) - SWEEP_FIELDS
    missing = SWEEP_REQUIRED - set(data)
    if unknown:
        raise ScenarioError(f"sweep 中的未知字段: {sorted(unknown)}")
    if missing:
        raise ScenarioError(f"sweep 缺少字段: {sorted(missing)}")

    variable = data['variable']
    if variable not in SWEEP_VARIABLES:
        raise ScenarioError(f"sweep.variable must be one of {SWEEP_VARIABLES}, got {variable!r}")
    start = _number(data['from'], 'sweep.from')
    stop = _number(data['to'], 'sweep.to')
    points = data.get('points', default_points)
    if isinstance(points, bool) or not isinstance(points, int) or points < 2:
        raise ScenarioError(f"sweep.points must be an integer >= 2, got {points!r}")
    if variable == 'tau' and not (0.0 <= start <= 1.0 and 0.0 <= stop <= 1.0):
        raise ScenarioError(f"tau 扫描范围必须在 [0, 1] 内, 收到 [{start}, {stop}]")
    return SweepSpec(variable=variable, start=start, stop=stop, points=points)


def parse_scenario(data: dict, default_points: int = DEFAULT_POINTS) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError(f"场景必须是 JSON 对象, 收到 {type(data).__name__}")
    unknown = set(data) - SCENARIO_FIELDS
    if unknown:
        raise ScenarioError(f"未知字段: {sorted(unknown)}")

    mode = data.get('mode', 'theorem')
    if mode not in MODES:
        raise ScenarioError(f"mode must be one of {MODES}, got {mode!r}")

    seed = None
    if data.get('seed') is not None:
        try:
            seed = parse_seed(data['seed'])
        except (ValueError, TypeError) as e:
            raise ScenarioError(str(e)) from e

    return Scenario(
        state1=_state(data.get('state1'), 'state1'),
        state2=_state(data.get('state2'), 'state2'),
        coupling=_coupling(data),
        sweep=_sweep_spec(data['sweep'], default_points) if data.get('sweep') is not None else None,
        seed=seed,
        mode=mode,
    )


def load_scenario(path: str, default_points: int = DEFAULT_POINTS) -> Scenario:
    """文件不存在时抛出 FileNotFoundError，内容非法时抛出 ScenarioError。"""
    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ScenarioError(f"'{path}' 不是合法的 JSON: {e}") from e
    return parse_scenario(data, default_points)


def load_for_run(path: str, tau=None, points=None, mode=None, soft_r_max: float = 5.0,
                 default_points: int = DEFAULT_POINTS, logger=None) -> Scenario:
    """读取场景并应用命令行覆盖项（--tau、--points、子命令预设的 mode）。"""
    scenario = load_scenario(path, default_points)
    if tau is not None:
        try:
            scenario = scenario.with_tau(tau)
        except InvalidParameter as e:
            raise ScenarioError(f"--tau: {e}") from e
    if points is not None:
        scenario = scenario.with_points(points)
    if mode is not None:
        scenario = scenario.with_mode(mode)

    for name, p in (('state1', scenario.state1), ('state2', scenario.state2)):
        if p.r > soft_r_max and logger:
            logger.warning(f"{name}.r = {p.r} 超过 {soft_r_max}，双曲函数的舍入误差可能影响边界附近的判定")
    if logger: logger.info(f"已加载场景 '{path}': τ={scenario.tau}, mode={scenario.mode}")
    return scenario
