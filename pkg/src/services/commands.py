"""命令实现：expand / eval / diff / ft / solve / basis

每个命令返回 CommandResult（输出表格 + 诊断信息），由 src/main.py 负责写出与退出码。
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np
from loguru import logger

from src.core.basis import FULL, BasisSpec, Expansion, diff_coeffs, phi_batch
from src.core.errors import DomainError, InputError
from src.core.fourier import XI_MAX, FourierRep, fourier_transform
from src.core.operators import diff_apply, mult_op, solve_first_order
from src.core.special_fn import JacobiParams
from src.core.transforms import analyze, analyze_full, analyze_multiplier, synthesize
from src.integrations.tables import Table, coefficient_table, read_coefficients, read_table, write_table
from src.services.functions import FunctionSpec


@dataclass
class RunConfig:
    """一次命令运行的参数（已合并配置文件默认值）"""

    alpha: float
    beta: float
    mode: str = FULL
    n: int = 64
    output: Optional[Path] = None
    fmt: Optional[str] = None
    points: Optional[str] = None
    input: Optional[Path] = None
    bandwidth: int = 8
    m_list: str = "0,1,2,3,4"
    values_out: Optional[Path] = None
    rank_tolerance: float = 1e-13
    residual_tolerance: float = 1e-9
    xi_max: float = XI_MAX

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        self.n = int(self.n)
        # 参数合法性由 JacobiParams / BasisSpec 检查
        self.spec = BasisSpec(JacobiParams(self.alpha, self.beta), self.mode)

    @property
    def params(self) -> JacobiParams:
        return self.spec.params


@dataclass
class CommandResult:
    table: Table
    messages: List[str] = field(default_factory=list)


def parse_points(text: str) -> np.ndarray:
    """'a:b:n' 为等距 n 点，否则为逗号分隔的数列"""
    text = str(text).strip()
    if not text:
        raise InputError("empty point specification")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InputError(f"point range must look like a:b:n, got {text!r}")
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise InputError(f"cannot parse points {text!r}")
        if count < 1:
            raise InputError(f"point count must be positive, got {count}")
        values = np.linspace(lo, hi, count)
    else:
        try:
            values = np.array([float(p) for p in text.split(",")])
        except ValueError:
            raise InputError(f"cannot parse points {text!r}")
    if not np.all(np.isfinite(values)):
        raise InputError(f"points must be finite, got {text!r}")
    return values


def parse_m_list(text: str) -> List[int]:
    """逗号分隔的非负下标"""
    try:
        ms = [int(p) for p in str(text).split(",") if p.strip()]
    except ValueError:
        raise InputError(f"cannot parse index list {text!r}")
    if not ms or any(m < 0 for m in ms):
        raise InputError(f"index list must contain non-negative integers, got {text!r}")
    return ms


def load_expansion(cfg: RunConfig) -> Expansion:
    if cfg.input is None:
        raise InputError("--in is required for this command")
    table = read_table(cfg.input, cfg.fmt if cfg.input.suffix.lower() not in (".csv", ".json") else None)
    return Expansion(spec=cfg.spec, coeffs=read_coefficients(table))


def _value_table(xs: np.ndarray, values: np.ndarray) -> Table:
    return Table(columns=["x", "value"], rows=[[float(x), float(v)] for x, v in zip(xs, values)])


def cmd_expand(cfg: RunConfig, fn: FunctionSpec) -> CommandResult:
    """系数表 m,c 及尾项诊断"""
    e = analyze(cfg.spec, fn.build(), cfg.n)
    tail = e.tail
    logger.info(f"展开 {fn.describe()}: N={cfg.n}, |c_(N-1)|={tail:.3e}")
    return CommandResult(table=coefficient_table(e.coeffs), messages=[f"tail |c_{cfg.n - 1}| = {tail:.3e}"])


def cmd_eval(cfg: RunConfig, points: Optional[str] = None) -> CommandResult:
    e = load_expansion(cfg)
    xs = parse_points(points or cfg.points)
    return CommandResult(table=_value_table(xs, synthesize(e, xs)))


def cmd_diff(cfg: RunConfig, points: Optional[str] = None) -> CommandResult:
    """u' 的取值；系数补一位零使 D 的作用精确"""
    e = load_expansion(cfg)
    d = diff_coeffs(cfg.params, e.n + 1)
    derivative = Expansion(spec=e.spec, coeffs=diff_apply(d, np.concatenate([e.coeffs, [0.0]])))
    xs = parse_points(points or cfg.points)
    return CommandResult(table=_value_table(xs, synthesize(derivative, xs)))


def cmd_ft(cfg: RunConfig, points: Optional[str] = None) -> CommandResult:
    e = load_expansion(cfg)
    if e.spec.mode != FULL:
        raise DomainError("fourier transform requires a full-range expansion")
    xs = parse_points(points or cfg.points)
    values = fourier_transform(e, xs, FourierRep.create(cfg.params, count=e.n), xi_max=cfg.xi_max)
    rows = [[float(x), float(v.real), float(v.imag)] for x, v in zip(xs, values)]
    return CommandResult(table=Table(columns=["xi", "re", "im"], rows=rows))


def cmd_solve(cfg: RunConfig, a_fn: FunctionSpec, f_fn: FunctionSpec) -> CommandResult:
    """u' + a(x) u = f：输出 u 的系数表，可选写出 u(x) 采样"""
    if cfg.spec.mode != FULL:
        raise DomainError("solve requires full mode")
    a_coeffs = analyze_multiplier(a_fn.build(hold_ends=True), cfg.bandwidth + 1)
    mult = mult_op(a_coeffs, cfg.bandwidth, cfg.n, cfg.params)
    rhs = analyze_full(cfg.spec, f_fn.build(), cfg.n)
    d = diff_coeffs(cfg.params, cfg.n + mult.bandwidth + 1)
    solution = solve_first_order(d, mult, rhs, cfg.n, cfg.rank_tolerance)
    messages = [f"residual = {solution.residual:.3e}", f"tail |c_{cfg.n - 1}| = {solution.tail:.3e}"]
    if solution.residual > cfg.residual_tolerance:
        logger.warning(f"残差 {solution.residual:.3e} 超过阈值 {cfg.residual_tolerance:g}")
    if cfg.values_out is not None:
        xs = parse_points(cfg.points)
        write_table(_value_table(xs, synthesize(solution.expansion, xs)), cfg.values_out, cfg.fmt)
    return CommandResult(table=coefficient_table(solution.expansion.coeffs), messages=messages)


def cmd_basis(cfg: RunConfig, m_list: Optional[str] = None, points: Optional[str] = None) -> CommandResult:
    """x, phi_m 列，用于绘制基函数"""
    ms = parse_m_list(m_list or cfg.m_list)
    xs = parse_points(points or cfg.points)
    values = phi_batch(cfg.spec, max(ms), xs)
    columns = ["x"] + [f"phi_{m}" for m in ms]
    rows = [[float(x)] + [float(values[m, j]) for m in ms] for j, x in enumerate(xs)]
    return CommandResult(table=Table(columns=columns, rows=rows))
