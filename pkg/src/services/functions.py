"""命令行可用的函数来源：内置函数表，或 (x, value) 采样文件

采样文件在 x 上做 Floater-Hormann 有理重心插值；右端项在采样范围外取 0，
乘子保持端点值。
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.interpolate import FloaterHormannInterpolator

from src.core.errors import InputError
from src.integrations.tables import read_table


def _gaussian(x, a=1.0):
    return np.exp(-a * x * x)


def _sech(x, p=1.0):
    return np.exp(p * (np.log(2.0) - np.logaddexp(x, -x)))


def _sech_tanh(x, k=1.0):
    return _sech(k * x) * np.tanh(k * x)


def _runge_tanh(x, k=25.0):
    t = np.tanh(x)
    return _sech(x) / (1.0 + k * t * t)


def _bump(x, w=2.0):
    s = np.asarray(x, dtype=float) / w
    inside = np.abs(s) < 1.0
    out = np.zeros_like(s)
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def _const(x, c=1.0):
    return np.full_like(np.asarray(x, dtype=float), c)


def _tanh(x, k=1.0, shift=2.0):
    return shift + np.tanh(k * x)


# 名称 -> (函数, 参数个数上限, 说明)
BUILTINS: Dict[str, Tuple[Callable, int, str]] = {
    "gaussian": (_gaussian, 1, "exp(-a x^2)，参数 a（默认 1）"),
    "sech": (_sech, 1, "sech(x)^p，参数 p（默认 1）"),
    "sech_tanh": (_sech_tanh, 1, "sech(kx) tanh(kx)，参数 k（默认 1）"),
    "runge_tanh": (_runge_tanh, 1, "sech(x) / (1 + k tanh^2 x)，参数 k（默认 25）"),
    "bump": (_bump, 1, "紧支撑光滑鼓包 exp(-1/(1-(x/w)^2))，参数 w（默认 2）"),
    "const": (_const, 1, "常数 c（默认 1），作乘子用"),
    "tanh": (_tanh, 2, "shift + tanh(kx)，参数 k, shift（默认 1, 2），作乘子用"),
}


@dataclass(frozen=True)
class FunctionSpec:
    """内置函数名 + 实参数，或采样文件路径（二者取一）"""

    name: Optional[str] = None
    params: Tuple[float, ...] = field(default_factory=tuple)
    path: Optional[Path] = None

    def __post_init__(self):
        if (self.name is None) == (self.path is None):
            raise InputError("a function is either a builtin name or a samples file")
        if self.name is not None:
            if self.name not in BUILTINS:
                raise InputError(f"unknown function {self.name!r}, expected one of {', '.join(sorted(BUILTINS))}")
            limit = BUILTINS[self.name][1]
            if len(self.params) > limit:
                raise InputError(f"function {self.name!r} takes at most {limit} parameter(s), got {len(self.params)}")

    @classmethod
    def parse(cls, text: str) -> "FunctionSpec":
        """'name' 或 'name:p1,p2'"""
        name, _, rest = str(text).strip().partition(":")
        params = ()
        if rest:
            try:
                params = tuple(float(p) for p in rest.split(","))
            except ValueError:
                raise InputError(f"cannot parse parameters of {text!r}")
        return cls(name=name.strip(), params=params)

    @classmethod
    def from_file(cls, path) -> "FunctionSpec":
        return cls(path=Path(path))

    def build(self, hold_ends: bool = False) -> Callable[[np.ndarray], np.ndarray]:
        """hold_ends 只影响采样文件：范围外保持端点值而不是取 0"""
        if self.path is not None:
            return sampled_function(self.path, hold_ends=hold_ends)
        fn = BUILTINS[self.name][0]
        params = self.params
        logger.debug(f"内置函数 {self.name}{params if params else ''}")
        return lambda x: fn(np.asarray(x, dtype=float), *params)

    def describe(self) -> str:
        if self.path is not None:
            return str(self.path)
        if self.params:
            return f"{self.name}:{','.join(repr(p) for p in self.params)}"
        return self.name


def sampled_function(path, degree: int = 3, hold_ends: bool = False) -> Callable[[np.ndarray], np.ndarray]:
    """读取 x,value 采样表，返回 x 上的 Floater-Hormann 有理重心插值函数

    采样范围外默认取 0；hold_ends=True 时保持端点值（乘子用，a(±∞) 取端点值）。
    """
    table = read_table(path)
    if len(table.columns) < 2:
        raise InputError(f"{path}: samples need two columns (x, value)")
    x_name = "x" if "x" in table.columns else table.columns[0]
    v_name = next((c for c in ("value", "f", "y") if c in table.columns), table.columns[1])
    xs = np.asarray(table.column(x_name), dtype=float)
    values = np.asarray(table.column(v_name), dtype=float)
    if xs.size < 2:
        raise InputError(f"{path}: need at least two samples")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(values))):
        raise InputError(f"{path}: samples must be finite")
    if np.any(np.diff(xs) <= 0.0):
        raise InputError(f"{path}: sample x values must be strictly increasing")
    interpolant = FloaterHormannInterpolator(xs, values, d=min(degree, xs.size - 1))
    lo, hi = xs[0], xs[-1]
    left, right = (values[0], values[-1]) if hold_ends else (0.0, 0.0)
    logger.info(f"采样函数 {path}: {xs.size} 个点, x ∈ [{lo}, {hi}], 范围外{'保持端点值' if hold_ends else '取 0'}")

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        out = np.where(x < lo, left, right).astype(float)
        inside = (x >= lo) & (x <= hi)
        if np.any(inside):
            out[inside] = interpolant(x[inside])
        return out

    return evaluate
