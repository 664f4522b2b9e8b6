"""展开系数的计算：Chebyshev 参数走快速三角变换，其他参数走 Gauss-Jacobi 求积

约定 J^{(a,b)}[G]_m = ∫ G(t) q_m^{(a,b)}(t) (1-t)^a (1+t)^b dt（q_m 正交归一）。
T、V、W 使用 θ_k = (2k+1)π/(2N) 上的中点规则，U 使用第二类 Gauss 节点
θ_k = (k+1)π/(N+1)；四种规则对 m < N 与 N-1 次多项式 G 均精确：
    T (-1/2,-1/2): sqrt(2/π)·(π/N)·s_m·DCT-II[G]，s_0 = 1/sqrt(2)，其余为 1
    U ( 1/2, 1/2): sqrt(2/π)·(π/(N+1))·DST-I[G·sin θ]
    V ( 1/2,-1/2): (1/sqrt(π))·(π/N)·DST-IV[2G·sin(θ/2)]
    W (-1/2, 1/2): (1/sqrt(π))·(π/N)·DCT-IV[2G·cos(θ/2)]
dct(kind, x) 返回下列求和（即 scipy.fft 非归一化结果的一半）：
    DCT-I  y_k = x_0/2 + (-1)^k x_{N-1}/2 + Σ_{n=1}^{N-2} x_n cos(πkn/(N-1))
    DCT-II y_k = Σ x_n cos(πk(2n+1)/(2N))
    DST-I  y_k = Σ x_n sin(π(k+1)(n+1)/(N+1))
    DST-II y_k = Σ x_n sin(π(k+1)(2n+1)/(2N))
    DCT-IV y_k = Σ x_n cos(π(2k+1)(2n+1)/(4N))
    DST-IV y_k = Σ x_n sin(π(2k+1)(2n+1)/(4N))
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from loguru import logger
from scipy import fft

from src.core.basis import FULL, HALF, BasisSpec, Expansion, clenshaw_eval
from src.core.errors import DomainError, NonFiniteSampleError
from src.core.jacobi import gauss_jacobi, orthonormal_eval_batch
from src.core.special_fn import JacobiParams

TRIG_KINDS = ("DCT-I", "DCT-II", "DST-I", "DST-II", "DCT-IV", "DST-IV")
_LOG2 = math.log(2.0)


@dataclass(frozen=True, eq=False)
class SampleGrid:
    """变换的采样点：t 及其对应的 x，log(1-t)、log(1+t) 单独保存以保留端点精度

    theta 为 None 表示 Gauss-Jacobi 节点（此时 weights 为求积权重）。
    """

    params: JacobiParams
    t: np.ndarray
    x: np.ndarray
    log_one_minus: np.ndarray
    log_one_plus: np.ndarray
    theta: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return self.t.size

    @property
    def fast(self) -> bool:
        return self.theta is not None


def _kind_key(kind: str) -> str:
    key = str(kind).upper().replace("_", "-")
    if key not in TRIG_KINDS:
        raise DomainError(f"unknown transform kind {kind!r}, expected one of {', '.join(TRIG_KINDS)}")
    return key


def dct(kind: str, data) -> np.ndarray:
    """三角变换核（O(N log N)，任意 N）"""
    key = _kind_key(kind)
    x = np.asarray(data, dtype=float).ravel()
    if x.size < 1:
        raise DomainError("transform input must be nonempty")
    if key == "DCT-I" and x.size < 2:
        raise DomainError("DCT-I needs at least two points")
    family, _, roman = key.partition("-")
    type_ = {"I": 1, "II": 2, "IV": 4}[roman]
    transform = fft.dct if family == "DCT" else fft.dst
    return 0.5 * transform(x, type=type_)


def dct_direct(kind: str, data) -> np.ndarray:
    """与 dct 相同的求和，直接 O(N^2) 计算"""
    key = _kind_key(kind)
    x = np.asarray(data, dtype=float).ravel()
    n = x.size
    if n < 1:
        raise DomainError("transform input must be nonempty")
    k = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    if key == "DCT-I":
        if n < 2:
            raise DomainError("DCT-I needs at least two points")
        inner = np.cos(np.pi * k[:, :] * j[:, 1:-1] / (n - 1)) @ x[1:-1]
        return 0.5 * x[0] + 0.5 * (-1.0) ** np.arange(n) * x[-1] + inner
    if key == "DCT-II":
        kernel = np.cos(np.pi * k * (2 * j + 1) / (2 * n))
    elif key == "DST-I":
        kernel = np.sin(np.pi * (k + 1) * (j + 1) / (n + 1))
    elif key == "DST-II":
        kernel = np.sin(np.pi * (k + 1) * (2 * j + 1) / (2 * n))
    elif key == "DCT-IV":
        kernel = np.cos(np.pi * (2 * k + 1) * (2 * j + 1) / (4 * n))
    else:
        kernel = np.sin(np.pi * (2 * k + 1) * (2 * j + 1) / (4 * n))
    return kernel @ x


def chebyshev_theta(n: int) -> np.ndarray:
    """θ_k = (2k+1)π/(2N)，严格递增且不含端点"""
    if n < 1:
        raise DomainError(f"grid size must be at least 1, got {n}")
    return (2.0 * np.arange(n) + 1.0) * np.pi / (2.0 * n)


def gauss_u_theta(n: int) -> np.ndarray:
    """θ_k = (k+1)π/(N+1)，U_N 的零点"""
    if n < 1:
        raise DomainError(f"grid size must be at least 1, got {n}")
    return (np.arange(n) + 1.0) * np.pi / (n + 1.0)


def full_grid(params: JacobiParams, n: int, fast: bool = True) -> SampleGrid:
    """全区间采样：x = arctanh t"""
    kind = params.chebyshev_kind
    if fast and kind is not None:
        theta = gauss_u_theta(n) if kind == "U" else chebyshev_theta(n)
        half = theta / 2.0
        return SampleGrid(
            params=params,
            t=np.cos(theta),
            x=-np.log(np.tan(half)),
            log_one_minus=_LOG2 + 2.0 * np.log(np.sin(half)),
            log_one_plus=_LOG2 + 2.0 * np.log(np.cos(half)),
            theta=theta,
        )
    rule = gauss_jacobi(params, n)
    t = rule.nodes
    return SampleGrid(
        params=params,
        t=t,
        x=np.arctanh(t),
        log_one_minus=np.log1p(-t),
        log_one_plus=np.log1p(t),
        weights=rule.weights,
    )


def half_grid(params: JacobiParams, n: int, fast: bool = True) -> SampleGrid:
    """半区间采样：T = 1 - 2 sech^2 x，x = arctanh sqrt((1+T)/2) > 0"""
    grid = full_grid(params, n, fast)
    if grid.fast:
        x = -np.log(np.tan(grid.theta / 4.0))
    else:
        # sqrt((1+T)/2) = exp(log(1+T)/2 - log2/2)
        x = np.arctanh(np.exp(0.5 * (grid.log_one_plus - _LOG2)))
    return SampleGrid(
        params=grid.params,
        t=grid.t,
        x=x,
        log_one_minus=grid.log_one_minus,
        log_one_plus=grid.log_one_plus,
        theta=grid.theta,
        weights=grid.weights,
    )


def jacobi_transform(grid: SampleGrid, values) -> np.ndarray:
    """J^{(a,b)}[G]_m，m < N，G 的采样值按网格顺序给出"""
    g = np.asarray(values, dtype=float).ravel()
    n = grid.size
    if g.size != n:
        raise DomainError(f"expected {n} samples, got {g.size}")
    if not grid.fast:
        q = orthonormal_eval_batch(grid.params, n - 1, grid.t)
        return q @ (grid.weights * g)

    kind = grid.params.chebyshev_kind
    theta = grid.theta
    step = np.pi / n
    if kind == "T":
        out = math.sqrt(2.0 / np.pi) * step * dct("DCT-II", g)
        out[0] /= math.sqrt(2.0)
    elif kind == "U":
        out = math.sqrt(2.0 / np.pi) * (np.pi / (n + 1)) * dct("DST-I", g * np.sin(theta))
    elif kind == "V":
        out = step / math.sqrt(np.pi) * dct("DST-IV", 2.0 * g * np.sin(theta / 2.0))
    else:
        out = step / math.sqrt(np.pi) * dct("DCT-IV", 2.0 * g * np.cos(theta / 2.0))
    return out


def jacobi_coefficients(
    params: JacobiParams, G: Callable[[np.ndarray], np.ndarray], n: int, fast: bool = True
) -> np.ndarray:
    """对 t 的函数 G 直接求 J^{(a,b)}[G]_m，m < n"""
    grid = full_grid(params, n, fast)
    return jacobi_transform(grid, _sample(G, grid.t, grid.t))


def _sample(f: Callable, x: np.ndarray, report_x: np.ndarray) -> np.ndarray:
    """在 x 上采样 f；优先整体调用，不支持数组时逐点调用"""
    try:
        values = np.asarray(f(x), dtype=float)
        if values.shape != x.shape:
            values = np.broadcast_to(values, x.shape).astype(float)
    except (TypeError, ValueError):
        values = np.array([float(f(float(v))) for v in x])
    bad = ~np.isfinite(values)
    if np.any(bad):
        raise NonFiniteSampleError(report_x[np.argmax(bad)])
    return values


def _divide_weight(samples: np.ndarray, log_weight: np.ndarray, x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        values = samples * np.exp(-log_weight)
    bad = ~np.isfinite(values)
    if np.any(bad):
        raise NonFiniteSampleError(
            x[np.argmax(bad)],
            f"sample divided by the basis weight is not finite at x = {float(x[np.argmax(bad)])!r}",
        )
    return values


def analyze_full(spec: BasisSpec, f: Callable, n: int, fast: bool = True) -> Expansion:
    """全区间系数 c_m = (-1)^m J^{(α,β)}[f / weight]_m"""
    if spec.mode != FULL:
        raise DomainError("analyze_full requires a full-range basis")
    params = spec.params
    grid = full_grid(params, n, fast)
    samples = _sample(f, grid.x, grid.x)
    log_w = 0.5 * (params.alpha + 1.0) * grid.log_one_minus + 0.5 * (params.beta + 1.0) * grid.log_one_plus
    F = _divide_weight(samples, log_w, grid.x)
    coeffs = jacobi_transform(grid, F)
    coeffs[1::2] *= -1.0
    logger.debug(f"全区间展开: alpha={params.alpha}, beta={params.beta}, N={n}, 快速路径={grid.fast}")
    return Expansion(spec=spec, coeffs=coeffs)


def analyze_half(spec: BasisSpec, f: Callable, n: int, fast: bool = True) -> Expansion:
    """半区间系数：偶部对 (α,-1/2) 变换，奇部对 (α,1/2) 变换，交错合并

    f_{2k} = 2^{1/4} J^{(α,-1/2)}[f_E / (1-T)^{(1+α)/2}]_k
    f_{2k+1} = -2^{1/4} J^{(α,1/2)}[f_O / ((1-T)^{(1+α)/2} (1+T)^{1/2})]_k
    """
    if spec.mode != HALF:
        raise DomainError("analyze_half requires a half-range basis")
    if n < 2 or n % 2:
        raise DomainError(f"half-range transforms need an even N, got {n}")
    alpha = spec.params.alpha
    k = n // 2
    scale = 2.0 ** 0.25

    even_grid = half_grid(spec.half_even, k, fast)
    f_even = 0.5 * (_sample(f, even_grid.x, even_grid.x) + _sample(f, -even_grid.x, -even_grid.x))
    F_even = _divide_weight(f_even, 0.5 * (1.0 + alpha) * even_grid.log_one_minus, even_grid.x)

    odd_grid = half_grid(spec.half_odd, k, fast)
    f_odd = 0.5 * (_sample(f, odd_grid.x, odd_grid.x) - _sample(f, -odd_grid.x, -odd_grid.x))
    F_odd = _divide_weight(
        f_odd, 0.5 * (1.0 + alpha) * odd_grid.log_one_minus + 0.5 * odd_grid.log_one_plus, odd_grid.x
    )

    coeffs = np.empty(n)
    coeffs[0::2] = scale * jacobi_transform(even_grid, F_even)
    coeffs[1::2] = -scale * jacobi_transform(odd_grid, F_odd)
    logger.debug(f"半区间展开: alpha={alpha}, N={n}, 快速路径={even_grid.fast}")
    return Expansion(spec=spec, coeffs=coeffs)


def analyze(spec: BasisSpec, f: Callable, n: int, fast: bool = True) -> Expansion:
    if spec.mode == HALF:
        return analyze_half(spec, f, n, fast)
    return analyze_full(spec, f, n, fast)


def synthesize(e: Expansion, points) -> np.ndarray:
    """Σ c_m φ_m(x_j)，逐点 Clenshaw"""
    pts = np.atleast_1d(np.asarray(points, dtype=float)).ravel()
    return np.asarray(clenshaw_eval(e, pts), dtype=float).reshape(pts.shape)


def analyze_multiplier(a: Callable, count: int, samples: Optional[int] = None) -> np.ndarray:
    """有界乘子 a(x) = Σ a_m T~_m(tanh x) 的系数 a_0..a_{count-1}（不除权函数）

    a_m = (2/π) ∫_0^π a(arctanh cos θ) T~_m(cos θ) dθ，T~_0 = 1/sqrt(2)，T~_m = T_m。
    """
    if count < 1:
        raise DomainError(f"multiplier needs at least one coefficient, got {count}")
    n = max(int(samples or 0), 2 * count, 64)
    theta = chebyshev_theta(n)
    x = -np.log(np.tan(theta / 2.0))
    values = _sample(a, x, x)
    coeffs = (2.0 / n) * dct("DCT-II", values)[:count]
    coeffs[0] /= math.sqrt(2.0)
    return coeffs


def multiplier_eval(a_coeffs, x) -> np.ndarray:
    """Σ a_m T~_m(tanh x)"""
    a = np.asarray(a_coeffs, dtype=float).copy()
    a[0] /= math.sqrt(2.0)
    return np.polynomial.chebyshev.chebval(np.tanh(np.asarray(x, dtype=float)), a)
