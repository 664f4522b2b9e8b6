"""tanh-Jacobi 基函数（全区间 / 半区间）、微分耦合系数 b_m 与 Clenshaw 求值

全区间基：φ_m(x) = (-1)^m (1-tanh x)^{(α+1)/2} (1+tanh x)^{(β+1)/2} q_m^{(α,β)}(tanh x)，
其中 q_m 为正交归一 Jacobi 多项式。
半区间基（α = β），记 T = 1 - 2 sech²x：
    φ_{2k}   =  2^{(2α+1)/4} sech^{1+α}x q_k^{(α,-1/2)}(T)
    φ_{2k+1} = -2^{(2α+3)/4} tanh x sech^{1+α}x q_k^{(α,1/2)}(T)
两者逐点相同，只是系数变换的计算方式不同。
"""
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from src.core.errors import DomainError
from src.core.jacobi import jacobi_matrix, orthonormal_eval_batch
from src.core.special_fn import JacobiParams, jacobi_norm

ArrayLike = Union[float, np.ndarray]

FULL = "full"
HALF = "half"
_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class BasisSpec:
    """基函数族：参数 + 区间模式；半区间模式要求 alpha = beta"""

    params: JacobiParams
    mode: str = FULL

    def __post_init__(self):
        mode = str(self.mode).lower()
        if mode not in (FULL, HALF):
            raise DomainError(f"mode must be 'full' or 'half', got {self.mode!r}")
        object.__setattr__(self, "mode", mode)
        if mode == HALF and self.params.alpha != self.params.beta:
            raise DomainError(
                f"half mode requires alpha = beta, got alpha = {self.params.alpha!r}, "
                f"beta = {self.params.beta!r}"
            )

    @classmethod
    def of(cls, alpha: float, beta: float, mode: str = FULL) -> "BasisSpec":
        return cls(JacobiParams(alpha, beta), mode)

    @property
    def half_even(self) -> JacobiParams:
        return JacobiParams(self.params.alpha, -0.5)

    @property
    def half_odd(self) -> JacobiParams:
        return JacobiParams(self.params.alpha, 0.5)


@dataclass(frozen=True, eq=False)
class Expansion:
    """系数向量 c_0..c_{N-1} 及其基函数族"""

    spec: BasisSpec
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).ravel()
        if c.size < 1:
            raise DomainError("an expansion needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise DomainError("expansion coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return self.coeffs.size

    @property
    def tail(self) -> float:
        """|c_{N-1}|，分辨率诊断"""
        return float(abs(self.coeffs[-1]))

    def __call__(self, x: ArrayLike) -> ArrayLike:
        return clenshaw_eval(self, x)


@dataclass(frozen=True, eq=False)
class DiffOp:
    """微分矩阵的次对角序列 b_0..b_{count-1}"""

    b: np.ndarray = field(repr=False)
    params: JacobiParams

    def __post_init__(self):
        b = np.array(self.b, dtype=float).ravel()
        b.setflags(write=False)
        object.__setattr__(self, "b", b)

    @property
    def count(self) -> int:
        return self.b.size


def log_weight(params: JacobiParams, x: ArrayLike) -> ArrayLike:
    """ln[(1-tanh x)^{(α+1)/2} (1+tanh x)^{(β+1)/2}]，|x| 很大时也不下溢"""
    x = np.asarray(x, dtype=float)
    log_minus = _LOG2 - np.logaddexp(0.0, 2.0 * x)
    log_plus = _LOG2 - np.logaddexp(0.0, -2.0 * x)
    return 0.5 * (params.alpha + 1.0) * log_minus + 0.5 * (params.beta + 1.0) * log_plus


def log_sech(x: ArrayLike) -> ArrayLike:
    x = np.asarray(x, dtype=float)
    return _LOG2 - np.logaddexp(x, -x)


def _alternating(n: int) -> np.ndarray:
    return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)


def _as_points(x: ArrayLike) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=float)).ravel()


def _scalar_or_array(x: ArrayLike, values: np.ndarray) -> ArrayLike:
    if np.ndim(x) == 0:
        return float(values[0])
    return values.reshape(np.shape(x))


def phi_batch(spec: BasisSpec, m_max: int, x: ArrayLike) -> np.ndarray:
    """φ_0..φ_{m_max} 在各点的值，形状 (m_max+1, len(x))"""
    if m_max < 0:
        raise DomainError(f"index must be non-negative, got {m_max}")
    pts = _as_points(x)
    if spec.mode == FULL:
        q = orthonormal_eval_batch(spec.params, m_max, np.tanh(pts))
        weight = np.exp(log_weight(spec.params, pts))
        return _alternating(m_max + 1)[:, None] * q * weight[None, :]

    alpha = spec.params.alpha
    lsech = log_sech(pts)
    T = 1.0 - 2.0 * np.exp(2.0 * lsech)
    envelope = np.exp((1.0 + alpha) * lsech)
    out = np.empty((m_max + 1, pts.size))
    n_even = m_max // 2 + 1
    out[0::2] = (
        2.0 ** ((2.0 * alpha + 1.0) / 4.0)
        * envelope[None, :]
        * orthonormal_eval_batch(spec.half_even, n_even - 1, T)
    )
    n_odd = (m_max + 1) // 2
    if n_odd:
        out[1::2] = (
            -(2.0 ** ((2.0 * alpha + 3.0) / 4.0))
            * (np.tanh(pts) * envelope)[None, :]
            * orthonormal_eval_batch(spec.half_odd, n_odd - 1, T)
        )
    return out


def phi_full(spec: BasisSpec, m: int, x: ArrayLike) -> ArrayLike:
    """全区间基函数 φ_m(x)"""
    if spec.mode != FULL:
        raise DomainError("phi_full requires a full-range basis")
    if m < 0:
        raise DomainError(f"index must be non-negative, got {m}")
    return _scalar_or_array(x, phi_batch(spec, m, x)[m])


def phi_half(spec: BasisSpec, m: int, x: ArrayLike) -> ArrayLike:
    """半区间基函数 φ_m(x)，偶数 m 为偶函数，奇数 m 为奇函数"""
    if spec.mode != HALF:
        raise DomainError("phi_half requires a half-range basis")
    if m < 0:
        raise DomainError(f"index must be non-negative, got {m}")
    return _scalar_or_array(x, phi_batch(spec, m, x)[m])


def phi(spec: BasisSpec, m: int, x: ArrayLike) -> ArrayLike:
    if spec.mode == FULL:
        return phi_full(spec, m, x)
    return phi_half(spec, m, x)


def diff_coeffs(params: JacobiParams, count: int) -> DiffOp:
    """b_m，m = 0..count-1

    b_m = sqrt[(m+1)(α+m+1)(β+m+1)(α+β+m+1) / ((α+β+2m+1)(α+β+2m+3))]；
    m = 0 时约去 (α+β+1)/(α+β+1)，得 b_0 = sqrt((α+1)(β+1)/(α+β+3))。
    """
    if count < 1:
        raise DomainError(f"count must be at least 1, got {count}")
    a, b = params.alpha, params.beta
    out = np.empty(count)
    out[0] = math.sqrt((a + 1.0) * (b + 1.0) / (a + b + 3.0))
    if count > 1:
        m = np.arange(1, count, dtype=float)
        s = a + b + 2.0 * m
        out[1:] = np.sqrt(
            (m + 1.0) * (a + m + 1.0) * (b + m + 1.0) * (a + b + m + 1.0) / ((s + 1.0) * (s + 3.0))
        )
    return DiffOp(b=out, params=params)


def diff_matrix(d: DiffOp, n: int) -> np.ndarray:
    """系数空间的 N×N 微分矩阵：(Dc)_k = b_{k-1} c_{k-1} - b_k c_{k+1}，D = -D^T"""
    if n < 1:
        raise DomainError(f"size must be at least 1, got {n}")
    if d.count < n - 1:
        raise DomainError(f"need {n - 1} coupling coefficients, got {d.count}")
    b = d.b[: n - 1]
    return np.diag(b, -1) - np.diag(b, 1)


def _clenshaw_orthonormal(params: JacobiParams, coeffs: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Σ coeffs_k q_k^{(α,β)}(t)，后向 Clenshaw"""
    n = coeffs.size
    q0 = 1.0 / math.sqrt(jacobi_norm(params, 0))
    if n == 1:
        return np.full_like(t, coeffs[0] * q0)
    diag, off = jacobi_matrix(params, n)
    y1 = np.zeros_like(t)
    y2 = np.zeros_like(t)
    for k in range(n - 1, -1, -1):
        # q_{k+1} = (t - B_k)/a_k · q_k - a_{k-1}/a_k · q_{k-1}
        alpha_k = (t - diag[k]) / off[k] if k < n - 1 else 0.0
        beta_k1 = -off[k] / off[k + 1] if k < n - 2 else 0.0
        y1, y2 = coeffs[k] + alpha_k * y1 + beta_k1 * y2, y1
    return q0 * y1


def clenshaw_eval(e: Expansion, x: ArrayLike) -> ArrayLike:
    """Σ c_m φ_m(x)；权函数只在最后乘一次"""
    pts = _as_points(x)
    spec = e.spec
    c = e.coeffs
    if spec.mode == FULL:
        signed = _alternating(c.size) * c
        values = _clenshaw_orthonormal(spec.params, signed, np.tanh(pts))
        values = values * np.exp(log_weight(spec.params, pts))
        return _scalar_or_array(x, values)

    alpha = spec.params.alpha
    lsech = log_sech(pts)
    T = 1.0 - 2.0 * np.exp(2.0 * lsech)
    envelope = np.exp((1.0 + alpha) * lsech)
    values = 2.0 ** ((2.0 * alpha + 1.0) / 4.0) * _clenshaw_orthonormal(spec.half_even, c[0::2], T)
    if c.size > 1:
        values = values - 2.0 ** ((2.0 * alpha + 3.0) / 4.0) * np.tanh(pts) * _clenshaw_orthonormal(
            spec.half_odd, c[1::2], T
        )
    return _scalar_or_array(x, values * envelope)


def derivative_pointwise(spec: BasisSpec, m: int, x: ArrayLike) -> ArrayLike:
    """φ_m'(x) = -b_{m-1} φ_{m-1}(x) + b_m φ_{m+1}(x)，b_{-1} = 0"""
    if m < 0:
        raise DomainError(f"index must be non-negative, got {m}")
    b = diff_coeffs(spec.params, m + 1).b
    values = phi_batch(spec, m + 1, x)
    out = b[m] * values[m + 1]
    if m > 0:
        out = out - b[m - 1] * values[m - 1]
    return _scalar_or_array(x, out)
