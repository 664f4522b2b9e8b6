"""Gamma 函数族与 Jacobi 归一化常数

所有范数量都在对数空间里计算，最后一步才取指数：g_m 在 m 或 alpha+beta 较大时会溢出。
"""
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import special

from src.core.errors import DomainError

ArrayLike = Union[float, int, np.ndarray]

_LOG2 = math.log(2.0)
_CHEBYSHEV_KINDS = {
    (-0.5, -0.5): "T",
    (0.5, 0.5): "U",
    (0.5, -0.5): "V",
    (-0.5, 0.5): "W",
}


@dataclass(frozen=True)
class JacobiParams:
    """基函数族参数 (alpha, beta)，两者都必须严格大于 -1"""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise DomainError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            if value <= -1.0:
                raise DomainError(f"{name} must exceed -1, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def chebyshev_kind(self) -> Optional[str]:
        """(±1/2, ±1/2) 时返回 'T'/'U'/'V'/'W'，否则返回 None"""
        return _CHEBYSHEV_KINDS.get((self.alpha, self.beta))

    @property
    def symmetric(self) -> bool:
        return self.alpha == self.beta

    def swapped(self) -> "JacobiParams":
        return JacobiParams(self.beta, self.alpha)


def log_gamma_real(x: float) -> float:
    """ln Γ(x)，x > 0"""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_gamma_real requires x > 0, got {x!r}")
    return float(special.gammaln(x))


def log_gamma_complex(z: complex) -> complex:
    """主分支 ln Γ(z)

    下半平面通过共轭上半平面的值得到，保证 ln Γ(conj z) 与 conj ln Γ(z) 逐位相同。
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"log_gamma_complex requires a finite argument, got {z!r}")
    if z.imag == 0.0:
        if z.real <= 0.0 and z.real == math.floor(z.real):
            raise DomainError(f"Gamma has a pole at z = {z.real!r}")
        return complex(special.loggamma(complex(z.real, 0.0)))
    if z.imag < 0.0:
        return complex(special.loggamma(z.conjugate())).conjugate()
    return complex(special.loggamma(z))


def log_gamma_complex_array(z: np.ndarray) -> np.ndarray:
    """log_gamma_complex 的向量化版本（不做极点检查，调用方保证 re z > 0）"""
    z = np.asarray(z, dtype=complex)
    upper = np.where(z.imag < 0.0, np.conj(z), z)
    out = special.loggamma(upper)
    return np.where(z.imag < 0.0, np.conj(out), out)


def log_jacobi_norm(params: JacobiParams, m: ArrayLike) -> ArrayLike:
    """ln g_m^{(alpha, beta)}，m 可以是整数或整数数组"""
    a, b = params.alpha, params.beta
    m_arr = np.asarray(m)
    if np.any(m_arr < 0):
        raise DomainError(f"index must be non-negative, got {m!r}")
    m_f = m_arr.astype(float)
    # m = 0 时 (2m+a+b+1)Γ(m+a+b+1) 合并为 Γ(a+b+2)，在 a+b = -1 处也有定义
    safe = np.where(m_f == 0.0, 1.0, m_f)
    general = (
        (a + b + 1.0) * _LOG2
        + special.gammaln(safe + a + 1.0)
        + special.gammaln(safe + b + 1.0)
        - np.log(2.0 * safe + a + b + 1.0)
        - special.gammaln(safe + a + b + 1.0)
        - special.gammaln(safe + 1.0)
    )
    zeroth = (
        (a + b + 1.0) * _LOG2
        + special.gammaln(a + 1.0)
        + special.gammaln(b + 1.0)
        - special.gammaln(a + b + 2.0)
    )
    out = np.where(m_f == 0.0, zeroth, general)
    if np.ndim(out) == 0:
        return float(out)
    return out


def jacobi_norm(params: JacobiParams, m: int) -> float:
    """g_m = ∫(1-t)^alpha (1+t)^beta P_m(t)^2 dt，严格为正"""
    if int(m) != m:
        raise DomainError(f"index must be an integer, got {m!r}")
    return math.exp(log_jacobi_norm(params, int(m)))


def _forward_ratio(params: JacobiParams, m: int) -> float:
    """g_{m+1} / g_m 的闭式"""
    a, b = params.alpha, params.beta
    if m == 0:
        return (a + 1.0) * (b + 1.0) / (a + b + 3.0)
    return (
        (m + a + 1.0) * (m + b + 1.0) * (2.0 * m + a + b + 1.0)
        / ((2.0 * m + a + b + 3.0) * (m + a + b + 1.0) * (m + 1.0))
    )


def norm_ratio(params: JacobiParams, m: int, delta: int) -> float:
    """sqrt(g_{m+delta} / g_m)，delta 取 +1 或 -1"""
    if delta not in (1, -1):
        raise DomainError(f"delta must be +1 or -1, got {delta!r}")
    if m < 0 or m + delta < 0:
        raise DomainError(f"index out of range: m = {m}, delta = {delta}")
    if delta == 1:
        return math.sqrt(_forward_ratio(params, m))
    return 1.0 / math.sqrt(_forward_ratio(params, m - 1))
