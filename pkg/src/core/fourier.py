"""Fourier 空间表示：权函数 g_{α,β}、广义 Carlitz 测度与多项式、展开式的 Fourier 变换

约定 F[f](ξ) = (2π)^{-1/2} ∫ f(x) e^{-ixξ} dx。
g_{α,β}(ξ) = C·Γ((α+1)/2 + iξ/2)·Γ((β+1)/2 - iξ/2) 恰为 F[φ_0]，
由 F[u'] = iξ F[u] 与 φ_m' = -b_{m-1} φ_{m-1} + b_m φ_{m+1} 得 F[φ_m] = i^m g p_m，
p_m 为测度 |g|^2 dξ 的正交归一多项式：p_{m+1} = (ξ p_m - b_{m-1} p_{m-1}) / b_m。
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from loguru import logger
from scipy import integrate, special

from src.core.basis import FULL, DiffOp, Expansion, diff_coeffs
from src.core.errors import DomainError, NumericalError
from src.core.special_fn import JacobiParams, log_gamma_complex_array

ArrayLike = Union[float, np.ndarray]

# 前向 Carlitz 递推在 |ξ| <= XI_MAX、m <= 64 范围内验证过
XI_MAX = 60.0
NORMALISATION_CHECK = 1e-10


@dataclass(frozen=True, eq=False)
class FourierRep:
    """参数族在 Fourier 空间的表示：归一化常数 C 与共享的 b_m 序列"""

    params: JacobiParams
    normalisation: float
    diff: DiffOp = field(repr=False)

    @classmethod
    def create(cls, params: JacobiParams, count: int = 64, check: bool = True) -> "FourierRep":
        """数值积分求 C；check 为真时与 Barnes 闭式交叉校验"""
        c = normalisation_constant(params)
        if check:
            exact = normalisation_constant_closed_form(params)
            if abs(c - exact) > NORMALISATION_CHECK * exact:
                raise NumericalError(
                    f"normalisation mismatch: quadrature {c!r} vs closed form {exact!r}"
                )
        logger.info(f"Fourier 表示: alpha={params.alpha}, beta={params.beta}, C={c:.15g}")
        return cls(params=params, normalisation=c, diff=diff_coeffs(params, max(count, 1)))

    def coupling(self, count: int) -> np.ndarray:
        """b_0..b_{count-1}；不足时按同一公式补齐"""
        if self.diff.count >= count:
            return self.diff.b[:count]
        return diff_coeffs(self.params, count).b


def _shifts(params: JacobiParams) -> tuple:
    return 0.5 * (params.alpha + 1.0), 0.5 * (params.beta + 1.0)


def _log_gamma_product(params: JacobiParams, xi: np.ndarray) -> np.ndarray:
    """ln[Γ(a + iξ/2) Γ(b - iξ/2)]，ξ >= 0"""
    a, b = _shifts(params)
    return log_gamma_complex_array(a + 0.5j * xi) + log_gamma_complex_array(b - 0.5j * xi)


def g_weight(rep: FourierRep, xi: ArrayLike) -> ArrayLike:
    """g_{α,β}(ξ)；在 |ξ| 上计算，ξ < 0 时取共轭，保证 g(-ξ) = conj g(ξ)"""
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    magnitude = np.abs(x)
    values = rep.normalisation * np.exp(_log_gamma_product(rep.params, magnitude))
    values = np.where(x < 0.0, np.conj(values), values)
    if np.ndim(xi) == 0:
        return complex(values[0])
    return values


def measure_density(rep: FourierRep, xi: ArrayLike) -> ArrayLike:
    """|g(ξ)|^2"""
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    values = rep.normalisation ** 2 * np.exp(2.0 * _log_gamma_product(rep.params, np.abs(x)).real)
    if np.ndim(xi) == 0:
        return float(values[0])
    return values


def normalisation_constant(params: JacobiParams, quad_limit: int = 200) -> float:
    """C_{α,β} > 0，使 ∫ |g|^2 dξ = 1（自适应积分）"""
    a, b = _shifts(params)
    log_peak = 2.0 * (special.gammaln(a) + special.gammaln(b))

    def integrand(xi: float) -> float:
        return math.exp(2.0 * _log_gamma_product(params, np.array([abs(xi)]))[0].real - log_peak)

    cutoff = 40.0 + 2.0 * max(0.0, params.alpha + params.beta)
    total = 0.0
    for lo, hi in ((-cutoff, 0.0), (0.0, cutoff)):
        result = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-13, limit=quad_limit, full_output=1)
        value, err = result[0], result[1]
        if not math.isfinite(value) or (len(result) > 3 and err > 1e-11 * abs(value)):
            reason = result[3] if len(result) > 3 else "non-finite integral"
            raise NumericalError(f"normalisation quadrature did not converge: {reason}")
        total += value
    return math.exp(-0.5 * (math.log(total) + log_peak))


def normalisation_constant_closed_form(params: JacobiParams) -> float:
    """Barnes 积分：C^2 = Γ(α+β+2) / (4π Γ(α+1) Γ(β+1) Γ((α+β)/2+1)^2)"""
    al, be = params.alpha, params.beta
    log_c2 = (
        special.gammaln(al + be + 2.0)
        - math.log(4.0 * math.pi)
        - special.gammaln(al + 1.0)
        - special.gammaln(be + 1.0)
        - 2.0 * special.gammaln(0.5 * (al + be) + 1.0)
    )
    return math.exp(0.5 * log_c2)


def carlitz_eval(rep: FourierRep, m: int, xi: ArrayLike) -> ArrayLike:
    """p_m(ξ)，前向递推，p_0 = 1，p_{-1} = 0"""
    if m < 0:
        raise DomainError(f"degree must be non-negative, got {m}")
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    b = rep.coupling(m + 1)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(m):
        prev, cur = cur, (x * cur - (b[k - 1] * prev if k > 0 else 0.0)) / b[k]
    if np.ndim(xi) == 0:
        return float(cur[0])
    return cur


def fourier_transform(
    e: Expansion, xi_points, rep: Optional[FourierRep] = None, xi_max: float = XI_MAX
) -> np.ndarray:
    """F[Σ c_m φ_m](ξ) = g(ξ) Σ i^m c_m p_m(ξ)，求和用 Clenshaw；|ξ| > xi_max 时警告"""
    if e.spec.mode != FULL:
        raise DomainError("fourier transform requires a full-range expansion")
    if rep is None:
        rep = FourierRep.create(e.spec.params, count=e.n)
    elif rep.params != e.spec.params:
        raise DomainError("Fourier representation and expansion use different parameters")
    x = np.atleast_1d(np.asarray(xi_points, dtype=float)).ravel()
    if x.size and np.max(np.abs(x)) > xi_max:
        logger.warning(f"|ξ| 超过 {xi_max}，前向 Carlitz 递推未经验证")
    n = e.n
    d = np.array([1.0, 1j, -1.0, -1j])[np.arange(n) % 4] * e.coeffs
    b = rep.coupling(n)
    y1 = np.zeros(x.size, dtype=complex)
    y2 = np.zeros(x.size, dtype=complex)
    for k in range(n - 1, -1, -1):
        alpha_k = x / b[k]
        beta_k1 = -b[k] / b[k + 1] if k < n - 2 else 0.0
        y1, y2 = d[k] + alpha_k * y1 + beta_k1 * y2, y1
    return g_weight(rep, x) * y1


def carlitz_density_closed_form(rep: FourierRep, xi: ArrayLike) -> ArrayLike:
    """β = -α 时 |g|^2 = 2π^2 C^2 / (cosh πξ + cos πα)"""
    if rep.params.beta != -rep.params.alpha:
        raise DomainError("Carlitz closed form requires beta = -alpha")
    x = np.asarray(xi, dtype=float)
    return 2.0 * math.pi ** 2 * rep.normalisation ** 2 / (np.cosh(math.pi * x) + math.cos(math.pi * rep.params.alpha))


def integer_weight_closed_form(n: int, xi: ArrayLike) -> ArrayLike:
    """α = β = n（非负整数）时的 g/C

    n = 2k:   π ∏_{j<k} ((j+1/2)^2 + ξ^2/4) / cosh(πξ/2)
    n = 2k+1: (π/2) ξ ∏_{j=1..k} (j^2 + ξ^2/4) / sinh(πξ/2)
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"integer closed form needs a non-negative integer, got {n!r}")
    n = int(n)
    x = np.asarray(xi, dtype=float)
    y2 = 0.25 * x * x
    k = n // 2
    z = 0.5 * math.pi * x
    with np.errstate(over="ignore"):
        if n % 2 == 0:
            product = np.ones_like(x)
            for j in range(k):
                product = product * ((j + 0.5) ** 2 + y2)
            return math.pi * product / np.cosh(z)
        product = np.ones_like(x)
        for j in range(1, k + 1):
            product = product * (j * j + y2)
        safe = np.where(z == 0.0, 1.0, z)
        ratio = np.where(z == 0.0, 1.0, safe / np.sinh(safe))
        return product * ratio


def ramanujan_transform(a: float, xi: ArrayLike) -> ArrayLike:
    """F[sech^{2a}](ξ) = (2π)^{-1/2} sqrt(π) / (Γ(a) Γ(a+1/2)) · |Γ(a + iξ/2)|^2，a > 0"""
    if not a > 0.0:
        raise DomainError(f"Ramanujan transform needs a > 0, got {a!r}")
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    log_mod = 2.0 * log_gamma_complex_array(a + 0.5j * np.abs(x)).real
    log_scale = 0.5 * math.log(math.pi) - special.gammaln(a) - special.gammaln(a + 0.5)
    values = np.exp(log_mod + log_scale) / math.sqrt(2.0 * math.pi)
    if np.ndim(xi) == 0:
        return float(values[0])
    return values


def direct_fourier_transform(f: Callable[[float], float], xi_points, epsabs: float = 1e-12) -> np.ndarray:
    """直接振荡积分：偶部用余弦权、奇部用正弦权（QUADPACK 的 QAWF）"""
    x = np.atleast_1d(np.asarray(xi_points, dtype=float)).ravel()
    out = np.empty(x.size, dtype=complex)

    def even(s):
        return f(s) + f(-s)

    def odd(s):
        return f(s) - f(-s)

    for idx, xi in enumerate(x):
        w = abs(xi)
        if w == 0.0:
            cos_part, _ = integrate.quad(even, 0.0, np.inf, epsabs=epsabs, limit=400)
            sin_part = 0.0
        else:
            cos_part, _ = integrate.quad(even, 0.0, np.inf, weight="cos", wvar=w, epsabs=epsabs, limlst=200)
            sin_part, _ = integrate.quad(odd, 0.0, np.inf, weight="sin", wvar=w, epsabs=epsabs, limlst=200)
            sin_part = math.copysign(1.0, xi) * sin_part
        out[idx] = (cos_part - 1j * sin_part) / math.sqrt(2.0 * math.pi)
    return out
