"""Jacobi / Chebyshev 多项式求值与 Gauss-Jacobi 求积

三项递推约定：t·P_m = A_m P_{m-1} + B_m P_m + C_m P_{m+1}，P_0 = 1，P_1 = (t - B_0) / C_0。
正交归一多项式 q_m = P_m / sqrt(g_m) 满足对称递推，其系数矩阵即 Jacobi 矩阵：
对角 B_m，次对角 a_m = sqrt(A_{m+1} C_m)。
"""
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from loguru import logger
from scipy import linalg

from src.core.errors import DomainError, NumericalError
from src.core.special_fn import JacobiParams, jacobi_norm

ArrayLike = Union[float, np.ndarray]

# Chebyshev 各类对应的 (alpha, beta) 以及 y_1(t) 的系数：y_1 = p·t + q
CHEBYSHEV_PARAMS = {
    "T": JacobiParams(-0.5, -0.5),
    "U": JacobiParams(0.5, 0.5),
    "V": JacobiParams(0.5, -0.5),
    "W": JacobiParams(-0.5, 0.5),
}
_CHEBYSHEV_FIRST = {"T": (1.0, 0.0), "U": (2.0, 0.0), "V": (2.0, 1.0), "W": (2.0, -1.0)}
# sin θ 小于该阈值时改用 t = cos θ 上的递推，给出 θ ∈ {0, π} 处的解析极限
_ENDPOINT_SIN = 1e-8


@dataclass(frozen=True)
class Recurrence:
    """A_m, B_m, C_m，m = 0..n-1"""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Jacobi 求积规则：∫ h(t) (1-t)^alpha (1+t)^beta dt ≈ Σ w_k h(t_k)"""

    nodes: np.ndarray
    weights: np.ndarray
    params: JacobiParams

    @property
    def size(self) -> int:
        return len(self.nodes)

    def integrate(self, h: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.dot(self.weights, h(self.nodes)))


def jacobi_recurrence(params: JacobiParams, n: int) -> Recurrence:
    """前 n 个递推系数（m = 0 单独处理，避免 alpha+beta = -1 时的 0/0）"""
    if n < 1:
        raise DomainError(f"recurrence length must be at least 1, got {n}")
    a, b = params.alpha, params.beta
    m = np.arange(n, dtype=float)
    s = 2.0 * m + a + b
    A = np.zeros(n)
    B = np.empty(n)
    C = np.empty(n)
    B[0] = (b - a) / (a + b + 2.0)
    C[0] = 2.0 / (a + b + 2.0)
    if n > 1:
        mm, ss = m[1:], s[1:]
        A[1:] = 2.0 * (mm + a) * (mm + b) / (ss * (ss + 1.0))
        B[1:] = (b * b - a * a) / (ss * (ss + 2.0))
        C[1:] = 2.0 * (mm + 1.0) * (mm + a + b + 1.0) / ((ss + 1.0) * (ss + 2.0))
    return Recurrence(A=A, B=B, C=C)


def jacobi_matrix(params: JacobiParams, n: int) -> tuple:
    """对称 Jacobi 矩阵的 (对角, 次对角)，尺寸 n"""
    rec = jacobi_recurrence(params, n + 1)
    diag = rec.B[:n].copy()
    off = np.sqrt(rec.A[1:n] * rec.C[: n - 1])
    return diag, off


def jacobi_eval(params: JacobiParams, m: int, t: ArrayLike) -> ArrayLike:
    """P_m^{(alpha,beta)}(t)，前向递推"""
    if m < 0:
        raise DomainError(f"degree must be non-negative, got {m}")
    values = jacobi_eval_batch(params, m, np.atleast_1d(np.asarray(t, dtype=float)))[m]
    if np.ndim(t) == 0:
        return float(values[0])
    return values


def jacobi_eval_batch(params: JacobiParams, m_max: int, points) -> np.ndarray:
    """返回形状 (m_max+1, len(points)) 的矩阵，第 m 行为 P_m 在各点的值"""
    if m_max < 0:
        raise DomainError(f"degree must be non-negative, got {m_max}")
    t = np.asarray(points, dtype=float).ravel()
    rec = jacobi_recurrence(params, m_max + 1)
    out = np.empty((m_max + 1, t.size))
    out[0] = 1.0
    if m_max >= 1:
        out[1] = (t - rec.B[0]) / rec.C[0]
    for k in range(1, m_max):
        out[k + 1] = ((t - rec.B[k]) * out[k] - rec.A[k] * out[k - 1]) / rec.C[k]
    return out


def orthonormal_eval_batch(params: JacobiParams, m_max: int, points) -> np.ndarray:
    """q_m = P_m / sqrt(g_m)，形状 (m_max+1, len(points))；对称递推，alpha 大时不溢出"""
    if m_max < 0:
        raise DomainError(f"degree must be non-negative, got {m_max}")
    t = np.asarray(points, dtype=float).ravel()
    diag, off = jacobi_matrix(params, m_max + 1)
    out = np.empty((m_max + 1, t.size))
    out[0] = 1.0 / np.sqrt(jacobi_norm(params, 0))
    if m_max >= 1:
        out[1] = (t - diag[0]) * out[0] / off[0]
    for k in range(1, m_max):
        out[k + 1] = ((t - diag[k]) * out[k] - off[k - 1] * out[k - 1]) / off[k]
    return out


def chebyshev_eval(kind: str, m: int, theta: ArrayLike) -> ArrayLike:
    """第 kind 类 Chebyshev 多项式在 t = cos θ 处的值（三角闭式）

    T_m = cos mθ，U_m = sin(m+1)θ / sin θ，
    V_m = sin(m+1/2)θ / sin(θ/2)，W_m = cos(m+1/2)θ / cos(θ/2)。
    θ 靠近 0 或 π 时改用 t 上的递推 y_{m+1} = 2t·y_m - y_{m-1}。
    """
    if kind not in CHEBYSHEV_PARAMS:
        raise DomainError(f"unknown Chebyshev kind {kind!r}, expected one of T, U, V, W")
    if m < 0:
        raise DomainError(f"degree must be non-negative, got {m}")
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind == "T":
            values = np.cos(m * th)
        elif kind == "U":
            values = np.sin((m + 1) * th) / np.sin(th)
        elif kind == "V":
            values = np.sin((m + 0.5) * th) / np.sin(th / 2.0)
        else:
            values = np.cos((m + 0.5) * th) / np.cos(th / 2.0)
    if kind != "T":
        near = np.abs(np.sin(th)) < _ENDPOINT_SIN
        if np.any(near):
            values = values.copy()
            values[near] = _chebyshev_recurrence(kind, m, np.cos(th[near]))
    if np.ndim(theta) == 0:
        return float(values[0])
    return values


def _chebyshev_recurrence(kind: str, m: int, t: np.ndarray) -> np.ndarray:
    p, q = _CHEBYSHEV_FIRST[kind]
    prev = np.ones_like(t)
    if m == 0:
        return prev
    cur = p * t + q
    for _ in range(1, m):
        prev, cur = cur, 2.0 * t * cur - prev
    return cur


def gauss_jacobi(params: JacobiParams, n: int) -> QuadratureRule:
    """n 点 Gauss-Jacobi 规则（Golub-Welsch：对称三对角特征值问题）"""
    if n < 1:
        raise DomainError(f"quadrature size must be at least 1, got {n}")
    diag, off = jacobi_matrix(params, n)
    mass = jacobi_norm(params, 0)
    if n == 1:
        return QuadratureRule(nodes=diag.copy(), weights=np.array([mass]), params=params)
    try:
        nodes, vectors = linalg.eigh_tridiagonal(diag, off)
    except linalg.LinAlgError as e:
        raise NumericalError(f"tridiagonal eigensolver failed for n = {n}: {e}") from e
    weights = mass * vectors[0, :] ** 2
    if not np.all(np.isfinite(nodes)) or not np.all(np.isfinite(weights)):
        raise NumericalError(f"tridiagonal eigensolver returned non-finite values for n = {n}")
    logger.debug(f"Gauss-Jacobi 求积: alpha={params.alpha}, beta={params.beta}, n={n}")
    return QuadratureRule(nodes=nodes, weights=weights, params=params)
