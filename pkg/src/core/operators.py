"""系数空间算子：微分矩阵 D、D^2、Toeplitz+Hankel 乘法算子与一阶方程的带状 QR 求解

系数空间约定：(Dc)_k = b_{k-1} c_{k-1} - b_k c_{k+1}，即 u' 的展开系数。
乘子 a(x) = Σ a_m T~_m(tanh x)（T~_0 = 1/sqrt(2)，T~_m = T_m），
A_ij = ∫ φ_i a φ_j dx。
带状存储与 LAPACK 一致：ab[u + i - j, j] = A[i, j]。
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from loguru import logger
from scipy import linalg

from src.core.basis import FULL, BasisSpec, DiffOp, Expansion, diff_coeffs, diff_matrix
from src.core.errors import DomainError, SingularOperatorError
from src.core.jacobi import jacobi_matrix
from src.core.special_fn import JacobiParams

RANK_TOLERANCE = 1e-13
_CHEBYSHEV_T = JacobiParams(-0.5, -0.5)


@dataclass(frozen=True, eq=False)
class BandedMatrix:
    """rows×cols 带状矩阵，下带宽 lower_bw，上带宽 upper_bw"""

    rows: int
    cols: int
    lower_bw: int
    upper_bw: int
    ab: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DomainError(f"banded matrix needs positive dimensions, got {self.rows}x{self.cols}")
        expected = (self.lower_bw + self.upper_bw + 1, self.cols)
        if self.ab.shape != expected:
            raise DomainError(f"band storage must have shape {expected}, got {self.ab.shape}")

    @classmethod
    def from_dense(cls, dense: np.ndarray, lower_bw: int, upper_bw: int) -> "BandedMatrix":
        dense = np.asarray(dense, dtype=float)
        rows, cols = dense.shape
        ab = np.zeros((lower_bw + upper_bw + 1, cols))
        for offset in range(-upper_bw, lower_bw + 1):
            j = np.arange(max(0, -offset), min(cols, rows - offset))
            ab[upper_bw + offset, j] = dense[j + offset, j]
        return cls(rows, cols, lower_bw, upper_bw, ab)

    def diagonals(self):
        """逐条对角线产生 (offset, 列下标, 值)，offset = i - j"""
        for offset in range(-self.upper_bw, self.lower_bw + 1):
            j = np.arange(max(0, -offset), min(self.cols, self.rows - offset))
            yield offset, j, self.ab[self.upper_bw + offset, j]

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols))
        for offset, j, values in self.diagonals():
            out[j + offset, j] = values
        return out

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).ravel()
        if x.size != self.cols:
            raise DomainError(f"expected a vector of length {self.cols}, got {x.size}")
        y = np.zeros(self.rows)
        for offset, j, values in self.diagonals():
            y[j + offset] += values * x[j]
        return y

    @property
    def bandwidth(self) -> int:
        return max(self.lower_bw, self.upper_bw)


@dataclass(frozen=True, eq=False)
class MultOp:
    """乘法算子 u -> a·u 的系数矩阵

    window 保存 (size + bandwidth) 阶方阵，matrix 为其左上 size 阶块；
    T 基下 toeplitz / hankel 为生成序列：A_ij = s_i s_j (t_{|i-j|} + h_{i+j})。
    """

    a_coeffs: np.ndarray = field(repr=False)
    params: JacobiParams
    size: int
    bandwidth: int
    window: np.ndarray = field(repr=False)
    toeplitz: Optional[np.ndarray] = field(default=None, repr=False)
    hankel: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def matrix(self) -> np.ndarray:
        return self.window[: self.size, : self.size]

    def apply(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=float).ravel()
        if c.size != self.size:
            raise DomainError(f"expected {self.size} coefficients, got {c.size}")
        return self.matrix @ c

    def limits(self) -> tuple:
        """a(-∞), a(+∞)，即 Σ a_m T~_m(∓1)"""
        return multiplier_limits(self.a_coeffs)


def multiplier_limits(a_coeffs) -> tuple:
    a = np.asarray(a_coeffs, dtype=float)
    signs = np.where(np.arange(a.size) % 2 == 0, 1.0, -1.0)
    scaled = a.copy()
    scaled[0] /= math.sqrt(2.0)
    return float(np.dot(signs, scaled)), float(np.sum(scaled))


def diff_apply(d: DiffOp, c) -> np.ndarray:
    """u' 的系数：输入长度 N，输出长度 N，c_N 视为 0"""
    c = np.asarray(c, dtype=float).ravel()
    n = c.size
    b = _coupling(d, n - 1)
    out = np.zeros(n)
    if n > 1:
        out[1:] += b[: n - 1] * c[: n - 1]
        out[:-1] -= b[: n - 1] * c[1:]
    return out


def diff_squared_apply(d: DiffOp, c) -> np.ndarray:
    """无穷矩阵 D^2 在前 N 个系数上的作用（补两位零再截断）"""
    c = np.asarray(c, dtype=float).ravel()
    padded = np.concatenate([c, np.zeros(2)])
    return diff_apply(d, diff_apply(d, padded))[: c.size]


def diff_squared_matrix(d: DiffOp, n: int) -> np.ndarray:
    """D^2 的 N×N 截断（由 N+1 阶窗口相乘得到）"""
    big = diff_matrix(_extend(d, n), n + 1)
    return (big @ big)[:n, :n]


def _extend(d: DiffOp, count: int) -> DiffOp:
    if d.count >= count:
        return d
    return diff_coeffs(d.params, count)


def _coupling(d: DiffOp, count: int) -> np.ndarray:
    return _extend(d, max(count, 1)).b


def mult_op(a_coeffs, bandwidth: int, n: int, params: JacobiParams = _CHEBYSHEV_T) -> MultOp:
    """由 a_0..a_M 组装 N×N 乘法算子；M >= N 时报错"""
    a = np.asarray(a_coeffs, dtype=float).ravel()
    if a.size < 1:
        raise DomainError("multiplier needs at least one coefficient")
    if not np.all(np.isfinite(a)):
        raise DomainError("multiplier coefficients must be finite")
    if bandwidth < 0:
        raise DomainError(f"bandwidth must be non-negative, got {bandwidth}")
    if bandwidth >= n:
        raise DomainError(f"bandwidth M = {bandwidth} must be smaller than N = {n}")
    if a.size > bandwidth + 1:
        dropped = float(np.max(np.abs(a[bandwidth + 1 :])))
        if dropped > 0.0:
            logger.warning(f"乘子系数超出带宽 M={bandwidth}，截断部分最大幅值 {dropped:.3e}")
    a = np.concatenate([a, np.zeros(max(0, bandwidth + 1 - a.size))])[: bandwidth + 1]
    size = n + bandwidth

    if params == _CHEBYSHEV_T:
        window, t, h = _toeplitz_hankel(a, size)
    else:
        window, t, h = _jacobi_matrix_function(a, params, size), None, None
    logger.debug(f"乘法算子: N={n}, M={bandwidth}, alpha={params.alpha}, beta={params.beta}")
    window.setflags(write=False)
    return MultOp(a_coeffs=a, params=params, size=n, bandwidth=bandwidth, window=window, toeplitz=t, hankel=h)


def _toeplitz_hankel(a: np.ndarray, size: int) -> tuple:
    """A = S (T + H) S，S = diag(1/sqrt(2), 1, 1, ...)，t_k = h_k = (-1)^k a'_k / 2"""
    primed = np.zeros(2 * size)
    primed[: a.size] = a
    primed[0] *= math.sqrt(2.0)
    seq = 0.5 * np.where(np.arange(primed.size) % 2 == 0, 1.0, -1.0) * primed
    t_col = seq[:size]
    toeplitz = linalg.toeplitz(t_col)
    hankel = linalg.hankel(seq[:size], seq[size - 1 : 2 * size - 1])
    scale = np.ones(size)
    scale[0] = 1.0 / math.sqrt(2.0)
    window = scale[:, None] * (toeplitz + hankel) * scale[None, :]
    return window, seq[: a.size].copy(), seq[: a.size].copy()


def _jacobi_matrix_function(a: np.ndarray, params: JacobiParams, size: int) -> np.ndarray:
    """(-1)^{i+j} [Σ a_m T~_m(J)]_ij，J 为 Jacobi 矩阵；在 size+M 窗口上计算，保证 size 块精确"""
    big = size + a.size
    diag, off = jacobi_matrix(params, big)
    J = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    prev = np.eye(big)
    total = (a[0] / math.sqrt(2.0)) * prev
    if a.size > 1:
        cur = J.copy()
        total = total + a[1] * cur
        for m in range(2, a.size):
            prev, cur = cur, 2.0 * J @ cur - prev
            total = total + a[m] * cur
    signs = np.where(np.arange(size) % 2 == 0, 1.0, -1.0)
    return signs[:, None] * total[:size, :size] * signs[None, :]


def assemble_first_order(d: DiffOp, mult: MultOp, n: int) -> BandedMatrix:
    """L = D + A 的 (N + bw) × N 矩形截断，bw = max(1, M)"""
    if mult.size != n:
        raise DomainError(f"multiplication operator has size {mult.size}, expected {n}")
    if d.params != mult.params:
        raise DomainError("differentiation and multiplication operators use different bases")
    bw = max(1, mult.bandwidth)
    rows = n + bw
    b = _coupling(d, n)
    dense = _pad_rows(mult.window[:rows, :n], rows)
    j = np.arange(n)
    dense[j + 1, j] += b[:n]
    dense[j[1:] - 1, j[1:]] -= b[: n - 1]
    return BandedMatrix.from_dense(dense, bw, bw)


def _pad_rows(block: np.ndarray, rows: int) -> np.ndarray:
    out = np.zeros((rows, block.shape[1]))
    out[: block.shape[0]] = block
    return out


@dataclass(frozen=True, eq=False)
class QRSolve:
    """带状 QR 最小二乘解及诊断"""

    x: np.ndarray
    residual: float
    r_diagonal: np.ndarray


def banded_qr_solve(matrix: BandedMatrix, rhs, rank_tol: float = RANK_TOLERANCE) -> QRSolve:
    """带状 Householder QR 最小二乘：min ||A x - rhs||

    行存储工作区宽 u + 2l + 1：第 i 行保存列 i-l .. i+u+l（R 的上带宽增长到 u+l）。
    """
    m, n, l, u = matrix.rows, matrix.cols, matrix.lower_bw, matrix.upper_bw
    if m < n:
        raise DomainError(f"least-squares system must have at least as many rows as columns, got {m}x{n}")
    f = np.asarray(rhs, dtype=float).ravel()
    if f.size != m:
        raise DomainError(f"right-hand side must have length {m}, got {f.size}")
    f = f.copy()
    width = u + 2 * l + 1
    work = np.zeros((m, width))
    for offset, j, values in matrix.diagonals():
        work[j + offset, j - (j + offset) + l] = values

    for j in range(n):
        r = np.arange(j, min(m, j + l + 1))
        c = np.arange(j, min(n, j + u + l + 1))
        cols = c[None, :] - r[:, None] + l
        block = work[r[:, None], cols]
        x = block[:, 0].copy()
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            continue
        alpha = -math.copysign(norm_x, x[0])
        v = x
        v[0] -= alpha
        beta = float(v @ v)
        if beta == 0.0:
            continue
        block -= (2.0 / beta) * np.outer(v, v @ block)
        block[:, 0] = 0.0
        block[0, 0] = alpha
        work[r[:, None], cols] = block
        f[r] -= (2.0 / beta) * v * (v @ f[r])

    r_diag = work[np.arange(n), l].copy()
    scale = float(np.max(np.abs(r_diag))) if n else 0.0
    if scale == 0.0 or np.min(np.abs(r_diag)) < rank_tol * scale:
        worst = int(np.argmin(np.abs(r_diag)))
        raise SingularOperatorError(
            f"rank deficient: |R[{worst},{worst}]| = {abs(r_diag[worst]):.3e} "
            f"below {rank_tol:g} x max |R_jj| = {scale:.3e}"
        )

    upper = u + l
    ab = np.zeros((upper + 1, n))
    for k in range(upper + 1):
        i = np.arange(0, n - k)
        ab[upper - k, i + k] = work[i, l + k]
    x = linalg.solve_banded((0, upper), ab, f[:n])
    residual = float(np.linalg.norm(matrix.matvec(x) - np.asarray(rhs, dtype=float).ravel()))
    return QRSolve(x=x, residual=residual, r_diagonal=r_diag)


@dataclass(frozen=True, eq=False)
class FirstOrderSolution:
    """u' + a u = f 的数值解"""

    expansion: Expansion
    residual: float
    tail: float


def solve_first_order(
    d: DiffOp, mult: MultOp, rhs: Expansion, n: int, rank_tol: float = RANK_TOLERANCE
) -> FirstOrderSolution:
    """矩形带状截断上的最小二乘解；a(+∞) 或 a(-∞) 为零时方程在 L2 中不适定"""
    if rhs.spec.mode != FULL:
        raise DomainError("first-order solve requires a full-range right-hand side")
    if rhs.spec.params != mult.params:
        raise DomainError("right-hand side and operator use different bases")
    left, right = mult.limits()
    scale = max(1.0, float(np.max(np.abs(mult.a_coeffs))))
    if abs(left) <= rank_tol * scale or abs(right) <= rank_tol * scale:
        raise SingularOperatorError(
            f"operator is not invertible on L2: a(-inf) = {left:.3e}, a(+inf) = {right:.3e}"
        )
    if left * right < 0.0:
        logger.warning(f"乘子在两端异号: a(-∞)={left:.3e}, a(+∞)={right:.3e}")

    L = assemble_first_order(d, mult, n)
    f = np.zeros(L.rows)
    k = min(L.rows, rhs.n)
    f[:k] = rhs.coeffs[:k]
    if rhs.n > n and np.max(np.abs(rhs.coeffs[n:])) > 1e-12:
        logger.warning(f"右端项在 m >= N={n} 处仍有系数未被保留")
    result = banded_qr_solve(L, f, rank_tol)
    logger.info(f"一阶方程求解完成: N={n}, 带宽={L.bandwidth}, 残差={result.residual:.3e}")
    solution = Expansion(spec=BasisSpec(mult.params), coeffs=result.x)
    return FirstOrderSolution(expansion=solution, residual=result.residual, tail=solution.tail)
