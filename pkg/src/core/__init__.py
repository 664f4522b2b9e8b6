"""数值核心：特殊函数、Jacobi 多项式、基函数、变换、算子与 Fourier 表示"""
from src.core.basis import BasisSpec, DiffOp, Expansion
from src.core.errors import DomainError, NumericalError, TanhSpecError
from src.core.special_fn import JacobiParams

__all__ = [
    "BasisSpec",
    "DiffOp",
    "DomainError",
    "Expansion",
    "JacobiParams",
    "NumericalError",
    "TanhSpecError",
]
