"""tanhspec 异常层级

库代码只负责抛出，命令行层（src/main.py）把异常映射为退出码：
DomainError -> 2，NumericalError -> 3。
异常消息使用英文单行，作为命令行输出的可解析原因。
"""
from typing import Optional


class TanhSpecError(Exception):
    """所有 tanhspec 异常的基类"""

    kind = "error"


class DomainError(TanhSpecError, ValueError):
    """参数或定义域错误（alpha <= -1、极点、半区间参数不等、尺寸不匹配等）"""

    kind = "domain"


class NonFiniteSampleError(DomainError):
    """采样值非有限：通常说明 f 衰减太慢，使 F = f / 权重 在 (-1, 1) 内无界"""

    def __init__(self, x: float, message: Optional[str] = None):
        self.x = float(x)
        super().__init__(message or f"non-finite sample at x = {self.x!r}")


class NumericalError(TanhSpecError, ArithmeticError):
    """数值失败：特征值求解不收敛、积分不收敛、归一化校验失败"""

    kind = "numerical"


class SingularOperatorError(NumericalError):
    """算子奇异或秩亏"""


class InputError(DomainError):
    """输入文件或命令行参数格式错误（空表、列名不符、采样点不递增等）"""

    kind = "input"


class UsageError(DomainError):
    """命令行用法错误"""

    kind = "usage"
