"""
异常定义

所有模块抛出的异常都继承自 GaussMixError，main.py 根据类型映射退出码。
"""


class GaussMixError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(GaussMixError, ValueError):
    """参数非法（r < 0、N < 0、τ 不在 [0,1] 等），属于调用方错误。"""


class ScenarioError(InvalidParameter):
    """场景 JSON 格式错误或含未知字段。"""


class NonPhysicalState(GaussMixError, ValueError):
    """协方差矩阵违反不确定关系。"""


class DimensionMismatch(GaussMixError, ValueError):
    """矩阵维度不是 2×2 或 4×4。"""


class DomainError(GaussMixError, ValueError):
    """阈值公式在 τ ∈ {0,1} 处无定义（没有相互作用）。"""


class NumericError(GaussMixError, ArithmeticError):
    """判别式超出容差变为负数等数值异常，通常意味着输入被破坏。"""


class SingularMatrix(NumericError):
    pass


class VerificationError(GaussMixError, AssertionError):
    """验证器自检失败。"""


class OutputError(GaussMixError, OSError):
    """输出文件无法写入。"""
