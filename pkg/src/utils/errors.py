#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
例外類別定義

使用者輸入錯誤一律繼承 ExactLPError (ValueError)；
憑證重新驗證失敗代表實作錯誤，以 CertificateError (AssertionError) 表示。
"""

from typing import Optional


class ExactLPError(ValueError):
    """所有輸入相關錯誤的基底類別"""


class DimensionError(ExactLPError):
    """矩陣/向量維度不一致"""


class ParseError(ExactLPError):
    """問題檔解析失敗"""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class CapExceeded(ExactLPError):
    """超過桌面規模上限"""

    def __init__(self, what: str, cap: int, actual: int):
        self.cap = cap
        self.actual = actual
        super().__init__(f"{what}: {actual} 超過上限 {cap}")


class FeasibleInput(ExactLPError):
    """要求不可行系統，但輸入是可行的"""


class InfeasibleSide(ExactLPError):
    """原問題或對偶問題不可行"""


class NotSkewSymmetric(ExactLPError):
    """矩陣不是反對稱矩陣"""


class NotOptimalStrategy(ExactLPError):
    """給定策略不是最優策略"""


class BoundTooSmall(ExactLPError):
    """M 小於緊界 1ᵀz* + 1"""


class IndexOutOfRange(ExactLPError):
    """索引超出範圍"""


class CertificateError(AssertionError):
    """憑證重新驗證失敗 (內部錯誤)"""
