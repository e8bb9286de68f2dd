#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
精確有理數線性代數 - 核心運算模組

有理數使用 fractions.Fraction，向量/矩陣為 dtype=object 的 numpy 陣列。
提供秩、零空間基底，以及線性方程組的擇一定理 (Ax=b 有解，或 yᵀA=0ᵀ 且 yᵀb≠0)。
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple
import numbers
import logging

import numpy as np

from src.utils.errors import CertificateError, DimensionError, ExactLPError

logger = logging.getLogger(__name__)

Rat = Fraction
Vec = np.ndarray
Mat = np.ndarray

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# 建構與轉換
# ---------------------------------------------------------------------------

def to_rat(value: Any) -> Fraction:
    """轉為 Fraction；拒絕浮點數"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ExactLPError(f"不接受布林值: {value!r}")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ExactLPError(f"無法解析有理數: {value!r}") from e
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    raise ExactLPError(f"只接受精確有理數，收到 {type(value).__name__}: {value!r}")


def vec(entries: Iterable[Any]) -> Vec:
    """建立有理數向量"""
    items = [to_rat(e) for e in entries]
    out = np.empty(len(items), dtype=object)
    for i, e in enumerate(items):
        out[i] = e
    return out


def mat(rows: Any, n_cols: Optional[int] = None) -> Mat:
    """
    建立有理數矩陣

    Args:
        rows: 二維序列或二維陣列
        n_cols: 列數為 0 時的行數 (預設 0)
    """
    if isinstance(rows, np.ndarray):
        if rows.ndim != 2:
            raise DimensionError(f"矩陣必須是二維，收到 ndim={rows.ndim}")
        out = np.empty(rows.shape, dtype=object)
        for (i, j), e in np.ndenumerate(rows):
            out[i, j] = to_rat(e)
        return out

    rows = [list(r) for r in rows]
    if not rows:
        return np.empty((0, n_cols or 0), dtype=object)
    width = len(rows[0])
    if n_cols is not None and n_cols != width:
        raise DimensionError(f"行數 {width} 與指定的 {n_cols} 不符")
    out = np.empty((len(rows), width), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != width:
            raise DimensionError(f"第 {i} 列長度 {len(r)}，預期 {width}")
        for j, e in enumerate(r):
            out[i, j] = to_rat(e)
    return out


def zeros(n: int) -> Vec:
    return vec([ZERO] * n)


def zeros_mat(m: int, n: int) -> Mat:
    out = np.empty((m, n), dtype=object)
    out.fill(ZERO)
    return out


def ones(n: int) -> Vec:
    return vec([ONE] * n)


def unit(n: int, i: int) -> Vec:
    out = zeros(n)
    out[i] = ONE
    return out


def identity(n: int) -> Mat:
    out = zeros_mat(n, n)
    for i in range(n):
        out[i, i] = ONE
    return out


def column(v: Vec) -> Mat:
    return mat(np.asarray(v, dtype=object).reshape(len(v), 1))


def row(v: Vec) -> Mat:
    return mat(np.asarray(v, dtype=object).reshape(1, len(v)))


def hstack(*blocks: Mat) -> Mat:
    heights = {b.shape[0] for b in blocks}
    if len(heights) != 1:
        raise DimensionError(f"水平拼接高度不一致: {sorted(heights)}")
    return mat(np.hstack(blocks))


def vstack(*blocks: Mat) -> Mat:
    widths = {b.shape[1] for b in blocks}
    if len(widths) != 1:
        raise DimensionError(f"垂直拼接寬度不一致: {sorted(widths)}")
    return mat(np.vstack(blocks))


def concat(*parts: Vec) -> Vec:
    items: List[Fraction] = []
    for p in parts:
        items.extend(p)
    return vec(items)


def select(A: Mat, rows: Sequence[int], cols: Sequence[int]) -> Mat:
    """取子矩陣 A[rows, cols] (允許空索引)"""
    r = np.asarray(list(rows), dtype=int)
    c = np.asarray(list(cols), dtype=int)
    return mat(A[r][:, c])


def transpose(A: Mat) -> Mat:
    return mat(A.T)


def rat_to_str(q: Fraction) -> str:
    """輸出 'p/q' 或整數字串"""
    q = to_rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vec_to_strs(v: Vec) -> List[str]:
    return [rat_to_str(e) for e in v]


# ---------------------------------------------------------------------------
# 基本運算 (明確處理空的內部維度)
# ---------------------------------------------------------------------------

def dot(u: Vec, v: Vec) -> Fraction:
    if len(u) != len(v):
        raise DimensionError(f"內積維度不符: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), ZERO)


def matvec(A: Mat, x: Vec) -> Vec:
    """A x"""
    m, n = A.shape
    if len(x) != n:
        raise DimensionError(f"A 為 {m}x{n}，x 維度 {len(x)}")
    return vec(sum((A[i, j] * x[j] for j in range(n)), ZERO) for i in range(m))


def vecmat(y: Vec, A: Mat) -> Vec:
    """yᵀ A"""
    m, n = A.shape
    if len(y) != m:
        raise DimensionError(f"A 為 {m}x{n}，y 維度 {len(y)}")
    return vec(sum((y[i] * A[i, j] for i in range(m)), ZERO) for j in range(n))


def matmul(A: Mat, B: Mat) -> Mat:
    m, k = A.shape
    k2, n = B.shape
    if k != k2:
        raise DimensionError(f"矩陣乘法維度不符: {A.shape} x {B.shape}")
    out = zeros_mat(m, n)
    for i in range(m):
        for j in range(n):
            out[i, j] = sum((A[i, t] * B[t, j] for t in range(k)), ZERO)
    return out


def scale(v: Vec, s: Any) -> Vec:
    s = to_rat(s)
    return vec(e * s for e in v)


def add(u: Vec, v: Vec) -> Vec:
    if len(u) != len(v):
        raise DimensionError(f"向量維度不符: {len(u)} vs {len(v)}")
    return vec(a + b for a, b in zip(u, v))


def sub(u: Vec, v: Vec) -> Vec:
    if len(u) != len(v):
        raise DimensionError(f"向量維度不符: {len(u)} vs {len(v)}")
    return vec(a - b for a, b in zip(u, v))


def neg(v: Vec) -> Vec:
    return vec(-e for e in v)


def total(v: Vec) -> Fraction:
    return sum(v, ZERO)


def is_zero_vec(v: Vec) -> bool:
    return all(e == 0 for e in v)


def all_nonneg(v: Vec) -> bool:
    return all(e >= 0 for e in v)


def all_pos(v: Vec) -> bool:
    return all(e > 0 for e in v)


def all_le(u: Vec, v: Vec) -> bool:
    return len(u) == len(v) and all(a <= b for a, b in zip(u, v))


def vec_equal(u: Vec, v: Vec) -> bool:
    return len(u) == len(v) and all(a == b for a, b in zip(u, v))


def mat_equal(A: Mat, B: Mat) -> bool:
    return A.shape == B.shape and all(a == b for a, b in zip(A.flat, B.flat))


def support(v: Vec) -> frozenset:
    """正分量的索引集合"""
    return frozenset(i for i, e in enumerate(v) if e > 0)


def is_skew_symmetric(M: Mat) -> bool:
    m, n = M.shape
    if m != n:
        return False
    return all(M[i, j] == -M[j, i] for i in range(n) for j in range(i, n))


def max_abs_entry(M: Mat) -> Fraction:
    return max((abs(e) for e in M.flat), default=ZERO)


# ---------------------------------------------------------------------------
# 高斯消去
# ---------------------------------------------------------------------------

def rref(M: Mat, pivot_cols: Optional[int] = None) -> Tuple[Mat, List[int]]:
    """
    簡化列梯形 (reduced row echelon form)

    主元取該行目前列以下第一個非零元素。

    Args:
        M: 輸入矩陣 (不修改)
        pivot_cols: 只在前 pivot_cols 行尋找主元 (預設全部)

    Returns:
        (R, pivots) - R 為簡化後矩陣，pivots 為主元所在行
    """
    R = mat(M)
    m, n = R.shape
    limit = n if pivot_cols is None else pivot_cols
    pivots: List[int] = []
    r = 0
    for col in range(limit):
        if r >= m:
            break
        p = next((i for i in range(r, m) if R[i, col] != 0), None)
        if p is None:
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        pivot = R[r, col]
        if pivot != 1:
            for j in range(n):
                R[r, j] = R[r, j] / pivot
        for i in range(m):
            if i != r and R[i, col] != 0:
                f = R[i, col]
                for j in range(n):
                    R[i, j] = R[i, j] - f * R[r, j]
        pivots.append(col)
        r += 1
    return R, pivots


def rank(M: Mat) -> int:
    """精確秩 (列秩 = 行秩)"""
    return len(rref(M)[1])


def nullspace_basis(M: Mat) -> List[Vec]:
    """
    零空間 {x : Mx = 0} 的基底

    每個自由變數給出一個基底向量 (自由變數取 1，其餘自由變數取 0)。
    """
    R, pivots = rref(M)
    n = M.shape[1]
    pivot_set = set(pivots)
    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = zeros(n)
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -R[i, f]
        basis.append(v)
    return basis


def independent_rows(M: Mat) -> List[int]:
    """依索引由小到大貪婪選出一組列空間基底的列索引"""
    return rref(transpose(M))[1]


def inverse(M: Mat) -> Optional[Mat]:
    """方陣的逆矩陣，奇異時回傳 None"""
    n, n2 = M.shape
    if n != n2:
        raise DimensionError(f"逆矩陣需要方陣，收到 {M.shape}")
    R, pivots = rref(hstack(M, identity(n)), pivot_cols=n)
    if len(pivots) < n:
        return None
    return select(R, range(n), range(n, 2 * n))


def solve_square(M: Mat, b: Vec) -> Optional[Vec]:
    """方陣系統 Mx=b 的唯一解，奇異時回傳 None"""
    n = M.shape[0]
    if M.shape != (n, n) or len(b) != n:
        raise DimensionError(f"方陣系統維度不符: {M.shape}, {len(b)}")
    R, pivots = rref(hstack(M, column(b)), pivot_cols=n)
    if len(pivots) < n:
        return None
    return vec(R[i, n] for i in range(n))


# ---------------------------------------------------------------------------
# 擇一定理
# ---------------------------------------------------------------------------

@dataclass
class Alternative:
    """
    擇一定理的憑證：恰好有一側 (left 或 right) 存在

    kind 標示是哪一個定理，data 保存驗證所需的輸入資料，
    讓憑證可以僅憑自身重新驗證。
    """
    kind: str
    left: Optional[Vec] = None
    right: Optional[Vec] = None
    data: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if (self.left is None) == (self.right is None):
            raise CertificateError(f"{self.kind}: 必須恰好有一側憑證")

    @property
    def tag(self) -> str:
        return 'Left' if self.left is not None else 'Right'

    @property
    def is_left(self) -> bool:
        return self.left is not None

    @property
    def payload(self) -> Vec:
        return self.left if self.left is not None else self.right


def solve_or_refute(A: Mat, b: Vec) -> Alternative:
    """
    Ax = b 有解 (Left x)，或存在 y 使 yᵀA = 0ᵀ 且 yᵀb ≠ 0 (Right y)

    對 [A | b | I] 做消去 (主元只取前 n+1 行)：若主元落在 b 行，
    該列的單位矩陣部分就是 y，且 yᵀb = 1。
    """
    m, n = A.shape
    if len(b) != m:
        raise DimensionError(f"A 為 {m}x{n}，b 維度 {len(b)}")

    R, pivots = rref(hstack(A, column(b), identity(m)), pivot_cols=n + 1)
    if n in pivots:
        r = pivots.index(n)
        y = vec(R[r, n + 1 + i] for i in range(m))
        if not (is_zero_vec(vecmat(y, A)) and dot(y, b) != 0):
            raise CertificateError("solve_or_refute: y 未滿足 yᵀA=0ᵀ, yᵀb≠0")
        logger.debug(f"線性系統無解，y={vec_to_strs(y)}")
        return Alternative('linear', right=y, data={'A': A, 'b': b})

    x = zeros(n)
    for i, p in enumerate(pivots):
        x[p] = R[i, n]
    if not vec_equal(matvec(A, x), b):
        raise CertificateError("solve_or_refute: x 未滿足 Ax=b")
    return Alternative('linear', left=x, data={'A': A, 'b': b})
