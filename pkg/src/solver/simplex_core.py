#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
精確兩階段單純形法 - 所有歸約與憑證共用的求解引擎

一般形式 LP：目標 max/min cᵀx，每列約束的方向 (<=, =, >=)，
每個變數非負或自由。所有結果 (最優解、對偶解、不可行憑證、無界射線)
在回傳前都以精確算術重新驗證。

對偶符號慣例 (回傳的 y 一律對應原始列)：
    maximize: (Aᵀy)_j >= c_j (自由變數為 =)，<= 列 y>=0，>= 列 y<=0，= 列自由
    minimize: (Aᵀy)_j <= c_j (自由變數為 =)，<= 列 y<=0，>= 列 y>=0，= 列自由
    兩者皆有 bᵀy = 最優值。
不可行憑證 y：<= 列 y>=0，>= 列 y<=0，(yᵀA)_j >= 0 (自由變數為 = 0)，yᵀb < 0。
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np

from src.algebra import exact_linalg as la
from src.algebra.exact_linalg import Mat, Vec, ZERO, ONE
from src.utils.errors import CertificateError, DimensionError, ExactLPError, NotSkewSymmetric
from src.utils.verification import VerificationReport

logger = logging.getLogger(__name__)

LE, EQ, GE = '<=', '=', '>='
OPTIMAL, INFEASIBLE, UNBOUNDED = 'Optimal', 'Infeasible', 'Unbounded'


@dataclass
class GeneralLP:
    """一般形式線性規劃"""
    c: Vec
    A: Mat
    senses: List[str]
    b: Vec
    free: Optional[List[bool]] = None   # 預設全部非負
    maximize: bool = True

    def __post_init__(self):
        m, n = self.A.shape
        if len(self.c) != n:
            raise DimensionError(f"c 維度 {len(self.c)}，A 有 {n} 行")
        if len(self.b) != m or len(self.senses) != m:
            raise DimensionError(f"A 有 {m} 列，b 維度 {len(self.b)}，方向數 {len(self.senses)}")
        bad = [s for s in self.senses if s not in (LE, EQ, GE)]
        if bad:
            raise ExactLPError(f"未知的約束方向: {bad}")
        if self.free is None:
            self.free = [False] * n
        elif len(self.free) != n:
            raise DimensionError(f"free 長度 {len(self.free)}，變數數 {n}")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.A.shape


@dataclass
class BasicSolution:
    """基本解：基底行索引與解向量"""
    basis: Tuple[int, ...]
    x: Vec


@dataclass
class SimplexOutcome:
    """
    單純形法結果

    status: 'Optimal' | 'Infeasible' | 'Unbounded'
    """
    status: str
    x: Optional[Vec] = None             # Optimal: 原始最優解
    y: Optional[Vec] = None             # Optimal: 對偶解
    value: Optional[Fraction] = None    # Optimal: 最優值
    farkas: Optional[Vec] = None        # Infeasible: 列組合憑證
    point: Optional[Vec] = None         # Unbounded: 可行點
    ray: Optional[Vec] = None           # Unbounded: 改善射線
    basic: Optional[BasicSolution] = None

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


class _Canonical:
    """標準形 Âx̂ = b̂, x̂ >= 0, b̂ >= 0 以及回推原變數的對照"""

    def __init__(self, lp: GeneralLP):
        m, n = lp.A.shape
        self.m = m
        self.n = n

        # 結構行: (原變數, 符號)，自由變數拆成 x⁺ - x⁻
        self.struct: List[Tuple[int, int]] = []
        for j in range(n):
            self.struct.append((j, 1))
            if lp.free[j]:
                self.struct.append((j, -1))

        sigma = [-1 if s == GE else 1 for s in lp.senses]
        slack_rows = [i for i in range(m) if lp.senses[i] != EQ]
        n_struct = len(self.struct)
        self.N = n_struct + len(slack_rows)
        self.slack_col = {i: n_struct + k for k, i in enumerate(slack_rows)}

        A_hat = la.zeros_mat(m, self.N)
        b_hat = la.zeros(m)
        self.mult: List[int] = []
        for i in range(m):
            for k, (j, sign) in enumerate(self.struct):
                A_hat[i, k] = sigma[i] * sign * lp.A[i, j]
            if i in self.slack_col:
                A_hat[i, self.slack_col[i]] = ONE
            b_hat[i] = sigma[i] * lp.b[i]
            tau = 1
            if b_hat[i] < 0:
                tau = -1
                A_hat[i, :] = -A_hat[i, :]
                b_hat[i] = -b_hat[i]
            self.mult.append(sigma[i] * tau)
        self.A_hat = A_hat
        self.b_hat = b_hat

        cc = lp.c if lp.maximize else la.neg(lp.c)
        self.c_hat = la.zeros(self.N)
        for k, (j, sign) in enumerate(self.struct):
            self.c_hat[k] = sign * cc[j]

    def to_original(self, x_hat: Vec) -> Vec:
        x = la.zeros(self.n)
        for k, (j, sign) in enumerate(self.struct):
            x[j] += sign * x_hat[k]
        return x

    def dual_to_original(self, y_hat: Vec) -> Vec:
        return la.vec(y_hat[i] * self.mult[i] for i in range(self.m))


def _pivot(T: np.ndarray, basis: List[int], r: int, col: int) -> None:
    p = T[r, col]
    if p != 1:
        T[r, :] = T[r, :] / p
    for i in range(T.shape[0]):
        if i != r and T[i, col] != 0:
            f = T[i, col]
            T[i, :] = T[i, :] - f * T[r, :]
    basis[r] = col


def _reduced_cost(T: np.ndarray, basis: List[int], cost: Vec, j: int) -> Fraction:
    return cost[j] - sum((cost[basis[i]] * T[i, j] for i in range(T.shape[0])), ZERO)


def _optimize(T: np.ndarray, basis: List[int], cost: Vec, n_enter: int) -> Tuple[Optional[int], int]:
    """
    Bland 法則最大化 costᵀx̂

    入基：最小索引且縮減成本 > 0 的行；出基：最小比值，平手取基變數索引最小者。

    Returns:
        (無界方向的入基行或 None, 樞軸次數)
    """
    rhs = T.shape[1] - 1
    count = 0
    while True:
        in_basis = set(basis)
        enter = None
        for j in range(n_enter):
            if j not in in_basis and _reduced_cost(T, basis, cost, j) > 0:
                enter = j
                break
        if enter is None:
            return None, count

        rows = [i for i in range(T.shape[0]) if T[i, enter] > 0]
        if not rows:
            return enter, count
        leave = min(rows, key=lambda i: (T[i, rhs] / T[i, enter], basis[i]))
        logger.debug(f"樞軸: 入基 {enter}，出基 {basis[leave]} (列 {leave})")
        _pivot(T, basis, leave, enter)
        count += 1


def _basic_values(T: np.ndarray, basis: List[int], width: int) -> Vec:
    x = la.zeros(width)
    rhs = T.shape[1] - 1
    for i, col in enumerate(basis):
        if col < width:
            x[col] = T[i, rhs]
    return x


def _dual_from_tableau(T: np.ndarray, basis: List[int], cost: Vec, art_start: int) -> Vec:
    # 人工變數行即 B⁻¹
    m = T.shape[0]
    return la.vec(
        sum((cost[basis[i]] * T[i, art_start + k] for i in range(m)), ZERO)
        for k in range(m)
    )


def simplex_solve(lp: GeneralLP) -> SimplexOutcome:
    """
    精確兩階段單純形法

    第一階段每列加一個人工變數；無法移出基底的人工變數以 0 值留在基底中
    (對應冗餘列)，第二階段不允許人工變數入基。
    """
    canon = _Canonical(lp)
    m, N = canon.m, canon.N
    width = N + m + 1

    T = np.empty((m, width), dtype=object)
    T.fill(ZERO)
    for i in range(m):
        T[i, :N] = canon.A_hat[i, :]
        T[i, N + i] = ONE
        T[i, width - 1] = canon.b_hat[i]
    basis = [N + i for i in range(m)]

    # 第一階段：最大化 -Σ 人工變數
    cost1 = la.vec([ZERO] * N + [-ONE] * m)
    unbounded_col, pivots = _optimize(T, basis, cost1, N)
    if unbounded_col is not None:
        raise CertificateError("第一階段不可能無界")
    phase1_value = sum((cost1[basis[i]] * T[i, width - 1] for i in range(m)), ZERO)

    if phase1_value < 0:
        y_hat = _dual_from_tableau(T, basis, cost1, N)
        y = canon.dual_to_original(y_hat)
        check_infeasibility_certificate(lp, y).require('simplex 不可行憑證')
        logger.debug(f"LP 不可行 (第一階段值 {phase1_value}，{pivots} 次樞軸)")
        return SimplexOutcome(INFEASIBLE, farkas=y)

    # 將值為 0 的人工變數換出基底
    for r in range(m):
        if basis[r] >= N:
            col = next((j for j in range(N) if T[r, j] != 0), None)
            if col is not None:
                _pivot(T, basis, r, col)
                pivots += 1
            else:
                logger.debug(f"第 {r} 列冗餘，人工變數以 0 留在基底")

    # 第二階段
    cost2 = la.concat(canon.c_hat, la.zeros(m))
    unbounded_col, more = _optimize(T, basis, cost2, N)
    pivots += more
    x_hat = _basic_values(T, basis, N)

    if unbounded_col is not None:
        direction = la.zeros(N)
        direction[unbounded_col] = ONE
        for i, col in enumerate(basis):
            if col < N:
                direction[col] = -T[i, unbounded_col]
        point = canon.to_original(x_hat)
        ray = canon.to_original(direction)
        check_unbounded(lp, point, ray).require('simplex 無界射線')
        logger.debug(f"LP 無界 (入基行 {unbounded_col}，{pivots} 次樞軸)")
        return SimplexOutcome(UNBOUNDED, point=point, ray=ray)

    y_hat = _dual_from_tableau(T, basis, cost2, N)
    y = canon.dual_to_original(y_hat)
    if not lp.maximize:
        y = la.neg(y)
    x = canon.to_original(x_hat)
    value = la.dot(lp.c, x)
    check_optimal(lp, x, y, value).require('simplex 最優解')

    basic = BasicSolution(tuple(sorted(col for col in basis if col < N)), x_hat)
    logger.debug(f"LP 最優值 {value} ({pivots} 次樞軸)")
    return SimplexOutcome(OPTIMAL, x=x, y=y, value=value, basic=basic)


# ---------------------------------------------------------------------------
# 驗證
# ---------------------------------------------------------------------------

def _row_ok(sense: str, lhs: Fraction, rhs: Fraction) -> bool:
    if sense == LE:
        return lhs <= rhs
    if sense == GE:
        return lhs >= rhs
    return lhs == rhs


def primal_feasible(lp: GeneralLP, x: Vec) -> bool:
    if len(x) != lp.A.shape[1]:
        return False
    Ax = la.matvec(lp.A, x)
    rows_ok = all(_row_ok(s, Ax[i], lp.b[i]) for i, s in enumerate(lp.senses))
    vars_ok = all(lp.free[j] or x[j] >= 0 for j in range(len(x)))
    return rows_ok and vars_ok


def _dual_sign_ok(sense: str, yi: Fraction, maximize: bool) -> bool:
    if sense == EQ:
        return True
    want_nonneg = (sense == LE) == maximize
    return yi >= 0 if want_nonneg else yi <= 0


def check_optimal(lp: GeneralLP, x: Vec, y: Vec, value: Fraction):
    report = VerificationReport()
    report.add('primal_feasible', primal_feasible(lp, x))
    report.add('dual_signs', all(_dual_sign_ok(s, y[i], lp.maximize) for i, s in enumerate(lp.senses)))
    yA = la.vecmat(y, lp.A)
    dual_cols = []
    for j in range(len(lp.c)):
        if lp.free[j]:
            dual_cols.append(yA[j] == lp.c[j])
        elif lp.maximize:
            dual_cols.append(yA[j] >= lp.c[j])
        else:
            dual_cols.append(yA[j] <= lp.c[j])
    report.add('dual_feasible', all(dual_cols))
    report.add('zero_gap', la.dot(lp.c, x) == value == la.dot(lp.b, y))
    return report


def check_infeasibility_certificate(lp: GeneralLP, y: Vec):
    """不可行憑證：y 的符號與列方向一致，(yᵀA)_j >= 0 (自由變數 = 0)，yᵀb < 0"""
    report = VerificationReport()
    signs = all(_dual_sign_ok(s, y[i], True) for i, s in enumerate(lp.senses))
    report.add('row_signs', signs)
    yA = la.vecmat(y, lp.A)
    report.add('combination', all(yA[j] == 0 if lp.free[j] else yA[j] >= 0 for j in range(len(yA))))
    report.add('negative_rhs', la.dot(y, lp.b) < 0)
    return report


def check_unbounded(lp: GeneralLP, point: Vec, ray: Vec):
    report = VerificationReport()
    report.add('point_feasible', primal_feasible(lp, point))
    Ad = la.matvec(lp.A, ray)
    report.add('ray_rows', all(_row_ok(s, Ad[i], ZERO) for i, s in enumerate(lp.senses)))
    report.add('ray_vars', all(lp.free[j] or ray[j] >= 0 for j in range(len(ray))))
    gain = la.dot(lp.c, ray)
    report.add('improving', gain > 0 if lp.maximize else gain < 0)
    return report


# ---------------------------------------------------------------------------
# 便利介面
# ---------------------------------------------------------------------------

def solve_feasibility(A_ub: Optional[Mat] = None, b_ub: Optional[Vec] = None,
                      A_eq: Optional[Mat] = None, b_eq: Optional[Vec] = None,
                      free: Optional[Sequence[bool]] = None,
                      n_vars: Optional[int] = None) -> Optional[Vec]:
    """
    求 A_ub x <= b_ub, A_eq x = b_eq 的一個可行點 (預設 x >= 0)

    Returns:
        可行點，不可行時回傳 None
    """
    lp = feasibility_lp(A_ub, b_ub, A_eq, b_eq, free, n_vars)
    outcome = simplex_solve(lp)
    return outcome.x if outcome.is_optimal else None


def feasibility_lp(A_ub: Optional[Mat] = None, b_ub: Optional[Vec] = None,
                   A_eq: Optional[Mat] = None, b_eq: Optional[Vec] = None,
                   free: Optional[Sequence[bool]] = None,
                   n_vars: Optional[int] = None) -> GeneralLP:
    """以零目標組成可行性 LP (<= 列在前，= 列在後)"""
    if n_vars is None:
        source = A_ub if A_ub is not None else A_eq
        if source is None:
            raise DimensionError("無法判斷變數個數")
        n_vars = source.shape[1]
    if A_ub is None:
        A_ub, b_ub = la.zeros_mat(0, n_vars), la.zeros(0)
    if A_eq is None:
        A_eq, b_eq = la.zeros_mat(0, n_vars), la.zeros(0)
    A = la.vstack(A_ub, A_eq)
    b = la.concat(b_ub, b_eq)
    senses = [LE] * A_ub.shape[0] + [EQ] * A_eq.shape[0]
    return GeneralLP(la.zeros(n_vars), A, senses, b,
                     free=list(free) if free is not None else None)


def is_basic(A: Mat, x: Vec) -> bool:
    """x 的支撐行是否線性獨立"""
    cols = [j for j in range(len(x)) if x[j] != 0]
    return la.rank(la.select(A, range(A.shape[0]), cols)) == len(cols)


def reduce_to_basic(A: Mat, b: Vec, x: Vec, c: Optional[Vec] = None) -> BasicSolution:
    """
    將 Ax=b, x>=0 的可行解縮減為基本可行解 (Carathéodory 式支撐縮減)

    每步取支撐行零空間中的非零 z，定向後令 α = min{x_j/z_j : z_j>0}，x ← x - αz。
    給定 c 時 cᵀx 不會增加。
    """
    m, n = A.shape
    if len(b) != m or len(x) != n:
        raise DimensionError(f"A 為 {m}x{n}，b 維度 {len(b)}，x 維度 {len(x)}")
    if c is not None and len(c) != n:
        raise DimensionError(f"c 維度 {len(c)}，變數數 {n}")
    if not (la.all_nonneg(x) and la.vec_equal(la.matvec(A, x), b)):
        raise ExactLPError("x 不是 Ax=b, x>=0 的可行解")

    x = la.vec(x)
    while True:
        S = [j for j in range(n) if x[j] > 0]
        basis = la.nullspace_basis(la.select(A, range(m), S))
        if not basis:
            break
        z = la.zeros(n)
        for k, j in enumerate(S):
            z[j] = basis[0][k]
        has_pos = any(e > 0 for e in z)
        if c is not None:
            cz = la.dot(c, z)
            if cz < 0 or (cz == 0 and not has_pos):
                z = la.neg(z)
        elif not has_pos:
            z = la.neg(z)
        P = [j for j in range(n) if z[j] > 0]
        if not P:
            raise ExactLPError("cᵀx 在可行集上無下界")
        alpha = min(x[j] / z[j] for j in P)
        x = la.sub(x, la.scale(z, alpha))
        logger.debug(f"支撐縮減: |S|={len(S)}，α={alpha}")
    return BasicSolution(tuple(j for j in range(n) if x[j] > 0), x)


def basic_min_w(C: Mat, d: Vec) -> Tuple[BasicSolution, Fraction]:
    """
    最小化 w，受限於 Cz - 𝟙w <= d, dᵀz - w <= 0, z >= 0, w >= 0

    Returns:
        ((z*, w*) 的基本可行解, w*)
    """
    k = C.shape[0]
    if C.shape != (k, k) or len(d) != k:
        raise DimensionError(f"C 為 {C.shape}，d 維度 {len(d)}")
    if not la.is_skew_symmetric(C):
        raise NotSkewSymmetric("C 必須滿足 C = -Cᵀ")

    A = la.vstack(la.hstack(C, la.column(la.neg(la.ones(k)))),
                  la.hstack(la.row(d), la.mat([[-1]])))
    rhs = la.concat(d, la.zeros(1))
    objective = la.concat(la.zeros(k), la.ones(1))
    lp = GeneralLP(objective, A, [LE] * (k + 1), rhs, maximize=False)
    outcome = simplex_solve(lp)
    if not outcome.is_optimal:
        raise CertificateError(f"(z, w) 系統必有最優解，卻得到 {outcome.status}")
    w_star = outcome.value
    zw = outcome.x
    if w_star < 0:
        raise CertificateError("w* 不可能為負")
    basis = tuple(j for j in range(k + 1) if zw[j] != 0)
    if not is_basic(lp_equality_matrix(A), la.concat(zw, la.sub(rhs, la.matvec(A, zw)))):
        raise CertificateError("(z*, w*) 不是基本解")
    logger.debug(f"basic_min_w: w*={w_star}")
    return BasicSolution(basis, zw), w_star


def lp_equality_matrix(A: Mat) -> Mat:
    """Ax <= b 加上鬆弛變數後的 [A I]"""
    return la.hstack(A, la.identity(A.shape[0]))
