#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
擇一定理的構造性憑證

Farkas (三種形式)、Gordan、Ville、Stiemke、Tucker 引理與定理 (兩種演算法)、
反對稱 Tucker、嚴格互補最優解，以及最優解配對的驗證。
所有憑證回傳前都以精確算術重新驗證，構造錯誤會以 CertificateError 浮現。
"""

from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Optional, Tuple
import logging

from config.settings import REPORT_CONFIG
from src.algebra import exact_linalg as la
from src.algebra.exact_linalg import Alternative, Mat, Vec, ONE
from src.game.game_solver import ZeroSumGame, solve_game
from src.reduction.reductions import (
    IneqLP, build_dantzig, check_skew_system, solve_lp_via_bm,
)
from src.solver.simplex_core import GeneralLP, LE, simplex_solve, solve_feasibility
from src.utils.errors import (
    CertificateError, DimensionError, ExactLPError, IndexOutOfRange, InfeasibleSide,
    NotSkewSymmetric,
)
from src.utils.verification import VerificationReport

logger = logging.getLogger(__name__)

FARKAS_VARIANTS = ('eq', 'ineq_nonneg', 'ineq_free')
GORDAN_METHODS = ('via_ville', 'via_stiemke')
TUCKER_METHODS = ('summation', 'elimination')
TUCKER_VARIANTS = ('eq', 'ineq', 'skew')


@dataclass
class TuckerLemmaWitness:
    """Tucker 引理的 (y, x)；skew 形式另有 z = x + y"""
    y: Vec
    x: Vec
    z: Optional[Vec] = None


@dataclass
class TuckerPartition:
    """
    Tucker 分割

    S 為 x 的支撐；yᵀA 在 S 上為 0，在 S 外為正。
    """
    S: FrozenSet[int]
    x: Vec
    y: Vec


def _check_shape(A: Mat, b: Vec) -> None:
    if len(b) != A.shape[0]:
        raise DimensionError(f"A 為 {A.shape[0]}x{A.shape[1]}，b 維度 {len(b)}")


# ---------------------------------------------------------------------------
# 驗證
# ---------------------------------------------------------------------------

def _verify_linear(alt: Alternative, report: VerificationReport) -> None:
    A, b = alt.data['A'], alt.data['b']
    if alt.is_left:
        report.add('Ax=b', la.vec_equal(la.matvec(A, alt.left), b))
    else:
        y = alt.right
        report.add('yA=0', la.is_zero_vec(la.vecmat(y, A)))
        report.add('yb!=0', la.dot(y, b) != 0)


def _verify_farkas_eq(alt: Alternative, report: VerificationReport) -> None:
    A, b = alt.data['A'], alt.data['b']
    if alt.is_left:
        x = alt.left
        report.add('x>=0', la.all_nonneg(x))
        report.add('Ax=b', la.vec_equal(la.matvec(A, x), b))
    else:
        y = alt.right
        report.add('yA>=0', la.all_nonneg(la.vecmat(y, A)))
        report.add('yb<0', la.dot(y, b) < 0)


def _verify_farkas_ineq_nonneg(alt: Alternative, report: VerificationReport) -> None:
    A, b = alt.data['A'], alt.data['b']
    if alt.is_left:
        x = alt.left
        report.add('x>=0', la.all_nonneg(x))
        report.add('Ax<=b', la.all_le(la.matvec(A, x), b))
    else:
        y = alt.right
        report.add('y>=0', la.all_nonneg(y))
        report.add('yA>=0', la.all_nonneg(la.vecmat(y, A)))
        report.add('yb<0', la.dot(y, b) < 0)


def _verify_farkas_ineq_free(alt: Alternative, report: VerificationReport) -> None:
    A, b = alt.data['A'], alt.data['b']
    if alt.is_left:
        report.add('Ax<=b', la.all_le(la.matvec(A, alt.left), b))
    else:
        y = alt.right
        report.add('y>=0', la.all_nonneg(y))
        report.add('yA=0', la.is_zero_vec(la.vecmat(y, A)))
        report.add('yb<0', la.dot(y, b) < 0)


def _verify_gordan(alt: Alternative, report: VerificationReport) -> None:
    A = alt.data['A']
    if alt.is_left:
        x = alt.left
        report.add('x>=0', la.all_nonneg(x))
        report.add('x!=0', not la.is_zero_vec(x))
        report.add('Ax=0', la.is_zero_vec(la.matvec(A, x)))
    else:
        report.add('yA>0', la.all_pos(la.vecmat(alt.right, A)))


def _verify_ville(alt: Alternative, report: VerificationReport) -> None:
    A = alt.data['A']
    if alt.is_left:
        x = alt.left
        report.add('x>=0', la.all_nonneg(x))
        report.add('x!=0', not la.is_zero_vec(x))
        report.add('Ax<=0', all(e <= 0 for e in la.matvec(A, x)))
    else:
        y = alt.right
        report.add('y>=0', la.all_nonneg(y))
        report.add('yA>0', la.all_pos(la.vecmat(y, A)))


def _verify_stiemke(alt: Alternative, report: VerificationReport) -> None:
    A = alt.data['A']
    if alt.is_left:
        yA = la.vecmat(alt.left, A)
        report.add('yA>=0', la.all_nonneg(yA))
        report.add('yA!=0', not la.is_zero_vec(yA))
    else:
        x = alt.right
        report.add('x>0', la.all_pos(x))
        report.add('Ax=0', la.is_zero_vec(la.matvec(A, x)))


_VERIFIERS: Dict[str, Callable[[Alternative, VerificationReport], None]] = {
    'linear': _verify_linear,
    'farkas_eq': _verify_farkas_eq,
    'farkas_ineq_nonneg': _verify_farkas_ineq_nonneg,
    'farkas_ineq_free': _verify_farkas_ineq_free,
    'gordan': _verify_gordan,
    'ville': _verify_ville,
    'stiemke': _verify_stiemke,
}


def verify_alternative(alt: Alternative) -> VerificationReport:
    """僅憑憑證本身 (含其輸入資料) 重新驗證定義恆等式"""
    if alt.kind == 'skew_system':
        return check_skew_system(alt)
    verifier = _VERIFIERS.get(alt.kind)
    if verifier is None:
        raise ExactLPError(f"未知的憑證種類: {alt.kind}")
    report = VerificationReport()
    verifier(alt, report)
    return report


def _certified(alt: Alternative) -> Alternative:
    verify_alternative(alt).require(f"{alt.kind} {alt.tag}")
    return alt


# ---------------------------------------------------------------------------
# Farkas
# ---------------------------------------------------------------------------

def _farkas_ineq_nonneg(A: Mat, b: Vec) -> Tuple[Optional[Vec], Optional[Vec]]:
    """
    maximize -t s.t. Ax - 𝟙t <= b, x >= 0, t >= 0

    最優值 0 時 x 即為解；否則對偶解 y >= 0 滿足 yᵀA >= 0ᵀ, yᵀb = -t* < 0。
    """
    m, n = A.shape
    lhs = la.hstack(A, la.column(la.neg(la.ones(m))))
    objective = la.concat(la.zeros(n), la.vec([-1]))
    outcome = simplex_solve(GeneralLP(objective, lhs, [LE] * m, b))
    if not outcome.is_optimal:
        raise CertificateError(f"Farkas 輔助 LP 必有最優解，卻得到 {outcome.status}")
    if outcome.value == 0:
        return la.vec(outcome.x[:n]), None
    return None, outcome.y


def farkas(A: Mat, b: Vec, variant: str = 'ineq_nonneg') -> Alternative:
    """
    Farkas 引理

    eq:          Ax = b, x >= 0          或 yᵀA >= 0ᵀ, yᵀb < 0
    ineq_nonneg: Ax <= b, x >= 0         或 y >= 0, yᵀA >= 0ᵀ, yᵀb < 0
    ineq_free:   Ax <= b                 或 y >= 0, yᵀA = 0ᵀ, yᵀb < 0
    """
    A = la.mat(A)
    b = la.vec(b)
    _check_shape(A, b)
    m, n = A.shape
    data = {'A': A, 'b': b}
    kind = f"farkas_{variant}"

    if variant == 'ineq_nonneg':
        x, y = _farkas_ineq_nonneg(A, b)
    elif variant == 'eq':
        x, y2 = _farkas_ineq_nonneg(la.vstack(A, la.mat(-A)), la.concat(b, la.neg(b)))
        y = None if y2 is None else la.sub(y2[:m], y2[m:])
    elif variant == 'ineq_free':
        x2, y = _farkas_ineq_nonneg(la.hstack(A, la.mat(-A)), b)
        x = None if x2 is None else la.sub(x2[:n], x2[n:])
    else:
        raise ExactLPError(f"未知的 Farkas 形式: {variant}")

    if x is not None:
        return _certified(Alternative(kind, left=x, data=data))
    return _certified(Alternative(kind, right=la.vec(y), data=data))


# ---------------------------------------------------------------------------
# Ville / Gordan / Stiemke
# ---------------------------------------------------------------------------

def ville(A: Mat) -> Alternative:
    """Ax <= 0, x >= 0, x != 0 (Left) 或 y >= 0, yᵀA > 0ᵀ (Right)，由賽局值的正負決定"""
    A = la.mat(A)
    m, n = A.shape
    data = {'A': A}
    if n == 0:
        return _certified(Alternative('ville', right=la.zeros(m), data=data))
    if m == 0:
        return _certified(Alternative('ville', left=la.unit(n, 0), data=data))

    solution = solve_game(ZeroSumGame(A))
    logger.debug(f"Ville: 賽局值 {solution.value}")
    if solution.value <= 0:
        return _certified(Alternative('ville', left=solution.col_strategy, data=data))
    return _certified(Alternative('ville', right=solution.row_strategy, data=data))


def stiemke(A: Mat) -> Alternative:
    """
    yᵀA >= 0ᵀ 且 yᵀA != 0ᵀ (Left) 或 Ax = 0, x > 0 (Right)

    x > 0 以 x >= 𝟙 判定；不可行時求自由 y 使 Aᵀy >= 0 且 𝟙ᵀAᵀy >= 1。
    """
    A = la.mat(A)
    m, n = A.shape
    data = {'A': A}

    # x = 𝟙 + x', x' >= 0
    shift = la.matvec(A, la.ones(n))
    x_extra = solve_feasibility(A_eq=A, b_eq=la.neg(shift), n_vars=n)
    if x_extra is not None:
        return _certified(Alternative('stiemke', right=la.add(la.ones(n), x_extra), data=data))

    lhs = la.vstack(la.mat(-A.T), la.row(la.neg(shift)))
    rhs = la.concat(la.zeros(n), la.vec([-1]))
    y = solve_feasibility(A_ub=lhs, b_ub=rhs, free=[True] * m, n_vars=m)
    if y is None:
        raise CertificateError("Stiemke：兩側系統皆不可行")
    return _certified(Alternative('stiemke', left=y, data=data))


def gordan(A: Mat, method: str = 'via_ville') -> Alternative:
    """
    Ax = 0, x >= 0, x != 0 (Left) 或 yᵀA > 0ᵀ (Right)

    via_ville:   對 [A; -A] 套用 Ville，y = y⁺ - y⁻
    via_stiemke: 對零空間基底 B 套用 Stiemke(Bᵀ)
    """
    A = la.mat(A)
    m, n = A.shape
    data = {'A': A}

    if method == 'via_ville':
        alt = ville(la.vstack(A, la.mat(-A)))
        if alt.is_left:
            return _certified(Alternative('gordan', left=alt.left, data=data))
        y2 = alt.right
        return _certified(Alternative('gordan', right=la.sub(y2[:m], y2[m:]), data=data))

    if method == 'via_stiemke':
        basis = la.nullspace_basis(A)
        if basis:
            B = la.hstack(*[la.column(v) for v in basis])
        else:
            B = la.zeros_mat(n, 1)
        alt = stiemke(la.transpose(B))
        if alt.is_left:
            x = la.matvec(B, alt.left)
            return _certified(Alternative('gordan', left=x, data=data))
        row_space = la.solve_or_refute(la.transpose(A), alt.right)
        if not row_space.is_left:
            raise CertificateError("零空間的正交補必為列空間")
        return _certified(Alternative('gordan', right=row_space.left, data=data))

    raise ExactLPError(f"未知的 Gordan 方法: {method}")


# ---------------------------------------------------------------------------
# Tucker
# ---------------------------------------------------------------------------

def _tucker_lemma_eq(A: Mat, j: int) -> TuckerLemmaWitness:
    m, n = A.shape
    rest = [k for k in range(n) if k != j]
    alt = farkas(la.select(A, range(m), rest), la.neg(A[:, j]), 'eq')
    if alt.is_left:
        x = la.zeros(n)
        x[j] = ONE
        for pos, k in enumerate(rest):
            x[k] = alt.left[pos]
        return TuckerLemmaWitness(la.zeros(m), x)
    return TuckerLemmaWitness(alt.right, la.zeros(n))


def check_tucker_lemma(A: Mat, j: int, variant: str, w: TuckerLemmaWitness) -> VerificationReport:
    report = VerificationReport()
    if variant == 'skew':
        z = w.z
        Bz = la.matvec(A, z)
        report.add('z>=0', la.all_nonneg(z))
        report.add('Bz<=0', all(e <= 0 for e in Bz))
        report.add('z_j-(Bz)_j>0', z[j] - Bz[j] > 0)
        return report
    yA = la.vecmat(w.y, A)
    Ax = la.matvec(A, w.x)
    report.add('yA>=0', la.all_nonneg(yA))
    report.add('x>=0', la.all_nonneg(w.x))
    if variant == 'eq':
        report.add('Ax=0', la.is_zero_vec(Ax))
    else:
        report.add('y>=0', la.all_nonneg(w.y))
        report.add('Ax<=0', all(e <= 0 for e in Ax))
    report.add('x_j+(yA)_j>0', w.x[j] + yA[j] > 0)
    return report


def tucker_lemma(A: Mat, j: int, variant: str = 'eq') -> TuckerLemmaWitness:
    """
    Tucker 引理 (以第 j 行為特殊行，0-based)

    eq:   yᵀA >= 0ᵀ, x >= 0, Ax = 0, x_j + (yᵀA)_j > 0
    ineq: 另加 y >= 0，且 Ax <= 0 (對 [I A] 的第 m+j 行套用 eq)
    skew: A 反對稱，z = x + y 滿足 z >= 0, Az <= 0, z_j - (Az)_j > 0
    """
    A = la.mat(A)
    m, n = A.shape
    if not 0 <= j < n:
        raise IndexOutOfRange(f"行索引 {j} 超出 [0, {n})")
    if variant not in TUCKER_VARIANTS:
        raise ExactLPError(f"未知的 Tucker 形式: {variant}")

    if variant == 'eq':
        witness = _tucker_lemma_eq(A, j)
    else:
        if variant == 'skew' and not la.is_skew_symmetric(A):
            raise NotSkewSymmetric("skew 形式需要反對稱矩陣")
        inner = _tucker_lemma_eq(la.hstack(la.identity(m), A), m + j)
        witness = TuckerLemmaWitness(inner.y, la.vec(inner.x[m:]))
        if variant == 'skew':
            witness.z = la.add(witness.x, witness.y)
    check_tucker_lemma(A, j, variant, witness).require(f"tucker_lemma {variant}")
    return witness


def check_tucker_partition(A: Mat, part: TuckerPartition) -> VerificationReport:
    report = VerificationReport()
    yA = la.vecmat(part.y, A)
    n = A.shape[1]
    report.add('yA>=0', la.all_nonneg(yA))
    report.add('x>=0', la.all_nonneg(part.x))
    report.add('Ax=0', la.is_zero_vec(la.matvec(A, part.x)))
    report.add('x+yA>0', la.all_pos(la.add(part.x, yA)))
    report.add('S=supp(x)', part.S == la.support(part.x))
    report.add('yA_S=0', all(yA[j] == 0 for j in part.S))
    report.add('yA_J>0', all(yA[j] > 0 for j in range(n) if j not in part.S))
    return report


def _maximal_support(A: Mat) -> Vec:
    """對每個 j 判斷 {Ax=0, x>=0, x_j>=1} 是否可行，並加總所有見證"""
    m, n = A.shape
    total = la.zeros(n)
    for j in range(n):
        witness = solve_feasibility(
            A_ub=la.row(la.neg(la.unit(n, j))), b_ub=la.vec([-1]),
            A_eq=A, b_eq=la.zeros(m),
        )
        if witness is not None:
            total = la.add(total, witness)
    return total


def _tucker_by_elimination(A: Mat, gordan_method: str) -> TuckerPartition:
    m, n = A.shape
    x = _maximal_support(A)
    S = sorted(la.support(x))
    J = [j for j in range(n) if j not in S]
    if not J:
        return TuckerPartition(frozenset(S), x, la.zeros(m))

    A_S = la.select(A, range(m), S)
    k = la.rank(A_S)
    if k == m:
        raise CertificateError("rank(A_S) = m 時支撐必為全部行")

    # 獨立列 F 置於最後，相依列依序置前
    F_rows = la.independent_rows(A_S)
    dep_rows = [i for i in range(m) if i not in F_rows]
    order = dep_rows + F_rows
    F = la.select(A_S, F_rows, range(len(S)))

    C = la.identity(m)
    for pos, i in enumerate(dep_rows):
        combo = la.solve_or_refute(la.transpose(F), la.vec(A_S[i, :]))
        if not combo.is_left:
            raise CertificateError(f"第 {i} 列應為 F 的列組合")
        for q in range(k):
            C[pos, m - k + q] = -combo.left[q]

    CA = la.matmul(C, la.select(A, order, range(n)))
    if not all(CA[p, j] == 0 for p in range(m - k) for j in S):
        raise CertificateError("C·A_S 的上方區塊必為 0")
    D = la.select(CA, range(m - k), J)
    logger.debug(f"Tucker 消去: |S|={len(S)}，rank(A_S)={k}，D 為 {D.shape}")

    alt = gordan(D, gordan_method)
    if alt.is_left:
        raise CertificateError("支撐 S 已是最大，D 不可能有 Gordan 左側解")
    y_perm = la.vecmat(la.concat(alt.right, la.zeros(k)), C)
    y = la.zeros(m)
    for pos, i in enumerate(order):
        y[i] = y_perm[pos]
    return TuckerPartition(frozenset(S), x, y)


def tucker_theorem(A: Mat, method: str = 'summation',
                   gordan_method: str = 'via_ville') -> TuckerPartition:
    """
    Tucker 定理：y, x 滿足 yᵀA >= 0ᵀ, x >= 0, Ax = 0, xᵀ + yᵀA > 0ᵀ

    summation:   對每一行套用 Tucker 引理後加總
    elimination: 求最大支撐 S，消去 x_S 後對剩餘區塊 D 套用 Gordan
    """
    A = la.mat(A)
    m, n = A.shape
    if method == 'summation':
        y, x = la.zeros(m), la.zeros(n)
        for j in range(n):
            w = tucker_lemma(A, j, 'eq')
            y, x = la.add(y, w.y), la.add(x, w.x)
        part = TuckerPartition(la.support(x), x, y)
    elif method == 'elimination':
        part = _tucker_by_elimination(A, gordan_method)
    else:
        raise ExactLPError(f"未知的 Tucker 方法: {method}")
    check_tucker_partition(A, part).require(f"tucker_theorem {method}")
    logger.debug(f"Tucker 分割 ({method}): S={sorted(part.S)}")
    return part


def skew_tucker(B: Mat, method: str = 'summation') -> Vec:
    """
    反對稱矩陣 B 的 z >= 0, Bz <= 0, z - Bz > 0

    對 [I B] 套用 Tucker 定理得 y 與 (s, x)，z = x + y。
    """
    B = la.mat(B)
    if not la.is_skew_symmetric(B):
        raise NotSkewSymmetric("skew_tucker 需要反對稱矩陣")
    k = B.shape[0]
    part = tucker_theorem(la.hstack(la.identity(k), B), method)
    z = la.add(la.vec(part.x[k:]), part.y)
    Bz = la.matvec(B, z)
    if not (la.all_nonneg(z) and all(e <= 0 for e in Bz) and la.all_pos(la.sub(z, Bz))):
        raise CertificateError("skew_tucker: z 未滿足 z>=0, Bz<=0, z-Bz>0")
    return z


def farkas_via_dantzig(A: Mat, b: Vec) -> Alternative:
    """
    以 c = 0 的 Dantzig 賽局推得 Farkas (ineq_nonneg)

    z = (y, x, t) 滿足 t - bᵀy > 0：t > 0 時 x/t 可行，t = 0 時 y 為憑證。
    """
    A = la.mat(A)
    b = la.vec(b)
    _check_shape(A, b)
    m, n = A.shape
    lp = IneqLP(A, b, la.zeros(n))
    z = skew_tucker(build_dantzig(lp).payoff)
    y, x, t = la.vec(z[:m]), la.vec(z[m:m + n]), z[m + n]
    data = {'A': A, 'b': b}
    if t > 0:
        return _certified(Alternative('farkas_ineq_nonneg', left=la.scale(x, ONE / t), data=data))
    return _certified(Alternative('farkas_ineq_nonneg', right=y, data=data))


# ---------------------------------------------------------------------------
# 最優解配對
# ---------------------------------------------------------------------------

def verify_optimal_pair(lp: IneqLP, x: Vec, y: Vec, strict: bool = False) -> VerificationReport:
    """
    檢查 (x, y) 是否為最優解配對

    依序檢查原問題可行、對偶可行、弱對偶、零間隙、逐列與逐行的互補鬆弛，
    strict 時再檢查嚴格互補。違反的恆等式記錄在報告中，不拋出例外。
    """
    x = la.vec(x)
    y = la.vec(y)
    if len(x) != lp.n or len(y) != lp.m:
        raise DimensionError(f"x 維度 {len(x)} (預期 {lp.n})，y 維度 {len(y)} (預期 {lp.m})")
    base = REPORT_CONFIG['index_base']
    report = VerificationReport()

    slack = la.sub(lp.b, la.matvec(lp.A, x))
    reduced = la.sub(la.vecmat(y, lp.A), lp.c)
    primal, dual = la.dot(lp.c, x), la.dot(lp.b, y)

    report.add('primal_feasible', la.all_nonneg(x) and la.all_nonneg(slack), 'Ax <= b, x >= 0')
    report.add('dual_feasible', la.all_nonneg(y) and la.all_nonneg(reduced), 'yᵀA >= cᵀ, y >= 0')
    report.add('weak_duality', primal <= dual,
               f"cᵀx={la.rat_to_str(primal)} yᵀb={la.rat_to_str(dual)}")
    report.add('zero_gap', primal == dual, f"gap={la.rat_to_str(dual - primal)}")
    for i in range(lp.m):
        report.add(f"slackness_row_{i + base}", y[i] * slack[i] == 0,
                   f"y={la.rat_to_str(y[i])} slack={la.rat_to_str(slack[i])}")
    for j in range(lp.n):
        report.add(f"slackness_col_{j + base}", x[j] * reduced[j] == 0,
                   f"x={la.rat_to_str(x[j])} reduced={la.rat_to_str(reduced[j])}")
    if strict:
        for i in range(lp.m):
            report.add(f"strict_row_{i + base}", y[i] + slack[i] > 0)
        for j in range(lp.n):
            report.add(f"strict_col_{j + base}", x[j] + reduced[j] > 0)
    return report


def strict_complementary_pair(lp: IneqLP) -> Tuple[Vec, Vec]:
    """
    嚴格互補最優解配對

    先以 B_M 確認 (P)、(D) 皆可行，再由 Dantzig 賽局的 skew_tucker 解
    z = (y', x', t') (t' > 0) 得到 x = x'/t'、y = y'/t'。
    """
    verdict, _ = solve_lp_via_bm(lp)
    if not verdict.is_optimal:
        raise InfeasibleSide("原問題或對偶問題不可行，沒有最優解配對")

    m, n = lp.m, lp.n
    z = skew_tucker(build_dantzig(lp).payoff)
    t = z[m + n]
    if t <= 0:
        raise CertificateError("兩側皆可行時 t' 必為正")
    x = la.scale(z[m:m + n], ONE / t)
    y = la.scale(z[:m], ONE / t)
    verify_optimal_pair(lp, x, y, strict=True).require('strict_complementary_pair')
    return x, y
