#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
LP 與零和賽局之間的歸約

原問題 (P): maximize cᵀx s.t. Ax <= b, x >= 0
對偶問題 (D): minimize yᵀb s.t. yᵀA >= cᵀ, y >= 0

由 LP 資料建構 Dantzig 賽局 B、擴充賽局 B_M、輔助賽局 D_M 與 Brooks-Reny 賽局 P，
並由賽局的最優策略取回最優解配對，或取回證明 (P)/(D) 之一不可行的憑證。
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial, lcm
from typing import Any, List, Optional, Tuple
import logging

from config.settings import CAP_CONFIG
from src.algebra import exact_linalg as la
from src.algebra.exact_linalg import Alternative, Mat, Vec, ZERO, ONE
from src.game.game_solver import ZeroSumGame, is_mixed_strategy, solve_game
from src.solver.simplex_core import (
    EQ, GeneralLP, LE, basic_min_w, simplex_solve, INFEASIBLE, UNBOUNDED,
)
from src.utils.errors import (
    BoundTooSmall, CapExceeded, CertificateError, DimensionError, ExactLPError,
    NotOptimalStrategy, NotSkewSymmetric,
)
from src.utils.verification import VerificationReport

logger = logging.getLogger(__name__)

OPTIMAL_PAIR = 'OptimalPair'
NO_OPTIMUM = 'NoOptimum'
NO_OPTIMUM_EVIDENCE = 'NoOptimumEvidence'
INCONCLUSIVE = 'Inconclusive'


@dataclass
class IneqLP:
    """不等式形式 LP 資料 (A, b, c)"""
    A: Mat
    b: Vec
    c: Vec

    def __post_init__(self):
        self.A = la.mat(self.A)
        self.b = la.vec(self.b)
        self.c = la.vec(self.c)
        m, n = self.A.shape
        if len(self.b) != m:
            raise DimensionError(f"A 有 {m} 列，b 維度 {len(self.b)}")
        if len(self.c) != n:
            raise DimensionError(f"A 有 {n} 行，c 維度 {len(self.c)}")

    @classmethod
    def from_rows(cls, A: List[List[Any]], b: List[Any], c: List[Any]) -> 'IneqLP':
        n = len(c)
        return cls(la.mat(A, n_cols=n if not A else None), la.vec(b), la.vec(c))

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def primal(self) -> GeneralLP:
        return GeneralLP(self.c, self.A, [LE] * self.m, self.b)

    def dual(self) -> GeneralLP:
        """minimize bᵀy s.t. -Aᵀy <= -c, y >= 0"""
        return GeneralLP(self.b, la.mat(-self.A.T), [LE] * self.n, la.neg(self.c), maximize=False)


@dataclass
class LpVerdict:
    """
    solve-LP 管線的結論

    OptimalPair: x, y 為最優解配對 (cᵀx = yᵀb)
    NoOptimum:   Ax <= 0, x >= 0, Aᵀy >= 0, y >= 0, bᵀy - cᵀx < 0
    """
    tag: str
    x: Vec
    y: Vec
    value: Optional[Fraction] = None
    primal_unbounded_if_feasible: bool = False   # cᵀx > 0
    dual_unbounded_if_feasible: bool = False     # bᵀy < 0

    @property
    def is_optimal(self) -> bool:
        return self.tag == OPTIMAL_PAIR


def optimal_pair(lp: IneqLP, x: Vec, y: Vec) -> LpVerdict:
    verdict = LpVerdict(OPTIMAL_PAIR, x, y, la.dot(lp.c, x))
    check_lp_verdict(lp, verdict).require('OptimalPair')
    return verdict


def no_optimum(lp: IneqLP, x: Vec, y: Vec) -> LpVerdict:
    verdict = LpVerdict(
        NO_OPTIMUM, x, y,
        primal_unbounded_if_feasible=la.dot(lp.c, x) > 0,
        dual_unbounded_if_feasible=la.dot(lp.b, y) < 0,
    )
    check_lp_verdict(lp, verdict).require('NoOptimum')
    return verdict


def check_lp_verdict(lp: IneqLP, verdict: LpVerdict) -> VerificationReport:
    report = VerificationReport()
    x, y = verdict.x, verdict.y
    if len(x) != lp.n or len(y) != lp.m:
        report.add('dimensions', False, f"x 維度 {len(x)}，y 維度 {len(y)}")
        return report
    Ax = la.matvec(lp.A, x)
    yA = la.vecmat(y, lp.A)
    report.add('x_nonneg', la.all_nonneg(x))
    report.add('y_nonneg', la.all_nonneg(y))
    if verdict.tag == OPTIMAL_PAIR:
        report.add('primal_feasible', la.all_le(Ax, lp.b), 'Ax <= b')
        report.add('dual_feasible', la.all_le(lp.c, yA), 'yᵀA >= cᵀ')
        report.add('zero_gap', la.dot(lp.c, x) == la.dot(lp.b, y), 'cᵀx = yᵀb')
    else:
        report.add('primal_ray', all(e <= 0 for e in Ax), 'Ax <= 0')
        report.add('dual_ray', la.all_nonneg(yA), 'Aᵀy >= 0')
        report.add('weak_duality_violated', la.dot(lp.b, y) - la.dot(lp.c, x) < 0, 'bᵀy - cᵀx < 0')
    return report


# ---------------------------------------------------------------------------
# 賽局建構
# ---------------------------------------------------------------------------

def lp_to_skew_system(lp: IneqLP) -> Tuple[Mat, Vec]:
    """C = [[0, A], [-Aᵀ, 0]]，d = (b, -c)，變數 z = (y, x)"""
    m, n = lp.m, lp.n
    C = la.vstack(
        la.hstack(la.zeros_mat(m, m), lp.A),
        la.hstack(la.mat(-lp.A.T), la.zeros_mat(n, n)),
    )
    return C, la.concat(lp.b, la.neg(lp.c))


def _skew_game_matrix(C: Mat, d: Vec) -> Mat:
    """[[C, -d], [dᵀ, 0]]"""
    return la.vstack(
        la.hstack(C, la.column(la.neg(d))),
        la.hstack(la.row(d), la.mat([[0]])),
    )


def _extended_game_matrix(C: Mat, d: Vec, M: Fraction) -> Mat:
    """[[C, -d], [dᵀ, 0], [𝟙ᵀ, -M]]"""
    k = len(d)
    last = la.concat(la.ones(k), la.vec([-M]))
    return la.vstack(_skew_game_matrix(C, d), la.row(last))


def build_dantzig(lp: IneqLP) -> ZeroSumGame:
    """Dantzig 賽局 B = [[0, A, -b], [-Aᵀ, 0, c], [bᵀ, -cᵀ, 0]]，策略順序 (y, x, t)"""
    B = _skew_game_matrix(*lp_to_skew_system(lp))
    if not la.is_skew_symmetric(B):
        raise CertificateError("Dantzig 賽局必為反對稱")
    return ZeroSumGame(B)


@dataclass
class DantzigReading:
    """Dantzig 賽局最優策略 z = (y, x, t) 的解讀"""
    tag: str                  # OptimalPair | NoOptimumEvidence | Inconclusive
    x: Vec
    y: Vec
    t: Fraction
    last_payoff: Fraction     # (Bz)_k
    primal_unbounded_if_feasible: bool = False
    dual_unbounded_if_feasible: bool = False


def interpret_dantzig(lp: IneqLP, z: Vec) -> DantzigReading:
    """
    解讀 Dantzig 賽局的最優策略

    t > 0 時 (x/t, y/t) 為最優解配對；(Bz)_k < 0 時 t = 0 且 (P)/(D) 之一不可行；
    t = 0 且 (Bz)_k = 0 時無法下結論。
    """
    B = build_dantzig(lp).payoff
    k = lp.m + lp.n + 1
    if not is_mixed_strategy(z, k):
        raise NotOptimalStrategy(f"z 必須是 {k} 維混合策略")
    Bz = la.matvec(B, z)
    if not all(e <= 0 for e in Bz):
        raise NotOptimalStrategy("z 不是最優策略 (需要 Bz <= 0)")

    y = la.vec(z[:lp.m])
    x = la.vec(z[lp.m:lp.m + lp.n])
    t = z[k - 1]
    last = Bz[k - 1]
    if t > 0:
        pair = optimal_pair(lp, la.scale(x, ONE / t), la.scale(y, ONE / t))
        return DantzigReading(OPTIMAL_PAIR, pair.x, pair.y, t, last)
    if last < 0:
        evidence = no_optimum(lp, x, y)
        return DantzigReading(NO_OPTIMUM_EVIDENCE, x, y, t, last,
                              evidence.primal_unbounded_if_feasible,
                              evidence.dual_unbounded_if_feasible)
    logger.info("Dantzig 賽局策略 t=0 且 (Bz)_k=0，無法下結論")
    return DantzigReading(INCONCLUSIVE, x, y, t, last)


def bound_M(lp: IneqLP) -> Fraction:
    """
    M = ℓ!·ℓ·α^ℓ·β^(ℓ²+ℓ) + 1

    ℓ = m+n+1，α 為 A, b, c 所有元素分子絕對值的最大值，β 為分母最大值。
    """
    entries = list(lp.A.flat) + list(lp.b) + list(lp.c)
    alpha = max((abs(e.numerator) for e in entries), default=0)
    beta = max((e.denominator for e in entries), default=1)
    ell = lp.m + lp.n + 1
    return Fraction(factorial(ell) * ell * alpha ** ell * beta ** (ell * ell + ell) + 1)


def scale_factors(lp: IneqLP) -> List[int]:
    """
    (z, w) 系統每一行的分母最小公倍數

    第 0 個為右端項 [d; 0]，其後依序為 [C; dᵀ] 的各行；
    乘上後系統為整數，每個因子不超過 β^ℓ。
    """
    C, d = lp_to_skew_system(lp)
    factors = [lcm(1, *(e.denominator for e in d))]
    for j in range(C.shape[1]):
        column = list(C[:, j]) + [d[j]]
        factors.append(lcm(1, *(e.denominator for e in column)))
    return factors


def tight_bound_M(lp: IneqLP) -> Fraction:
    """𝟙ᵀz* + 1，其中 (z*, w*) 為 (z, w) 系統的基本最優解"""
    C, d = lp_to_skew_system(lp)
    return _tight_bound(C, d)


def _tight_bound(C: Mat, d: Vec) -> Fraction:
    basic, _ = basic_min_w(C, d)
    k = len(d)
    return la.total(basic.x[:k]) + 1


def build_bm(lp: IneqLP, M: Any) -> ZeroSumGame:
    """擴充賽局 B_M：Dantzig 賽局加上最後一列 (𝟙ᵀ, 𝟙ᵀ, -M)"""
    M = la.to_rat(M)
    if M <= 0:
        raise ExactLPError(f"M 必須為正，收到 {M}")
    C, d = lp_to_skew_system(lp)
    return ZeroSumGame(_extended_game_matrix(C, d, M))


def build_dm(C: Mat, d: Vec, M: Any) -> ZeroSumGame:
    """輔助賽局 D_M = [[C, -d], [dᵀ, 0], [𝟙ᵀ, -M]]，要求 M >= 𝟙ᵀz* + 1"""
    C = la.mat(C)
    d = la.vec(d)
    M = la.to_rat(M)
    if C.shape != (len(d), len(d)):
        raise DimensionError(f"C 為 {C.shape}，d 維度 {len(d)}")
    if not la.is_skew_symmetric(C):
        raise NotSkewSymmetric("C 必須滿足 C = -Cᵀ")
    bound = _tight_bound(C, d)
    if M < bound:
        logger.warning(f"M={M} 小於 𝟙ᵀz*+1={bound}")
        raise BoundTooSmall(f"M={la.rat_to_str(M)} 小於 𝟙ᵀz*+1={la.rat_to_str(bound)}")
    return ZeroSumGame(_extended_game_matrix(C, d, M))


# ---------------------------------------------------------------------------
# 求解管線
# ---------------------------------------------------------------------------

def solve_lp_via_bm(lp: IneqLP, M: Optional[Any] = None) -> Tuple[LpVerdict, Fraction]:
    """
    以賽局 B_M 求解 LP

    賽局值 v = 0：min-max 策略 (y, x, t) 的 t > 0，(x/t, y/t) 為最優解配對。
    賽局值 v > 0：max-min 策略 (y, x, r, s) 滿足 r = 0、s = v、0 < v < 1，
    (x, y) 證明 (P) 或 (D) 不可行。

    Args:
        lp: LP 資料
        M: 未指定時使用 bound_M(lp)；指定時不得小於 tight_bound_M(lp)

    Returns:
        (結論, 賽局值)
    """
    if M is None:
        M = bound_M(lp)
    else:
        M = la.to_rat(M)
        if M <= 0:
            raise ExactLPError(f"M 必須為正，收到 {M}")
        bound = tight_bound_M(lp)
        if M < bound:
            logger.warning(f"M={M} 小於 𝟙ᵀz*+1={bound}")
            raise BoundTooSmall(f"M={la.rat_to_str(M)} 小於 𝟙ᵀz*+1={la.rat_to_str(bound)}")

    m, n = lp.m, lp.n
    solution = solve_game(build_bm(lp, M))
    v = solution.value
    if v < 0:
        raise CertificateError(f"B_M 的值不可能為負: {v}")

    if v == 0:
        z = solution.col_strategy
        t = z[m + n]
        if t <= 0:
            raise CertificateError("v = 0 時 min-max 策略必有 t > 0")
        verdict = optimal_pair(lp, la.scale(z[m:m + n], ONE / t), la.scale(z[:m], ONE / t))
        logger.info(f"B_M 值 0，最優值 {verdict.value}")
        return verdict, v

    q = solution.row_strategy
    r, s = q[m + n], q[m + n + 1]
    if r != 0 or s != v or not v < 1:
        raise CertificateError(f"max-min 策略必有 r=0、s=v、v<1 (r={r}, s={s}, v={v})")
    verdict = no_optimum(lp, la.vec(q[m:m + n]), la.vec(q[:m]))
    logger.info(f"B_M 值 {v} > 0，(P) 或 (D) 不可行")
    return verdict, v


def min_slack_w(lp: IneqLP) -> Fraction:
    """
    使 Ax̄ <= b + 𝟙w, -Aᵀȳ <= -c + 𝟙w 有非負解的最小 w >= 0

    v > 0 時與 B_M 賽局值滿足 w = (M+1)/(1/v - 1)。
    """
    m, n = lp.m, lp.n
    A = la.vstack(
        la.hstack(lp.A, la.zeros_mat(m, m), la.column(la.neg(la.ones(m)))),
        la.hstack(la.zeros_mat(n, n), la.mat(-lp.A.T), la.column(la.neg(la.ones(n)))),
    )
    rhs = la.concat(lp.b, la.neg(lp.c))
    objective = la.concat(la.zeros(n + m), la.ones(1))
    outcome = simplex_solve(GeneralLP(objective, A, [LE] * (m + n), rhs, maximize=False))
    if not outcome.is_optimal:
        raise CertificateError(f"最小鬆弛 LP 必有最優解，卻得到 {outcome.status}")
    return outcome.value


def solve_skew_system_via_dm(C: Mat, d: Vec, M: Optional[Any] = None) -> Alternative:
    """
    以賽局 D_M 判定 Cz <= d, dᵀz <= 0, z >= 0 是否有解

    Left z：上述系統的解；Right q：q >= 0, Cq <= 0, dᵀq < 0。
    """
    C = la.mat(C)
    d = la.vec(d)
    if M is None:
        M = _tight_bound(C, d)
    game = build_dm(C, d, M)
    k = len(d)
    solution = solve_game(game)
    v = solution.value
    if v == 0:
        zt = solution.col_strategy
        t = zt[k]
        if t <= 0:
            raise CertificateError("v = 0 時 min-max 策略必有 t > 0")
        alt = Alternative('skew_system', left=la.scale(zt[:k], ONE / t), data={'C': C, 'd': d})
    else:
        q = solution.row_strategy
        r, s = q[k], q[k + 1]
        if r != 0 or s != v:
            raise CertificateError(f"max-min 策略必有 r=0、s=v (r={r}, s={s}, v={v})")
        alt = Alternative('skew_system', right=la.vec(q[:k]), data={'C': C, 'd': d})
    check_skew_system(alt).require('solve_skew_system_via_dm')
    return alt


def check_skew_system(alt: Alternative) -> VerificationReport:
    C, d = alt.data['C'], alt.data['d']
    report = VerificationReport()
    if alt.is_left:
        z = alt.left
        report.add('z_nonneg', la.all_nonneg(z))
        report.add('Cz<=d', la.all_le(la.matvec(C, z), d))
        report.add('dz<=0', la.dot(d, z) <= 0)
    else:
        q = alt.right
        report.add('q_nonneg', la.all_nonneg(q))
        report.add('Cq<=0', all(e <= 0 for e in la.matvec(C, q)))
        report.add('dq<0', la.dot(d, q) < 0)
    return report


def solve_lp_via_farkas(lp: IneqLP) -> LpVerdict:
    """
    以 Farkas 引理推得對偶定理

    對 (y, x) >= 0 的系統 Ax <= b, -Aᵀy <= -c, bᵀy - cᵀx <= 0 套用 Farkas：
    有解即最優解配對；否則憑證 (ŷ, x̂, t) 必有 t = 0，(x̂, ŷ) 即不可行證據。
    """
    from src.certificate.certificates import farkas

    m, n = lp.m, lp.n
    G = la.vstack(
        la.hstack(la.zeros_mat(m, m), lp.A),
        la.hstack(la.mat(-lp.A.T), la.zeros_mat(n, n)),
        la.row(la.concat(lp.b, la.neg(lp.c))),
    )
    h = la.concat(lp.b, la.neg(lp.c), la.zeros(1))
    alt = farkas(G, h, 'ineq_nonneg')
    if alt.is_left:
        u = alt.left
        return optimal_pair(lp, la.vec(u[m:]), la.vec(u[:m]))

    p = alt.right
    t = p[m + n]
    if t != 0:
        raise CertificateError(f"t > 0 違反弱對偶 (t={t})")
    return no_optimum(lp, la.vec(p[m:m + n]), la.vec(p[:m]))


def solve_lp_direct(lp: IneqLP) -> LpVerdict:
    """直接以單純形法求解 (P)；不可行時以 Farkas 列組合、無界時以射線作為證據"""
    outcome = simplex_solve(lp.primal())
    if outcome.is_optimal:
        return optimal_pair(lp, outcome.x, outcome.y)
    if outcome.status == INFEASIBLE:
        return no_optimum(lp, la.zeros(lp.n), outcome.farkas)
    if outcome.status == UNBOUNDED:
        return no_optimum(lp, outcome.ray, la.zeros(lp.m))
    raise CertificateError(f"未知的單純形結果 {outcome.status}")


# ---------------------------------------------------------------------------
# Brooks-Reny 賽局
# ---------------------------------------------------------------------------

def brooks_reny_alpha(lp: IneqLP) -> Fraction:
    """
    α = 2r²·max(‖b‖, ‖c‖)·max_W ‖W⁻¹‖ + 1

    Â = [[0, -Aᵀ], [A, 0], [-cᵀ, bᵀ]]，r = rank(Â)，W 取遍 Â 的所有可逆方子矩陣，
    ‖·‖ 為元素絕對值最大值。
    """
    m, n = lp.m, lp.n
    A_hat = la.vstack(
        la.hstack(la.zeros_mat(n, n), la.mat(-lp.A.T)),
        la.hstack(lp.A, la.zeros_mat(m, m)),
        la.row(la.concat(la.neg(lp.c), lp.b)),
    )
    r = la.rank(A_hat)
    rows, cols = A_hat.shape
    worst = ZERO
    count = 0
    for size in range(1, r + 1):
        for I in combinations(range(rows), size):
            for J in combinations(range(cols), size):
                W_inv = la.inverse(la.select(A_hat, I, J))
                if W_inv is not None:
                    count += 1
                    worst = max(worst, la.max_abs_entry(W_inv))
    data_norm = max(la.max_abs_entry(la.row(lp.b)), la.max_abs_entry(la.row(lp.c)))
    logger.debug(f"Brooks-Reny: rank(Â)={r}，可逆子矩陣 {count} 個")
    return 2 * r * r * data_norm * worst + 1


def build_brooks_reny(lp: IneqLP,
                      cap_dim: int = CAP_CONFIG['br_dim_cap']) -> Tuple[ZeroSumGame, Fraction]:
    """
    Brooks-Reny 賽局 P = [[0, -αAᵀ, 0], [αA, 0, 0], [-αcᵀ, αbᵀ, 0]] + (c; -b; 0)𝟙ᵀ

    策略順序 (x, y, t)。
    """
    m, n = lp.m, lp.n
    k = m + n + 1
    if k > cap_dim:
        raise CapExceeded('Brooks-Reny m+n+1', cap_dim, k)
    alpha = brooks_reny_alpha(lp)

    shift = la.concat(lp.c, la.neg(lp.b), la.zeros(1))
    P = la.zeros_mat(k, k)
    for j in range(n):
        for i in range(m):
            P[j, n + i] = -alpha * lp.A[i, j]
            P[n + i, j] = alpha * lp.A[i, j]
        P[k - 1, j] = -alpha * lp.c[j]
    for i in range(m):
        P[k - 1, n + i] = alpha * lp.b[i]
    for i in range(k):
        for j in range(k):
            P[i, j] += shift[i]
    return ZeroSumGame(P), alpha


def solve_lp_via_brooks_reny(lp: IneqLP,
                             cap_dim: int = CAP_CONFIG['br_dim_cap']) -> Tuple[LpVerdict, Fraction]:
    """
    以 Brooks-Reny 賽局求解 LP

    值為 0：min-max 策略 (x*, y*, t*) 給出最優解配對 (αx*, αy*)；
    值為正：max-min 策略 (x, y, t) 滿足 Ax <= 0, Aᵀy >= 0, cᵀx > bᵀy。
    """
    m, n = lp.m, lp.n
    game, alpha = build_brooks_reny(lp, cap_dim)
    solution = solve_game(game)
    v = solution.value
    if v < 0:
        raise CertificateError(f"Brooks-Reny 賽局的值不可能為負: {v}")
    if v == 0:
        z = _max_t_minmax_strategy(game)
        verdict = optimal_pair(lp, la.scale(z[:n], alpha), la.scale(z[n:n + m], alpha))
    else:
        q = solution.row_strategy
        verdict = no_optimum(lp, la.vec(q[:n]), la.vec(q[n:n + m]))
    logger.info(f"Brooks-Reny 賽局值 {v} (α={alpha})")
    return verdict, v


def _max_t_minmax_strategy(game: ZeroSumGame) -> Vec:
    """值為 0 時，在所有 min-max 策略 (Pz <= 0, z >= 0, 𝟙ᵀz = 1) 中取 t 最大者"""
    P = game.payoff
    k = P.shape[1]
    A = la.vstack(P, la.row(la.ones(k)))
    b = la.concat(la.zeros(P.shape[0]), la.vec([1]))
    outcome = simplex_solve(GeneralLP(la.unit(k, k - 1), A, [LE] * P.shape[0] + [EQ], b))
    if not outcome.is_optimal:
        raise CertificateError(f"值為 0 的賽局必有 min-max 策略，卻得到 {outcome.status}")
    return outcome.x
