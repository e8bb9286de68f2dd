#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
零和賽局精確求解器

列玩家 (maximizer) 選列，行玩家 (minimizer) 選行。
賽局值與雙方最優混合策略由一般形式 LP 求得：
    minimize v  s.t.  Ax <= 𝟙v, 𝟙ᵀx = 1, x >= 0, v 自由
其對偶即列玩家的 max-min 問題。
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple
import logging

from config.settings import CAP_CONFIG
from src.algebra import exact_linalg as la
from src.algebra.exact_linalg import Mat, Vec, ONE
from src.solver.simplex_core import GeneralLP, LE, EQ, simplex_solve
from src.utils.errors import CapExceeded, CertificateError, DimensionError
from src.utils.verification import VerificationReport

logger = logging.getLogger(__name__)

MixedStrategy = Vec


@dataclass
class ZeroSumGame:
    """m x n 報酬矩陣 (列玩家收到 a_ij，行玩家支付 a_ij)"""
    payoff: Mat

    def __post_init__(self):
        self.payoff = la.mat(self.payoff)
        m, n = self.payoff.shape
        if m < 1 or n < 1:
            raise DimensionError(f"賽局至少需要 1x1，收到 {m}x{n}")

    @classmethod
    def from_rows(cls, rows: List[List[Any]]) -> 'ZeroSumGame':
        return cls(la.mat(rows))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.payoff.shape


@dataclass
class GameSolution:
    """賽局值與一組最優策略"""
    value: Fraction
    row_strategy: MixedStrategy   # max-min y
    col_strategy: MixedStrategy   # min-max x


def is_mixed_strategy(p: Vec, size: Optional[int] = None) -> bool:
    if size is not None and len(p) != size:
        return False
    return la.all_nonneg(p) and la.total(p) == 1


def best_response_value(G: ZeroSumGame, x: MixedStrategy) -> Fraction:
    """行策略 x 下列玩家的最佳回應報酬 max_i (Ax)_i"""
    m, n = G.shape
    if len(x) != n:
        raise DimensionError(f"賽局有 {n} 行，x 維度 {len(x)}")
    return max(la.matvec(G.payoff, x))


def worst_case_payoff(G: ZeroSumGame, y: MixedStrategy) -> Fraction:
    """列策略 y 保證的報酬 min_j (yᵀA)_j"""
    m, n = G.shape
    if len(y) != m:
        raise DimensionError(f"賽局有 {m} 列，y 維度 {len(y)}")
    return min(la.vecmat(y, G.payoff))


def shift_payoffs(G: ZeroSumGame, alpha: Any) -> ZeroSumGame:
    """每個報酬加上常數 α；最優策略不變，賽局值加 α"""
    alpha = la.to_rat(alpha)
    m, n = G.shape
    shifted = la.zeros_mat(m, n)
    for i in range(m):
        for j in range(n):
            shifted[i, j] = G.payoff[i, j] + alpha
    return ZeroSumGame(shifted)


def check_game_solution(G: ZeroSumGame, sol: GameSolution) -> VerificationReport:
    m, n = G.shape
    report = VerificationReport()
    report.add('row_strategy_mixed', is_mixed_strategy(sol.row_strategy, m))
    report.add('col_strategy_mixed', is_mixed_strategy(sol.col_strategy, n))
    if report.passed:
        yA = la.vecmat(sol.row_strategy, G.payoff)
        Ax = la.matvec(G.payoff, sol.col_strategy)
        report.add('row_guarantee', all(e >= sol.value for e in yA), 'yᵀA >= v𝟙ᵀ')
        report.add('col_guarantee', all(e <= sol.value for e in Ax), 'Ax <= 𝟙v')
    return report


def solve_game(G: ZeroSumGame) -> GameSolution:
    """
    以 LP 精確求解零和賽局

    變數 (x, v)，maximize -v s.t. [A -𝟙](x, v) <= 0, 𝟙ᵀx = 1。
    前 m 列的對偶值即 max-min 策略 y，等式列的對偶值為 -v。
    """
    A = G.payoff
    m, n = A.shape
    lhs = la.vstack(
        la.hstack(A, la.column(la.neg(la.ones(m)))),
        la.hstack(la.row(la.ones(n)), la.mat([[0]])),
    )
    rhs = la.concat(la.zeros(m), la.ones(1))
    objective = la.concat(la.zeros(n), la.vec([-1]))
    lp = GeneralLP(objective, lhs, [LE] * m + [EQ], rhs, free=[False] * n + [True])

    outcome = simplex_solve(lp)
    if not outcome.is_optimal:
        raise CertificateError(f"賽局 LP 必有最優解，卻得到 {outcome.status}")

    value = -outcome.value
    x = la.vec(outcome.x[:n])
    y = la.vec(outcome.y[:m])
    solution = GameSolution(value, y, x)
    check_game_solution(G, solution).require('solve_game')
    if la.is_skew_symmetric(A) and value != 0:
        raise CertificateError(f"反對稱賽局的值必為 0，得到 {value}")
    logger.debug(f"賽局 {m}x{n} 的值 {value}")
    return solution


def solve_game_by_shift(G: ZeroSumGame) -> GameSolution:
    """
    以正報酬賽局的 LP 配對求解

    α = 1 - 最小報酬，使 A+α 的每個元素 >= 1；
    maximize 𝟙ᵀx' s.t. (A+α)x' <= 𝟙, x' >= 0 的最優值為 1/v'，
    其對偶 y' 滿足 (A+α)ᵀy' >= 𝟙。策略為 x'v'、y'v'，原賽局值為 v' - α。
    """
    m, n = G.shape
    alpha = ONE - min(G.payoff.flat)
    shifted = shift_payoffs(G, alpha)
    lp = GeneralLP(la.ones(n), shifted.payoff, [LE] * m, la.ones(m))
    outcome = simplex_solve(lp)
    if not outcome.is_optimal or outcome.value <= 0:
        raise CertificateError("正報酬賽局的 LP 必有正的最優值")

    shifted_value = ONE / outcome.value
    solution = GameSolution(
        shifted_value - alpha,
        la.scale(outcome.y, shifted_value),
        la.scale(outcome.x, shifted_value),
    )
    check_game_solution(G, solution).require('solve_game_by_shift')
    return solution


def _column_vertices(A: Mat, value: Fraction) -> List[Vec]:
    m, n = A.shape
    found: Dict[Tuple[Fraction, ...], Vec] = {}
    for size in range(1, n + 1):
        for J in combinations(range(n), size):
            for I in combinations(range(m), size - 1):
                system = la.vstack(la.select(A, I, J), la.row(la.ones(size)))
                rhs = la.concat(la.vec([value] * (size - 1)), la.ones(1))
                xJ = la.solve_square(system, rhs)
                if xJ is None or not la.all_nonneg(xJ):
                    continue
                x = la.zeros(n)
                for k, j in enumerate(J):
                    x[j] = xJ[k]
                if all(e <= value for e in la.matvec(A, x)):
                    found.setdefault(tuple(x), x)
    return list(found.values())


def enumerate_optimal_vertices(G: ZeroSumGame,
                               cap_dim: int = CAP_CONFIG['enum_dim_cap']
                               ) -> Tuple[List[MixedStrategy], List[MixedStrategy], Fraction]:
    """
    列舉雙方所有頂點最優策略

    對每個支撐 J 與 |J|-1 條緊約束列 I，解 [A_IJ; 𝟙ᵀ] x_J = (v𝟙, 1)；
    奇異或不可行的支撐略過，重複解以精確相等去除。

    Returns:
        (列玩家頂點, 行玩家頂點, 賽局值)
    """
    m, n = G.shape
    if m + n > cap_dim:
        raise CapExceeded('頂點窮舉 m+n', cap_dim, m + n)

    value = solve_game(G).value
    col_vertices = _column_vertices(G.payoff, value)
    # 列玩家: yᵀA >= v𝟙ᵀ 等價於 (-Aᵀ) y <= -v𝟙
    row_vertices = _column_vertices(la.mat(-G.payoff.T), -value)
    logger.debug(f"頂點窮舉: 列 {len(row_vertices)} 個，行 {len(col_vertices)} 個")
    return row_vertices, col_vertices, value


def enumerate_optimal_supports(G: ZeroSumGame,
                               cap_dim: int = CAP_CONFIG['enum_dim_cap']
                               ) -> List[Tuple[MixedStrategy, MixedStrategy]]:
    """所有 (列頂點策略, 行頂點策略) 配對"""
    rows, cols, _ = enumerate_optimal_vertices(G, cap_dim)
    return [(y, x) for y in rows for x in cols]
