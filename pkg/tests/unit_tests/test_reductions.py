#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
LP 與賽局歸約測試
"""

from fractions import Fraction

import pytest

from src.algebra import exact_linalg as la
from src.game.game_solver import solve_game
from src.reduction.reductions import (
    INCONCLUSIVE, NO_OPTIMUM, NO_OPTIMUM_EVIDENCE, OPTIMAL_PAIR, IneqLP,
    bound_M, brooks_reny_alpha, build_bm, build_brooks_reny, build_dantzig, build_dm,
    check_lp_verdict, interpret_dantzig, lp_to_skew_system, min_slack_w, scale_factors,
    solve_lp_direct, solve_lp_via_bm, solve_lp_via_brooks_reny, solve_lp_via_farkas,
    solve_skew_system_via_dm, tight_bound_M,
)
from src.utils.errors import (
    BoundTooSmall, CapExceeded, DimensionError, NotOptimalStrategy, NotSkewSymmetric,
)


def test_ineq_lp_dimension_checks():
    with pytest.raises(DimensionError):
        IneqLP.from_rows([[1, 2]], [1], [1])
    with pytest.raises(DimensionError):
        IneqLP.from_rows([[1]], [1, 2], [1])


def test_dantzig_matrix_for_i1(i1):
    B = build_dantzig(i1).payoff
    assert la.mat_equal(B, la.mat([[0, 2, -1], [-2, 0, 3], [1, -3, 0]]))


def test_dantzig_matrix_for_i2_has_zero_row_and_column(i2):
    B = build_dantzig(i2).payoff
    assert B.shape == (4, 4)
    assert la.is_zero_vec(B[1, :]) and la.is_zero_vec(B[:, 1])


def test_interpret_dantzig_optimal_pair(i1):
    z = solve_game(build_dantzig(i1)).col_strategy
    reading = interpret_dantzig(i1, z)
    assert reading.tag == OPTIMAL_PAIR
    assert la.vec_to_strs(reading.x) == ["1/2"]
    assert la.vec_to_strs(reading.y) == ["3/2"]


def test_interpret_dantzig_inconclusive_hole(i2):
    reading = interpret_dantzig(i2, la.unit(4, 1))
    assert reading.tag == INCONCLUSIVE
    assert reading.t == 0 and reading.last_payoff == 0


def test_interpret_dantzig_no_optimum_evidence(i3):
    reading = interpret_dantzig(i3, la.vec([1, 0, 0]))
    assert reading.tag == NO_OPTIMUM_EVIDENCE
    assert reading.last_payoff < 0
    assert reading.dual_unbounded_if_feasible


def test_interpret_dantzig_rejects_non_optimal_strategy(i1):
    with pytest.raises(NotOptimalStrategy):
        interpret_dantzig(i1, la.vec([1, 0, 0]))
    with pytest.raises(NotOptimalStrategy):
        interpret_dantzig(i1, la.vec([1, 1, 0]))


def test_bound_m_formula(i1, i3):
    assert bound_M(i3) == 19
    assert bound_M(i1) == 487
    assert bound_M(IneqLP.from_rows([[0]], [0], [0])) == 1


def test_scale_factors():
    lp = IneqLP.from_rows([["1/2"]], ["1/3"], [1])
    assert scale_factors(lp) == [3, 6, 2]


def test_build_bm_shape_and_last_row(i1):
    B = build_bm(i1, 7).payoff
    assert B.shape == (4, 3)
    assert la.vec_to_strs(B[3, :]) == ["1", "1", "-7"]


def test_build_dm_matches_build_bm(i3):
    C, d = lp_to_skew_system(i3)
    assert la.mat_equal(build_dm(C, d, 19).payoff, build_bm(i3, 19).payoff)


def test_build_dm_preconditions(i3):
    C, d = lp_to_skew_system(i3)
    with pytest.raises(NotSkewSymmetric):
        build_dm(la.mat([[1, 0], [0, 0]]), d, 19)
    with pytest.raises(BoundTooSmall):
        build_dm(C, d, Fraction(1, 2))


def test_solve_via_bm_optimal(i1):
    verdict, value = solve_lp_via_bm(i1)
    assert value == 0
    assert verdict.tag == OPTIMAL_PAIR
    assert verdict.value == Fraction(3, 2)
    assert la.vec_to_strs(verdict.x) == ["1/2"]
    assert la.vec_to_strs(verdict.y) == ["3/2"]


def test_solve_via_bm_on_hole_instance(i2):
    verdict, value = solve_lp_via_bm(i2)
    assert value == 0
    assert verdict.tag == OPTIMAL_PAIR
    assert verdict.value == 1


def test_solve_via_bm_infeasible_game_value(i3):
    verdict, value = solve_lp_via_bm(i3, M=19)
    assert verdict.tag == NO_OPTIMUM
    assert value == Fraction(1, 21)
    assert check_lp_verdict(i3, verdict).passed
    w = min_slack_w(i3)
    assert w == 1
    assert w == (19 + 1) / (1 / value - 1)


def test_solve_via_bm_rejects_small_m(i1):
    assert tight_bound_M(i1) >= 1
    with pytest.raises(BoundTooSmall):
        solve_lp_via_bm(i1, M=Fraction(1, 2))


def test_min_slack_w_feasible(i1, i2):
    assert min_slack_w(i1) == 0
    assert min_slack_w(i2) == 0


def test_solve_via_farkas(i1, i3):
    assert solve_lp_via_farkas(i1).value == Fraction(3, 2)
    assert solve_lp_via_farkas(i3).tag == NO_OPTIMUM


def test_solve_direct(i1, i3):
    assert solve_lp_direct(i1).value == Fraction(3, 2)
    assert solve_lp_direct(i3).tag == NO_OPTIMUM


def test_skew_system_via_dm(i1, i3):
    feasible = solve_skew_system_via_dm(*lp_to_skew_system(i1))
    assert feasible.is_left
    z = feasible.left
    assert la.vec_to_strs(z) == ["3/2", "1/2"]
    infeasible = solve_skew_system_via_dm(*lp_to_skew_system(i3))
    assert not infeasible.is_left


def test_brooks_reny_alpha(i1):
    assert brooks_reny_alpha(i1) == 37
    assert brooks_reny_alpha(IneqLP.from_rows([[0]], [0], [0])) == 1


def test_brooks_reny_feasible(i1):
    verdict, value = solve_lp_via_brooks_reny(i1)
    assert value == 0
    assert verdict.value == Fraction(3, 2)


def test_brooks_reny_infeasible(i3):
    verdict, value = solve_lp_via_brooks_reny(i3)
    assert value > 0
    assert verdict.tag == NO_OPTIMUM
    x, y = verdict.x, verdict.y
    assert all(e <= 0 for e in la.matvec(i3.A, x))
    assert la.all_nonneg(la.vecmat(y, i3.A))
    assert la.dot(i3.c, x) > la.dot(i3.b, y)


def test_brooks_reny_cap(i1):
    with pytest.raises(CapExceeded):
        build_brooks_reny(i1, cap_dim=2)


def test_brooks_reny_zero_lp_gives_zero_pair():
    """零 LP 的賽局報酬全為 0，取 t 最大的 min-max 策略仍得到最優配對 (0, 0)"""
    verdict, value = solve_lp_via_brooks_reny(IneqLP.from_rows([[0]], [0], [0]))
    assert value == 0
    assert verdict.tag == OPTIMAL_PAIR
    assert la.vec_to_strs(verdict.x) == ["0"]
    assert la.vec_to_strs(verdict.y) == ["0"]
    assert verdict.value == 0
