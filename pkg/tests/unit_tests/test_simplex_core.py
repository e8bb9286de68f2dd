#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
精確單純形法測試
"""

from fractions import Fraction
import dataclasses

import pytest

from src.algebra import exact_linalg as la
from src.reduction.reductions import lp_to_skew_system
from src.solver.simplex_core import (
    EQ, GE, INFEASIBLE, LE, OPTIMAL, UNBOUNDED, GeneralLP, SimplexOutcome, basic_min_w,
    check_infeasibility_certificate, check_optimal, check_unbounded, is_basic,
    lp_equality_matrix, reduce_to_basic, simplex_solve, solve_feasibility,
)
from src.utils.errors import DimensionError, ExactLPError, NotSkewSymmetric


def test_optimal_single_variable():
    lp = GeneralLP(la.vec([3]), la.mat([[2]]), [LE], la.vec([1]))
    outcome = simplex_solve(lp)
    assert outcome.status == OPTIMAL
    assert outcome.value == Fraction(3, 2)
    assert la.vec_to_strs(outcome.x) == ["1/2"]
    assert la.vec_to_strs(outcome.y) == ["3/2"]


def test_infeasible_returns_certificate():
    lp = GeneralLP(la.vec([1]), la.mat([[1]]), [LE], la.vec([-1]))
    outcome = simplex_solve(lp)
    assert outcome.status == INFEASIBLE
    assert check_infeasibility_certificate(lp, outcome.farkas).passed
    assert la.vec_to_strs(outcome.farkas) == ["1"]


def test_unbounded_returns_ray():
    lp = GeneralLP(la.vec([1]), la.mat([[-1]]), [LE], la.vec([1]))
    outcome = simplex_solve(lp)
    assert outcome.status == UNBOUNDED
    assert check_unbounded(lp, outcome.point, outcome.ray).passed
    assert outcome.ray[0] > 0


def test_minimize_with_ge_rows():
    lp = GeneralLP(la.vec([1, 1]), la.mat([[1, 2], [2, 1]]), [GE, GE], la.vec([2, 2]),
                   maximize=False)
    outcome = simplex_solve(lp)
    assert outcome.is_optimal
    assert outcome.value == Fraction(4, 3)
    assert la.vec_to_strs(outcome.x) == ["2/3", "2/3"]
    assert la.all_nonneg(outcome.y)
    assert check_optimal(lp, outcome.x, outcome.y, outcome.value).passed


def test_free_variable_goes_negative():
    lp = GeneralLP(la.vec([-1]), la.mat([[1]]), [GE], la.vec([-2]), free=[True])
    outcome = simplex_solve(lp)
    assert outcome.is_optimal
    assert outcome.x[0] == -2
    assert outcome.value == 2


def test_redundant_equality_rows():
    lp = GeneralLP(la.vec([1, 0]), la.mat([[1, 1], [2, 2]]), [EQ, EQ], la.vec([1, 2]))
    outcome = simplex_solve(lp)
    assert outcome.is_optimal
    assert outcome.value == 1
    assert check_optimal(lp, outcome.x, outcome.y, outcome.value).passed


def test_general_lp_validation():
    with pytest.raises(DimensionError):
        GeneralLP(la.vec([1, 2]), la.mat([[1]]), [LE], la.vec([1]))
    with pytest.raises(ExactLPError):
        GeneralLP(la.vec([1]), la.mat([[1]]), ['<'], la.vec([1]))


def test_solve_feasibility():
    assert solve_feasibility(A_ub=la.mat([[1]]), b_ub=la.vec([-1])) is None
    x = solve_feasibility(A_ub=la.mat([[1]]), b_ub=la.vec([-1]), free=[True])
    assert x is not None and x[0] <= -1
    assert solve_feasibility(A_eq=la.mat([[1, 1]]), b_eq=la.vec([1])) is not None


def test_reduce_to_basic_lowers_objective():
    A, b = la.mat([[1, 1, 1]]), la.vec([1])
    x = la.vec(["1/3", "1/3", "1/3"])
    c = la.vec([1, 2, 3])
    result = reduce_to_basic(A, b, x, c)
    assert is_basic(A, result.x)
    assert la.vec_equal(la.matvec(A, result.x), b)
    assert la.dot(c, result.x) <= la.dot(c, x)
    assert la.vec_to_strs(result.x) == ["1", "0", "0"]
    assert result.basis == (0,)


def test_reduce_to_basic_rejects_infeasible_point():
    with pytest.raises(ExactLPError):
        reduce_to_basic(la.mat([[1, 1]]), la.vec([1]), la.vec([1, 1]))


def test_basic_min_w_on_primal_infeasible_lp(i3):
    C, d = lp_to_skew_system(i3)
    basic, w = basic_min_w(C, d)
    assert w == 1
    assert basic.x[-1] == 1


def test_basic_min_w_on_feasible_lp(i1):
    _, w = basic_min_w(*lp_to_skew_system(i1))
    assert w == 0


def test_basic_min_w_requires_skew_matrix():
    with pytest.raises(NotSkewSymmetric):
        basic_min_w(la.mat([[1]]), la.vec([0]))


def test_optimal_outputs_are_basic(random_lps):
    """單純形法的最優解 (含鬆弛) 在 [A I] 中的支撐行線性獨立"""
    for lp in random_lps(60, seed=31, max_m=4, max_n=4):
        outcome = simplex_solve(lp.primal())
        if not outcome.is_optimal:
            continue
        slack = la.sub(lp.b, la.matvec(lp.A, outcome.x))
        assert is_basic(lp_equality_matrix(lp.A), la.concat(outcome.x, slack))


def test_simplex_outcome_fields():
    """SimplexOutcome 只保留實際使用的欄位"""
    names = {f.name for f in dataclasses.fields(SimplexOutcome)}
    assert names == {'status', 'x', 'y', 'value', 'farkas', 'point', 'ray', 'basic'}
