#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
精確線性代數測試
"""

from fractions import Fraction

import pytest

from src.algebra import exact_linalg as la
from src.utils.errors import CertificateError, DimensionError, ExactLPError


def test_to_rat_accepts_exact_values():
    assert la.to_rat("3/6") == Fraction(1, 2)
    assert la.to_rat(-4) == Fraction(-4)
    assert la.to_rat(Fraction(2, 3)) == Fraction(2, 3)


@pytest.mark.parametrize("bad", [0.5, True, None, "abc", "1/0"])
def test_to_rat_rejects_inexact_values(bad):
    with pytest.raises(ExactLPError):
        la.to_rat(bad)


def test_mat_rejects_ragged_rows():
    with pytest.raises(DimensionError):
        la.mat([[1, 2], [3]])


def test_empty_matrix_keeps_column_count():
    A = la.mat([], n_cols=3)
    assert A.shape == (0, 3)
    assert la.rank(A) == 0


def test_rat_to_str_is_canonical():
    assert la.rat_to_str(Fraction(-3, 6)) == "-1/2"
    assert la.rat_to_str(4) == "4"
    assert la.vec_to_strs(la.vec([0, "2/4"])) == ["0", "1/2"]


def test_products_with_empty_inner_dimension():
    assert la.vec_equal(la.matvec(la.zeros_mat(2, 0), la.zeros(0)), la.zeros(2))
    assert la.vec_equal(la.vecmat(la.zeros(0), la.zeros_mat(0, 3)), la.zeros(3))
    assert la.matmul(la.zeros_mat(2, 0), la.zeros_mat(0, 2)).shape == (2, 2)


def test_stack_dimension_checks():
    with pytest.raises(DimensionError):
        la.hstack(la.zeros_mat(2, 1), la.zeros_mat(3, 1))
    with pytest.raises(DimensionError):
        la.vstack(la.zeros_mat(1, 2), la.zeros_mat(1, 3))


def test_rank_and_independent_rows():
    A = la.mat([[1, 2], [2, 4], [0, 1]])
    assert la.rank(A) == 2
    assert la.independent_rows(A) == [0, 2]


def test_nullspace_basis():
    basis = la.nullspace_basis(la.mat([[1, -1, 0], [0, 0, 1]]))
    assert len(basis) == 1
    assert la.vec_to_strs(basis[0]) == ["1", "1", "0"]


def test_rref_does_not_mutate_input():
    A = la.mat([[2, 4], [1, 3]])
    la.rref(A)
    assert la.mat_equal(A, la.mat([[2, 4], [1, 3]]))


def test_inverse_and_singular_matrix():
    inv = la.inverse(la.mat([[2, 1], [1, 1]]))
    assert la.mat_equal(inv, la.mat([[1, -1], [-1, 2]]))
    assert la.inverse(la.mat([[1, 2], [2, 4]])) is None
    assert la.solve_square(la.mat([[1, 2], [2, 4]]), la.vec([1, 1])) is None


def test_solve_or_refute_left():
    alt = la.solve_or_refute(la.mat([[2]]), la.vec([1]))
    assert alt.is_left
    assert la.vec_to_strs(alt.left) == ["1/2"]


def test_solve_or_refute_right():
    A, b = la.mat([[1, 1], [1, 1]]), la.vec([1, 2])
    alt = la.solve_or_refute(A, b)
    assert alt.tag == 'Right'
    assert la.is_zero_vec(la.vecmat(alt.right, A))
    assert la.dot(alt.right, b) == 1


def test_solve_or_refute_empty_system():
    alt = la.solve_or_refute(la.zeros_mat(0, 2), la.zeros(0))
    assert alt.is_left
    assert la.vec_equal(alt.left, la.zeros(2))


def test_solve_or_refute_dimension_mismatch():
    with pytest.raises(DimensionError):
        la.solve_or_refute(la.mat([[1]]), la.vec([1, 2]))


def test_alternative_requires_exactly_one_side():
    with pytest.raises(CertificateError):
        la.Alternative('linear')
    with pytest.raises(CertificateError):
        la.Alternative('linear', left=la.zeros(1), right=la.zeros(1))


def test_support_and_skew_symmetry():
    assert la.support(la.vec([0, 2, -1, "1/3"])) == frozenset({1, 3})
    assert la.is_skew_symmetric(la.mat([[0, 1], [-1, 0]]))
    assert not la.is_skew_symmetric(la.mat([[1, 0], [0, -1]]))
    assert not la.is_skew_symmetric(la.mat([[0, 1, 2]]))


def test_rank_of_transpose_on_random_matrices(random_matrices):
    """列秩等於行秩"""
    for M in random_matrices(60, seed=21):
        assert la.rank(M) == la.rank(la.transpose(M))


def test_nullspace_basis_on_random_matrices(random_matrices):
    """零空間基底向量個數為 n - rank，彼此獨立且 Mv = 0"""
    for M in random_matrices(60, seed=22):
        n = M.shape[1]
        basis = la.nullspace_basis(M)
        assert len(basis) == n - la.rank(M)
        for v in basis:
            assert la.is_zero_vec(la.matvec(M, v))
        if basis:
            assert la.rank(la.mat([list(v) for v in basis], n_cols=n)) == len(basis)


def test_solve_or_refute_dichotomy_on_random_systems(random_systems):
    """Ax = b 有解恰好在 rank(A) = rank([A | b]) 時"""
    for A, b in random_systems(60, seed=23, max_m=4, max_n=4):
        alt = la.solve_or_refute(A, b)
        consistent = la.rank(A) == la.rank(la.hstack(A, la.column(b)))
        assert alt.is_left == consistent
        if alt.is_left:
            assert la.vec_equal(la.matvec(A, alt.left), b)
        else:
            assert la.is_zero_vec(la.vecmat(alt.right, A))
            assert la.dot(alt.right, b) != 0
