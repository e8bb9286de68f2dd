#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
共用測試夾具：標準案例 I1-I6 與可重現的隨機案例產生器
"""

from fractions import Fraction
from typing import Callable, List, Tuple
import random

import pytest

from src.algebra import exact_linalg as la
from src.reduction.reductions import IneqLP

# 隨機元素取自 {-3, ..., 3} 與其半數
ENTRY_POOL = [Fraction(k, 2) for k in range(-6, 7)]


def random_matrix(rng: random.Random, m: int, n: int) -> la.Mat:
    return la.mat([[rng.choice(ENTRY_POOL) for _ in range(n)] for _ in range(m)], n_cols=n)


def random_vector(rng: random.Random, n: int) -> la.Vec:
    return la.vec(rng.choice(ENTRY_POOL) for _ in range(n))


def random_lp(rng: random.Random, max_m: int, max_n: int) -> IneqLP:
    m = rng.randint(1, max_m)
    n = rng.randint(1, max_n)
    return IneqLP(random_matrix(rng, m, n), random_vector(rng, m), random_vector(rng, n))


@pytest.fixture
def i1() -> IneqLP:
    """兩側皆可行，最優值 3/2"""
    return IneqLP.from_rows([[2]], [1], [3])


@pytest.fixture
def i2() -> IneqLP:
    """maximize x2 s.t. x2 <= 1：Dantzig 賽局有全零的列與行"""
    return IneqLP.from_rows([[0, 1]], [1], [0, 1])


@pytest.fixture
def i3() -> IneqLP:
    """原問題不可行，對偶問題可行且無界"""
    return IneqLP.from_rows([[1]], [-1], [1])


@pytest.fixture
def i4_payoff() -> la.Mat:
    return la.mat([[1, 2, 0], [1, 0, 2]])


@pytest.fixture
def i5() -> la.Mat:
    return la.mat([[1, -1, 0], [0, 0, 1]])


@pytest.fixture
def i6() -> Tuple[la.Mat, la.Vec]:
    """x <= 0, -x <= -1, x <= 5"""
    return la.mat([[1], [-1], [1]]), la.vec([0, -1, 5])


@pytest.fixture
def random_lps() -> Callable[..., List[IneqLP]]:
    def make(count: int, seed: int = 2024, max_m: int = 3, max_n: int = 3) -> List[IneqLP]:
        rng = random.Random(seed)
        return [random_lp(rng, max_m, max_n) for _ in range(count)]
    return make


@pytest.fixture
def random_matrices() -> Callable[..., List[la.Mat]]:
    def make(count: int, seed: int = 7, max_m: int = 4, max_n: int = 4) -> List[la.Mat]:
        rng = random.Random(seed)
        return [random_matrix(rng, rng.randint(1, max_m), rng.randint(1, max_n))
                for _ in range(count)]
    return make


@pytest.fixture
def random_systems() -> Callable[..., List[Tuple[la.Mat, la.Vec]]]:
    def make(count: int, seed: int = 11, max_m: int = 4, max_n: int = 3) -> List[Tuple[la.Mat, la.Vec]]:
        rng = random.Random(seed)
        out = []
        for _ in range(count):
            m, n = rng.randint(1, max_m), rng.randint(1, max_n)
            out.append((random_matrix(rng, m, n), random_vector(rng, m)))
        return out
    return make
