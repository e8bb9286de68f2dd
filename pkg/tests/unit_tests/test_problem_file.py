#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
問題檔解析測試
"""

from fractions import Fraction

import pytest

from config.settings import get_problem_path
from src.algebra import exact_linalg as la
from src.api.problem_file import load_problem_file, parse_problem_file, parse_rational
from src.utils.errors import DimensionError, ParseError


def test_load_i1():
    problem = load_problem_file(get_problem_path('i1_optimal.json'))
    lp = problem.to_lp()
    assert (lp.m, lp.n) == (1, 1)
    assert la.vec_to_strs(problem.x) == ["1/2"]
    assert la.vec_to_strs(problem.y) == ["3/2"]


def test_load_i4_game():
    problem = load_problem_file(get_problem_path('i4_game.json'))
    assert problem.to_game().payoff.shape == (2, 3)


def test_system_rhs_and_matrix():
    problem = load_problem_file(get_problem_path('i6_infeasible_system.json'))
    assert problem.matrix().shape == (3, 1)
    assert la.vec_to_strs(problem.rhs_vector()) == ["0", "-1", "5"]
    no_rhs = load_problem_file(get_problem_path('i5_tucker.json'))
    with pytest.raises(DimensionError):
        no_rhs.rhs_vector()


def test_missing_field_is_dimension_error():
    with pytest.raises(DimensionError):
        parse_problem_file('{"kind": "lp", "A": [["1"]], "b": ["1"]}')


def test_decimal_rejected_with_field():
    text = '{\n  "kind": "lp",\n  "A": [["1.5"]],\n  "b": ["1"],\n  "c": ["1"]\n}'
    with pytest.raises(ParseError) as info:
        parse_problem_file(text)
    assert info.value.field == 'A[0][0]'
    assert info.value.line == 3


@pytest.mark.parametrize("token", [1.0, True, "1e3", "1/0", "", "x"])
def test_parse_rational_rejects(token):
    with pytest.raises(ParseError):
        parse_rational(token, 'b')


@pytest.mark.parametrize("token, expected", [
    (3, Fraction(3)),
    ("-2/4", Fraction(-1, 2)),
    ("+7", Fraction(7)),
])
def test_parse_rational_accepts(token, expected):
    assert parse_rational(token, 'b') == expected


def test_unknown_field_rejected():
    with pytest.raises(ParseError) as info:
        parse_problem_file('{"kind": "game", "payoff": [["1"]], "name": "x"}')
    assert info.value.field == 'name'


def test_unknown_kind_rejected():
    with pytest.raises(ParseError):
        parse_problem_file('{"kind": "qp"}')


def test_bad_json_reports_line():
    with pytest.raises(ParseError) as info:
        parse_problem_file('{\n  "kind": "lp",\n  "A": [[\n}')
    assert info.value.line is not None and info.value.line >= 3


def test_ragged_rows_rejected():
    with pytest.raises(DimensionError):
        parse_problem_file('{"kind": "system", "rows": [["1", "2"], ["3"]]}')


def test_rhs_length_checked():
    with pytest.raises(DimensionError):
        parse_problem_file('{"kind": "system", "rows": [["1"]], "rhs": ["1", "2"]}')


def test_lp_point_length_checked():
    with pytest.raises(DimensionError):
        parse_problem_file('{"kind": "lp", "A": [["1"]], "b": ["1"], "c": ["1"], "x": ["1", "2"]}')


def test_non_utf8_file_is_parse_error(tmp_path):
    """無效的 UTF-8 轉為 ParseError 並附上行號"""
    bad = tmp_path / 'bad.json'
    bad.write_bytes(b'{\n"kind": "\xff"}')
    with pytest.raises(ParseError) as info:
        load_problem_file(str(bad))
    assert info.value.line == 2
