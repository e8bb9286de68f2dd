#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
JSON 問題檔解析

三種問題檔：
    lp:     {"kind": "lp", "A": [[...]], "b": [...], "c": [...], "x": [...]?, "y": [...]?}
    game:   {"kind": "game", "payoff": [[...]]}
    system: {"kind": "system", "rows": [[...]], "rhs": [...]?}
所有數值必須是 "p/q" 或整數字串 (或 JSON 整數)；小數與指數一律拒絕。
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional
import json
import logging
import re

from src.algebra import exact_linalg as la
from src.algebra.exact_linalg import Mat, Vec
from src.game.game_solver import ZeroSumGame
from src.reduction.reductions import IneqLP
from src.utils.errors import DimensionError, ParseError

logger = logging.getLogger(__name__)

KINDS = ('lp', 'game', 'system')

_RATIONAL = re.compile(r'^[+-]?\d+(/\d+)?$')

_FIELDS = {
    'lp': {'required': ('A', 'b', 'c'), 'optional': ('x', 'y')},
    'game': {'required': ('payoff',), 'optional': ()},
    'system': {'required': ('rows',), 'optional': ('rhs',)},
}


@dataclass
class ProblemFile:
    """解析後的問題檔"""
    kind: str
    A: Optional[Mat] = None
    b: Optional[Vec] = None
    c: Optional[Vec] = None
    payoff: Optional[Mat] = None
    rows: Optional[Mat] = None
    rhs: Optional[Vec] = None
    x: Optional[Vec] = None
    y: Optional[Vec] = None

    def to_lp(self) -> IneqLP:
        if self.kind != 'lp':
            raise ParseError(f"需要 lp 問題檔，收到 {self.kind}", field='kind')
        return IneqLP(self.A, self.b, self.c)

    def to_game(self) -> ZeroSumGame:
        if self.kind == 'game':
            return ZeroSumGame(self.payoff)
        if self.kind == 'system':
            return ZeroSumGame(self.rows)
        raise ParseError(f"需要 game 或 system 問題檔，收到 {self.kind}", field='kind')

    def matrix(self) -> Mat:
        """system 的 rows、lp 的 A 或 game 的 payoff"""
        return {'lp': self.A, 'game': self.payoff, 'system': self.rows}[self.kind]

    def rhs_vector(self) -> Vec:
        """system 的 rhs 或 lp 的 b"""
        value = self.b if self.kind == 'lp' else self.rhs
        if value is None:
            raise DimensionError(f"{self.kind} 問題檔沒有右端項")
        return value


def _line_of(text: str, key: str) -> Optional[int]:
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def parse_rational(token: Any, field: str, line: Optional[int] = None) -> Fraction:
    """解析單一有理數 ("p/q"、整數字串或 JSON 整數)"""
    if isinstance(token, bool) or isinstance(token, float):
        raise ParseError(f"不接受的數值 {token!r}", line=line, field=field)
    if isinstance(token, int):
        return Fraction(token)
    if not isinstance(token, str) or not _RATIONAL.match(token.strip()):
        raise ParseError(f"數值必須是 'p/q' 或整數: {token!r}", line=line, field=field)
    try:
        return Fraction(token.strip())
    except ZeroDivisionError as e:
        raise ParseError(f"分母為 0: {token!r}", line=line, field=field) from e


def _parse_vector(value: Any, key: str, line: Optional[int]) -> Vec:
    if not isinstance(value, list):
        raise ParseError("必須是陣列", line=line, field=key)
    return la.vec(parse_rational(e, f"{key}[{i}]", line) for i, e in enumerate(value))


def _parse_matrix(value: Any, key: str, line: Optional[int], n_cols: Optional[int] = None) -> Mat:
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise ParseError("必須是二維陣列", line=line, field=key)
    rows: List[List[Fraction]] = [
        [parse_rational(e, f"{key}[{i}][{j}]", line) for j, e in enumerate(r)]
        for i, r in enumerate(value)
    ]
    if rows and n_cols is not None and len(rows[0]) != n_cols:
        raise DimensionError(f"{key} 有 {len(rows[0])} 行，預期 {n_cols}")
    return la.mat(rows, n_cols=n_cols if not rows else None)


def parse_problem_file(text: str) -> ProblemFile:
    """
    嚴格解析問題檔

    Raises:
        ParseError: JSON 格式錯誤、未知欄位或非精確有理數 (附行號與欄位)
        DimensionError: 缺少決定維度的欄位或維度不一致
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"JSON 格式錯誤: {e.msg}", line=e.lineno) from e
    if not isinstance(raw, dict):
        raise ParseError("問題檔必須是 JSON 物件", line=1)

    kind = raw.get('kind')
    if kind not in KINDS:
        raise ParseError(f"kind 必須是 {'/'.join(KINDS)}，收到 {kind!r}",
                         line=_line_of(text, 'kind'), field='kind')
    fields = _FIELDS[kind]
    allowed = {'kind', *fields['required'], *fields['optional']}
    for key in raw:
        if key not in allowed:
            raise ParseError(f"{kind} 問題檔不接受此欄位", line=_line_of(text, key), field=key)
    missing = [key for key in fields['required'] if key not in raw]
    if missing:
        raise DimensionError(f"{kind} 問題檔缺少欄位 {missing}，無法決定維度")

    parsed: Dict[str, Any] = {}
    if kind == 'lp':
        c = _parse_vector(raw['c'], 'c', _line_of(text, 'c'))
        A = _parse_matrix(raw['A'], 'A', _line_of(text, 'A'), n_cols=len(c))
        parsed.update(A=A, b=_parse_vector(raw['b'], 'b', _line_of(text, 'b')), c=c)
        for key in ('x', 'y'):
            if key in raw:
                parsed[key] = _parse_vector(raw[key], key, _line_of(text, key))
        problem = ProblemFile(kind, **parsed)
        lp = problem.to_lp()
        if problem.x is not None and len(problem.x) != lp.n:
            raise DimensionError(f"x 維度 {len(problem.x)}，預期 {lp.n}")
        if problem.y is not None and len(problem.y) != lp.m:
            raise DimensionError(f"y 維度 {len(problem.y)}，預期 {lp.m}")
    elif kind == 'game':
        problem = ProblemFile(kind, payoff=_parse_matrix(raw['payoff'], 'payoff', _line_of(text, 'payoff')))
        problem.to_game()
    else:
        rows = _parse_matrix(raw['rows'], 'rows', _line_of(text, 'rows'))
        rhs = None
        if 'rhs' in raw:
            rhs = _parse_vector(raw['rhs'], 'rhs', _line_of(text, 'rhs'))
            if len(rhs) != rows.shape[0]:
                raise DimensionError(f"rows 有 {rows.shape[0]} 列，rhs 維度 {len(rhs)}")
        problem = ProblemFile(kind, rows=rows, rhs=rhs)

    logger.debug(f"已解析 {kind} 問題檔")
    return problem


def load_problem_file(path: str) -> ProblemFile:
    with open(path, 'rb') as f:
        raw = f.read()
    try:
        text = raw.decode('utf-8')
    except UnicodeDecodeError as e:
        line = raw[:e.start].count(b'\n') + 1
        raise ParseError(f"問題檔不是有效的 UTF-8 (位元組位置 {e.start})", line=line) from e
    return parse_problem_file(text)
