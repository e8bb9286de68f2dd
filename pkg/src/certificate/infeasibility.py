#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
不等式系統 Ax <= b (x 自由) 的不可行性判定

- Fourier-Motzkin 消去法，追蹤非負列乘數
- 貪婪刪除法求極小不可行子系統，及其嚴格正的憑證與反轉見證
- 極小不可行系統對應等式系統的檢查
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from config.settings import CAP_CONFIG, REPORT_CONFIG
from src.algebra import exact_linalg as la
from src.algebra.exact_linalg import Alternative, Mat, Vec, ZERO
from src.certificate.certificates import verify_alternative
from src.solver.simplex_core import solve_feasibility
from src.utils.errors import CapExceeded, CertificateError, DimensionError, FeasibleInput
from src.utils.verification import VerificationReport

logger = logging.getLogger(__name__)


@dataclass
class _Row:
    """a·x <= rhs，由原始列以 multipliers 非負組合而成"""
    coeffs: Tuple[Fraction, ...]
    rhs: Fraction
    multipliers: Tuple[Fraction, ...]

    def key(self) -> Tuple[Tuple[Fraction, ...], Fraction]:
        return self.coeffs, self.rhs


@dataclass
class IISResult:
    """極小不可行子系統"""
    row_subset: Tuple[int, ...]
    certificate: Vec
    reversal_witnesses: Dict[int, Vec] = field(default_factory=dict)


def _check_shape(A: Mat, b: Vec) -> None:
    if len(b) != A.shape[0]:
        raise DimensionError(f"A 為 {A.shape[0]}x{A.shape[1]}，b 維度 {len(b)}")


def ineq_feasible(A: Mat, b: Vec) -> Optional[Vec]:
    """單純形法判定 Ax <= b (x 自由) 的可行性"""
    n = A.shape[1]
    return solve_feasibility(A_ub=A, b_ub=b, free=[True] * n, n_vars=n)


# ---------------------------------------------------------------------------
# Fourier-Motzkin
# ---------------------------------------------------------------------------

def _contradiction(rows: List[_Row]) -> Optional[_Row]:
    for r in rows:
        if r.rhs < 0 and all(a == 0 for a in r.coeffs):
            return r
    return None


def _combine(p: _Row, q: _Row, k: int) -> _Row:
    sp = 1 / p.coeffs[k]
    sq = 1 / -q.coeffs[k]
    return _Row(
        tuple(a * sp + b * sq for a, b in zip(p.coeffs, q.coeffs)),
        p.rhs * sp + q.rhs * sq,
        tuple(a * sp + b * sq for a, b in zip(p.multipliers, q.multipliers)),
    )


def _dedupe(rows: List[_Row]) -> List[_Row]:
    seen = set()
    out = []
    for r in rows:
        if r.key() not in seen:
            seen.add(r.key())
            out.append(r)
    return out


def _back_substitute(stages: List[List[_Row]], n: int) -> Vec:
    """
    由最後一個變數往回決定 x_k

    區間兩端有界取中點，單側有界取該界，無界取 0。
    """
    x = la.zeros(n)
    for k in range(n - 1, -1, -1):
        lower, upper = None, None
        for r in stages[k]:
            a = r.coeffs[k]
            if a == 0:
                continue
            rest = sum((r.coeffs[j] * x[j] for j in range(k + 1, n)), ZERO)
            bound = (r.rhs - rest) / a
            if a > 0:
                upper = bound if upper is None else min(upper, bound)
            else:
                lower = bound if lower is None else max(lower, bound)
        if lower is not None and upper is not None:
            x[k] = (lower + upper) / 2
        elif upper is not None:
            x[k] = upper
        elif lower is not None:
            x[k] = lower
    return x


def fourier_motzkin(A: Mat, b: Vec, row_cap: int = CAP_CONFIG['fm_row_cap']) -> Alternative:
    """
    Fourier-Motzkin 消去法 (由左至右消去變數)

    Returns:
        Left x: Ax <= b 的可行點；Right y: y >= 0, yᵀA = 0ᵀ, yᵀb < 0
    """
    A = la.mat(A)
    b = la.vec(b)
    _check_shape(A, b)
    m, n = A.shape
    data = {'A': A, 'b': b}

    rows = [
        _Row(tuple(A[i, :]), b[i], tuple(la.unit(m, i)))
        for i in range(m)
    ]
    stages: List[List[_Row]] = []
    for k in range(n + 1):
        bad = _contradiction(rows)
        if bad is not None:
            y = la.vec(bad.multipliers)
            logger.debug(f"FM: 消去 {k} 個變數後得到 0 <= {bad.rhs}")
            alt = Alternative('farkas_ineq_free', right=y, data=data)
            verify_alternative(alt).require('fourier_motzkin')
            return alt
        if k == n:
            break

        stages.append(rows)
        pos = [r for r in rows if r.coeffs[k] > 0]
        neg = [r for r in rows if r.coeffs[k] < 0]
        kept = [r for r in rows if r.coeffs[k] == 0]
        if len(kept) + len(pos) * len(neg) > row_cap:
            raise CapExceeded('Fourier-Motzkin 列數', row_cap, len(kept) + len(pos) * len(neg))
        rows = _dedupe(kept + [_combine(p, q, k) for p in pos for q in neg])
        logger.debug(f"FM: 消去 x_{k}，正 {len(pos)}，負 {len(neg)}，剩 {len(rows)} 列")

    x = _back_substitute(stages, n)
    alt = Alternative('farkas_ineq_free', left=x, data=data)
    verify_alternative(alt).require('fourier_motzkin')
    return alt


# ---------------------------------------------------------------------------
# 極小不可行子系統
# ---------------------------------------------------------------------------

def _subsystem(A: Mat, b: Vec, rows: Sequence[int]) -> Tuple[Mat, Vec]:
    return la.select(A, rows, range(A.shape[1])), la.vec(b[list(rows)] if rows else [])


def check_iis(A: Mat, b: Vec, result: IISResult) -> VerificationReport:
    m, n = A.shape
    base = REPORT_CONFIG['index_base']
    S = list(result.row_subset)
    y = result.certificate
    report = VerificationReport()

    A_S, b_S = _subsystem(A, b, S)
    report.add('subsystem_infeasible', ineq_feasible(A_S, b_S) is None)
    for i in S:
        rest = [k for k in S if k != i]
        report.add(f"drop_row_{i + base}_feasible", ineq_feasible(*_subsystem(A, b, rest)) is not None)
    report.add('yA=0', la.is_zero_vec(la.vecmat(y, A)))
    report.add('yb<0', la.dot(y, b) < 0)
    report.add('y_support', all((y[i] > 0) == (i in S) for i in range(m)) and la.all_nonneg(y))
    for i, x in result.reversal_witnesses.items():
        z = la.sub(la.matvec(A, x), b)
        tight = all(z[k] == 0 for k in S if k != i)
        report.add(f"reversal_row_{i + base}", tight and z[i] > 0 and y[i] * z[i] == 1,
                   f"z={la.rat_to_str(z[i])}")
    return report


def shrink_minimal_infeasible(A: Mat, b: Vec) -> IISResult:
    """
    貪婪刪除法：依索引由小到大，若刪除某列後仍不可行就刪除

    憑證由 yᵀ[A_S  -b_S] = (0ᵀ, 1) 解出並補零；
    反轉見證 x^(i) 解 a_k x = b_k (k ≠ i)，且 a_i x^(i) > b_i。
    """
    A = la.mat(A)
    b = la.vec(b)
    _check_shape(A, b)
    m, n = A.shape
    if ineq_feasible(A, b) is not None:
        raise FeasibleInput("系統 Ax <= b 可行，沒有不可行子系統")

    keep = list(range(m))
    for i in range(m):
        trial = [k for k in keep if k != i]
        if ineq_feasible(*_subsystem(A, b, trial)) is None:
            keep = trial
            logger.debug(f"IIS: 刪除第 {i} 列")

    A_S, b_S = _subsystem(A, b, keep)
    target = la.unit(n + 1, n)
    solved = la.solve_or_refute(la.transpose(la.hstack(A_S, la.column(la.neg(b_S)))), target)
    if not solved.is_left:
        raise CertificateError("極小不可行系統的等式版本必有 yᵀA=0ᵀ, yᵀb=-1")
    y_S = solved.left
    if not la.all_pos(y_S):
        raise CertificateError("極小不可行系統的憑證必為嚴格正")
    y = la.zeros(m)
    for pos, i in enumerate(keep):
        y[i] = y_S[pos]

    witnesses: Dict[int, Vec] = {}
    for i in keep:
        rest = [k for k in keep if k != i]
        eq = la.solve_or_refute(*_subsystem(A, b, rest))
        if not eq.is_left:
            raise CertificateError(f"刪除第 {i} 個等式後必可解")
        witnesses[i] = eq.left

    result = IISResult(tuple(keep), y, witnesses)
    check_iis(A, b, result).require('shrink_minimal_infeasible')
    logger.info(f"極小不可行子系統: {len(keep)} 列")
    return result


def check_minfeas_equalities(A: Mat, b: Vec) -> VerificationReport:
    """
    檢查極小不可行系統的等式版本

    前提 (Ax <= b 不可行、刪除任一列後可行) 也記錄在報告中；
    之後檢查 Ax = b 不可解，且刪除任一等式後可解。
    """
    A = la.mat(A)
    b = la.vec(b)
    _check_shape(A, b)
    m = A.shape[0]
    base = REPORT_CONFIG['index_base']
    report = VerificationReport()

    report.add('inequalities_infeasible', ineq_feasible(A, b) is None)
    for i in range(m):
        rest = [k for k in range(m) if k != i]
        report.add(f"minimal_row_{i + base}", ineq_feasible(*_subsystem(A, b, rest)) is not None,
                   '刪除後仍不可行，此列可移除')

    report.add('equalities_infeasible', not la.solve_or_refute(A, b).is_left)
    for i in range(m):
        rest = [k for k in range(m) if k != i]
        report.add(f"drop_equality_{i + base}", la.solve_or_refute(*_subsystem(A, b, rest)).is_left)
    return report
