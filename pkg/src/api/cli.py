#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
命令列介面 - 解析問題檔、呼叫函式庫、輸出精確報告

報告為 `key: value` 文字行 (stdout)：有理數一律為 "p/q" 字串，
向量為緊湊 JSON 字串陣列，例如 ["1","1","0"]。診斷訊息只寫到 stderr。

結束碼：0 產生結論，1 輸入錯誤，2 超過上限，3 內部憑證錯誤。
"""

from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple
import argparse
import json
import logging
import os
import sys

from config.settings import CAP_CONFIG, REPORT_CONFIG, SYSTEM_CONFIG
from src.algebra import exact_linalg as la
from src.algebra.exact_linalg import Alternative, Mat, Vec
from src.api.problem_file import ProblemFile, load_problem_file, parse_rational
from src.certificate import certificates as cert
from src.certificate import infeasibility as infeas
from src.game.game_solver import check_game_solution, enumerate_optimal_vertices, solve_game
from src.reduction import reductions as red
from src.utils.errors import CapExceeded, CertificateError, ExactLPError, ParseError
from src.utils.verification import VerificationReport

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_CAP_EXCEEDED = 2
EXIT_INTERNAL_ERROR = 3

# 擇一定理兩側憑證在報告中的名稱
_PAYLOAD_NAMES = {
    'stiemke': ('y', 'x'),
    'skew_system': ('z', 'q'),
}


class Report:
    """依序輸出的 key: value 報告，最後附上驗證紀錄"""

    def __init__(self, command: str):
        self.lines: List[Tuple[str, str]] = [('command', command)]
        self.transcript = VerificationReport()

    def put(self, key: str, value: Any) -> None:
        self.lines.append((key, str(value)))

    def rat(self, key: str, q: Any) -> None:
        self.put(key, la.rat_to_str(q))

    def vector(self, key: str, v: Vec) -> None:
        self.put(key, json.dumps(la.vec_to_strs(v), separators=REPORT_CONFIG['vector_separators']))

    def matrix(self, key: str, M: Mat) -> None:
        rows = [la.vec_to_strs(M[i, :]) for i in range(M.shape[0])]
        self.put(key, json.dumps(rows, separators=REPORT_CONFIG['vector_separators']))

    def indices(self, key: str, idx: Sequence[int]) -> None:
        base = REPORT_CONFIG['index_base']
        self.put(key, json.dumps([i + base for i in sorted(idx)], separators=REPORT_CONFIG['vector_separators']))

    def alternative(self, alt: Alternative) -> None:
        self.put('verdict', alt.tag)
        left_name, right_name = _PAYLOAD_NAMES.get(alt.kind, ('x', 'y'))
        self.vector(left_name if alt.is_left else right_name, alt.payload)
        self.transcript.extend(cert.verify_alternative(alt))

    def render(self) -> str:
        out = [f"{key}: {value}" for key, value in self.lines]
        for check in self.transcript.checks:
            status = 'pass' if check.passed else 'fail'
            detail = f" ({check.detail})" if check.detail else ''
            out.append(f"check.{check.name}: {status}{detail}")
        out.append(f"verification: {'pass' if self.transcript.passed else 'fail'}")
        return '\n'.join(out)


def _lp_verdict(report: Report, lp: red.IneqLP, verdict: red.LpVerdict) -> None:
    report.put('verdict', verdict.tag)
    if verdict.is_optimal:
        report.rat('value', verdict.value)
    report.vector('x', verdict.x)
    report.vector('y', verdict.y)
    if not verdict.is_optimal:
        report.put('primalUnboundedIfFeasible', str(verdict.primal_unbounded_if_feasible).lower())
        report.put('dualUnboundedIfFeasible', str(verdict.dual_unbounded_if_feasible).lower())
    report.transcript.extend(red.check_lp_verdict(lp, verdict))


def _flag_rational(value: Optional[str], field: str,
                   default: Optional[Callable[[], Any]] = None) -> Optional[Any]:
    if value is None:
        return default() if default is not None else None
    return parse_rational(value, field)


def _parse_vector_flag(text: str, field: str) -> Vec:
    tokens = [t for t in text.split(',') if t.strip()]
    return la.vec(parse_rational(t.strip(), f"{field}[{i}]") for i, t in enumerate(tokens))


# ---------------------------------------------------------------------------
# 子命令
# ---------------------------------------------------------------------------

def cmd_solve(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    lp = problem.to_lp()
    report.put('via', args.via)
    if args.via == 'bm':
        M = _flag_rational(args.M, 'M')
        verdict, value = red.solve_lp_via_bm(lp, M)
        report.rat('M', M if M is not None else red.bound_M(lp))
        report.rat('gameValue', value)
    elif args.via == 'brooks-reny':
        verdict, value = red.solve_lp_via_brooks_reny(lp, cap_dim=args.br_dim_cap)
        report.rat('gameValue', value)
    elif args.via == 'farkas':
        verdict = red.solve_lp_via_farkas(lp)
    else:
        verdict = red.solve_lp_direct(lp)
    _lp_verdict(report, lp, verdict)


def cmd_game(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    game = problem.to_game()
    solution = solve_game(game)
    report.rat('value', solution.value)
    report.vector('rowStrategy', solution.row_strategy)
    report.vector('colStrategy', solution.col_strategy)
    report.transcript.extend(check_game_solution(game, solution))
    if args.vertices:
        rows, cols, _ = enumerate_optimal_vertices(game, cap_dim=args.enum_dim_cap)
        report.put('rowVertices', len(rows))
        for k, y in enumerate(rows):
            report.vector(f"rowVertex.{k + 1}", y)
        report.put('colVertices', len(cols))
        for k, x in enumerate(cols):
            report.vector(f"colVertex.{k + 1}", x)


def cmd_reduce(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    lp = problem.to_lp()
    report.put('target', args.target)
    if args.target == 'dantzig':
        game = red.build_dantzig(lp)
    elif args.target == 'bm':
        M = _flag_rational(args.M, 'M', lambda: red.bound_M(lp))
        report.rat('M', M)
        game = red.build_bm(lp, M)
    elif args.target == 'dm':
        C, d = red.lp_to_skew_system(lp)
        M = _flag_rational(args.M, 'M', lambda: red.tight_bound_M(lp))
        report.rat('M', M)
        game = red.build_dm(C, d, M)
    else:
        game, alpha = red.build_brooks_reny(lp, cap_dim=args.br_dim_cap)
        report.rat('alpha', alpha)
    m, n = game.shape
    report.put('shape', f"{m}x{n}")
    report.matrix('payoff', game.payoff)
    if args.target == 'dantzig':
        report.transcript.add('skew_symmetric', la.is_skew_symmetric(game.payoff))


def cmd_bound_m(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    lp = problem.to_lp()
    report.rat('boundM', red.bound_M(lp))
    report.rat('tightBoundM', red.tight_bound_M(lp))
    report.put('scaleFactors', json.dumps([str(f) for f in red.scale_factors(lp)],
                                          separators=REPORT_CONFIG['vector_separators']))


def cmd_farkas(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    report.put('variant', args.variant)
    if args.method == 'dantzig':
        if args.variant != 'ineq_nonneg':
            raise ExactLPError("--method dantzig 只支援 ineq_nonneg")
        alt = cert.farkas_via_dantzig(problem.matrix(), problem.rhs_vector())
    else:
        alt = cert.farkas(problem.matrix(), problem.rhs_vector(), args.variant)
    report.alternative(alt)


def cmd_gordan(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    report.put('method', args.method)
    report.alternative(cert.gordan(problem.matrix(), args.method))


def cmd_ville(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    report.alternative(cert.ville(problem.matrix()))


def cmd_stiemke(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    report.alternative(cert.stiemke(problem.matrix()))


def cmd_tucker(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    A = problem.matrix()
    if args.column is not None:
        j = args.column - REPORT_CONFIG['index_base']
        report.put('column', args.column)
        report.put('variant', args.variant)
        witness = cert.tucker_lemma(A, j, args.variant)
        report.vector('y', witness.y)
        report.vector('x', witness.x)
        if witness.z is not None:
            report.vector('z', witness.z)
        report.transcript.extend(cert.check_tucker_lemma(la.mat(A), j, args.variant, witness))
        return
    report.put('method', args.method)
    part = cert.tucker_theorem(A, args.method, args.gordan_method)
    report.indices('S', part.S)
    report.vector('x', part.x)
    report.vector('y', part.y)
    report.vector('yA', la.vecmat(part.y, A))
    report.transcript.extend(cert.check_tucker_partition(A, part))


def cmd_strict_comp(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    lp = problem.to_lp()
    x, y = cert.strict_complementary_pair(lp)
    report.vector('x', x)
    report.vector('y', y)
    report.transcript.extend(cert.verify_optimal_pair(lp, x, y, strict=True))


def cmd_verify_pair(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    lp = problem.to_lp()
    x = _parse_vector_flag(args.x, 'x') if args.x is not None else problem.x
    y = _parse_vector_flag(args.y, 'y') if args.y is not None else problem.y
    if x is None or y is None:
        raise ParseError("需要 x 與 y (問題檔欄位或 --x/--y)", field='x' if x is None else 'y')
    result = cert.verify_optimal_pair(lp, x, y, strict=args.strict)
    report.put('strict', str(args.strict).lower())
    report.put('verdict', 'Pass' if result.passed else 'Fail')
    if result.first_failure is not None:
        report.put('firstFailure', result.first_failure.name)
    report.transcript.extend(result)


def cmd_min_infeasible(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    A, b = la.mat(problem.matrix()), problem.rhs_vector()
    result = infeas.shrink_minimal_infeasible(A, b)
    report.indices('rows', result.row_subset)
    report.vector('y', result.certificate)
    base = REPORT_CONFIG['index_base']
    for i in result.row_subset:
        report.vector(f"witness.{i + base}", result.reversal_witnesses[i])
    report.transcript.extend(infeas.check_iis(A, b, result))
    sub = list(result.row_subset)
    report.transcript.extend(
        infeas.check_minfeas_equalities(la.select(A, sub, range(A.shape[1])), la.vec(b[sub])),
        prefix='equalities.',
    )


def cmd_minfeas_check(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    result = infeas.check_minfeas_equalities(problem.matrix(), problem.rhs_vector())
    report.put('verdict', 'Pass' if result.passed else 'Fail')
    if result.first_failure is not None:
        report.put('firstFailure', result.first_failure.name)
    report.transcript.extend(result)


def cmd_fm(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    report.alternative(infeas.fourier_motzkin(problem.matrix(), problem.rhs_vector(),
                                              row_cap=args.fm_row_cap))


def cmd_min_slack_w(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    lp = problem.to_lp()
    w = red.min_slack_w(lp)
    report.rat('w', w)
    if args.M is not None:
        M = _flag_rational(args.M, 'M')
        if M <= 0:
            raise ExactLPError(f"M 必須為正，收到 {la.rat_to_str(M)}")
        report.rat('M', M)
        report.rat('gameValue', w / (M + 1 + w))


def cmd_dm_solve(problem: ProblemFile, args: argparse.Namespace, report: Report) -> None:
    lp = problem.to_lp()
    C, d = red.lp_to_skew_system(lp)
    M = _flag_rational(args.M, 'M', lambda: red.tight_bound_M(lp))
    report.rat('M', M)
    report.alternative(red.solve_skew_system_via_dm(C, d, M))


COMMANDS: Dict[str, Callable[[ProblemFile, argparse.Namespace, Report], None]] = {
    'solve': cmd_solve,
    'game': cmd_game,
    'reduce': cmd_reduce,
    'bound-m': cmd_bound_m,
    'farkas': cmd_farkas,
    'gordan': cmd_gordan,
    'ville': cmd_ville,
    'stiemke': cmd_stiemke,
    'tucker': cmd_tucker,
    'strict-comp': cmd_strict_comp,
    'verify-pair': cmd_verify_pair,
    'min-infeasible': cmd_min_infeasible,
    'minfeas-check': cmd_minfeas_check,
    'fm': cmd_fm,
    'min-slack-w': cmd_min_slack_w,
    'dm-solve': cmd_dm_solve,
}


# ---------------------------------------------------------------------------
# 參數解析
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('problem', help='JSON 問題檔路徑')
    common.add_argument('--log-level', default=SYSTEM_CONFIG['log_level'],
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help=f"日誌級別 (預設: {SYSTEM_CONFIG['log_level']})")
    common.add_argument('--export', metavar='PATH',
                        help='將驗證紀錄匯出為 CSV')
    common.add_argument('--fm-row-cap', type=int, default=CAP_CONFIG['fm_row_cap'],
                        help=f"Fourier-Motzkin 列數上限 (預設: {CAP_CONFIG['fm_row_cap']})")
    common.add_argument('--br-dim-cap', type=int, default=CAP_CONFIG['br_dim_cap'],
                        help=f"Brooks-Reny 賽局 m+n+1 上限 (預設: {CAP_CONFIG['br_dim_cap']})")
    common.add_argument('--enum-dim-cap', type=int, default=CAP_CONFIG['enum_dim_cap'],
                        help=f"頂點窮舉 m+n 上限 (預設: {CAP_CONFIG['enum_dim_cap']})")

    parser = argparse.ArgumentParser(description='精確有理數 LP 對偶、零和賽局與擇一定理工具')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('solve', parents=[common], help='求解 LP (最優解配對或不可行證據)')
    p.add_argument('--via', choices=['bm', 'farkas', 'brooks-reny', 'direct'], default='bm',
                   help='求解途徑: bm(擴充賽局), farkas, brooks-reny, direct(單純形法) (預設: bm)')
    p.add_argument('--M', help='B_M 的 M (預設: bound_M)')

    p = sub.add_parser('game', parents=[common], help='求解零和賽局')
    p.add_argument('--vertices', action='store_true', help='列舉所有頂點最優策略')

    p = sub.add_parser('reduce', parents=[common], help='輸出歸約後的賽局矩陣')
    p.add_argument('--target', choices=['dantzig', 'bm', 'dm', 'brooks-reny'], default='dantzig',
                   help='目標賽局 (預設: dantzig)')
    p.add_argument('--M', help='B_M / D_M 的 M')

    sub.add_parser('bound-m', parents=[common], help='M 的界與縮放因子')

    p = sub.add_parser('farkas', parents=[common], help='Farkas 擇一定理')
    p.add_argument('--variant', choices=list(cert.FARKAS_VARIANTS), default='ineq_nonneg',
                   help='形式 (預設: ineq_nonneg)')
    p.add_argument('--method', choices=['lp', 'dantzig'], default='lp',
                   help='lp(輔助 LP) 或 dantzig(反對稱 Tucker) (預設: lp)')

    p = sub.add_parser('gordan', parents=[common], help='Gordan 擇一定理')
    p.add_argument('--method', choices=list(cert.GORDAN_METHODS), default='via_ville',
                   help='via_ville 或 via_stiemke (預設: via_ville)')

    sub.add_parser('ville', parents=[common], help='Ville 擇一定理')
    sub.add_parser('stiemke', parents=[common], help='Stiemke 擇一定理')

    p = sub.add_parser('tucker', parents=[common], help='Tucker 定理 / 引理')
    p.add_argument('--method', choices=list(cert.TUCKER_METHODS), default='summation',
                   help='summation 或 elimination (預設: summation)')
    p.add_argument('--gordan-method', choices=list(cert.GORDAN_METHODS), default='via_ville',
                   help='elimination 使用的 Gordan 方法')
    p.add_argument('--column', type=int, help='指定行 J (從 1 起算) 時改用 Tucker 引理')
    p.add_argument('--variant', choices=list(cert.TUCKER_VARIANTS), default='eq',
                   help='Tucker 引理形式 (預設: eq)')

    sub.add_parser('strict-comp', parents=[common], help='嚴格互補最優解配對')

    p = sub.add_parser('verify-pair', parents=[common], help='驗證最優解配對')
    p.add_argument('--x', help='以逗號分隔的有理數，例如 1/2,0')
    p.add_argument('--y', help='以逗號分隔的有理數')
    p.add_argument('--strict', action='store_true', help='同時檢查嚴格互補')

    sub.add_parser('min-infeasible', parents=[common], help='極小不可行子系統')
    sub.add_parser('minfeas-check', parents=[common], help='檢查極小不可行系統的等式版本')
    sub.add_parser('fm', parents=[common], help='Fourier-Motzkin 消去法')

    p = sub.add_parser('min-slack-w', parents=[common], help='最小鬆弛 w')
    p.add_argument('--M', help='同時換算 B_M 的賽局值 w/(M+1+w)')

    p = sub.add_parser('dm-solve', parents=[common], help='以 D_M 判定反對稱系統')
    p.add_argument('--M', help='D_M 的 M (預設: 緊界)')

    return parser


def _configure_logging(level: str) -> None:
    logging.basicConfig(format=SYSTEM_CONFIG['log_format'], stream=sys.stderr)
    logging.getLogger().setLevel(getattr(logging, level))


def _export(report: Report, path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    report.transcript.export_csv(path)


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """
    執行一個子命令並將報告印到 stdout

    Returns:
        結束碼 (0 產生結論，1 輸入錯誤，2 超過上限，3 內部憑證錯誤)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT_ERROR

    _configure_logging(args.log_level)
    report = Report(args.command)
    try:
        problem = load_problem_file(args.problem)
        COMMANDS[args.command](problem, args, report)
    except CapExceeded as e:
        print(f"❌ 超過上限: {e}", file=sys.stderr)
        return EXIT_CAP_EXCEEDED
    except ExactLPError as e:
        print(f"❌ 輸入錯誤: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except OSError as e:
        print(f"❌ 無法讀取問題檔: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except CertificateError as e:
        logger.error(f"內部憑證錯誤: {e}")
        print(f"❌ 內部憑證錯誤: {e}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR

    if args.export:
        try:
            _export(report, args.export)
        except OSError as e:
            print(f"❌ 無法匯出驗證紀錄: {e}", file=sys.stderr)
            return EXIT_INPUT_ERROR
    print(report.render())
    logger.info(f"{args.command} 完成")
    return EXIT_OK


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
