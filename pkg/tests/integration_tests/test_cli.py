#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
命令列介面端到端測試
"""

import pandas as pd
import pytest

from config.settings import get_problem_path
from src.api.cli import EXIT_CAP_EXCEEDED, EXIT_INPUT_ERROR, EXIT_OK, run_command


def _run(capsys, *argv):
    code = run_command(list(argv))
    return code, capsys.readouterr().out.splitlines()


def test_solve_i1(capsys):
    code, lines = _run(capsys, 'solve', get_problem_path('i1_optimal.json'))
    assert code == EXIT_OK
    assert 'verdict: OptimalPair' in lines
    assert 'value: 3/2' in lines
    assert 'x: ["1/2"]' in lines
    assert 'y: ["3/2"]' in lines
    assert lines[-1] == 'verification: pass'


def test_solve_i3_with_explicit_m(capsys):
    code, lines = _run(capsys, 'solve', get_problem_path('i3_primal_infeasible.json'), '--M', '19')
    assert code == EXIT_OK
    assert 'verdict: NoOptimum' in lines
    assert 'gameValue: 1/21' in lines
    assert 'dualUnboundedIfFeasible: true' in lines


@pytest.mark.parametrize("via", ['farkas', 'direct', 'brooks-reny'])
def test_solve_other_routes(capsys, via):
    code, lines = _run(capsys, 'solve', get_problem_path('i1_optimal.json'), '--via', via)
    assert code == EXIT_OK
    assert 'value: 3/2' in lines


def test_min_slack_w(capsys):
    code, lines = _run(capsys, 'min-slack-w', get_problem_path('i3_primal_infeasible.json'),
                       '--M', '19')
    assert code == EXIT_OK
    assert 'w: 1' in lines
    assert 'gameValue: 1/21' in lines


def test_fm_i6(capsys):
    code, lines = _run(capsys, 'fm', get_problem_path('i6_infeasible_system.json'))
    assert code == EXIT_OK
    assert 'verdict: Right' in lines
    assert 'y: ["1","1","0"]' in lines


def test_min_infeasible_i6(capsys):
    code, lines = _run(capsys, 'min-infeasible', get_problem_path('i6_infeasible_system.json'))
    assert code == EXIT_OK
    assert 'rows: [1,2]' in lines
    assert 'witness.1: ["1"]' in lines
    assert 'witness.2: ["0"]' in lines
    assert 'check.equalities.equalities_infeasible: pass' in lines
    assert lines[-1] == 'verification: pass'


def test_game_i4(capsys):
    code, lines = _run(capsys, 'game', get_problem_path('i4_game.json'), '--vertices')
    assert code == EXIT_OK
    assert 'value: 1' in lines
    assert 'rowStrategy: ["1/2","1/2"]' in lines
    assert 'colVertices: 2' in lines


def test_tucker_i5(capsys):
    code, lines = _run(capsys, 'tucker', get_problem_path('i5_tucker.json'))
    assert code == EXIT_OK
    assert 'S: [1,2]' in lines


def test_reduce_dantzig(capsys):
    code, lines = _run(capsys, 'reduce', get_problem_path('i1_optimal.json'))
    assert code == EXIT_OK
    assert 'shape: 3x3' in lines
    assert 'payoff: [["0","2","-1"],["-2","0","3"],["1","-3","0"]]' in lines


def test_bound_m(capsys):
    code, lines = _run(capsys, 'bound-m', get_problem_path('i3_primal_infeasible.json'))
    assert code == EXIT_OK
    assert 'boundM: 19' in lines


def test_verify_pair(capsys):
    path = get_problem_path('i1_optimal.json')
    code, lines = _run(capsys, 'verify-pair', path)
    assert code == EXIT_OK
    assert 'verdict: Pass' in lines
    code, lines = _run(capsys, 'verify-pair', path, '--x', '0')
    assert code == EXIT_OK
    assert 'verdict: Fail' in lines
    assert 'firstFailure: zero_gap' in lines


def test_invalid_problem_file(capsys, tmp_path):
    bad = tmp_path / 'bad.json'
    bad.write_text('{"kind": "lp", "A": [["0.5"]], "b": ["1"], "c": ["1"]}', encoding='utf-8')
    code, lines = _run(capsys, 'solve', str(bad))
    assert code == EXIT_INPUT_ERROR
    assert lines == []


def test_missing_problem_file(capsys, tmp_path):
    code, _ = _run(capsys, 'solve', str(tmp_path / 'missing.json'))
    assert code == EXIT_INPUT_ERROR


def test_wrong_kind_for_command(capsys):
    code, _ = _run(capsys, 'solve', get_problem_path('i4_game.json'))
    assert code == EXIT_INPUT_ERROR


def test_unknown_command():
    assert run_command(['optimize', 'x.json']) == EXIT_INPUT_ERROR


def test_caps_exit_code(capsys):
    code, _ = _run(capsys, 'fm', get_problem_path('i6_infeasible_system.json'), '--fm-row-cap', '1')
    assert code == EXIT_CAP_EXCEEDED
    code, _ = _run(capsys, 'solve', get_problem_path('i1_optimal.json'),
                   '--via', 'brooks-reny', '--br-dim-cap', '2')
    assert code == EXIT_CAP_EXCEEDED


def test_export_csv(capsys, tmp_path):
    out = tmp_path / 'exports' / 'i1.csv'
    code, _ = _run(capsys, 'solve', get_problem_path('i1_optimal.json'), '--export', str(out))
    assert code == EXIT_OK
    df = pd.read_csv(out, encoding='utf-8-sig')
    assert list(df.columns) == ['check', 'passed', 'detail']
    assert df['passed'].all()


def test_reports_are_deterministic(capsys):
    path = get_problem_path('i4_game.json')
    _, first = _run(capsys, 'game', path, '--vertices')
    _, second = _run(capsys, 'game', path, '--vertices')
    assert first == second


@pytest.mark.parametrize("M", ['-1', '0'])
def test_min_slack_w_rejects_non_positive_m(capsys, M):
    """M <= 0 時以輸入錯誤結束，不得拋出除以零"""
    code, lines = _run(capsys, 'min-slack-w', get_problem_path('i3_primal_infeasible.json'),
                       '--M', M)
    assert code == EXIT_INPUT_ERROR
    assert lines == []


def test_non_utf8_problem_file(capsys, tmp_path):
    """非 UTF-8 位元組的問題檔以輸入錯誤結束"""
    bad = tmp_path / 'latin1.json'
    bad.write_bytes(b'{"kind": "lp", "A": [["\xff\xfe"]], "b": ["1"], "c": ["1"]}')
    code, lines = _run(capsys, 'solve', str(bad))
    assert code == EXIT_INPUT_ERROR
    assert lines == []


def test_export_to_directory_fails_before_report(capsys, tmp_path):
    """匯出路徑是目錄時回傳輸入錯誤，且不輸出半份報告"""
    code, lines = _run(capsys, 'solve', get_problem_path('i1_optimal.json'),
                       '--export', str(tmp_path))
    assert code == EXIT_INPUT_ERROR
    assert lines == []
