#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
系統配置管理
"""

import os

# 計算上限配置 (桌面規模)
CAP_CONFIG = {
    'fm_row_cap': 10000,   # Fourier-Motzkin 消去過程中允許的最大列數
    'br_dim_cap': 8,       # Brooks-Reny 賽局 m+n+1 上限 (需窮舉所有可逆子矩陣)
    'enum_dim_cap': 10,    # 頂點窮舉 m+n 上限
}

# 系統配置
SYSTEM_CONFIG = {
    'log_level': 'WARNING',  # 日誌級別 (診斷輸出到 stderr)
    'log_format': '%(asctime)s - %(levelname)s - %(message)s',
}

# 報告格式配置
REPORT_CONFIG = {
    'index_base': 1,                  # CLI 顯示的索引從 1 開始
    'vector_separators': (',', ':'),  # 向量以緊湊 JSON 字串陣列輸出
}

# 路徑配置
PATHS = {
    'problems': 'data/problems',
}

def get_absolute_path(relative_path: str) -> str:
    """取得絕對路徑"""
    base_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    return os.path.join(base_dir, relative_path)

def get_problem_path(name: str) -> str:
    """取得範例問題檔的絕對路徑"""
    return get_absolute_path(os.path.join(PATHS['problems'], name))
