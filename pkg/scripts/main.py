#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
精確 LP 對偶與零和賽局工具 - 主執行入口

範例:
    python scripts/main.py solve data/problems/i1_optimal.json
    python scripts/main.py solve data/problems/i3_primal_infeasible.json --M 19
    python scripts/main.py fm data/problems/i6_infeasible_system.json
"""

import sys
import os

# 添加專案根目錄到路徑
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.api.cli import main


if __name__ == "__main__":
    main()
