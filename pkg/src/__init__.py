#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Exact LP Duality - 精確有理數線性規劃對偶與零和賽局工具
核心模組包
"""

__version__ = "1.0.0"
__description__ = "線性規劃對偶、零和賽局與擇一定理的精確有理數構造與驗證"
