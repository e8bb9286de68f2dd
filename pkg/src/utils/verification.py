#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
驗證紀錄 - 每一項恆等式檢查的通過/失敗清單
"""

from dataclasses import dataclass, field
from typing import List, Optional
import logging

import pandas as pd

from src.utils.errors import CertificateError

logger = logging.getLogger(__name__)


@dataclass
class Check:
    """單一恆等式檢查"""
    name: str
    passed: bool
    detail: str = ''


@dataclass
class VerificationReport:
    """依序記錄的檢查清單"""
    checks: List[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = '') -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        if not passed:
            logger.debug(f"檢查未通過: {name} {detail}")
        return bool(passed)

    def extend(self, other: 'VerificationReport', prefix: str = '') -> None:
        for check in other.checks:
            self.checks.append(Check(prefix + check.name, check.passed, check.detail))

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def first_failure(self) -> Optional[Check]:
        for check in self.checks:
            if not check.passed:
                return check
        return None

    def require(self, what: str) -> 'VerificationReport':
        """全部通過才回傳自身，否則視為內部構造錯誤"""
        failure = self.first_failure
        if failure is not None:
            raise CertificateError(f"{what}: {failure.name} 未通過 {failure.detail}".rstrip())
        return self

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{'check': c.name, 'passed': c.passed, 'detail': c.detail} for c in self.checks],
            columns=['check', 'passed', 'detail'],
        )

    def export_csv(self, output_path: str) -> None:
        """將驗證紀錄匯出為 CSV"""
        df = self.to_dataframe()
        df.to_csv(output_path, index=False, encoding='utf-8-sig')
        logger.info(f"驗證紀錄已匯出: {output_path} ({len(df)} 項)")
