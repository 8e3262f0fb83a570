"""Acceptance checks recorded on a run manifest"""
from dataclasses import dataclass
from typing import Dict, List
import logging

from core.exceptions import InvariantViolationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ''
    ran: bool = True

    @property
    def status(self) -> str:
        if not self.ran:
            return 'not_run'
        return 'pass' if self.passed else 'fail'

    def to_dict(self) -> Dict:
        return {'name': self.name, 'passed': self.passed, 'status': self.status, 'detail': self.detail}


class CheckList:
    """Ordered checks with unique names"""

    def __init__(self):
        self._checks: List[Check] = []
        self._names = set()

    def _append(self, check: Check) -> None:
        if check.name in self._names:
            raise InvariantViolationError(f"Check {check.name!r} recorded twice")
        self._names.add(check.name)
        self._checks.append(check)

    def add(self, name: str, passed, detail: str = '') -> bool:
        passed = bool(passed)
        self._append(Check(name=name, passed=passed, detail=detail))
        if passed:
            logger.info(f"check {name}: pass {detail}")
        else:
            logger.warning(f"check {name}: FAIL {detail}")
        return passed

    def skip(self, name: str, detail: str) -> None:
        """Record a check that could not run; it does not fail the run on its own"""
        self._append(Check(name=name, passed=True, detail=detail, ran=False))
        logger.info(f"check {name}: not run, {detail}")

    def guard(self, name: str, func, detail: str = '') -> bool:
        """Record whether ``func`` returns truthy; an invariant violation counts as a failure"""
        try:
            return self.add(name, func(), detail)
        except InvariantViolationError as e:
            return self.add(name, False, str(e))

    def __iter__(self):
        return iter(self._checks)

    def __len__(self):
        return len(self._checks)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self._checks)

    @property
    def failures(self) -> List[Check]:
        return [check for check in self._checks if not check.passed]

    @property
    def not_run(self) -> List[Check]:
        return [check for check in self._checks if not check.ran]

    def to_list(self) -> List[Dict]:
        return [check.to_dict() for check in self._checks]
