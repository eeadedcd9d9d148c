"""
Module that provides named pass/fail checks whose tolerances can be overridden from an experiment config
"""

import logging
import math
import operator
from typing import Dict, List, Optional

from levy_bridge.exceptions import LevyBridgeError
from levy_bridge.schemas import CheckResult

logger = logging.getLogger(__name__)

RELATIONS = {"<=": operator.le, ">=": operator.ge, "<": operator.lt, ">": operator.gt}


class CheckLog:
    """Ordered record of the checks made by one experiment"""

    def __init__(self, overrides: Optional[Dict[str, float]] = None, prefix: str = ""):
        self.overrides = overrides or {}
        self.prefix = prefix
        self.results: List[CheckResult] = []

    def _name(self, name: str) -> str:
        return f"{self.prefix}.{name}" if self.prefix else name

    def scope(self, prefix: str) -> "CheckLog":
        return CheckLog(self.overrides, self._name(prefix))

    def check(self, name: str, value: float, tolerance: Optional[float] = None, relation: str = "<=") -> bool:
        """Records value against tolerance; without a default or configured tolerance nothing is recorded"""

        full = self._name(name)
        tolerance = self.overrides.get(full, tolerance)
        if tolerance is None:
            return True
        value = float(value)
        finite = math.isfinite(value)
        passed = finite and RELATIONS[relation](value, tolerance)
        self.results.append(
            CheckResult(
                name=full, value=value if finite else None, tolerance=tolerance, relation=relation, passed=passed
            )
        )
        logger.log(logging.INFO if passed else logging.WARNING, "%s: %s %s %s", full, value, relation, tolerance)
        return passed

    def error(self, name: str, error: LevyBridgeError):
        """Records a computation that raised instead of producing a value"""

        full = self._name(name)
        logger.error("%s: %s", full, error.message)
        self.results.append(CheckResult(name=full, tolerance=0.0, passed=False))

    def extend(self, other: "CheckLog"):
        self.results.extend(other.results)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def first_failure(self) -> Optional[str]:
        return next((result.name for result in self.results if not result.passed), None)
