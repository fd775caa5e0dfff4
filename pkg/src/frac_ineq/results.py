"""Check results and the three-valued verdict."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .hadamard import IneqParams


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class TolerancePolicy:
    abs_tol: float = 1e-8
    rel_tol: float = 1e-8

    def __post_init__(self) -> None:
        if not (self.abs_tol >= 0 and self.rel_tol >= 0):
            raise ValueError("tolerances must be non-negative")

    def allowance(self, lhs: float, rhs: float) -> float:
        return self.abs_tol + self.rel_tol * max(abs(lhs), abs(rhs), 1.0)


DEFAULT_POLICY = TolerancePolicy()


def classify(lhs: float, rhs: float, quad_error: float,
             policy: TolerancePolicy = DEFAULT_POLICY) -> tuple[float, Verdict]:
    """Return (margin, verdict) for a claim |lhs| <= rhs.

    A negative margin inside the tolerance still passes. Beyond it, the
    verdict is inconclusive when quadrature error could explain the gap.
    """
    margin = rhs - abs(lhs)
    if margin >= -policy.allowance(lhs, rhs):
        return margin, Verdict.PASS
    if -margin <= quad_error:
        return margin, Verdict.INCONCLUSIVE
    return margin, Verdict.FAIL


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    params: Optional[IneqParams]
    f_name: str
    lhs: float
    rhs: float
    margin: float
    branch: Optional[str]
    quad_error: float
    verdict: Verdict

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS
