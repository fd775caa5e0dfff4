"""Special means of two positive reals and the mean inequalities they satisfy.

Each proposition is the weighted one-point bound

    |(1-lam) f(G) + lam (f(a)+f(b))/2 - (1/ln(b/a)) int_a^b f(t) dt/t|
        <= M/ln(b/a) [lam (b-a)/2 ln(b/a) + 2(1-2lam)(A - G)]

written out for one catalog function and re-expressed through means.
G is the geometric mean sqrt(ab).
"""

from __future__ import annotations

import math
from typing import NamedTuple, Optional

from .errors import DomainError
from .funcat import INV_E, XEXP_CEILING
from .results import DEFAULT_POLICY, CheckResult, TolerancePolicy, classify

PROP_IDS = ("P31", "P32", "P33", "P_LOG", "P_XLOGX")
REMARK_IDS = ("P31", "P32", "P33")

# Catalog function each proposition specializes.
PROP_FUNCTION = {
    "P31": "power",
    "P32": "xexp",
    "P33": "recip",
    "P_LOG": "log",
    "P_XLOGX": "xlog",
}


class MeanSet(NamedTuple):
    A: float
    G: float
    H: float
    L: float
    I: float


def _check_pair(a: float, b: float) -> None:
    if not (a > 0 and b > 0):
        raise DomainError(f"means need positive arguments, got a={a!r}, b={b!r}")
    if b < a:
        raise DomainError(f"means need a <= b, got a={a!r}, b={b!r}")


def _log_ratio(a: float, b: float) -> float:
    return math.log1p((b - a) / a)


def log_mean(a: float, b: float) -> float:
    _check_pair(a, b)
    if a == b:
        return a
    return (b - a) / _log_ratio(a, b)


def identric_mean(a: float, b: float) -> float:
    _check_pair(a, b)
    if a == b:
        return a
    # ln I = (b ln b - a ln a)/(b - a) - 1 = ln b + a/L - 1
    return math.exp(math.log(b) + a / log_mean(a, b) - 1.0)


def means_all(a: float, b: float) -> MeanSet:
    _check_pair(a, b)
    return MeanSet(
        A=0.5 * (a + b),
        G=math.sqrt(a * b),
        H=2.0 * a * b / (a + b),
        L=log_mean(a, b),
        I=identric_mean(a, b),
    )


class PropTerms(NamedTuple):
    """The three displayed pieces of a proposition before weighting."""

    at_g: float      # f(G)
    ends: float      # (f(a) + f(b))/2
    integral: float  # (1/ln(b/a)) int_a^b f(t) dt/t
    M: float


def _prop_n(prop_id: str, n, allow_real_n: bool) -> Optional[float]:
    if prop_id != "P31":
        return None
    if n is None:
        raise DomainError("P31 needs n")
    if n < 1:
        raise DomainError(f"P31 needs n >= 1, got {n!r}")
    if not allow_real_n and float(n) != int(n):
        raise DomainError(f"P31 takes integer n unless real n is explicitly allowed, got {n!r}")
    return float(n)


def prop_terms(prop_id: str, a: float, b: float, n=None, allow_real_n: bool = False) -> PropTerms:
    if prop_id not in PROP_IDS:
        raise ValueError(f"unknown proposition {prop_id!r}; expected one of {', '.join(PROP_IDS)}")
    _check_pair(a, b)
    if not b > a:
        raise DomainError(f"{prop_id} needs b > a")
    m = means_all(a, b)
    G = m.G
    if prop_id == "P31":
        n = _prop_n(prop_id, n, allow_real_n)
        an, bn = a**n, b**n
        return PropTerms(G**n, means_all(an, bn).A, log_mean(an, bn), n * b ** (n - 1.0))
    if prop_id == "P32":
        if b > XEXP_CEILING:
            raise DomainError(f"P32 needs b <= {XEXP_CEILING:g}")
        fa, fb = a * math.exp(a), b * math.exp(b)
        # displayed as G(ae^a, be^b), which is sqrt(ab) e^A rather than G e^G
        return PropTerms(math.sqrt(fa * fb), 0.5 * (fa + fb),
                         log_mean(math.exp(a), math.exp(b)) * m.L, math.exp(b) * (b + 1.0))
    if prop_id == "P33":
        return PropTerms(1.0 / G, 1.0 / m.H, m.L / G**2, 1.0 / a**2)
    if prop_id == "P_LOG":
        return PropTerms(math.log(G), 0.5 * (math.log(a) + math.log(b)),
                         0.5 * (math.log(a) + math.log(b)), 1.0 / a)
    if not a > INV_E:
        raise DomainError(f"P_XLOGX needs a > 1/e, got a={a!r}")
    # ln G(a^a, b^b) = (a ln a + b ln b)/2
    return PropTerms(G * math.log(G), 0.5 * (a * math.log(a) + b * math.log(b)),
                     m.L * math.log(m.I), 1.0 + math.log(b))


def prop_rhs(M: float, a: float, b: float, lam: float) -> float:
    m = means_all(a, b)
    lr = _log_ratio(a, b)
    return M / lr * (lam * (b - a) / 2.0 * lr + 2.0 * (1.0 - 2.0 * lam) * (m.A - m.G))


def prop_check(prop_id: str, a: float, b: float, lam: float, n=None,
               allow_real_n: bool = False,
               policy: TolerancePolicy = DEFAULT_POLICY) -> CheckResult:
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda={lam!r} outside [0, 1]")
    t = prop_terms(prop_id, a, b, n, allow_real_n)
    lhs = abs((1.0 - lam) * t.at_g + lam * t.ends - t.integral)
    rhs = prop_rhs(t.M, a, b, lam)
    margin, verdict = classify(lhs, rhs, 0.0, policy)
    name = PROP_FUNCTION[prop_id]
    if prop_id == "P31":
        name = f"power:{float(n):g}"
    return CheckResult(prop_id, None, name, lhs, rhs, margin, None, 0.0, verdict)


class RemarkChain(NamedTuple):
    """(0, mid, upper) at lam = 0 and at lam = 1; mid keeps its sign."""

    lam0: tuple[float, float, float]
    lam1: tuple[float, float, float]

    def ordered(self, slack: float = 0.0) -> bool:
        return all(lo - slack <= mid <= up + slack for lo, mid, up in (self.lam0, self.lam1))


def remark_chain(prop_id: str, a: float, b: float, n=None,
                 allow_real_n: bool = False) -> RemarkChain:
    if prop_id not in REMARK_IDS:
        raise ValueError(f"remark chains exist for {', '.join(REMARK_IDS)} only")
    t = prop_terms(prop_id, a, b, n, allow_real_n)
    return RemarkChain(
        (0.0, t.integral - t.at_g, prop_rhs(t.M, a, b, 0.0)),
        (0.0, t.ends - t.integral, prop_rhs(t.M, a, b, 1.0)),
    )
