"""Hadamard fractional integrals and the composite quantities built from them.

Conventions (fixed by the expanded integrals, not by subscript names):

    j_minus(f, alpha, a, x) = 1/Gamma(alpha) int_a^x (ln(t/a))^(alpha-1) f(t) dt/t
    j_plus(f, alpha, x, b)  = 1/Gamma(alpha) int_x^b (ln(b/t))^(alpha-1) f(t) dt/t

Both are evaluated in log coordinates, u = ln(t/a) resp. u = ln(b/t), where
the kernel becomes u^(alpha-1) on [0, L].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from .errors import DomainError
from .funcat import FunctionSpec, GeometricInterval
from .numerics import DEFAULT_QUAD, QuadConfig, gamma, integrate_log_singular


class Estimate(NamedTuple):
    """A computed value together with its propagated quadrature error bound."""

    value: float
    error: float


def _clamp(v: float, lo: float, hi: float, what: str) -> float:
    slack = 1e-12 * hi
    if v < lo - slack or v > hi + slack:
        raise DomainError(f"{what}={v!r} outside [{lo!r}, {hi!r}]")
    return min(max(v, lo), hi)


@dataclass(frozen=True)
class IneqParams:
    """Parameters of one inequality instance.

    ``lam`` is the weight lambda. ``y`` and ``delta`` are only used by the
    two-point composite and its corollaries.
    """

    interval: GeometricInterval
    alpha: float
    lam: float
    x: float
    y: Optional[float] = None
    delta: Optional[float] = None

    def __post_init__(self):
        a, b = self.interval.a, self.interval.b
        if not self.alpha > 0:
            raise DomainError(f"alpha={self.alpha!r} must be > 0")
        if not 0.0 <= self.lam <= 1.0:
            raise DomainError(f"lambda={self.lam!r} outside [0, 1]")
        object.__setattr__(self, "x", _clamp(self.x, a, b, "x"))
        if self.y is not None:
            object.__setattr__(self, "y", _clamp(self.y, a, b, "y"))
        if self.delta is not None and not 0.5 <= self.delta <= 1.0:
            raise DomainError(f"delta={self.delta!r} outside [1/2, 1]")

    @property
    def a(self) -> float:
        return self.interval.a

    @property
    def b(self) -> float:
        return self.interval.b

    @property
    def C(self) -> float:
        return self.interval.point(self.lam)

    def with_(self, **changes) -> "IneqParams":
        return replace(self, **changes)


def log_pow(num: float, den: float, alpha: float) -> float:
    """(ln(num/den))^alpha, exactly 0 when num == den."""
    if num == den:
        return 0.0
    return math.log(num / den) ** alpha


@lru_cache(maxsize=8192)
def j_plus(spec: FunctionSpec, alpha: float, x: float, b: float,
           cfg: QuadConfig = DEFAULT_QUAD) -> Estimate:
    """1/Gamma(alpha) int_x^b (ln(b/t))^(alpha-1) f(t) dt/t."""
    if not (0 < x <= b):
        raise DomainError(f"j_plus needs 0 < x <= b, got x={x!r}, b={b!r}")
    if x == b:
        return Estimate(0.0, 0.0)
    res = integrate_log_singular(lambda u: spec.eval(b * np.exp(-u)), math.log(b / x), alpha, cfg)
    g = gamma(alpha)
    return Estimate(res.value / g, res.error_estimate / g)


@lru_cache(maxsize=8192)
def j_minus(spec: FunctionSpec, alpha: float, a: float, x: float,
            cfg: QuadConfig = DEFAULT_QUAD) -> Estimate:
    """1/Gamma(alpha) int_a^x (ln(t/a))^(alpha-1) f(t) dt/t."""
    if not (0 < a <= x):
        raise DomainError(f"j_minus needs 0 < a <= x, got a={a!r}, x={x!r}")
    if x == a:
        return Estimate(0.0, 0.0)
    res = integrate_log_singular(lambda u: spec.eval(a * np.exp(u)), math.log(x / a), alpha, cfg)
    g = gamma(alpha)
    return Estimate(res.value / g, res.error_estimate / g)


def j_split(spec: FunctionSpec, alpha: float, interval: GeometricInterval, point: float,
            cfg: QuadConfig = DEFAULT_QUAD) -> Estimate:
    """j_minus over [a, point] plus j_plus over [point, b]."""
    lo = j_minus(spec, alpha, interval.a, point, cfg)
    hi = j_plus(spec, alpha, point, interval.b, cfg)
    return Estimate(lo.value + hi.value, lo.error + hi.error)


def _f(spec: FunctionSpec, t: float) -> float:
    return float(spec.eval(t))


def i_f(spec: FunctionSpec, p: IneqParams, cfg: QuadConfig = DEFAULT_QUAD) -> Estimate:
    """One-point weighted composite:

        (1-lam) [ln^alpha(x/a) + ln^alpha(b/x)] f(x)
        + lam [f(a) ln^alpha(x/a) + f(b) ln^alpha(b/x)]
        - Gamma(alpha+1) [j_minus(a..x) + j_plus(x..b)]
    """
    a, b, x, al, lam = p.a, p.b, p.x, p.alpha, p.lam
    lx = log_pow(x, a, al)
    rx = log_pow(b, x, al)
    head = (1.0 - lam) * (lx + rx) * _f(spec, x) + lam * (_f(spec, a) * lx + _f(spec, b) * rx)
    J = j_split(spec, al, p.interval, x, cfg)
    g1 = gamma(al + 1.0)
    return Estimate(head - g1 * J.value, g1 * J.error)


def s_f(spec: FunctionSpec, p: IneqParams, cfg: QuadConfig = DEFAULT_QUAD) -> Estimate:
    """Two-point composite split at C = a^(1-lam) b^lam:

        lam^alpha f(x) + (1-lam)^alpha f(y)
        - Gamma(alpha+1)/ln^alpha(b/a) [j_minus(a..C) + j_plus(C..b)]
    """
    if p.y is None:
        raise ValueError("s_f needs y")
    al, lam = p.alpha, p.lam
    head = lam**al * _f(spec, p.x) + (1.0 - lam) ** al * _f(spec, p.y)
    J = j_split(spec, al, p.interval, p.C, cfg)
    coef = gamma(al + 1.0) / p.interval.log_ratio**al
    return Estimate(head - coef * J.value, coef * J.error)


class HHTriple(NamedTuple):
    left: float
    middle: float
    right: float
    error: float


def hh_triple(spec: FunctionSpec, alpha: float, interval: GeometricInterval,
              cfg: QuadConfig = DEFAULT_QUAD) -> HHTriple:
    """f(sqrt(ab)), the normalized fractional mean, and (f(a)+f(b))/2.

    No ordering is enforced here.
    """
    a, b = interval.a, interval.b
    up = j_plus(spec, alpha, a, b, cfg)
    down = j_minus(spec, alpha, a, b, cfg)
    coef = gamma(alpha + 1.0) / (2.0 * interval.log_ratio**alpha)
    middle = coef * (up.value + down.value)
    return HHTriple(
        _f(spec, interval.geometric_mid),
        middle,
        0.5 * (_f(spec, a) + _f(spec, b)),
        coef * (up.error + down.error),
    )
