"""Test-function catalog: evaluators, derivatives, Lipschitz constants, GA-convexity."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import DomainError
from .numerics import golden_section_max

INV_E = math.exp(-1.0)
# e^b (b + 1) overflows a little past 700; keep a wide margin for products.
XEXP_CEILING = 300.0

BUILTIN_NAMES = ("const", "identity", "power", "xexp", "recip", "log", "xlog")


@dataclass(frozen=True)
class GeometricInterval:
    a: float
    b: float

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError(f"interval needs a > 0, got a={self.a!r}")
        if not self.b >= self.a * (1.0 + 1e-6):
            raise DomainError(f"interval needs b >= a(1 + 1e-6), got [{self.a!r}, {self.b!r}]")

    @property
    def log_ratio(self) -> float:
        return math.log(self.b / self.a)

    @property
    def geometric_mid(self) -> float:
        return math.sqrt(self.a * self.b)

    def point(self, s: float) -> float:
        """The point a^(1-s) b^s, clamped into [a, b]."""
        return min(max(self.a ** (1.0 - s) * self.b ** s, self.a), self.b)

    def geomspace(self, n: int) -> np.ndarray:
        pts = np.geomspace(self.a, self.b, n)
        pts[0], pts[-1] = self.a, self.b
        return pts


@dataclass(frozen=True, eq=False)
class FunctionSpec:
    """A catalog function.

    ``eval`` and ``deriv`` take numpy arrays (or floats). ``analytic_lipschitz``
    returns sup |f'| on an interval when a closed form is known.
    """

    name: str
    eval: Callable
    deriv: Callable
    analytic_lipschitz: Optional[Callable[[GeometricInterval], float]] = None
    ga_convex_on: Optional[Callable[[GeometricInterval], bool]] = None
    domain_floor: float = 0.0
    domain_ceiling: float = math.inf
    meta: dict = field(default_factory=dict, compare=False)

    def __call__(self, t):
        return self.eval(t)

    def admits(self, interval: GeometricInterval) -> bool:
        return interval.a > self.domain_floor and interval.b <= self.domain_ceiling

    def require(self, interval: GeometricInterval) -> None:
        if not self.admits(interval):
            raise DomainError(
                f"{self.name}: interval [{interval.a!r}, {interval.b!r}] outside domain "
                f"({self.domain_floor!r}, {self.domain_ceiling!r}]"
            )

    def lipschitz(self, interval: GeometricInterval) -> float:
        """Analytic constant when available, numeric estimate otherwise."""
        self.require(interval)
        if self.analytic_lipschitz is not None:
            return self.analytic_lipschitz(interval)
        return lipschitz_estimate(self, interval)


def _const(c: float) -> FunctionSpec:
    return FunctionSpec(
        name=f"const:{c:g}",
        eval=lambda t: np.zeros_like(np.asarray(t, dtype=float)) + c,
        deriv=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        analytic_lipschitz=lambda I: 0.0,
        ga_convex_on=lambda I: True,
        meta={"c": c},
    )


def _power(n: float) -> FunctionSpec:
    if not n >= 1:
        raise DomainError(f"power needs n >= 1, got {n!r}")
    return FunctionSpec(
        name=f"power:{n:g}",
        eval=lambda t: np.asarray(t, dtype=float) ** n,
        deriv=lambda t: n * np.asarray(t, dtype=float) ** (n - 1),
        analytic_lipschitz=lambda I: n * I.b ** (n - 1),
        ga_convex_on=lambda I: True,
        meta={"n": n},
    )


def builtin(name: str, parameter: Optional[float] = None,
            domain_floor: Optional[float] = None) -> FunctionSpec:
    """Look up a catalog function by name.

    ``power`` needs n >= 1 and ``const`` needs c. ``xlog`` is only admitted on
    intervals with a > 1/e, where its derivative 1 + ln t stays positive.
    """
    if name == "const":
        if parameter is None:
            raise ValueError("const needs a parameter c")
        spec = _const(float(parameter))
    elif name == "power":
        if parameter is None:
            raise ValueError("power needs a parameter n")
        spec = _power(float(parameter))
    elif parameter is not None:
        raise ValueError(f"{name} takes no parameter")
    elif name == "identity":
        spec = FunctionSpec(
            name="identity",
            eval=lambda t: np.asarray(t, dtype=float) * 1.0,
            deriv=lambda t: np.ones_like(np.asarray(t, dtype=float)),
            analytic_lipschitz=lambda I: 1.0,
            ga_convex_on=lambda I: True,
        )
    elif name == "xexp":
        spec = FunctionSpec(
            name="xexp",
            eval=lambda t: np.asarray(t, dtype=float) * np.exp(t),
            deriv=lambda t: (np.asarray(t, dtype=float) + 1.0) * np.exp(t),
            analytic_lipschitz=lambda I: math.exp(I.b) * (I.b + 1.0),
            ga_convex_on=lambda I: True,
            domain_ceiling=XEXP_CEILING,
        )
    elif name == "recip":
        spec = FunctionSpec(
            name="recip",
            eval=lambda t: 1.0 / np.asarray(t, dtype=float),
            deriv=lambda t: -1.0 / np.asarray(t, dtype=float) ** 2,
            analytic_lipschitz=lambda I: 1.0 / I.a**2,
            ga_convex_on=lambda I: True,
        )
    elif name == "log":
        spec = FunctionSpec(
            name="log",
            eval=lambda t: np.log(t),
            deriv=lambda t: 1.0 / np.asarray(t, dtype=float),
            analytic_lipschitz=lambda I: 1.0 / I.a,
            ga_convex_on=lambda I: True,
        )
    elif name == "xlog":
        floor = INV_E if domain_floor is None else domain_floor
        if floor < INV_E:
            raise DomainError(f"xlog needs a domain floor >= 1/e, got {floor!r}")
        spec = FunctionSpec(
            name="xlog",
            eval=lambda t: np.asarray(t, dtype=float) * np.log(t),
            deriv=lambda t: 1.0 + np.log(t),
            analytic_lipschitz=lambda I: 1.0 + math.log(I.b),
            # u -> u e^u is convex for u >= -2
            ga_convex_on=lambda I: I.a >= math.exp(-2.0),
            domain_floor=floor,
        )
        return spec
    else:
        raise ValueError(f"unknown function {name!r}; expected one of {', '.join(BUILTIN_NAMES)}")
    if domain_floor is not None:
        spec = FunctionSpec(spec.name, spec.eval, spec.deriv, spec.analytic_lipschitz,
                            spec.ga_convex_on, domain_floor, spec.domain_ceiling, spec.meta)
    return spec


def parse_function(text: str) -> FunctionSpec:
    """Parse CLI names such as ``power:2``, ``const:5``, ``xlog``."""
    name, sep, param = text.strip().partition(":")
    if sep and not param:
        raise ValueError(f"missing parameter in {text!r}")
    return builtin(name, float(param) if sep else None)


def negate(spec: FunctionSpec) -> FunctionSpec:
    return FunctionSpec(
        name=f"neg({spec.name})",
        eval=lambda t: -spec.eval(t),
        deriv=lambda t: -spec.deriv(t),
        analytic_lipschitz=spec.analytic_lipschitz,
        ga_convex_on=None,
        domain_floor=spec.domain_floor,
        domain_ceiling=spec.domain_ceiling,
    )


def reflect(spec: FunctionSpec) -> FunctionSpec:
    """t -> f(1/t); maps [a, b] onto [1/b, 1/a]."""
    return FunctionSpec(
        name=f"reflect({spec.name})",
        eval=lambda t: spec.eval(1.0 / np.asarray(t, dtype=float)),
        deriv=lambda t: -spec.deriv(1.0 / np.asarray(t, dtype=float)) / np.asarray(t, dtype=float) ** 2,
        domain_floor=0.0 if math.isinf(spec.domain_ceiling) else 1.0 / spec.domain_ceiling,
        domain_ceiling=math.inf if spec.domain_floor == 0 else 1.0 / spec.domain_floor,
    )


def lipschitz_estimate(spec: FunctionSpec, interval: GeometricInterval) -> float:
    """Numeric sup |f'| on the interval.

    2048-point geometric grid, then golden-section refinement between the
    neighbours of the grid argmax.
    """
    grid = interval.geomspace(2048)
    vals = np.abs(np.asarray(spec.deriv(grid), dtype=float))
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    _, refined = golden_section_max(lambda t: float(abs(spec.deriv(t))), lo, hi)
    return max(float(vals[i]), refined)


class GAConvexity(NamedTuple):
    convex: bool
    worst_slack: float


def ga_convex_check(spec: FunctionSpec, interval: GeometricInterval,
                    grid_size: int = 16) -> GAConvexity:
    """Brute-force f(x^t y^(1-t)) <= t f(x) + (1-t) f(y) on a lattice.

    x, y run over a geometric grid on the interval and t over [0, 1]. The
    slack is RHS - LHS; it is allowed to dip to -1e-10 * scale for rounding.
    """
    if grid_size < 3:
        raise ValueError("grid_size must be >= 3")
    pts = interval.geomspace(grid_size)
    ts = np.linspace(0.0, 1.0, grid_size)
    x = pts[:, None, None]
    y = pts[None, :, None]
    t = ts[None, None, :]
    fx = np.asarray(spec.eval(pts), dtype=float)[:, None, None]
    fy = np.asarray(spec.eval(pts), dtype=float)[None, :, None]
    lhs = np.asarray(spec.eval(x**t * y ** (1.0 - t)), dtype=float)
    slack = t * fx + (1.0 - t) * fy - lhs
    scale = max(1.0, float(np.max(np.abs(fx))))
    worst = float(slack.min())
    return GAConvexity(worst >= -1e-10 * scale, worst)
