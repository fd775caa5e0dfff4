"""Special functions and quadrature for log-kernel integrals.

Everything here is pure: no module state is mutated after import, so the
functions can be called from any number of worker processes.

The integrals that show up in every bound are

    left(a, x)  = int_a^x (ln(t/a))^(alpha-1) dt
    right(x, b) = int_x^b (ln(b/t))^(alpha-1) dt

After the substitution u = ln(t/a) (resp. u = ln(b/t)) both become
incomplete-gamma-type integrals of u^(alpha-1) e^(+-u), which is what the
closed forms below exploit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError

GAMMA_ALPHA_MAX = 170.0
_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny

# Gauss-Kronrod 21-point rule (QUADPACK qk21): Kronrod abscissae on [0, 1],
# descending; odd positions (1, 3, ..., 9) are the 10-point Gauss nodes.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208067185398,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# Full symmetric node/weight vectors on [-1, 1].
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GWEIGHTS = np.zeros(21)
for _i, _w in enumerate(_WG):
    _k = 2 * _i + 1
    _GWEIGHTS[_k] = _w
    _GWEIGHTS[20 - _k] = _w


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    subdivisions_used: int


DEFAULT_QUAD = QuadConfig()

# Geometric pre-partition toward 0 for integrands with a fractional power there.
_GRADING = 2.0 ** -np.arange(1, 25)


def gamma(alpha: float) -> float:
    """Euler's Gamma function for 0 < alpha <= 170."""
    if not (0.0 < alpha <= GAMMA_ALPHA_MAX):
        raise DomainError(f"gamma: alpha={alpha!r} outside (0, {GAMMA_ALPHA_MAX}]")
    return math.gamma(alpha)


def _gamma_series(alpha: float, z: float) -> float:
    # gamma(a, z) = z^a e^-z sum_n z^n / (a (a+1) ... (a+n))
    term = 1.0 / alpha
    total = term
    ap = alpha
    for _ in range(10000):
        ap += 1.0
        term *= z / ap
        total += term
        if abs(term) < abs(total) * 1e-17:
            break
    return total * math.exp(alpha * math.log(z) - z)


def _upper_gamma_cf(alpha: float, z: float) -> float:
    # Modified Lentz evaluation of the continued fraction for Gamma(a, z).
    fpmin = 1e-300
    b = z + 1.0 - alpha
    c = 1.0 / fpmin
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - alpha)
        b += 2.0
        d = an * d + b
        if abs(d) < fpmin:
            d = fpmin
        c = b + an / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(alpha * math.log(z) - z)


def lower_incomplete_gamma(alpha: float, z: float) -> float:
    """gamma(alpha, z) = int_0^z t^(alpha-1) e^-t dt (not regularized).

    Series below z = alpha + 1, continued fraction for the complement above.
    """
    if not alpha > 0:
        raise DomainError(f"lower_incomplete_gamma: alpha={alpha!r} must be > 0")
    if not z >= 0:
        raise DomainError(f"lower_incomplete_gamma: z={z!r} must be >= 0")
    if z == 0.0:
        return 0.0
    if z < alpha + 1.0:
        return _gamma_series(alpha, z)
    return gamma(alpha) - _upper_gamma_cf(alpha, z)


def _check_alpha(alpha: float) -> None:
    if not alpha > 0:
        raise DomainError(f"alpha={alpha!r} must be > 0")


def aux_integral_left(a: float, x: float, alpha: float) -> float:
    """int_a^x (ln(t/a))^(alpha-1) dt.

    Uses a * sum_k L^(alpha+k) / (k! (alpha+k)) with L = ln(x/a), which is
    the termwise integral of u^(alpha-1) e^u. Every term is positive so the
    sum has no cancellation; for L > 30 the terms get large enough that
    quadrature is cheaper and safer.
    """
    _check_alpha(alpha)
    if not (0 < a <= x):
        raise DomainError(f"aux_integral_left needs 0 < a <= x, got a={a!r}, x={x!r}")
    if x == a:
        return 0.0
    L = math.log(x / a)
    if L > 30.0:
        res = integrate_log_singular(lambda u: a * np.exp(u), L, alpha)
        return res.value
    term = 1.0  # L^k / k!
    total = term / alpha
    for k in range(1, 501):
        term *= L / k
        nxt = term / (alpha + k)
        total += nxt
        if nxt < 1e-16 * total:
            break
    return a * L**alpha * total


def aux_integral_right(x: float, b: float, alpha: float) -> float:
    """int_x^b (ln(b/t))^(alpha-1) dt = b * gamma(alpha, ln(b/x))."""
    _check_alpha(alpha)
    if not (0 < x <= b):
        raise DomainError(f"aux_integral_right needs 0 < x <= b, got x={x!r}, b={b!r}")
    if x == b:
        return 0.0
    return b * lower_incomplete_gamma(alpha, math.log(b / x))


def _vectorize(g: Callable) -> Callable[[np.ndarray], np.ndarray]:
    def wrapped(t: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.asarray(g(t), dtype=float), t.shape)

    return wrapped


def _gk21(g, left: np.ndarray, right: np.ndarray):
    """Apply the 21-point Kronrod rule to a batch of intervals."""
    center = 0.5 * (left + right)
    half = 0.5 * (right - left)
    pts = center[:, None] + half[:, None] * _NODES[None, :]
    fv = g(pts)
    if not np.all(np.isfinite(fv)):
        raise ConvergenceError("integrand returned a non-finite value",
                               QuadResult(math.nan, math.inf, 0))
    resk = fv @ _KWEIGHTS
    resg = fv @ _GWEIGHTS
    resabs = np.abs(fv) @ _KWEIGHTS
    mean = 0.5 * resk
    resasc = np.abs(fv - mean[:, None]) @ _KWEIGHTS
    ahalf = np.abs(half)
    value = resk * half
    err = np.abs((resk - resg) * half)
    resasc = resasc * ahalf
    resabs = resabs * ahalf
    scaled = np.where(
        (resasc != 0) & (err != 0),
        resasc * np.minimum(1.0, (200.0 * err / np.where(resasc == 0, 1.0, resasc)) ** 1.5),
        err,
    )
    floor = np.where(resabs > _TINY / (50 * _EPS), 50 * _EPS * resabs, 0.0)
    return value, np.maximum(scaled, floor)


def integrate_adaptive(g: Callable, lo: float, hi: float,
                       cfg: QuadConfig = DEFAULT_QUAD, points=None) -> QuadResult:
    """Adaptive Gauss-Kronrod integration of ``g`` over [lo, hi].

    ``g`` must accept a numpy array. ``points`` are optional interior
    breakpoints (kinks, singularities) used for the initial partition; they
    do not count as subdivisions. Each round bisects the intervals that
    carry the bulk of the error estimate (all halves evaluated in one call),
    until the summed estimate meets max(abs_tol, rel_tol * |value|).
    """
    if not lo <= hi:
        raise ValueError(f"integrate_adaptive needs lo <= hi, got {lo!r} > {hi!r}")
    if lo == hi:
        return QuadResult(0.0, 0.0, 0)
    g = _vectorize(g)
    edges = [float(lo), float(hi)]
    if points is not None:
        edges += [float(p) for p in points if lo < p < hi]
    edges = np.unique(edges)
    left = edges[:-1]
    right = edges[1:]
    vals, errs = _gk21(g, left, right)
    used = 0
    while True:
        total = float(vals.sum())
        err_total = float(errs.sum())
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if err_total <= tol:
            return QuadResult(total, err_total, used)
        budget = cfg.max_subdivisions - used
        if budget <= 0:
            raise ConvergenceError(
                f"no convergence after {used} subdivisions (error {err_total:.3g} > {tol:.3g})",
                QuadResult(total, err_total, used),
            )
        order = np.argsort(errs)[::-1]
        remaining = err_total - np.cumsum(errs[order])
        k = int(np.searchsorted(-remaining, -0.5 * tol)) + 1
        k = min(k, budget, len(order))
        split = order[:k]
        mids = 0.5 * (left[split] + right[split])
        if np.any((mids <= left[split]) | (mids >= right[split])):
            raise ConvergenceError("interval width underflow",
                                   QuadResult(total, err_total, used))
        new_left = np.concatenate([left[split], mids])
        new_right = np.concatenate([mids, right[split]])
        new_vals, new_errs = _gk21(g, new_left, new_right)
        keep = np.ones(len(left), dtype=bool)
        keep[split] = False
        left = np.concatenate([left[keep], new_left])
        right = np.concatenate([right[keep], new_right])
        vals = np.concatenate([vals[keep], new_vals])
        errs = np.concatenate([errs[keep], new_errs])
        used += k


def integrate_log_singular(g: Callable, L: float, alpha: float,
                           cfg: QuadConfig = DEFAULT_QUAD) -> QuadResult:
    """int_0^L u^(alpha-1) g(u) du.

    For alpha < 1 the kernel blows up at 0; v = u^alpha turns the integral
    into (1/alpha) int_0^(L^alpha) g(v^(1/alpha)) dv with a bounded integrand.
    """
    _check_alpha(alpha)
    if not L > 0:
        raise DomainError(f"integrate_log_singular needs L > 0, got {L!r}")
    gv = _vectorize(g)
    if alpha < 1.0:
        inv = 1.0 / alpha
        top = L**alpha
        res = integrate_adaptive(lambda v: gv(v**inv), 0.0, top, cfg,
                                 points=None if inv.is_integer() else top * _GRADING)
        return QuadResult(res.value * inv, res.error_estimate * inv, res.subdivisions_used)
    if alpha == 1.0:
        return integrate_adaptive(gv, 0.0, L, cfg)
    p = alpha - 1.0
    return integrate_adaptive(lambda u: u**p * gv(u), 0.0, L, cfg,
                              points=None if p.is_integer() else L * _GRADING)


def golden_section_max(fn: Callable[[float], float], lo: float, hi: float,
                       xtol: float = 1e-12, maxiter: int = 200) -> tuple[float, float]:
    """Maximize a unimodal scalar function on [lo, hi]; returns (argmax, max)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(maxiter):
        if abs(b - a) <= xtol * max(1.0, abs(a) + abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    best = max([(fn(lo), lo), (fc, c), (fd, d), (fn(hi), hi)])
    return best[1], best[0]
