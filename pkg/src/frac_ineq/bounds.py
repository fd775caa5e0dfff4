"""Right-hand-side bound formulas for the one-point and two-point composites.

Every formula is written term by term in its displayed form; the two
dt-integrals ``left`` and ``right`` always come from the closed forms in
:mod:`frac_ineq.numerics`:

    left(a, x)  = int_a^x (ln(t/a))^(alpha-1) dt
    right(x, b) = int_x^b (ln(b/t))^(alpha-1) dt

Integrals over other ranges are differences of these.
"""

from __future__ import annotations

from enum import Enum
from typing import Callable, NamedTuple, Optional

from .errors import OrderingError, ParameterMismatch
from .funcat import FunctionSpec, GeometricInterval
from .hadamard import Estimate, IneqParams, _f, j_split, log_pow
from .numerics import DEFAULT_QUAD, QuadConfig, aux_integral_left, aux_integral_right, gamma


class CaseBranch(str, Enum):
    # two-point bound, by the position of C relative to x <= y
    C_LE_X = "C_LE_X"
    X_LE_C_LE_Y = "X_LE_C_LE_Y"
    Y_LE_C = "Y_LE_C"
    # symmetric-pair corollary, by lambda relative to 1 - delta <= delta
    LAM_LE_1MD = "LAM_LE_1MD"
    MID = "MID"
    DELTA_LE_LAM = "DELTA_LE_LAM"


class BoundVariant(str, Enum):
    THM21 = "thm21"
    COR_310 = "cor-310"
    COR_MID_ALPHA = "cor-mid-alpha"
    COR_31 = "cor-31"
    COR_320 = "cor-320"
    COR_32 = "cor-32"
    COR_SIMPSON_FRAC = "cor-simpson-frac"
    COR_33 = "cor-33"
    COR_HALF_FRAC = "cor-half-frac"
    COR_34 = "cor-34"
    COR_35 = "cor-35"
    THM22 = "thm22"
    COR_21B = "cor-21b"
    COR_21C = "cor-21c"
    COR_21D = "cor-21d"


V = BoundVariant
THIRD = 1.0 / 3.0

# Parameters a caller may choose; everything else is pinned by the variant.
FREE_PARAMS: dict[BoundVariant, tuple[str, ...]] = {
    V.THM21: ("alpha", "lam", "x"),
    V.COR_310: ("alpha", "x"),
    V.COR_MID_ALPHA: ("alpha",),
    V.COR_31: (),
    V.COR_320: ("alpha",),
    V.COR_32: (),
    V.COR_SIMPSON_FRAC: ("alpha",),
    V.COR_33: (),
    V.COR_HALF_FRAC: ("alpha",),
    V.COR_34: (),
    V.COR_35: ("lam",),
    V.THM22: ("alpha", "lam", "x", "y"),
    V.COR_21B: ("alpha", "lam", "delta"),
    V.COR_21C: ("alpha", "lam"),
    V.COR_21D: ("alpha", "lam"),
}

# (lam, alpha) pinned by the midpoint corollaries; x is sqrt(ab) for all of them.
_MIDPOINT_PINS: dict[BoundVariant, tuple[Optional[float], Optional[float]]] = {
    V.COR_MID_ALPHA: (0.0, None),
    V.COR_31: (0.0, 1.0),
    V.COR_320: (1.0, None),
    V.COR_32: (1.0, 1.0),
    V.COR_SIMPSON_FRAC: (THIRD, None),
    V.COR_33: (THIRD, 1.0),
    V.COR_HALF_FRAC: (0.5, None),
    V.COR_34: (0.5, 1.0),
    V.COR_35: (None, 1.0),
}


def _left(a: float, lo: float, hi: float, alpha: float) -> float:
    """int_lo^hi (ln(t/a))^(alpha-1) dt for a <= lo <= hi."""
    if lo == hi:
        return 0.0
    if lo == a:
        return aux_integral_left(a, hi, alpha)
    return aux_integral_left(a, hi, alpha) - aux_integral_left(a, lo, alpha)


def _right(lo: float, hi: float, b: float, alpha: float) -> float:
    """int_lo^hi (ln(b/t))^(alpha-1) dt for lo <= hi <= b."""
    if lo == hi:
        return 0.0
    if hi == b:
        return aux_integral_right(lo, b, alpha)
    return aux_integral_right(lo, b, alpha) - aux_integral_right(hi, b, alpha)


def bound_thm21(M: float, p: IneqParams) -> float:
    """Lipschitz bound on |i_f|:

    M { [(1-lam)x - lam a] ln^alpha(x/a) + alpha(2lam-1) left(a, x)
        + [lam b - (1-lam)x] ln^alpha(b/x) + alpha(1-2lam) right(x, b) }
    """
    a, b, x, al, lam = p.a, p.b, p.x, p.alpha, p.lam
    return M * (
        ((1.0 - lam) * x - lam * a) * log_pow(x, a, al)
        + al * (2.0 * lam - 1.0) * aux_integral_left(a, x, al)
        + (lam * b - (1.0 - lam) * x) * log_pow(b, x, al)
        + al * (1.0 - 2.0 * lam) * aux_integral_right(x, b, al)
    )


def branch_of(p: IneqParams) -> CaseBranch:
    """Ordering case of C against x <= y; ties go to the lower-numbered case."""
    if p.y is None:
        raise ValueError("the two-point bound needs y")
    if p.x > p.y:
        raise OrderingError(f"x={p.x!r} > y={p.y!r}; only x <= y is covered")
    C = p.C
    if C <= p.x:
        return CaseBranch.C_LE_X
    if C <= p.y:
        return CaseBranch.X_LE_C_LE_Y
    return CaseBranch.Y_LE_C


class BranchValue(NamedTuple):
    value: float
    branch: CaseBranch


def c_alpha_lambda(p: IneqParams) -> BranchValue:
    """Piecewise closed form of

        int_a^C |x-t|/t (ln(t/a))^(alpha-1) dt + int_C^b |y-t|/t (ln(b/t))^(alpha-1) dt

    selected by where C falls relative to x <= y.
    """
    branch = branch_of(p)
    a, b, x, y, al, lam, C = p.a, p.b, p.x, p.y, p.alpha, p.lam, p.C
    lr_a = p.interval.log_ratio**al
    lam_a = lam**al
    mlam_a = (1.0 - lam) ** al
    if branch is CaseBranch.C_LE_X:
        value = (x / al * lam_a * lr_a
                 + y / al * (mlam_a * lr_a - 2.0 * log_pow(b, y, al))
                 + _right(y, b, b, al) - _right(C, y, b, al) - _left(a, a, C, al))
    elif branch is CaseBranch.X_LE_C_LE_Y:
        value = (x / al * (2.0 * log_pow(x, a, al) - lam_a * lr_a)
                 + y / al * (mlam_a * lr_a - 2.0 * log_pow(b, y, al))
                 + _left(a, x, C, al) - _left(a, a, x, al)
                 + _right(y, b, b, al) - _right(C, y, b, al))
    else:
        value = (x / al * (2.0 * log_pow(x, a, al) - lam_a * lr_a)
                 - y / al * mlam_a * lr_a
                 + _right(C, b, b, al) + _left(a, x, C, al) - _left(a, a, x, al))
    return BranchValue(value, branch)


def bound_thm22(M: float, p: IneqParams) -> float:
    """alpha M C_{alpha,lam}(x, y) / ln^alpha(b/a)."""
    return p.alpha * M * c_alpha_lambda(p).value / p.interval.log_ratio**p.alpha


def symmetric_points(interval: GeometricInterval, delta: float) -> tuple[float, float]:
    """(a^delta b^(1-delta), a^(1-delta) b^delta)."""
    return interval.point(1.0 - delta), interval.point(delta)


def l_alpha_lambda_delta(alpha: float, lam: float, delta: float,
                         interval: GeometricInterval) -> BranchValue:
    """Three-case bound factor for the symmetric pair x = a^d b^(1-d), y = a^(1-d) b^d."""
    a, b = interval.a, interval.b
    xd, yd = symmetric_points(interval, delta)
    C = interval.point(lam)
    al = alpha
    lr_a = interval.log_ratio**al
    k = al / lr_a
    lam_a, mlam_a, md_a = lam**al, (1.0 - lam) ** al, (1.0 - delta) ** al
    if lam <= 1.0 - delta:
        branch = CaseBranch.LAM_LE_1MD
        value = (xd * lam_a + yd * (mlam_a - 2.0 * md_a)
                 + k * (_right(yd, b, b, al) - _right(C, yd, b, al) - _left(a, a, C, al)))
    elif lam <= delta:
        branch = CaseBranch.MID
        value = (xd * (2.0 * md_a - lam_a) + yd * (mlam_a - 2.0 * md_a)
                 + k * (_left(a, xd, C, al) - _left(a, a, xd, al)
                        + _right(yd, b, b, al) - _right(C, yd, b, al)))
    else:
        branch = CaseBranch.DELTA_LE_LAM
        value = (xd * (2.0 * md_a - lam_a) - yd * mlam_a
                 + k * (_right(C, b, b, al) + _left(a, xd, C, al) - _left(a, a, xd, al)))
    return BranchValue(value, branch)


# ---------------------------------------------------------------------------
# Variant plumbing


def pin(variant: BoundVariant, p: IneqParams) -> IneqParams:
    """Project a full parameter sample onto a variant, overriding pinned fields."""
    variant = BoundVariant(variant)
    I = p.interval
    g = I.geometric_mid
    if variant in _MIDPOINT_PINS:
        lam, alpha = _MIDPOINT_PINS[variant]
        return p.with_(lam=p.lam if lam is None else lam,
                       alpha=p.alpha if alpha is None else alpha, x=g)
    if variant is V.THM21:
        return p
    if variant is V.COR_310:
        return p.with_(lam=0.0)
    if variant is V.THM22:
        if p.y is None:
            raise ParameterMismatch("thm22 needs y")
        return p
    if variant is V.COR_21B:
        if p.delta is None:
            raise ParameterMismatch("cor-21b needs delta")
        xd, yd = symmetric_points(I, p.delta)
        return p.with_(x=xd, y=yd)
    if variant is V.COR_21C:
        C = p.C
        return p.with_(x=C, y=C, delta=None)
    if variant is V.COR_21D:
        return p.with_(x=I.a, y=I.b, delta=1.0)
    raise ValueError(f"unhandled variant {variant!r}")


def _close(u: float, v: float) -> bool:
    return abs(u - v) <= 1e-12 * max(abs(u), abs(v), 1e-300)


def _require_pinned(variant: BoundVariant, p: IneqParams) -> None:
    expected = pin(variant, p)
    for name in ("alpha", "lam", "x", "y", "delta"):
        want, got = getattr(expected, name), getattr(p, name)
        if want is None:
            continue
        if got is None or not _close(want, got):
            free = ", ".join(FREE_PARAMS[variant]) or "none"
            raise ParameterMismatch(
                f"{variant.value}: {name}={got!r} but the variant pins {name}={want!r} "
                f"(free parameters: {free})"
            )


class LhsForm(NamedTuple):
    """Displayed left side: head(f) - coef * [j_minus(a..point) + j_plus(point..b)]."""

    interval: GeometricInterval
    head: Callable[[FunctionSpec], float]
    coef: float
    point: float
    alpha: float

    def __call__(self, spec: FunctionSpec, cfg: QuadConfig = DEFAULT_QUAD) -> Estimate:
        J = j_split(spec, self.alpha, self.interval, self.point, cfg)
        return Estimate(self.head(spec) - self.coef * J.value, abs(self.coef) * J.error)


class ClosedForm(NamedTuple):
    lhs: LhsForm
    rhs: float
    branch: Optional[CaseBranch] = None


def _ends(spec: FunctionSpec, I: GeometricInterval) -> float:
    return 0.5 * (_f(spec, I.a) + _f(spec, I.b))


def closed_form_bound(variant: BoundVariant, M: float, p: IneqParams) -> ClosedForm:
    """Left-side evaluator and right-side bound of a variant, each as displayed.

    ``p`` must already carry the variant's pinned values (see :func:`pin`).
    """
    variant = BoundVariant(variant)
    _require_pinned(variant, p)
    I = p.interval
    a, b, al, lam = I.a, I.b, p.alpha, p.lam
    lr = I.log_ratio
    lr_a = lr**al
    g = I.geometric_mid
    gam = gamma(al + 1.0)
    frac = 2.0 ** (al - 1.0) * gam / lr_a  # coefficient of the midpoint-split fractional term

    def form(head, coef, point):
        return LhsForm(I, head, coef, point, al)

    if variant is V.THM21:
        x = p.x
        lx, rx = log_pow(x, a, al), log_pow(b, x, al)
        lhs = form(lambda f: (1.0 - lam) * (lx + rx) * _f(f, x)
                   + lam * (_f(f, a) * lx + _f(f, b) * rx), gam, x)
        return ClosedForm(lhs, bound_thm21(M, p))

    if variant is V.COR_310:
        x = p.x
        lx, rx = log_pow(x, a, al), log_pow(b, x, al)
        lhs = form(lambda f: (lx + rx) / lr_a * _f(f, x), gam / lr_a, x)
        rhs = M / lr_a * (x * (lx - rx) + al * (_right(x, b, b, al) - _left(a, a, x, al)))
        return ClosedForm(lhs, rhs)

    mid_gap = _right(g, b, b, al) - _left(a, a, g, al)

    if variant is V.COR_MID_ALPHA:
        lhs = form(lambda f: _f(f, g), frac, g)
        rhs = 2.0 ** (al - 1.0) * M * al / lr_a * mid_gap
        return ClosedForm(lhs, rhs)
    if variant is V.COR_31:
        lhs = form(lambda f: _f(f, g), 1.0 / lr, g)
        return ClosedForm(lhs, M / lr * (a + b - 2.0 * g))
    if variant is V.COR_320:
        lhs = form(lambda f: _ends(f, I), frac, g)
        rhs = 2.0 ** (al - 1.0) * M / lr_a * ((b - a) / 2.0**al * lr_a - al * mid_gap)
        return ClosedForm(lhs, rhs)
    if variant is V.COR_32:
        lhs = form(lambda f: _ends(f, I), 1.0 / lr, g)
        return ClosedForm(lhs, M / lr * ((b - a) / 2.0 * lr - (a + b - 2.0 * g)))
    if variant is V.COR_SIMPSON_FRAC:
        lhs = form(lambda f: (_ends(f, I) + 2.0 * _f(f, g)) / 3.0, frac, g)
        # sign of the integral bracket follows the lam = 1/3 specialization of thm21
        rhs = 2.0 ** (al - 1.0) * M / (3.0 * lr_a) * ((b - a) / 2.0**al * lr_a + al * mid_gap)
        return ClosedForm(lhs, rhs)
    if variant is V.COR_33:
        lhs = form(lambda f: (_ends(f, I) + 2.0 * _f(f, g)) / 3.0, 1.0 / lr, g)
        return ClosedForm(lhs, M / (3.0 * lr) * ((b - a) / 2.0 * lr + (a + b - 2.0 * g)))
    if variant is V.COR_HALF_FRAC:
        # weights 1/2 on f(sqrt(ab)) and 1/4 on each endpoint
        lhs = form(lambda f: 0.5 * (_ends(f, I) + _f(f, g)), frac, g)
        return ClosedForm(lhs, M * (b - a) / 4.0)
    if variant is V.COR_34:
        lhs = form(lambda f: 0.5 * (_ends(f, I) + _f(f, g)), 1.0 / lr, g)
        return ClosedForm(lhs, M * (b - a) / 4.0)
    if variant is V.COR_35:
        lhs = form(lambda f: (1.0 - lam) * _f(f, g) + lam * _ends(f, I), 1.0 / lr, g)
        rhs = M / lr * (lam * (b - a) / 2.0 * lr + (1.0 - 2.0 * lam) * (a + b - 2.0 * g))
        return ClosedForm(lhs, rhs)

    C = p.C
    coef = gam / lr_a
    lam_a, mlam_a = lam**al, (1.0 - lam) ** al

    if variant is V.THM22:
        x, y = p.x, p.y
        lhs = form(lambda f: lam_a * _f(f, x) + mlam_a * _f(f, y), coef, C)
        cv = c_alpha_lambda(p)
        return ClosedForm(lhs, al * M * cv.value / lr_a, cv.branch)
    if variant is V.COR_21B:
        x, y = p.x, p.y
        lhs = form(lambda f: lam_a * _f(f, x) + mlam_a * _f(f, y), coef, C)
        lv = l_alpha_lambda_delta(al, lam, p.delta, I)
        return ClosedForm(lhs, M * lv.value, lv.branch)
    if variant is V.COR_21C:
        lhs = form(lambda f: (lam_a + mlam_a) * _f(f, C), coef, C)
        rhs = M * ((lam_a - mlam_a) * C + al / lr_a * (_right(C, b, b, al) - _left(a, a, C, al)))
        return ClosedForm(lhs, rhs)
    if variant is V.COR_21D:
        lhs = form(lambda f: lam_a * _f(f, a) + mlam_a * _f(f, b), coef, C)
        rhs = M * (b * mlam_a - a * lam_a + al / lr_a * (_left(a, a, C, al) - _right(C, b, b, al)))
        return ClosedForm(lhs, rhs)
    raise ValueError(f"unhandled variant {variant!r}")


def parent_bound(variant: BoundVariant, M: float, p: IneqParams) -> float:
    """The general bound at the variant's pinned parameters, normalized
    the way the variant's display is normalized. Equals ``closed_form_bound(...).rhs``
    whenever the specialization is algebraically exact.
    """
    variant = BoundVariant(variant)
    p = pin(variant, p)
    lr_a = p.interval.log_ratio**p.alpha
    if variant is V.THM21:
        return bound_thm21(M, p)
    if variant is V.THM22:
        return bound_thm22(M, p)
    if variant is V.COR_310:
        return bound_thm21(M, p) / lr_a
    if variant in _MIDPOINT_PINS:
        return bound_thm21(M, p) * 2.0 ** (p.alpha - 1.0) / lr_a
    if variant in (V.COR_21B, V.COR_21C, V.COR_21D):
        return bound_thm22(M, p)
    raise ValueError(f"unhandled variant {variant!r}")
