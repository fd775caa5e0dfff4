import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from frac_ineq.errors import DomainError
from frac_ineq.funcat import GeometricInterval, builtin, parse_function, reflect
from frac_ineq.hadamard import IneqParams, hh_triple, i_f, j_minus, j_plus, log_pow, s_f

E = math.e
G = math.sqrt(E)
UNIT = GeometricInterval(1.0, E)


def _mp_j_minus(f, alpha, a, x):
    # direct t-integral with the log kernel
    return mpmath.quad(lambda t: mpmath.log(t / a) ** (alpha - 1) * f(t) / t, [a, x]) / mpmath.gamma(alpha)


def _mp_j_plus(f, alpha, x, b):
    return mpmath.quad(lambda t: mpmath.log(b / t) ** (alpha - 1) * f(t) / t, [x, b]) / mpmath.gamma(alpha)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.0, 1.7, 2.0, 3.0])
@pytest.mark.parametrize("name,mp_f", [
    ("power:2", lambda t: t**2),
    ("recip", lambda t: 1 / t),
    ("log", mpmath.log),
    ("xexp", lambda t: t * mpmath.exp(t)),
])
def test_operators_against_mpmath(alpha, name, mp_f):
    f = parse_function(name)
    a, x, b = 0.7, 1.9, 4.2
    with mpmath.workdps(30):
        ref_m = float(_mp_j_minus(mp_f, alpha, a, x))
        ref_p = float(_mp_j_plus(mp_f, alpha, x, b))
    assert j_minus(f, alpha, a, x).value == pytest.approx(ref_m, rel=1e-9)
    assert j_plus(f, alpha, x, b).value == pytest.approx(ref_p, rel=1e-9)


def test_operators_degenerate_and_domain():
    f = builtin("identity")
    assert j_minus(f, 0.5, 2.0, 2.0) == (0.0, 0.0)
    assert j_plus(f, 0.5, 2.0, 2.0) == (0.0, 0.0)
    with pytest.raises(DomainError):
        j_minus(f, 1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        j_plus(f, 1.0, 3.0, 2.0)


def test_alpha_one_operators_are_plain_integrals():
    f = builtin("identity")
    assert j_minus(f, 1.0, 1.0, E).value == pytest.approx(E - 1, rel=1e-13)
    assert j_plus(f, 1.0, 1.0, E).value == pytest.approx(E - 1, rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 10), st.floats(1.05, 20), st.floats(0.0, 1.0), st.floats(0.2, 3.0))
def test_reflection_swaps_the_operators(a, ratio, s, alpha):
    b = a * ratio
    x = a ** (1 - s) * b**s
    f = builtin("power", 2)
    r = reflect(f)
    assert j_plus(f, alpha, x, b).value == pytest.approx(j_minus(r, alpha, 1 / b, 1 / x).value,
                                                         rel=1e-9, abs=1e-14)


def test_one_point_composite_examples():
    # identity, alpha = 1, lambda = 0, x = sqrt(e): 2 sqrt(e) * 1/2 * ... = sqrt(e) - (e - 1)
    p = IneqParams(UNIT, 1.0, 0.0, G)
    assert i_f(builtin("identity"), p).value == pytest.approx(G - (E - 1), abs=1e-13)
    # x^2 at lambda = 1, x = sqrt(e): (1 + e^2)/2 - (e^2 - 1)/2 = 1
    p = IneqParams(UNIT, 1.0, 1.0, G)
    assert i_f(builtin("power", 2), p).value == pytest.approx(1.0, abs=1e-13)


def test_two_point_composite_examples():
    p = IneqParams(UNIT, 1.0, 0.5, 1.0, E)
    assert s_f(builtin("identity"), p).value == pytest.approx((3 - E) / 2, abs=1e-13)
    p = IneqParams(UNIT, 1.0, 0.5, G, G)
    assert abs(s_f(builtin("log"), p).value) <= 1e-13
    with pytest.raises(ValueError):
        s_f(builtin("log"), IneqParams(UNIT, 1.0, 0.5, G))


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 10), st.floats(1.05, 20), st.floats(0, 1), st.floats(0, 1),
       st.floats(0.2, 3.0), st.floats(-5, 5))
def test_composites_vanish_on_constants(a, ratio, lam, s, alpha, c):
    I = GeometricInterval(a, a * ratio)
    p = IneqParams(I, alpha, lam, I.point(s), I.point(s))
    k = builtin("const", c)
    scale = max(1.0, abs(c)) * max(1.0, I.log_ratio**alpha)
    assert abs(i_f(k, p).value) <= 1e-11 * scale
    assert abs(s_f(k, p).value) <= 1e-11 * max(1.0, abs(c))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 10), st.floats(1.05, 20),
       st.sampled_from([0.0, 1.0]) | st.floats(1e-3, 1.0), st.floats(0.2, 3.0))
def test_coincident_points_reduce_to_one_point_form(a, ratio, lam, alpha):
    # lam is kept away from tiny positive values: there C rounds to a few ulps
    # above a, and lam^alpha versus ln(C/a)^alpha then differ for alpha < 1
    I = GeometricInterval(a, a * ratio)
    f = builtin("power", 3)
    C = I.point(lam)
    two = s_f(f, IneqParams(I, alpha, lam, C, C)).value
    one = i_f(f, IneqParams(I, alpha, 0.0, C)).value / I.log_ratio**alpha
    assert two == pytest.approx(one, rel=1e-9, abs=1e-9 * max(1.0, f(I.b)))


def test_sandwich_triple_closed_form():
    t = hh_triple(builtin("power", 2), 1.0, UNIT)
    assert t.left == pytest.approx(E)
    assert t.middle == pytest.approx((E**2 - 1) / 2, rel=1e-13)
    assert t.right == pytest.approx((1 + E**2) / 2)
    assert t.left <= t.middle <= t.right


def test_params_validation_and_clamping():
    with pytest.raises(DomainError):
        IneqParams(UNIT, 0.0, 0.5, 1.5)
    with pytest.raises(DomainError):
        IneqParams(UNIT, 1.0, 1.5, 1.5)
    with pytest.raises(DomainError):
        IneqParams(UNIT, 1.0, 0.5, 3.0)
    with pytest.raises(DomainError):
        IneqParams(UNIT, 1.0, 0.5, 1.5, 1.6, delta=0.2)
    p = IneqParams(UNIT, 1.0, 0.5, E * (1 + 1e-14))
    assert p.x == E
    assert p.C == pytest.approx(G)
    assert p.with_(lam=1.0).C == E


def test_log_pow():
    assert log_pow(2.0, 2.0, 0.3) == 0.0
    assert log_pow(E, 1.0, 2.0) == pytest.approx(1.0)
