import math

import numpy as np
import pytest

from frac_ineq.errors import DomainError
from frac_ineq.funcat import (INV_E, XEXP_CEILING, GeometricInterval, builtin, ga_convex_check,
                              lipschitz_estimate, negate, parse_function, reflect)


def test_interval_validation():
    with pytest.raises(DomainError):
        GeometricInterval(0.0, 1.0)
    with pytest.raises(DomainError):
        GeometricInterval(2.0, 2.0)
    with pytest.raises(DomainError):
        GeometricInterval(2.0, 1.0)
    I = GeometricInterval(1.0, math.e)
    assert I.log_ratio == pytest.approx(1.0)
    assert I.geometric_mid == pytest.approx(math.sqrt(math.e))
    assert I.point(0.0) == 1.0 and I.point(1.0) == math.e
    g = I.geomspace(5)
    assert g[0] == 1.0 and g[-1] == math.e


@pytest.mark.parametrize("name", ["const:3", "identity", "power:2", "power:3", "xexp",
                                  "recip", "log", "xlog"])
@pytest.mark.parametrize("ab", [(0.5, 2.0), (1.0, math.e), (3.0, 40.0)])
def test_analytic_lipschitz_matches_numeric_estimate(name, ab):
    f = parse_function(name)
    I = GeometricInterval(*ab)
    if not f.admits(I):
        pytest.skip("outside domain")
    assert f.lipschitz(I) == pytest.approx(lipschitz_estimate(f, I), rel=1e-9, abs=1e-12)


def test_derivatives_against_finite_differences():
    t = np.geomspace(0.5, 5.0, 7)
    h = 1e-6
    for name in ["identity", "power:2", "power:3", "xexp", "recip", "log", "xlog"]:
        f = parse_function(name)
        fd = (f(t * (1 + h)) - f(t * (1 - h))) / (2 * h * t)
        np.testing.assert_allclose(f.deriv(t), fd, rtol=1e-6)


def test_parse_and_builtin_errors():
    assert parse_function("power:2")(3.0) == 9.0
    assert parse_function(" const:5 ")(7.0) == 5.0
    for bad in ["power", "power:", "const", "nope", "identity:2", "power:0.5"]:
        with pytest.raises((ValueError, DomainError)):
            parse_function(bad)


def test_xlog_floor_and_xexp_ceiling():
    f = builtin("xlog")
    assert f.domain_floor == INV_E
    assert not f.admits(GeometricInterval(0.2, 1.0))
    assert f.admits(GeometricInterval(0.4, 1.0))
    with pytest.raises(DomainError):
        builtin("xlog", domain_floor=0.1)
    with pytest.raises(DomainError):
        f.lipschitz(GeometricInterval(0.2, 1.0))
    assert not builtin("xexp").admits(GeometricInterval(1.0, XEXP_CEILING + 1))


def test_ga_convexity_lattice():
    I = GeometricInterval(0.5, 8.0)
    for name in ["const:3", "identity", "power:2", "xexp", "recip", "log"]:
        assert ga_convex_check(parse_function(name), I).convex, name
    res = ga_convex_check(negate(builtin("power", 2)), I)
    assert not res.convex and res.worst_slack < 0
    # t ln t is GA-convex only from e^-2 on
    assert ga_convex_check(builtin("xlog"), GeometricInterval(0.4, 3.0)).convex
    with pytest.raises(ValueError):
        ga_convex_check(builtin("identity"), I, grid_size=2)


def test_reflect_and_negate():
    f = builtin("power", 2)
    r = reflect(f)
    assert r(4.0) == pytest.approx(1 / 16)
    assert r.deriv(2.0) == pytest.approx(-2 * 0.5 / 4)
    n = negate(f)
    assert n(3.0) == -9.0 and n.deriv(3.0) == -6.0
    assert n.lipschitz(GeometricInterval(1, 2)) == f.lipschitz(GeometricInterval(1, 2))


def test_spec_identity_hashing_for_caches():
    a, b = builtin("identity"), builtin("identity")
    assert a == a and a != b
    assert len({a, b}) == 2
