"""Acceptance criteria, each at its stated tolerance.

A per-criterion PASS/FAIL line is printed in the terminal summary.
"""

import math
import random
import time

import mpmath
import pytest

from frac_ineq import cli
from frac_ineq.bounds import BoundVariant as V, closed_form_bound, parent_bound, pin
from frac_ineq.funcat import INV_E, GeometricInterval, builtin, ga_convex_check, parse_function
from frac_ineq.hadamard import IneqParams, hh_triple, i_f, s_f
from frac_ineq.harness import (DEFAULT_CATALOG, SampleConfig, run_oracle, run_suite,
                               sample_params)
from frac_ineq.means import PROP_IDS, means_all, prop_check

criterion = pytest.mark.criterion


def _rel(u, v):
    s = max(abs(u), abs(v))
    return 0.0 if s == 0 else abs(u - v) / s


def _random_interval(rng):
    a = math.exp(rng.uniform(math.log(0.05), math.log(50)))
    return GeometricInterval(a, a * math.exp(rng.uniform(math.log(1.01), math.log(50))))


# ---------------------------------------------------------------- 1


@pytest.fixture(scope="module")
def full_sweep(tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep") / "r.csv"
    t0 = time.perf_counter()
    code = cli.main(["sweep", "--ineq", "all", "--samples", "1000", "--seed", "42",
                     "--out", str(out)])
    return code, out.read_bytes(), time.perf_counter() - t0


@criterion(1, "full inequality sweep: zero fails, <= 1% inconclusive, under 5 minutes")
def test_full_sweep_has_no_failures(full_sweep):
    code, data, seconds = full_sweep
    verdicts = [line.rsplit(",", 1)[1] for line in data.decode().splitlines()[4:]]
    assert len(verdicts) > 100_000
    assert verdicts.count("fail") == 0
    assert verdicts.count("inconclusive") <= 0.01 * len(verdicts)
    assert code == 0
    assert seconds < 300


# ---------------------------------------------------------------- 2


@criterion(2, "normalized one-point bound at lambda=1/2, x=sqrt(ab) equals M(b-a)/4")
def test_half_weight_bound_is_alpha_free():
    rng = random.Random(2)
    for _ in range(100):
        I = _random_interval(rng)
        alpha = rng.uniform(0.2, 3.0)
        M = rng.uniform(0.1, 10.0)
        p = pin(V.COR_HALF_FRAC, IneqParams(I, alpha, 0.5, I.a))
        assert _rel(parent_bound(V.COR_HALF_FRAC, M, p), M * (I.b - I.a) / 4) <= 1e-10


# ---------------------------------------------------------------- 3


@criterion(3, "piecewise two-point constant and auxiliary integrals match quadrature")
def test_two_point_constant_matches_oracle():
    rep = run_oracle("c-alpha-lambda", 300, seed=3)
    assert min(rep.per_branch.values()) >= 100 and len(rep.per_branch) == 3
    assert rep.max_rel_dev <= 1e-6


@criterion(3, "piecewise two-point constant and auxiliary integrals match quadrature")
def test_auxiliary_integrals_match_oracle():
    assert run_oracle("aux-integrals", 200, seed=3).max_rel_dev <= 1e-9


# ---------------------------------------------------------------- 4


@criterion(4, "every corollary bound equals its parent at pinned parameters")
def test_specialization_lattice():
    cfg = SampleConfig(seed=4, samples=300)
    f = builtin("power", 2)
    for i in range(cfg.samples):
        p = sample_params(cfg, i)
        for v in V:
            q = pin(v, p)
            assert _rel(closed_form_bound(v, 1.0, q).rhs, parent_bound(v, 1.0, q)) <= 1e-10, v

        g = p.interval.geometric_mid
        M = f.lipschitz(p.interval)

        def both(v, q):
            cf = closed_form_bound(v, M, pin(v, q))
            return cf.rhs, cf.lhs(f).value

        half = p.with_(lam=0.5)
        r21c, l21c = both(V.COR_21C, half)
        r310, l310 = both(V.COR_310, p.with_(x=g))
        assert _rel(r21c, r310) <= 1e-10
        assert abs(l21c - l310) <= 1e-10 * max(1.0, abs(l310))
        r21d, l21d = both(V.COR_21D, half)
        r320, l320 = both(V.COR_320, p)
        scale = 2.0 ** (p.alpha - 1.0)
        assert _rel(scale * r21d, r320) <= 1e-10
        assert abs(scale * l21d - l320) <= 1e-10 * max(1.0, abs(l320))

        for lam, v in [(0.0, V.COR_31), (1.0, V.COR_32), (1.0 / 3.0, V.COR_33), (0.5, V.COR_34)]:
            r35, l35 = both(V.COR_35, p.with_(lam=lam))
            rv, lv = both(v, p)
            assert _rel(r35, rv) <= 1e-10
            assert abs(l35 - lv) <= 1e-10 * max(1.0, abs(lv))


# ---------------------------------------------------------------- 5


@criterion(5, "composites vanish on constants, weighted combination vanishes on ln")
def test_annihilation_identities():
    cfg = SampleConfig(seed=5, samples=500)
    ln = builtin("log")
    for i in range(cfg.samples):
        p = sample_params(cfg, i)
        c = [-3.0, 0.5, 7.0][i % 3]
        k = builtin("const", c)
        scale = abs(c) * max(1.0, p.interval.log_ratio ** p.alpha)
        assert abs(i_f(k, p).value) <= 1e-10 * scale
        assert abs(s_f(k, p).value) <= 1e-10 * abs(c)
        q = pin(V.COR_35, p)
        lhs = closed_form_bound(V.COR_35, 1.0, q).lhs(ln).value
        assert abs(lhs) <= 1e-10 * max(1.0, abs(math.log(p.a)), abs(math.log(p.b)))


# ---------------------------------------------------------------- 6


@criterion(6, "Hermite-Hadamard sandwich for GA-convex catalog functions")
def test_midpoint_sandwich():
    rng = random.Random(6)
    specs = [parse_function(n) for n in DEFAULT_CATALOG]
    checked = 0
    for _ in range(200):
        I = _random_interval(rng)
        alpha = rng.uniform(0.2, 3.0)
        for f in specs:
            if not f.admits(I) or not ga_convex_check(f, I).convex:
                continue
            left, mid, right, _ = hh_triple(f, alpha, I)
            scale = max(1.0, abs(left), abs(right))
            assert mid - left >= -1e-9 * scale and right - mid >= -1e-9 * scale
            checked += 1
    assert checked > 1000


# ---------------------------------------------------------------- 7


@criterion(7, "alpha = 1 reduction to the plain logarithmic integral")
def test_alpha_one_reduction():
    assert run_oracle("alpha1-reduction", 100, seed=7).max_rel_dev <= 1e-9


# ---------------------------------------------------------------- 8


@criterion(8, "special means chain, mean inequalities, and the integer-power example")
def test_mean_chain():
    rng = random.Random(8)
    for _ in range(5000):
        a = math.exp(rng.uniform(-5, 5))
        b = a * math.exp(rng.uniform(1e-3, 5))
        m = means_all(a, b)
        assert m.H < m.G < m.L < m.I < m.A


@criterion(8, "special means chain, mean inequalities, and the integer-power example")
def test_mean_inequalities_hold():
    rng = random.Random(88)
    for pid in PROP_IDS:
        done = 0
        while done < 1000:
            a = math.exp(rng.uniform(math.log(0.05), math.log(50)))
            b = a * math.exp(rng.uniform(math.log(1.01), math.log(50)))
            if (pid == "P32" and b > 300) or (pid == "P_XLOGX" and a <= INV_E):
                continue
            r = prop_check(pid, a, b, rng.random(), n=rng.choice([1, 2, 3]))
            assert r.passed, r
            done += 1


@criterion(8, "special means chain, mean inequalities, and the integer-power example")
def test_integer_power_example_against_direct_evaluation():
    r = prop_check("P31", 1, 4, 0, n=2)
    with mpmath.workdps(30):
        lhs = abs(4 - 15 / mpmath.log(16))
        rhs = 8 / mpmath.log(4) * 2 * (mpmath.mpf("2.5") - 2)
    assert abs(r.lhs - float(lhs)) <= 1e-7
    assert abs(r.rhs - float(rhs)) <= 1e-7
    assert abs(r.rhs - 5.7707802) <= 1e-7


@criterion(8, "special means chain, mean inequalities, and the integer-power example")
@pytest.mark.xfail(strict=True, reason="printed LHS 1.4102697 disagrees with 15/ln 16 - 4 = 1.4101064")
def test_integer_power_example_against_printed_value():
    assert abs(prop_check("P31", 1, 4, 0, n=2).lhs - 1.4102697) <= 1e-7


# ---------------------------------------------------------------- 9


@criterion(9, "halved right side is always caught")
def test_corrupted_bound_is_caught():
    for seed in range(6):
        cfg = SampleConfig(seed=seed, samples=12)
        rep = run_suite(cfg, workers=1, rhs_factor=0.5)
        assert rep.failures, seed


# ---------------------------------------------------------------- 10


@criterion(10, "byte-identical reports across runs and worker counts")
def test_reports_are_reproducible(tmp_path, full_sweep):
    _, first, _ = full_sweep
    again = tmp_path / "again.csv"
    assert cli.main(["sweep", "--ineq", "all", "--samples", "1000", "--seed", "42",
                     "--out", str(again)]) == 0
    assert again.read_bytes() == first
    cfg = SampleConfig(seed=10, samples=60)
    texts = {run_suite(cfg, workers=w).to_csv() for w in (1, 2, 3)}
    assert len(texts) == 1
