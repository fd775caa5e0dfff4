"""Randomized verification of every bound against every catalog function.

Sampling is counter-based: parameters for sample ``i`` depend only on
(seed, i), so chunks can be evaluated in any order or process and merged
back by index.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .bounds import (BoundVariant, CaseBranch, branch_of, c_alpha_lambda, closed_form_bound,
                     parent_bound, pin)
from .errors import ConvergenceError, DomainError
from .funcat import FunctionSpec, GeometricInterval, ga_convex_check, parse_function
from .hadamard import IneqParams, hh_triple, j_minus, j_plus
from .numerics import (DEFAULT_QUAD, QuadConfig, aux_integral_left, aux_integral_right, gamma,
                       golden_section_max, integrate_adaptive, integrate_log_singular)
from .results import DEFAULT_POLICY, CheckResult, TolerancePolicy, Verdict, classify

HH = "hh"
CHECK_IDS: tuple[str, ...] = tuple(v.value for v in BoundVariant) + (HH,)
DEFAULT_CATALOG: tuple[str, ...] = (
    "const:3", "identity", "power:2", "power:3", "xexp", "recip", "log", "xlog",
)
THREADS_ENV = "FRAC_INEQ_THREADS"

REPORT_COLUMNS = ("check_id", "f_name", "a", "b", "alpha", "lambda", "x", "y", "delta",
                  "C", "branch", "lhs", "rhs", "margin", "quad_error", "verdict")

REPORT_NOTES = (
    "geometric mean taken as sqrt(ab); the printed definition (a+b)/2 coincides with A",
    "half-weight midpoint variant uses weights 1/2 on the trapezoid and midpoint terms",
    "the ln proposition is checked as a zero identity plus right-side nonnegativity",
)

THM22_BRANCHES = (CaseBranch.C_LE_X, CaseBranch.X_LE_C_LE_Y, CaseBranch.Y_LE_C)


def _check_ids(ids: Iterable[str]) -> tuple[str, ...]:
    out = tuple(ids)
    for cid in out:
        if cid not in CHECK_IDS:
            raise ValueError(f"unknown check id {cid!r}; expected one of {', '.join(CHECK_IDS)}")
    return out


@dataclass(frozen=True)
class SampleConfig:
    seed: int = 42
    samples: int = 1000
    a_range: tuple[float, float] = (0.05, 50.0)
    ratio_range: tuple[float, float] = (1.01, 50.0)
    alpha_range: tuple[float, float] = (0.2, 3.0)
    alpha_strata: tuple[float, ...] = (0.5, 1.0, 2.0)
    lam_strata: tuple[float, ...] = (0.0, 1.0 / 3.0, 0.5, 1.0)
    # chance that x is moved to sqrt(ab) where the targeted branch allows it
    midpoint_share: float = 0.125
    min_per_branch: int = 50
    policy: TolerancePolicy = DEFAULT_POLICY
    checks: tuple[str, ...] = CHECK_IDS
    functions: tuple[str, ...] = DEFAULT_CATALOG
    quad: QuadConfig = DEFAULT_QUAD

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.samples < 0:
            raise ValueError("samples must be >= 0")
        lo, hi = self.a_range
        if not 0 < lo <= hi:
            raise ValueError(f"bad a_range {self.a_range!r}")
        lo, hi = self.ratio_range
        if not 1.0 + 1e-6 <= lo <= hi:
            raise ValueError(f"bad ratio_range {self.ratio_range!r}")
        lo, hi = self.alpha_range
        if not 0 < lo <= hi:
            raise ValueError(f"bad alpha_range {self.alpha_range!r}")
        if len(self.alpha_strata) > 8 or len(self.lam_strata) > 8:
            raise ValueError("at most 8 strata per parameter")
        if self.min_per_branch < 50:
            raise ValueError("min_per_branch must be >= 50")
        object.__setattr__(self, "checks", _check_ids(self.checks))


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(index << 64) | seed))


def _log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    if lo == hi:
        return lo
    return float(min(max(math.exp(rng.uniform(math.log(lo), math.log(hi))), lo), hi))


def sample_params(cfg: SampleConfig, index: int) -> IneqParams:
    """Parameters for sample ``index``.

    alpha and lambda cycle through their strata on some indices and are
    uniform otherwise. The two-point case (position of C against x <= y) is
    targeted round-robin by index so every case is represented.
    """
    if not 0 <= index:
        raise ValueError("index must be >= 0")
    rng = _rng(cfg.seed, index)
    a = _log_uniform(rng, *cfg.a_range)
    b = a * _log_uniform(rng, *cfg.ratio_range)
    I = GeometricInterval(a, b)
    u_alpha, u_lam, u_mid, delta = rng.uniform(size=4)

    k = index % 8
    if k < len(cfg.alpha_strata):
        alpha = cfg.alpha_strata[k]
    else:
        lo, hi = cfg.alpha_range
        alpha = lo + (hi - lo) * float(u_alpha)
    k = (index // 8) % 8
    lam = cfg.lam_strata[k] if k < len(cfg.lam_strata) else float(u_lam)
    C = I.point(lam)

    target = index % 3
    if target == 0:      # C <= x <= y
        x, y = _log_uniform(rng, C, b), _log_uniform(rng, C, b)
    elif target == 1:    # x <= C <= y
        x, y = _log_uniform(rng, a, C), _log_uniform(rng, C, b)
    else:                # y <= C
        x, y = _log_uniform(rng, a, C), _log_uniform(rng, a, C)
    x, y = min(x, y), max(x, y)

    g = I.geometric_mid
    if u_mid < cfg.midpoint_share and ((g >= C) if target == 0 else (g < C)):
        x, y = g, max(y, g)
    return IneqParams(I, alpha, lam, x, y, 0.5 + 0.5 * float(delta))


# ---------------------------------------------------------------------------
# Single checks


def check_inequality(check_id: str, spec: FunctionSpec, p: IneqParams,
                     cfg: QuadConfig = DEFAULT_QUAD, M: Optional[float] = None,
                     policy: TolerancePolicy = DEFAULT_POLICY,
                     rhs_factor: float = 1.0) -> CheckResult:
    """Evaluate one claim |LHS| <= RHS.

    Bound variants are projected onto their pinned parameters first. The
    ``hh`` check encodes left <= middle <= right as
    |middle - (left+right)/2| <= (right-left)/2 and needs a function that
    passes the GA-convexity lattice test. ``rhs_factor`` scales the right
    side (a factor below 1 corrupts it on purpose).
    """
    if check_id not in CHECK_IDS:
        raise ValueError(f"unknown check id {check_id!r}; expected one of {', '.join(CHECK_IDS)}")
    spec.require(p.interval)
    if check_id == HH:
        if not ga_convex_check(spec, p.interval).convex:
            raise DomainError(f"{spec.name} is not GA-convex on [{p.a!r}, {p.b!r}]")
        t = hh_triple(spec, p.alpha, p.interval, cfg)
        lhs = t.middle - 0.5 * (t.left + t.right)
        rhs = 0.5 * (t.right - t.left) * rhs_factor
        margin, verdict = classify(lhs, rhs, t.error, policy)
        return CheckResult(check_id, p, spec.name, lhs, rhs, margin, None, t.error, verdict)

    variant = BoundVariant(check_id)
    pp = pin(variant, p)
    if M is None:
        M = spec.lipschitz(pp.interval)
    form = closed_form_bound(variant, M, pp)
    est = form.lhs(spec, cfg)
    rhs = form.rhs * rhs_factor
    margin, verdict = classify(est.value, rhs, est.error, policy)
    branch = form.branch.value if form.branch is not None else None
    return CheckResult(check_id, pp, spec.name, est.value, rhs, margin, branch, est.error, verdict)


# ---------------------------------------------------------------------------
# Brute-force oracles


def _log_kernel_integral(h, L: float, alpha: float, kinks: Sequence[float],
                         cfg: QuadConfig) -> float:
    """int_0^L u^(alpha-1) h(u) du with h continuous but kinked at ``kinks``."""
    if L <= 0:
        return 0.0
    inner = sorted(k for k in kinks if 0 < k < L)
    first = inner[0] if inner else L
    total = integrate_log_singular(h, first, alpha, cfg).value
    if inner:
        p = alpha - 1.0
        total += integrate_adaptive(lambda u: u**p * h(u), first, L, cfg, points=inner[1:]).value
    return total


def oracle_c_alpha_lambda(p: IneqParams, cfg: QuadConfig = DEFAULT_QUAD) -> float:
    """Weighted-distance integral behind the two-point bound, by quadrature.

    int_a^C |x-t| (ln(t/a))^(alpha-1) dt/t + int_C^b |y-t| (ln(b/t))^(alpha-1) dt/t
    """
    if p.y is None:
        raise ValueError("oracle needs y")
    a, b, C, x, y, al = p.a, p.b, p.C, p.x, p.y, p.alpha
    Lc, Rc = math.log(C / a), math.log(b / C)
    left = _log_kernel_integral(lambda u: np.abs(x - a * np.exp(u)), Lc, al,
                                [math.log(x / a)], cfg)
    right = _log_kernel_integral(lambda u: np.abs(y - b * np.exp(-u)), Rc, al,
                                 [math.log(b / y)], cfg)
    return left + right


class AuxOracle(NamedTuple):
    left: float
    right: float
    left_quad: float
    right_quad: float


def oracle_aux_integrals(a: float, x: float, b: float, alpha: float,
                         cfg: QuadConfig = DEFAULT_QUAD) -> AuxOracle:
    """Closed forms of int_a^x (ln(t/a))^(alpha-1) dt and int_x^b (ln(b/t))^(alpha-1) dt
    next to their quadrature values."""
    lq = 0.0 if x == a else a * integrate_log_singular(np.exp, math.log(x / a), alpha, cfg).value
    rq = 0.0 if x == b else b * integrate_log_singular(
        lambda u: np.exp(-u), math.log(b / x), alpha, cfg).value
    return AuxOracle(aux_integral_left(a, x, alpha), aux_integral_right(x, b, alpha), lq, rq)


def oracle_alpha1(spec: FunctionSpec, interval: GeometricInterval, x: float,
                  cfg: QuadConfig = DEFAULT_QUAD) -> tuple[float, float]:
    """(Gamma(2) [j_minus(a..x) + j_plus(x..b)] at alpha = 1, int_a^b f(t) dt/t)."""
    a, b = interval.a, interval.b
    ops = gamma(2.0) * (j_minus(spec, 1.0, a, x, cfg).value + j_plus(spec, 1.0, x, b, cfg).value)
    direct = integrate_adaptive(lambda t: spec.eval(t) / t, a, b, cfg,
                                points=np.geomspace(a, b, 9)[1:-1]).value
    return ops, direct


def _rel_dev(u: float, v: float) -> float:
    scale = max(abs(u), abs(v))
    return 0.0 if scale == 0 else abs(u - v) / scale


class OracleReport(NamedTuple):
    target: str
    samples: int
    max_rel_dev: float
    threshold: float
    per_branch: dict

    @property
    def passed(self) -> bool:
        return self.max_rel_dev <= self.threshold


ORACLE_THRESHOLDS = {"c-alpha-lambda": 1e-6, "aux-integrals": 1e-9, "alpha1-reduction": 1e-9}


def run_oracle(target: str, samples: int, seed: int = 0,
               cfg: QuadConfig = DEFAULT_QUAD) -> OracleReport:
    """Compare closed or piecewise forms with quadrature over seeded samples."""
    if target not in ORACLE_THRESHOLDS:
        raise ValueError(f"unknown oracle target {target!r}; expected one of "
                         f"{', '.join(ORACLE_THRESHOLDS)}")
    # interior lambda strata keep every two-point case reachable
    scfg = SampleConfig(seed=seed, samples=samples, lam_strata=(1.0 / 3.0, 0.5))
    worst = 0.0
    per_branch: Counter = Counter()
    fns = [parse_function(n) for n in DEFAULT_CATALOG if n != "xexp"]
    for i in range(samples):
        p = sample_params(scfg, i)
        if target == "c-alpha-lambda":
            bv = c_alpha_lambda(p)
            per_branch[bv.branch.value] += 1
            worst = max(worst, _rel_dev(bv.value, oracle_c_alpha_lambda(p, cfg)))
        elif target == "aux-integrals":
            o = oracle_aux_integrals(p.a, p.x, p.b, p.alpha, cfg)
            worst = max(worst, _rel_dev(o.left, o.left_quad), _rel_dev(o.right, o.right_quad))
        else:
            spec = fns[i % len(fns)]
            if not spec.admits(p.interval):
                spec = fns[0]
            per_branch[spec.name] += 1
            worst = max(worst, _rel_dev(*oracle_alpha1(spec, p.interval, p.x, cfg)))
    return OracleReport(target, samples, worst, ORACLE_THRESHOLDS[target], dict(per_branch))


# ---------------------------------------------------------------------------
# Suites


class Skip(NamedTuple):
    index: int
    check_id: str
    f_name: str
    reason: str


@dataclass
class SuiteReport:
    config: SampleConfig
    rows: list[CheckResult] = field(default_factory=list)
    skips: list[Skip] = field(default_factory=list)
    branch_coverage: Counter = field(default_factory=Counter)
    lattice_max_dev: float = 0.0

    @property
    def counts(self) -> Counter:
        return Counter(r.verdict.value for r in self.rows)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.rows if r.verdict is Verdict.FAIL]

    @property
    def inconclusive_fraction(self) -> float:
        return self.counts[Verdict.INCONCLUSIVE.value] / len(self.rows) if self.rows else 0.0

    @property
    def passed(self) -> bool:
        return not self.failures and self.inconclusive_fraction <= 0.01

    def worst_margins(self) -> dict[str, CheckResult]:
        """Per check id, the row with the smallest margin relative to its scale."""
        out: dict[str, CheckResult] = {}
        for r in self.rows:
            rel = r.margin / max(abs(r.lhs), abs(r.rhs), 1.0)
            cur = out.get(r.check_id)
            if cur is None or rel < cur.margin / max(abs(cur.lhs), abs(cur.rhs), 1.0):
                out[r.check_id] = r
        return out

    def to_csv(self) -> str:
        return rows_to_csv(self.rows)

    def to_json(self) -> str:
        return json.dumps([report_row(r) for r in self.rows], indent=1)


_SPEC_CACHE: dict[str, FunctionSpec] = {}


def _spec(name: str) -> FunctionSpec:
    # one object per name per process, so the integral cache can hit
    spec = _SPEC_CACHE.get(name)
    if spec is None:
        spec = _SPEC_CACHE[name] = parse_function(name)
    return spec


def _lattice_dev(p: IneqParams) -> float:
    worst = 0.0
    for v in BoundVariant:
        q = pin(v, p)
        worst = max(worst, _rel_dev(closed_form_bound(v, 1.0, q).rhs, parent_bound(v, 1.0, q)))
    return worst


def _run_chunk(cfg: SampleConfig, lo: int, hi: int, rhs_factor: float):
    rows, skips, coverage, lattice = [], [], Counter(), 0.0
    specs = [_spec(n) for n in cfg.functions]
    for i in range(lo, hi):
        p = sample_params(cfg, i)
        coverage[branch_of(p).value] += 1
        lattice = max(lattice, _lattice_dev(p))
        for spec in specs:
            if not spec.admits(p.interval):
                skips.extend(Skip(i, c, spec.name, "outside function domain") for c in cfg.checks)
                continue
            for cid in cfg.checks:
                try:
                    rows.append(check_inequality(cid, spec, p, cfg.quad, policy=cfg.policy,
                                                 rhs_factor=rhs_factor))
                except DomainError as exc:
                    skips.append(Skip(i, cid, spec.name, str(exc)))
                except ConvergenceError as exc:
                    skips.append(Skip(i, cid, spec.name, f"quadrature: {exc}"))
    return rows, skips, coverage, lattice


def worker_count(requested: Optional[int] = None) -> int:
    """Explicit request, else the environment cap, else the CPU count (0 means auto)."""
    n = requested
    if n is None:
        n = int(os.environ.get(THREADS_ENV, "0") or 0)
    if n < 0:
        raise ValueError("worker count must be >= 0")
    return n or os.cpu_count() or 1


def run_suite(cfg: SampleConfig, workers: Optional[int] = None,
              rhs_factor: float = 1.0) -> SuiteReport:
    """Run every configured check on every configured function for each sample.

    Output order is (sample index, function, check), independent of the
    number of worker processes.
    """
    n = min(worker_count(workers), max(cfg.samples, 1))
    bounds = np.linspace(0, cfg.samples, min(cfg.samples, 8 * n) + 1).astype(int)
    chunks = [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    if n <= 1 or len(chunks) <= 1:
        parts = [_run_chunk(cfg, lo, hi, rhs_factor) for lo, hi in chunks]
    else:
        with ProcessPoolExecutor(max_workers=n) as pool:
            futures = [pool.submit(_run_chunk, cfg, lo, hi, rhs_factor) for lo, hi in chunks]
            parts = [f.result() for f in futures]
    report = SuiteReport(cfg)
    for rows, skips, coverage, lattice in parts:
        report.rows.extend(rows)
        report.skips.extend(skips)
        report.branch_coverage.update(coverage)
        report.lattice_max_dev = max(report.lattice_max_dev, lattice)
    return report


# ---------------------------------------------------------------------------
# Report rows


def _num(v: Optional[float]) -> str:
    return "" if v is None else format(float(v), ".17g")


def report_row(r: CheckResult) -> dict:
    """Flat projection of a result, keyed by REPORT_COLUMNS."""
    p = r.params
    return {
        "check_id": r.check_id,
        "f_name": r.f_name,
        "a": p.a if p else None,
        "b": p.b if p else None,
        "alpha": p.alpha if p else None,
        "lambda": p.lam if p else None,
        "x": p.x if p else None,
        "y": p.y if p else None,
        "delta": p.delta if p else None,
        "C": p.C if p else None,
        "branch": r.branch,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "margin": r.margin,
        "quad_error": r.quad_error,
        "verdict": r.verdict.value,
    }


def rows_to_csv(rows: Iterable[CheckResult], notes: Sequence[str] = REPORT_NOTES) -> str:
    buf = io.StringIO()
    for note in notes:
        buf.write(f"# notes: {note}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in rows:
        w.writerow(_num(v) if isinstance(v, float) else ("" if v is None else v)
                   for v in report_row(r).values())
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    """Parse a report back into dicts; numeric fields become floats, blanks None."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    out = []
    for row in csv.DictReader(lines):
        parsed = {}
        for k, v in row.items():
            if k in ("check_id", "f_name", "branch", "verdict"):
                parsed[k] = v or None
            else:
                parsed[k] = float(v) if v else None
        out.append(parsed)
    return out


# ---------------------------------------------------------------------------
# Tightness probe


class TightnessResult(NamedTuple):
    ratio: float
    params: Optional[IneqParams]
    flagged: bool
    evaluations: int


# unit-cube coordinates: log a, log ratio, alpha, lambda, x position, y position, delta
_DIMS = 7


def _decode(u: np.ndarray, cfg: SampleConfig) -> IneqParams:
    a = math.exp(math.log(cfg.a_range[0]) + u[0] * math.log(cfg.a_range[1] / cfg.a_range[0]))
    lo, hi = cfg.ratio_range
    I = GeometricInterval(a, a * math.exp(math.log(lo) + u[1] * math.log(hi / lo)))
    alpha = cfg.alpha_range[0] + float(u[2]) * (cfg.alpha_range[1] - cfg.alpha_range[0])
    s, t = sorted((float(u[4]), float(u[5])))
    return IneqParams(I, alpha, float(u[3]), I.point(s), I.point(t), 0.5 + 0.5 * float(u[6]))


def tightness_search(check_id: str, spec: FunctionSpec, budget: int,
                     rhs_factor: float = 1.0, seed: int = 0,
                     cfg: SampleConfig = SampleConfig(),
                     policy: TolerancePolicy = DEFAULT_POLICY) -> TightnessResult:
    """Largest |LHS|/RHS found by random multi-start plus coordinate-wise golden section.

    Anything above 1 + tolerance is flagged as a potential counterexample.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    _check_ids([check_id])
    rng = np.random.Generator(np.random.Philox(key=seed))
    evals = 0

    def ratio(u: np.ndarray) -> float:
        nonlocal evals
        evals += 1
        try:
            p = _decode(np.clip(u, 0.0, 1.0), cfg)
            r = check_inequality(check_id, spec, p, cfg.quad, policy=policy,
                                 rhs_factor=rhs_factor)
        except (DomainError, ConvergenceError):
            return -1.0
        allow = policy.allowance(r.lhs, r.rhs)
        if r.rhs > allow:
            return abs(r.lhs) / r.rhs
        return 0.0 if abs(r.lhs) <= allow else math.inf

    n_random = max(1, budget // 2)
    starts = rng.uniform(size=(n_random, _DIMS))
    scores = np.array([ratio(u) for u in starts])
    best_i = int(np.argmax(scores))
    best_u, best = starts[best_i].copy(), float(scores[best_i])

    per_coord = max(0, (budget - evals) // _DIMS - 2)
    if per_coord > 0 and math.isfinite(best):
        for k in range(_DIMS):
            def along(t: float, k=k) -> float:
                v = best_u.copy()
                v[k] = t
                return ratio(v)
            t, val = golden_section_max(along, 0.0, 1.0, xtol=1e-9, maxiter=per_coord)
            if val > best:
                best, best_u[k] = val, t

    params = None
    if best >= 0:
        params = _decode(np.clip(best_u, 0.0, 1.0), cfg)
    flagged = best > 1.0 + policy.rel_tol
    return TightnessResult(max(best, 0.0), params, flagged, evals)
