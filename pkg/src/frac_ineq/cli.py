"""Command-line front end: ``check``, ``sweep``, ``means`` and ``oracle``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

from .bounds import FREE_PARAMS, BoundVariant
from .errors import ConvergenceError, DomainError
from .funcat import GeometricInterval, parse_function
from .harness import (CHECK_IDS, DEFAULT_CATALOG, HH, ORACLE_THRESHOLDS, SampleConfig,
                      check_inequality, report_row, run_oracle, run_suite)
from .hadamard import IneqParams
from .means import PROP_IDS, REMARK_IDS, means_all, prop_check, remark_chain
from .results import CheckResult, TolerancePolicy, Verdict

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64

_VERDICT_EXIT = {
    Verdict.PASS: EXIT_PASS,
    Verdict.FAIL: EXIT_FAIL,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}

# CLI flag -> IneqParams field
_PARAM_FLAGS = {"alpha": "alpha", "lambda": "lam", "x": "x", "y": "y", "delta": "delta"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _free_flags(check_id: str) -> tuple[str, ...]:
    if check_id == HH:
        return ("alpha",)
    fields = FREE_PARAMS[BoundVariant(check_id)]
    return tuple(flag for flag, name in _PARAM_FLAGS.items() if name in fields)


def _params_from_flags(args) -> IneqParams:
    free = _free_flags(args.ineq)
    given = [flag for flag in _PARAM_FLAGS if getattr(args, flag) is not None]
    pinned = [flag for flag in given if flag not in free]
    if pinned:
        raise UsageError(
            f"{args.ineq} pins {', '.join('--' + f for f in pinned)}; "
            f"free parameters: {', '.join('--' + f for f in free) or 'none'}"
        )
    I = GeometricInterval(args.a, args.b)
    x = I.geometric_mid if args.x is None else args.x
    return IneqParams(
        I,
        1.0 if args.alpha is None else args.alpha,
        0.5 if args.__dict__["lambda"] is None else args.__dict__["lambda"],
        x,
        x if args.y is None else args.y,
        1.0 if args.delta is None else args.delta,
    )


def _fmt(v) -> str:
    return "" if v is None else (format(v, ".17g") if isinstance(v, float) else str(v))


def _print_result(r: CheckResult, as_json: bool) -> None:
    row = report_row(r)
    if as_json:
        print(json.dumps(row))
        return
    for k, v in row.items():
        print(f"{k:>10}  {_fmt(v)}")


def cmd_check(args) -> int:
    spec = parse_function(args.f)
    p = _params_from_flags(args)
    policy = TolerancePolicy(args.tol_abs, args.tol_rel)
    r = check_inequality(args.ineq, spec, p, policy=policy)
    _print_result(r, args.json)
    return _VERDICT_EXIT[r.verdict]


def _split_list(text: str, universe: Sequence[str]) -> tuple[str, ...]:
    if text == "all":
        return tuple(universe)
    return tuple(t.strip() for t in text.split(",") if t.strip())


def cmd_sweep(args) -> int:
    functions = _split_list(args.f, DEFAULT_CATALOG)
    for name in functions:
        parse_function(name)
    checks = _split_list(args.ineq, CHECK_IDS)
    cfg = SampleConfig(seed=args.seed, samples=args.samples, checks=checks, functions=functions,
                       policy=TolerancePolicy(args.tol_abs, args.tol_rel))
    report = run_suite(cfg)
    text = report.to_json() + "\n" if args.json else report.to_csv()
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from exc
    c = report.counts
    print(f"rows={len(report.rows)} pass={c['pass']} fail={c['fail']} "
          f"inconclusive={c['inconclusive']} skipped={len(report.skips)} "
          f"lattice_max_rel_dev={report.lattice_max_dev:.3g}", file=sys.stderr)
    print("branch coverage: " + " ".join(f"{k}={v}" for k, v in sorted(report.branch_coverage.items())),
          file=sys.stderr)
    for r in report.failures[:20]:
        print(f"FAIL {r.check_id} {r.f_name} {report_row(r)}", file=sys.stderr)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_means(args) -> int:
    m = means_all(args.a, args.b)
    print("  ".join(f"{k}={_fmt(v)}" for k, v in m._asdict().items()))
    if not args.props:
        return EXIT_PASS
    status = EXIT_PASS
    for pid in PROP_IDS:
        try:
            r = prop_check(pid, args.a, args.b, args.__dict__["lambda"], n=args.n)
        except DomainError as exc:
            print(f"{pid}  skipped ({exc})")
            continue
        print(f"{pid}  f={r.f_name}  LHS={_fmt(r.lhs)}  RHS={_fmt(r.rhs)}  {r.verdict.value}")
        if r.verdict is not Verdict.PASS:
            status = EXIT_FAIL
        if pid in REMARK_IDS:
            chain = remark_chain(pid, args.a, args.b, n=args.n)
            for lam, (lo, mid, up) in zip((0, 1), chain):
                ok = lo <= mid <= up
                print(f"{pid}  remark lambda={lam}: {_fmt(lo)} <= {_fmt(mid)} <= {_fmt(up)}  "
                      f"{'ordered' if ok else 'NOT ordered'}")
                if not ok:
                    status = EXIT_FAIL
    return status


def cmd_oracle(args) -> int:
    rep = run_oracle(args.target, args.samples, args.seed)
    print(f"target={rep.target} samples={rep.samples} max_rel_dev={rep.max_rel_dev:.3e} "
          f"threshold={rep.threshold:.0e} {'pass' if rep.passed else 'fail'}")
    for k, v in sorted(rep.per_branch.items()):
        print(f"  {k}: {v}")
    return EXIT_PASS if rep.passed else EXIT_FAIL


def _positive(text: str) -> float:
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _tolerances(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol-abs", type=float, default=1e-8)
    p.add_argument("--tol-rel", type=float, default=1e-8)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frac-ineq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run one inequality check")
    p.add_argument("--ineq", required=True, choices=CHECK_IDS)
    p.add_argument("--f", required=True, help="catalog function, e.g. power:2")
    p.add_argument("--a", required=True, type=_positive)
    p.add_argument("--b", required=True, type=_positive)
    p.add_argument("--alpha", type=_positive)
    p.add_argument("--lambda", type=float)
    p.add_argument("--x", type=_positive)
    p.add_argument("--y", type=_positive)
    p.add_argument("--delta", type=float)
    p.add_argument("--json", action="store_true")
    _tolerances(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("sweep", help="seeded randomized sweep, written as CSV")
    p.add_argument("--ineq", default="all", help="'all' or a comma-separated list of check ids")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", help="output path; stdout when omitted")
    p.add_argument("--f", default="all", help="'all' or a comma-separated list of functions")
    p.add_argument("--json", action="store_true", help="write a JSON array instead of CSV")
    _tolerances(p)
    p.set_defaults(run=cmd_sweep)

    p = sub.add_parser("means", help="special means and the mean inequalities")
    p.add_argument("--a", required=True, type=_positive)
    p.add_argument("--b", required=True, type=_positive)
    p.add_argument("--lambda", type=float, default=0.5)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--props", action="store_true")
    p.set_defaults(run=cmd_means)

    p = sub.add_parser("oracle", help="closed forms against brute-force quadrature")
    p.add_argument("--target", required=True, choices=tuple(ORACLE_THRESHOLDS))
    p.add_argument("--samples", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (UsageError, ValueError) as exc:
        print(f"frac-ineq {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"frac-ineq {args.command}: quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
