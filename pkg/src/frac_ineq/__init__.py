"""Numerical verification of Ostrowski, Simpson and Hermite-Hadamard type
bounds for Hadamard fractional integrals of Lipschitzian functions."""

from .bounds import (BoundVariant, CaseBranch, bound_thm21, bound_thm22, c_alpha_lambda,
                     closed_form_bound, l_alpha_lambda_delta, parent_bound, pin)
from .errors import ConvergenceError, DomainError, OrderingError, ParameterMismatch
from .funcat import FunctionSpec, GeometricInterval, builtin, ga_convex_check, parse_function
from .hadamard import IneqParams, hh_triple, i_f, j_minus, j_plus, s_f
from .harness import (SampleConfig, check_inequality, oracle_c_alpha_lambda, run_suite,
                      sample_params, tightness_search)
from .means import MeanSet, means_all, prop_check, remark_chain
from .numerics import QuadConfig, QuadResult, integrate_adaptive, lower_incomplete_gamma
from .results import CheckResult, TolerancePolicy, Verdict

__version__ = "0.1.0"

__all__ = [
    "BoundVariant", "CaseBranch", "bound_thm21", "bound_thm22", "c_alpha_lambda",
    "closed_form_bound", "l_alpha_lambda_delta", "parent_bound", "pin",
    "ConvergenceError", "DomainError", "OrderingError", "ParameterMismatch",
    "FunctionSpec", "GeometricInterval", "builtin", "ga_convex_check", "parse_function",
    "IneqParams", "hh_triple", "i_f", "j_minus", "j_plus", "s_f",
    "SampleConfig", "check_inequality", "oracle_c_alpha_lambda", "run_suite",
    "sample_params", "tightness_search",
    "MeanSet", "means_all", "prop_check", "remark_chain",
    "QuadConfig", "QuadResult", "integrate_adaptive", "lower_incomplete_gamma",
    "CheckResult", "TolerancePolicy", "Verdict",
]
