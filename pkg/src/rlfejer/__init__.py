"""Riemann-Liouville fractional integrals and numeric verification of
Hermite-Hadamard-Fejer type inequalities for s-convex functions."""

from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    HypothesisWarning,
    MissingParameterError,
)
from .fracint import FracOrder, endpoint_pair, midpoint_pair, rl_left, rl_right
from .funcspace import (
    Catalog,
    ConvexityClass,
    FunctionSpec,
    HolderPair,
    SParam,
    WeightSpec,
    builtin_catalog,
    check_s_convex,
    sup_norm,
)
from .ineq import (
    InequalityReport,
    ReductionPair,
    SandwichKind,
    SandwichTriple,
    Theorem,
    bound_rhs,
    fejer_midpoint_lhs,
    identity_residual,
    kernel_k,
    reduction_audit,
    sandwich,
)
from .quad import EndpointWeight, Interval, QuadResult, integrate, integrate_weighted
from .specfun import BetaArgs, beta_fn, gamma_fn, incomplete_beta

__version__ = "0.1.0"

__all__ = [
    "beta_fn",
    "BetaArgs",
    "bound_rhs",
    "builtin_catalog",
    "Catalog",
    "check_s_convex",
    "ConfigError",
    "ConvergenceError",
    "ConvexityClass",
    "DomainError",
    "endpoint_pair",
    "EndpointWeight",
    "fejer_midpoint_lhs",
    "FracOrder",
    "FunctionSpec",
    "gamma_fn",
    "HolderPair",
    "HypothesisWarning",
    "identity_residual",
    "incomplete_beta",
    "InequalityReport",
    "integrate",
    "integrate_weighted",
    "Interval",
    "kernel_k",
    "midpoint_pair",
    "MissingParameterError",
    "QuadResult",
    "reduction_audit",
    "ReductionPair",
    "rl_left",
    "rl_right",
    "sandwich",
    "SandwichKind",
    "SandwichTriple",
    "SParam",
    "sup_norm",
    "Theorem",
    "WeightSpec",
]
