"""Gamma, Beta and (non-regularized) incomplete Beta functions on positive reals."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .quad import EndpointWeight, Interval, integrate, integrate_weighted

# Relative target for the incomplete Beta quadrature; two orders of margin
# below the advertised 1e-11.
_BETA_QUAD_TOL = 1e-13


def _require_positive(name: str, x: float) -> float:
    x = float(x)
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"{name} must be a finite positive real, got {x}")
    return x


def gamma_fn(x: float) -> float:
    """Euler's Gamma function for ``x > 0``.

    Raises OverflowError when the result exceeds the float range
    (``x`` above roughly 171.6).
    """
    x = _require_positive("x", x)
    try:
        return math.gamma(x)
    except OverflowError:
        raise OverflowError(f"gamma({x}) overflows double precision") from None


def log_gamma(x: float) -> float:
    return math.lgamma(_require_positive("x", x))


def beta_fn(a: float, b: float) -> float:
    """Complete Beta function ``B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)``."""
    a = _require_positive("a", a)
    b = _require_positive("b", b)
    if a + b < 170.0:
        return math.gamma(a) * math.gamma(b) / math.gamma(a + b)
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


@dataclass(frozen=True)
class BetaArgs:
    """Arguments of ``B_x(alpha, beta)``: upper limit ``x`` in [0, 1]."""

    x: float
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        x = float(self.x)
        if not 0.0 <= x <= 1.0:
            raise DomainError(f"x must lie in [0, 1], got {x}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "alpha", _require_positive("alpha", self.alpha))
        object.__setattr__(self, "beta", _require_positive("beta", self.beta))


def _lower_piece(x: float, p: float, q: float) -> float:
    # int_0^x t^(p-1) (1-t)^(q-1) dt for x <= 1/2: only t = 0 can be singular,
    # and the left-power substitution absorbs it.
    if x == 0.0:
        return 0.0
    res = integrate_weighted(
        lambda t: (1.0 - t) ** (q - 1.0),
        Interval(0.0, x),
        EndpointWeight.left(p - 1.0),
        _BETA_QUAD_TOL,
        abs_tol=0.0,
    )
    return res.value


def incomplete_beta(args: BetaArgs) -> float:
    """``B_x(alpha, beta) = int_0^x t**(alpha-1) * (1-t)**(beta-1) dt``.

    The integral is split at 1/2.  The left piece carries the possible
    singularity at t = 0 as a left power weight.  For ``x < 1`` the right
    piece is regular and is integrated directly; at ``x = 1`` the complete
    Beta function is returned.  Both pieces are positive, so their sum has
    no cancellation.
    """
    if not isinstance(args, BetaArgs):
        raise TypeError("args must be a BetaArgs instance")
    x, p, q = args.x, args.alpha, args.beta
    if x == 1.0:
        return beta_fn(p, q)
    if x <= 0.5:
        return _lower_piece(x, p, q)
    upper = integrate(
        lambda t: t ** (p - 1.0) * (1.0 - t) ** (q - 1.0),
        Interval(0.5, x),
        _BETA_QUAD_TOL,
        abs_tol=0.0,
    )
    return _lower_piece(0.5, p, q) + upper.value
