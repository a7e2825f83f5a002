"""Riemann-Liouville fractional integrals, evaluated pointwise.

``rl_left`` is the left-sided operator based at ``base``::

    J_{base+}^alpha f(x) = 1/Gamma(alpha) * int_base^x (x - t)**(alpha-1) f(t) dt

and ``rl_right`` its mirror based at ``top``.  ``midpoint_pair`` adds the two
operators anchored at the midpoint of an interval and evaluated at its ends,
the combination every midpoint-Fejer estimate is written in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError
from .quad import (
    DEFAULT_TOL,
    EndpointWeight,
    Interval,
    QuadResult,
    integrate_weighted,
)
from .specfun import gamma_fn


@dataclass(frozen=True)
class FracOrder:
    alpha: float

    def __post_init__(self) -> None:
        alpha = float(self.alpha)
        if not (alpha > 0 and math.isfinite(alpha)):
            raise DomainError(f"fractional order must be > 0, got {alpha}")
        object.__setattr__(self, "alpha", alpha)

    @property
    def gamma(self) -> float:
        return gamma_fn(self.alpha)


def _order(order: FracOrder | float) -> FracOrder:
    return order if isinstance(order, FracOrder) else FracOrder(order)


def _scaled(res: QuadResult, c: float) -> QuadResult:
    return QuadResult(res.value * c, res.error_estimate * abs(c), res.evaluations)


def rl_left(f: Callable, base: float, order: FracOrder | float, x: float,
            tol: float = DEFAULT_TOL, *, full_output: bool = False):
    """Left Riemann-Liouville integral of ``f`` from ``base``, evaluated at ``x > base``.

    With ``full_output=True`` a QuadResult is returned instead of a float.
    """
    order = _order(order)
    if not x > base:
        raise DomainError(f"rl_left needs x > base, got x={x}, base={base}")
    res = integrate_weighted(
        f, Interval(base, x), EndpointWeight.right(order.alpha - 1.0), tol
    )
    res = _scaled(res, 1.0 / order.gamma)
    return res if full_output else res.value


def rl_right(f: Callable, top: float, order: FracOrder | float, x: float,
             tol: float = DEFAULT_TOL, *, full_output: bool = False):
    """Right Riemann-Liouville integral of ``f`` up to ``top``, evaluated at ``x < top``."""
    order = _order(order)
    if not x < top:
        raise DomainError(f"rl_right needs x < top, got x={x}, top={top}")
    res = integrate_weighted(
        f, Interval(x, top), EndpointWeight.left(order.alpha - 1.0), tol
    )
    res = _scaled(res, 1.0 / order.gamma)
    return res if full_output else res.value


def midpoint_pair(h: Callable, iv: Interval, order: FracOrder | float,
                  tol: float = DEFAULT_TOL, *, full_output: bool = False):
    """``J_{m-}^alpha h(a) + J_{m+}^alpha h(b)`` with ``m`` the midpoint of ``iv``.

    Equivalently ``1/Gamma(alpha)`` times the sum of
    ``int_a^m (t-a)**(alpha-1) h(t) dt`` and ``int_m^b (b-t)**(alpha-1) h(t) dt``.
    """
    order = _order(order)
    m = iv.mid
    lo = rl_right(h, m, order, iv.a, tol, full_output=True)
    hi = rl_left(h, m, order, iv.b, tol, full_output=True)
    res = QuadResult(lo.value + hi.value, lo.error_estimate + hi.error_estimate,
                     lo.evaluations + hi.evaluations)
    return res if full_output else res.value


def endpoint_pair(h: Callable, iv: Interval, order: FracOrder | float,
                  tol: float = DEFAULT_TOL, *, full_output: bool = False):
    """``J_{a+}^alpha h(b) + J_{b-}^alpha h(a)``: both operators span all of ``iv``."""
    order = _order(order)
    lo = rl_left(h, iv.a, order, iv.b, tol, full_output=True)
    hi = rl_right(h, iv.b, order, iv.a, tol, full_output=True)
    res = QuadResult(lo.value + hi.value, lo.error_estimate + hi.error_estimate,
                     lo.evaluations + hi.evaluations)
    return res if full_output else res.value
