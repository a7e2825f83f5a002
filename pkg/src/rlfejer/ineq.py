"""Midpoint-Fejer identities, sandwich inequalities and fractional bounds.

Every bound here estimates the same left-hand side,

    | f(m) [J_{m-}^a g(a) + J_{m+}^a g(b)] - [J_{m-}^a (fg)(a) + J_{m+}^a (fg)(b)] |

with ``m = (a+b)/2``.  T4-T6 assume ``|f'|`` or ``|f'|**q`` convex; T7-T9 are
the s-convex counterparts.  Bound formulas are coded exactly as stated in
the source, including the ones whose s = 1 specialisation does not reproduce
their convex counterpart; ``reduction_audit`` measures those gaps.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, HypothesisWarning, MissingParameterError
from .fracint import FracOrder, _order, endpoint_pair, midpoint_pair
from .funcspace import (
    FunctionSpec,
    HolderPair,
    SConvexityResult,
    SParam,
    WeightSpec,
    builtin_catalog,
    check_s_convex,
    is_nonnegative,
    sup_norm,
)
from .quad import (
    DEFAULT_TOL,
    EndpointWeight,
    Interval,
    QuadResult,
    integrate,
    integrate_weighted,
)
from .specfun import BetaArgs, gamma_fn, incomplete_beta

HOLDS_REL_TOL = 1e-9
HOLDS_ABS_TOL = 1e-12
IDENTITY_TOL = 1e-7
REDUCTION_TOL = 1e-12

_EPS = np.finfo(float).eps


class SandwichKind(enum.Enum):
    HH = "HH"
    FEJER = "FEJER"
    S_HH = "S_HH"
    FRAC_HH = "FRAC_HH"
    FRAC_FEJER = "FRAC_FEJER"


class Theorem(enum.Enum):
    T4 = "T4"
    T5 = "T5"
    T6 = "T6"
    T7 = "T7"
    T8 = "T8"
    T9 = "T9"


class ReductionPair(enum.Enum):
    T7_T4 = "T7->T4"
    T8_T5 = "T8->T5"
    T9_T6 = "T9->T6"

    @property
    def new(self) -> Theorem:
        return Theorem(self.value.split("->")[0])

    @property
    def classical(self) -> Theorem:
        return Theorem(self.value.split("->")[1])


@dataclass(frozen=True)
class SandwichTriple:
    left: float
    middle: float
    right: float
    kind: SandwichKind
    hypotheses_ok: bool = True
    quad_error: float = 0.0

    def holds(self, rel_tol: float = HOLDS_REL_TOL, abs_tol: float = HOLDS_ABS_TOL) -> bool:
        return (_holds(self.left, self.middle, rel_tol, abs_tol)
                and _holds(self.middle, self.right, rel_tol, abs_tol))


def _holds(lhs: float, rhs: float, rel_tol: float = HOLDS_REL_TOL,
           abs_tol: float = HOLDS_ABS_TOL) -> bool:
    return lhs <= rhs + rel_tol * abs(rhs) + abs_tol


@dataclass(frozen=True)
class InequalityReport:
    """One verified one-sided inequality ``lhs <= rhs``.

    ``certified`` is False when the case's hypotheses failed numeric
    certification; ``gated`` is False for informational rows.  Neither
    kind of row can fail a sweep.
    """

    case_id: str
    check: str
    theorem: str
    a: float
    b: float
    lhs: float
    rhs: float
    alpha: float | None = None
    s: float | None = None
    q: float | None = None
    f_label: str = ""
    g_label: str = ""
    quad_error: float = 0.0
    certified: bool = True
    gated: bool = True
    note: str = ""

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else math.copysign(math.inf, self.lhs)
        return self.lhs / self.rhs

    @property
    def holds(self) -> bool:
        return _holds(self.lhs, self.rhs)

    @property
    def failed(self) -> bool:
        return self.certified and self.gated and not self.holds


# -- kernel and identity ---------------------------------------------------

def kernel_k(t: float, iv: Interval, order: FracOrder | float, g: Callable,
             tol: float = DEFAULT_TOL) -> float:
    """Piecewise kernel of the midpoint identity.

    ``int_a^t (u-a)**(alpha-1) g(u) du`` on ``[a, m]`` (the midpoint takes this
    branch) and ``-int_t^b (b-u)**(alpha-1) g(u) du`` on ``(m, b]``.
    """
    order = _order(order)
    t = float(t)
    if not iv.a <= t <= iv.b:
        raise DomainError(f"t={t} lies outside [{iv.a}, {iv.b}]")
    mu = order.alpha - 1.0
    if t <= iv.mid:
        if t == iv.a:
            return 0.0
        return integrate_weighted(g, Interval(iv.a, t), EndpointWeight.left(mu), tol).value
    if t == iv.b:
        return 0.0
    return -integrate_weighted(g, Interval(t, iv.b), EndpointWeight.right(mu), tol).value


def _kernel_integral(f: FunctionSpec, g: Callable, iv: Interval, order: FracOrder,
                     tol: float) -> QuadResult:
    """``1/Gamma(alpha) * int_a^b k(t) f'(t) dt``, split at the midpoint."""

    def integrand(ts: np.ndarray) -> np.ndarray:
        ks = np.array([kernel_k(t, iv, order, g, tol) for t in ts])
        return ks * f.fprime(ts)

    # Right half uses (m, b]; the midpoint itself has measure zero.
    left = integrate(integrand, iv.left_half(), tol)
    right = integrate(integrand, iv.right_half(), tol)
    c = 1.0 / order.gamma
    return QuadResult(c * (left.value + right.value),
                      c * (left.error_estimate + right.error_estimate),
                      left.evaluations + right.evaluations)


def _identity_lhs(f: FunctionSpec, g: Callable, iv: Interval, order: FracOrder,
               tol: float) -> tuple[float, float, float]:
    """Signed midpoint combination, its error estimate and its magnitude scale."""
    fm = float(f(iv.mid))
    pg = midpoint_pair(g, iv, order, tol, full_output=True)
    pfg = midpoint_pair(lambda t: f(t) * g(t), iv, order, tol, full_output=True)
    value = fm * pg.value - pfg.value
    err = abs(fm) * pg.error_estimate + pfg.error_estimate
    scale = abs(fm * pg.value) + abs(pfg.value)
    return value, err, scale


def identity_residual(f: FunctionSpec, g: WeightSpec | Callable, iv: Interval,
                      order: FracOrder | float, tol: float = DEFAULT_TOL, *,
                      full_output: bool = False):
    """``|LHS - RHS|`` of the midpoint fractional identity.

    The left side comes from the midpoint operators, the right side from the
    kernel integral; the two are computed along unrelated quadrature paths.
    With ``full_output`` returns ``(residual, lhs, rhs, error_estimate)``.
    """
    order = _order(order)
    lhs, lhs_err, _ = _identity_lhs(f, g, iv, order, tol)
    rhs = _kernel_integral(f, g, iv, order, tol)
    residual = abs(lhs - rhs.value)
    if full_output:
        return residual, lhs, rhs.value, lhs_err + rhs.error_estimate
    return residual


def fejer_midpoint_lhs(f: FunctionSpec, g: WeightSpec | Callable, iv: Interval,
                       order: FracOrder | float, tol: float = DEFAULT_TOL, *,
                       full_output: bool = False):
    """Absolute value of the midpoint combination bounded by T4-T9.

    A difference no larger than its own quadrature and rounding error cannot
    be told apart from zero and is returned as exactly 0.
    """
    order = _order(order)
    value, err, scale = _identity_lhs(f, g, iv, order, tol)
    noise = err + 16 * _EPS * scale
    out = 0.0 if abs(value) <= noise else abs(value)
    return (out, noise) if full_output else out


# -- sandwiches -------------------------------------------------------------

def sandwich_hypothesis(kind: SandwichKind | str, f: FunctionSpec, iv: Interval,
                        s: SParam | float | None = None, *, grid: int = 12,
                        rng: np.random.Generator | int | None = 0) -> SConvexityResult:
    """Certify the hypothesis on ``f`` needed by a sandwich kind.

    Convexity for the classical and fractional kinds; s-convexity plus
    nonnegativity for S_HH.  Weight hypotheses are enforced by WeightSpec.
    """
    kind = SandwichKind(kind)
    if kind is SandwichKind.S_HH:
        if s is None:
            raise MissingParameterError("S_HH needs s")
        res = check_s_convex(f.f, iv, s, grid, rng)
        if res.certified and not is_nonnegative(f.f, iv):
            return SConvexityResult(False, res.worst_gap, res.samples)
        return res
    return check_s_convex(f.f, iv, 1.0, grid, rng)


def sandwich(kind: SandwichKind | str, f: FunctionSpec, iv: Interval,
             g: WeightSpec | None = None, order: FracOrder | float | None = None,
             s: SParam | float | None = None, tol: float = DEFAULT_TOL, *,
             check: bool = True, rng: np.random.Generator | int | None = 0) -> SandwichTriple:
    """Evaluate (left, middle, right) of a Hermite-Hadamard-type sandwich.

    HH:          f(m) <= mean of f <= (f(a)+f(b))/2
    FEJER:       f(m) int g <= int f g <= (f(a)+f(b))/2 int g
    S_HH:        2**(s-1) f(m) <= mean of f <= (f(a)+f(b))/(s+1)
    FRAC_HH:     f(m) <= Gamma(alpha+1)/(2 (b-a)**alpha) [J_{a+} f(b) + J_{b-} f(a)] <= (f(a)+f(b))/2
    FRAC_FEJER:  f(m) P(g) <= P(f g) <= (f(a)+f(b))/2 P(g), P = J_{a+}(.)(b) + J_{b-}(.)(a)

    With ``check`` the hypotheses on ``f`` are certified first; failure
    issues a HypothesisWarning but the triple is still computed.
    """
    kind = SandwichKind(kind)
    needs_g = kind in (SandwichKind.FEJER, SandwichKind.FRAC_FEJER)
    needs_alpha = kind in (SandwichKind.FRAC_HH, SandwichKind.FRAC_FEJER)
    if needs_g and g is None:
        raise MissingParameterError(f"{kind.value} needs a weight g")
    if needs_alpha and order is None:
        raise MissingParameterError(f"{kind.value} needs a fractional order")
    if kind is SandwichKind.S_HH and s is None:
        raise MissingParameterError("S_HH needs s")

    ok = True
    if check:
        ok = sandwich_hypothesis(kind, f, iv, s, rng=rng).certified
        if ok and needs_g:
            ok = isinstance(g, WeightSpec)
        if not ok:
            warnings.warn(f"{kind.value}: hypotheses not certified for {f.label} "
                          f"on [{iv.a}, {iv.b}]", HypothesisWarning, stacklevel=2)

    fa, fb, fm = (float(v) for v in f(np.array([iv.a, iv.b, iv.mid])))
    L = iv.width

    if kind in (SandwichKind.HH, SandwichKind.S_HH):
        res = integrate(f.f, iv, tol)
        mean = res.value / L
        if kind is SandwichKind.HH:
            left, right = fm, 0.5 * (fa + fb)
        else:
            sv = s.s if isinstance(s, SParam) else SParam(s).s
            left, right = 2.0 ** (sv - 1.0) * fm, (fa + fb) / (sv + 1.0)
        return SandwichTriple(left, mean, right, kind, ok, res.error_estimate / L)

    if kind is SandwichKind.FEJER:
        ig = integrate(g, iv, tol)
        ifg = integrate(lambda t: f(t) * g(t), iv, tol)
        return SandwichTriple(fm * ig.value, ifg.value, 0.5 * (fa + fb) * ig.value,
                              kind, ok, ig.error_estimate * max(abs(fm), abs(fa), abs(fb))
                              + ifg.error_estimate)

    order = _order(order)
    if kind is SandwichKind.FRAC_HH:
        pf = endpoint_pair(f.f, iv, order, tol, full_output=True)
        c = gamma_fn(order.alpha + 1.0) / (2.0 * L**order.alpha)
        return SandwichTriple(fm, c * pf.value, 0.5 * (fa + fb), kind, ok,
                              c * pf.error_estimate)

    pg = endpoint_pair(g, iv, order, tol, full_output=True)
    pfg = endpoint_pair(lambda t: f(t) * g(t), iv, order, tol, full_output=True)
    return SandwichTriple(fm * pg.value, pfg.value, 0.5 * (fa + fb) * pg.value, kind, ok,
                          pg.error_estimate * max(abs(fm), abs(fa), abs(fb))
                          + pfg.error_estimate)


# -- bounds -----------------------------------------------------------------

def t7_coefficient(alpha: float, s: float) -> float:
    """``B_{1/2}(alpha+1, s+1) + 1 / (2**(alpha+s+1) (alpha+s+1))``."""
    return (incomplete_beta(BetaArgs(0.5, alpha + 1.0, s + 1.0))
            + 1.0 / (2.0 ** (alpha + s + 1.0) * (alpha + s + 1.0)))


def _as_holder(hq: HolderPair | float | None) -> HolderPair | None:
    if hq is None or isinstance(hq, HolderPair):
        return hq
    return HolderPair.from_q(hq)


def bound_formula(theorem: Theorem | str, *, alpha: float, width: float, g_sup: float,
                  da: float, db: float, s: float | None = None,
                  hq: HolderPair | float | None = None) -> float:
    """Closed-form right-hand side of T4-T9.

    ``da``/``db`` are ``|f'(a)|``/``|f'(b)|``, ``g_sup`` is the sup norm of
    the weight and ``width`` is ``b - a``.
    """
    th = Theorem(theorem)
    hq = _as_holder(hq)
    if th in (Theorem.T7, Theorem.T8, Theorem.T9) and s is None:
        raise MissingParameterError(f"{th.value} needs s")
    if th not in (Theorem.T4, Theorem.T7) and hq is None:
        raise MissingParameterError(f"{th.value} needs q (and p)")
    if s is not None:
        s = SParam(s).s if not isinstance(s, SParam) else s.s

    al = float(alpha)
    G = gamma_fn(al + 1.0)
    head = width ** (al + 1.0) * g_sup
    if th is Theorem.T4:
        return head / (2.0 ** (al + 1.0) * G * (al + 1.0)) * (da + db)
    if th is Theorem.T7:
        return head / G * t7_coefficient(al, s) * (da + db)

    p, q = hq.p, hq.q
    Aq, Bq = da**q, db**q
    r = 1.0 / q
    if th is Theorem.T5:
        den = 2.0 ** (al + 1.0 + r) * (al + 1.0) * (al + 2.0) ** r * G
        return head / den * (((al + 3.0) * Aq + (al + 1.0) * Bq) ** r
                             + ((al + 1.0) * Aq + (al + 3.0) * Bq) ** r)
    if th is Theorem.T6:
        # Garbled first term read as (3|f'(a)|^q + |f'(b)|^q)^(1/q), mirroring the second.
        den = 2.0 ** (al + 1.0 + 2.0 * r) * (al * p + 1.0) ** r * G
        return head / den * ((3.0 * Aq + Bq) ** r + (Aq + 3.0 * Bq) ** r)
    if th is Theorem.T8:
        den = (2.0 ** (al + 1.0 + r) * (al + 1.0) * (al + 2.0) ** r
               * (al + s + q) ** r * G)
        c1 = (al + s + 1.0) * (al + 3.0)
        c2 = 2.0 ** (1.0 - s) * (al + 1.0) * (al + 2.0)
        return head / den * ((c1 * Aq + c2 * Bq) ** r + (c2 * Aq + c1 * Bq) ** r)
    # T9
    den = (2.0 ** (al + 1.0 + s / q) * (al * p + 1.0) * (al + 2.0) ** (1.0 / p)
           * (s + 1.0) ** r * G)
    k = 2.0 ** (s + 1.0) - 1.0
    return head / den * ((Aq * k + Bq) ** r + (Aq + Bq * k) ** r)


def bound_rhs(theorem: Theorem | str, f: FunctionSpec, g: WeightSpec | Callable,
              iv: Interval, order: FracOrder | float, s: SParam | float | None = None,
              hq: HolderPair | float | None = None, tol: float = DEFAULT_TOL) -> float:
    """Right-hand side of T4-T9 for a concrete ``f``, ``g`` and interval."""
    order = _order(order)
    da, db = (abs(float(v)) for v in f.fprime(np.array([iv.a, iv.b])))
    return bound_formula(theorem, alpha=order.alpha, width=iv.width,
                         g_sup=sup_norm(g, iv), da=da, db=db, s=s, hq=hq)


def bound_hypothesis(theorem: Theorem | str, f: FunctionSpec, iv: Interval,
                     s: SParam | float | None = None, q: float | None = None, *,
                     grid: int = 12,
                     rng: np.random.Generator | int | None = 0) -> SConvexityResult:
    """Certify ``|f'|`` (T4, T7) or ``|f'|**q`` (others) (s-)convex on ``iv``.

    T4-T6 always use s = 1.
    """
    th = Theorem(theorem)
    if th in (Theorem.T4, Theorem.T5, Theorem.T6):
        s = 1.0
    elif s is None:
        raise MissingParameterError(f"{th.value} needs s")
    if th in (Theorem.T4, Theorem.T7):
        power = 1.0
    else:
        if q is None:
            raise MissingParameterError(f"{th.value} needs q")
        power = float(q)
    return check_s_convex(f.abs_deriv_power(power), iv, s, grid, rng)


# -- reductions -------------------------------------------------------------

@dataclass(frozen=True)
class ReductionRow:
    pair: ReductionPair
    alpha: float
    q: float | None
    new_bound_at_s1: float
    classical_bound: float

    @property
    def relative_difference(self) -> float:
        return abs(self.new_bound_at_s1 - self.classical_bound) / abs(self.classical_bound)


def reduction_audit(pair: ReductionPair | str, alphas: Sequence[float],
                    qs: Sequence[float] = (2.0,), f: FunctionSpec | None = None,
                    g: WeightSpec | Callable | None = None,
                    iv: Interval | None = None) -> list[ReductionRow]:
    """Evaluate a new bound at s = 1 next to the classical bound it should recover.

    Defaults to ``f = exp`` and ``g = 1`` on [0, 1], which gives distinct
    endpoint derivatives.  T7->T4 does not involve q, so one row per alpha
    is produced for it.
    """
    pair = ReductionPair(pair)
    if iv is None:
        iv = Interval(0.0, 1.0)
    cat = builtin_catalog()
    if f is None:
        f = cat.function("exp").make(iv)
    if g is None:
        g = cat.weight("one").make(iv)
    q_grid: Sequence[float | None] = [None] if pair is ReductionPair.T7_T4 else list(qs)
    rows = []
    for al in alphas:
        for q in q_grid:
            new = bound_rhs(pair.new, f, g, iv, al, s=1.0, hq=q)
            old = bound_rhs(pair.classical, f, g, iv, al, hq=q)
            rows.append(ReductionRow(pair, float(al), q, new, old))
    return rows
