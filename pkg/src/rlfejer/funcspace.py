"""Test functions, weights, and numeric certification of their hypotheses.

s-convexity (second sense) is certified by sampling the defining inequality
on a lattice plus random triples; a passing result is a sampling certificate,
not a proof.  Weights are validated for nonnegativity and symmetry about the
midpoint at construction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError
from .quad import Interval, as_vectorized

S_CONVEX_GAP_TOL = 1e-9
FD_REL_STEP = 1e-6
FD_GATE_TOL = 1e-5
FD_GATE_POINTS = 64
WEIGHT_GRID = 1024
WEIGHT_NEG_TOL = 1e-12
WEIGHT_SYM_TOL = 1e-10
SUP_GRID = 4096


@dataclass(frozen=True)
class SParam:
    s: float

    def __post_init__(self) -> None:
        s = float(self.s)
        if not 0.0 < s <= 1.0:
            raise DomainError(f"s must lie in (0, 1], got {s}")
        object.__setattr__(self, "s", s)


@dataclass(frozen=True)
class HolderPair:
    """Conjugate exponents, ``1/p + 1/q = 1``."""

    p: float
    q: float

    def __post_init__(self) -> None:
        p, q = float(self.p), float(self.q)
        if not (p > 1 and q > 1):
            raise DomainError(f"Hoelder exponents must exceed 1, got p={p}, q={q}")
        if abs(1.0 / p + 1.0 / q - 1.0) >= 1e-12:
            raise DomainError(f"p={p}, q={q} are not conjugate")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_q(cls, q: float) -> HolderPair:
        q = float(q)
        if not q > 1:
            raise DomainError(f"q must exceed 1, got {q}")
        return cls(q / (q - 1.0), q)


class ConvexityClass(enum.Enum):
    ABS_DERIV_S_CONVEX = "abs_deriv_s_convex"
    ABS_DERIV_Q_POWER_S_CONVEX = "abs_deriv_q_power_s_convex"
    CONVEX = "convex"
    NONE = "none"


def central_difference(f: Callable, domain: Interval) -> Callable[[np.ndarray], np.ndarray]:
    h = domain.width * FD_REL_STEP
    fv = as_vectorized(f)

    def fprime(t):
        t = np.asarray(t, dtype=float)
        return (fv(t + h) - fv(t - h)) / (2.0 * h)

    return fprime


@dataclass(frozen=True)
class FunctionSpec:
    """A test function ``f`` on ``domain`` together with its derivative.

    When ``fprime`` is omitted a central difference with step
    ``width * 1e-6`` stands in.  A supplied ``fprime`` must agree with that
    difference quotient to 1e-5, relative to the largest ``|f'|`` on the
    check grid (with a floor of 1).
    """

    f: Callable
    domain: Interval
    fprime: Callable | None = None
    label: str = "f"
    claimed_class: ConvexityClass = ConvexityClass.NONE
    s: SParam | None = None
    hq: HolderPair | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "claimed_class", ConvexityClass(self.claimed_class))
        object.__setattr__(self, "f", as_vectorized(self.f))
        if self.fprime is None:
            object.__setattr__(self, "fprime", central_difference(self.f, self.domain))
            return
        object.__setattr__(self, "fprime", as_vectorized(self.fprime))
        a, w = self.domain.a, self.domain.width
        # Cell midpoints keep every stencil inside the domain.
        t = a + w * (np.arange(FD_GATE_POINTS) + 0.5) / FD_GATE_POINTS
        fd = central_difference(self.f, self.domain)(t)
        with np.errstate(all="ignore"):
            exact = self.fprime(t)
        scale = max(float(np.max(np.abs(exact))), 1.0)
        worst = float(np.max(np.abs(fd - exact)))
        if not worst <= FD_GATE_TOL * scale:
            raise DomainError(
                f"{self.label}: derivative disagrees with finite differences "
                f"(max deviation {worst:.3g})"
            )

    def __call__(self, t):
        return self.f(np.asarray(t, dtype=float))

    def abs_deriv_power(self, q: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
        """``t -> |f'(t)|**q``."""
        fp = self.fprime

        def h(t):
            with np.errstate(all="ignore"):
                return np.abs(fp(np.asarray(t, dtype=float))) ** q

        return h


@dataclass(frozen=True)
class WeightSpec:
    """A nonnegative weight symmetric about the midpoint of ``domain``."""

    g: Callable
    domain: Interval
    label: str = "g"

    def __post_init__(self) -> None:
        object.__setattr__(self, "g", as_vectorized(self.g))
        a, b = self.domain.a, self.domain.b
        x = np.linspace(a, b, WEIGHT_GRID)
        gx = self.g(x)
        if not np.all(np.isfinite(gx)):
            raise DomainError(f"{self.label}: weight is not finite on the domain")
        if float(gx.min()) < -WEIGHT_NEG_TOL:
            raise DomainError(f"{self.label}: weight is negative (min {gx.min():.3g})")
        asym = float(np.max(np.abs(self.g(a + b - x) - gx)))
        if asym > WEIGHT_SYM_TOL:
            raise DomainError(f"{self.label}: weight is not symmetric (defect {asym:.3g})")

    def __call__(self, t):
        return self.g(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class SConvexityResult:
    certified: bool
    worst_gap: float
    samples: int
    x: float | None = None
    y: float | None = None
    lam: float | None = None
    gap: float | None = None

    def __bool__(self) -> bool:
        return self.certified


def check_s_convex(f: Callable, domain: Interval, s: SParam | float,
                   grid: int = 16,
                   rng: np.random.Generator | int | None = 0) -> SConvexityResult:
    """Sample ``f(l x + (1-l) y) <= l**s f(x) + (1-l)**s f(y)`` on ``domain``.

    Checks a ``grid**3`` lattice of (x, y, l) plus ``10 * grid**3`` uniform
    random triples.  A gap ``lhs - rhs`` above 1e-9 anywhere (or a
    non-finite evaluation) is a violation; the worst one is reported.
    """
    s = s if isinstance(s, SParam) else SParam(s)
    if domain.a < 0:
        raise DomainError("s-convexity is defined on [0, inf); domain.a must be >= 0")
    if grid < 8:
        raise DomainError("grid must be at least 8")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    fv = as_vectorized(f)
    a, b = domain.a, domain.b

    pts = np.linspace(a, b, grid)
    lam_pts = np.linspace(0.0, 1.0, grid)
    X, Y, L = np.meshgrid(pts, pts, lam_pts, indexing="ij")
    n_rand = 10 * grid**3
    x = np.concatenate([X.ravel(), rng.uniform(a, b, n_rand)])
    y = np.concatenate([Y.ravel(), rng.uniform(a, b, n_rand)])
    lam = np.concatenate([L.ravel(), rng.uniform(0.0, 1.0, n_rand)])

    with np.errstate(all="ignore"):
        z = np.clip(lam * x + (1.0 - lam) * y, a, b)
        gap = fv(z) - (lam**s.s * fv(x) + (1.0 - lam) ** s.s * fv(y))
    gap = np.where(np.isfinite(gap), gap, np.inf)
    i = int(np.argmax(gap))
    worst = float(gap[i])
    if worst > S_CONVEX_GAP_TOL:
        return SConvexityResult(False, worst, len(gap), float(x[i]), float(y[i]),
                                float(lam[i]), worst)
    return SConvexityResult(True, worst, len(gap))


def sup_norm(g: WeightSpec | Callable, iv: Interval) -> float:
    """``max |g|`` over ``iv``: dense grid, then a bounded scalar polish
    around the best grid point."""
    gv = as_vectorized(g)
    x = np.linspace(iv.a, iv.b, SUP_GRID)
    vals = np.abs(gv(x))
    i = int(np.argmax(vals))
    best = float(vals[i])
    lo, hi = x[max(i - 1, 0)], x[min(i + 1, SUP_GRID - 1)]
    res = minimize_scalar(lambda t: -abs(float(gv(np.array([t]))[0])),
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12 * max(1.0, iv.width)})
    if res.success:
        best = max(best, -float(res.fun))
    return best


# -- catalog ---------------------------------------------------------------

@dataclass(frozen=True)
class FunctionFamily:
    """A named recipe producing a FunctionSpec for an interval and (s, q).

    ``params`` lists which of ``s`` and ``q`` the recipe actually uses.
    """

    label: str
    build: Callable[[Interval, float, float], tuple[Callable, Callable]]
    claimed_class: ConvexityClass
    params: tuple[str, ...] = ()
    description: str = ""

    def make(self, iv: Interval, s: float = 1.0, q: float = 2.0) -> FunctionSpec:
        f, fp = self.build(iv, s, q)
        return FunctionSpec(
            f=f, domain=iv, fprime=fp, label=self.label,
            claimed_class=self.claimed_class,
            s=SParam(s) if "s" in self.params else None,
            hq=HolderPair.from_q(q) if "q" in self.params else None,
        )


@dataclass(frozen=True)
class WeightFamily:
    label: str
    build: Callable[[Interval], Callable]
    description: str = ""

    def make(self, iv: Interval) -> WeightSpec:
        return WeightSpec(self.build(iv), iv, self.label)


def _power_family(iv: Interval, r: float):
    # f' = ((t-a)/L)**r, f its antiderivative vanishing at a.
    a, L = iv.a, iv.width

    def f(t):
        u = np.maximum((np.asarray(t, dtype=float) - a) / L, 0.0)
        return L / (r + 1.0) * u ** (r + 1.0)

    def fp(t):
        u = np.maximum((np.asarray(t, dtype=float) - a) / L, 0.0)
        return u**r

    return f, fp


def _tpow(iv: Interval, s: float, q: float):
    def f(t):
        return np.maximum(np.asarray(t, dtype=float), 0.0) ** s

    def fp(t):
        with np.errstate(divide="ignore"):
            return s * np.maximum(np.asarray(t, dtype=float), 0.0) ** (s - 1.0)

    return f, fp


_FUNCTIONS = (
    FunctionFamily(
        "spow", lambda iv, s, q: _power_family(iv, s),
        ConvexityClass.ABS_DERIV_S_CONVEX, ("s",),
        "f'(t) = ((t-a)/(b-a))**s, so |f'| is s-convex",
    ),
    FunctionFamily(
        "spow_q", lambda iv, s, q: _power_family(iv, s / q),
        ConvexityClass.ABS_DERIV_Q_POWER_S_CONVEX, ("s", "q"),
        "f'(t) = ((t-a)/(b-a))**(s/q), so |f'|**q is s-convex",
    ),
    FunctionFamily(
        "linear", lambda iv, s, q: (lambda t: 2.0 * np.asarray(t) + 1.0,
                                    lambda t: np.full(np.shape(t), 2.0)),
        ConvexityClass.CONVEX, (), "f(t) = 2t + 1",
    ),
    FunctionFamily(
        "quadratic", lambda iv, s, q: (lambda t: np.asarray(t) ** 2,
                                       lambda t: 2.0 * np.asarray(t)),
        ConvexityClass.CONVEX, (), "f(t) = t**2",
    ),
    FunctionFamily(
        "exp", lambda iv, s, q: (np.exp, np.exp),
        ConvexityClass.CONVEX, (), "f(t) = exp(t)",
    ),
    FunctionFamily(
        "tpow", _tpow, ConvexityClass.NONE, ("s",),
        "f(t) = t**s, itself s-convex; f' is unbounded at 0",
    ),
    FunctionFamily(
        "neg_quadratic", lambda iv, s, q: (lambda t: -np.asarray(t) ** 2,
                                           lambda t: -2.0 * np.asarray(t)),
        ConvexityClass.CONVEX, (),
        "f(t) = -t**2 with a deliberately false convexity claim",
    ),
)


def _cos2(iv: Interval):
    m, L = iv.mid, iv.width
    return lambda x: np.cos(np.pi * (np.asarray(x, dtype=float) - m) / L) ** 2


_WEIGHTS = (
    WeightFamily("one", lambda iv: (lambda x: np.ones(np.shape(x))), "g = 1"),
    WeightFamily("parabola",
                 lambda iv: (lambda x: (np.asarray(x) - iv.a) * (iv.b - np.asarray(x))),
                 "g(x) = (x-a)(b-x)"),
    WeightFamily("vabs", lambda iv: (lambda x: np.abs(np.asarray(x) - iv.mid)),
                 "g(x) = |x - (a+b)/2|"),
    WeightFamily("cos2", _cos2, "g(x) = cos^2(pi (x - (a+b)/2) / (b-a))"),
)


@dataclass(frozen=True)
class Catalog:
    functions: dict[str, FunctionFamily] = field(default_factory=dict)
    weights: dict[str, WeightFamily] = field(default_factory=dict)

    def __iter__(self) -> Iterator[tuple[FunctionFamily, WeightFamily]]:
        for fam in self.functions.values():
            for wfam in self.weights.values():
                yield fam, wfam

    def __len__(self) -> int:
        return len(self.functions) * len(self.weights)

    def function(self, label: str) -> FunctionFamily:
        try:
            return self.functions[label]
        except KeyError:
            raise KeyError(f"unknown function label {label!r}; "
                           f"known: {sorted(self.functions)}") from None

    def weight(self, label: str) -> WeightFamily:
        try:
            return self.weights[label]
        except KeyError:
            raise KeyError(f"unknown weight label {label!r}; "
                           f"known: {sorted(self.weights)}") from None


def builtin_catalog() -> Catalog:
    """All built-in function and weight families, keyed by label.

    Iterating the catalog yields every (function family, weight family) pair.
    """
    return Catalog({f.label: f for f in _FUNCTIONS}, {w.label: w for w in _WEIGHTS})


def is_nonnegative(f: Callable, domain: Interval, points: int = 1024) -> bool:
    with np.errstate(all="ignore"):
        vals = as_vectorized(f)(np.linspace(domain.a, domain.b, points))
    return bool(np.all(vals >= -WEIGHT_NEG_TOL))
