import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from rlfejer.errors import DomainError
from rlfejer.specfun import BetaArgs, beta_fn, gamma_fn, incomplete_beta


@pytest.mark.parametrize("x, expected", [(1.0, 1.0), (5.0, 24.0)])
def test_gamma_factorials(x, expected):
    assert gamma_fn(x) == pytest.approx(expected, rel=1e-14)


def test_gamma_half_against_euler_integral():
    # Independent route: int_0^inf e^{-t} t^{-1/2} dt with t = u^2.
    oracle, _ = sp_integrate.quad(lambda u: 2.0 * math.exp(-u * u), 0, np.inf,
                                  epsabs=0, epsrel=1e-13)
    assert oracle == pytest.approx(1.7724538509055160, rel=1e-13)
    assert gamma_fn(0.5) == pytest.approx(oracle, rel=1e-12)
    assert gamma_fn(1.5) == pytest.approx(0.5 * gamma_fn(0.5), rel=1e-14)


def test_gamma_recurrence_grid():
    for x in np.linspace(0.1, 30, 300):
        g1 = gamma_fn(x + 1)
        assert abs(g1 - x * gamma_fn(x)) / g1 < 1e-12


@pytest.mark.parametrize("bad", [0.0, -1.0, -0.5, float("nan"), float("inf")])
def test_gamma_domain(bad):
    with pytest.raises(DomainError):
        gamma_fn(bad)


def test_gamma_overflow():
    with pytest.raises(OverflowError):
        gamma_fn(200.0)


@pytest.mark.parametrize("a, b, expected", [
    (1, 1, 1.0),
    (2, 2, 1.0 / 6.0),
    (0.5, 0.5, math.pi),
])
def test_beta_values(a, b, expected):
    assert beta_fn(a, b) == pytest.approx(expected, rel=1e-14)


def test_beta_symmetric_and_large_arguments():
    assert beta_fn(0.3, 7.1) == pytest.approx(beta_fn(7.1, 0.3), rel=1e-15)
    big = beta_fn(120.0, 80.0)
    assert big == pytest.approx(math.exp(math.lgamma(120) + math.lgamma(80) - math.lgamma(200)),
                                rel=1e-12)


@pytest.mark.parametrize("a, b", [(0, 1), (1, -2)])
def test_beta_domain(a, b):
    with pytest.raises(DomainError):
        beta_fn(a, b)


@pytest.mark.parametrize("x, alpha, beta, expected", [
    (1.0, 2, 2, 1.0 / 6.0),
    (0.5, 1, 1, 0.5),
    (0.5, 2, 2, 1.0 / 12.0),
    (0.0, 0.3, 0.3, 0.0),
])
def test_incomplete_beta_examples(x, alpha, beta, expected):
    assert incomplete_beta(BetaArgs(x, alpha, beta)) == pytest.approx(expected, rel=1e-13, abs=0)


@pytest.mark.parametrize("args", [(-0.1, 1, 1), (1.1, 1, 1), (0.5, 0, 1), (0.5, 1, -1)])
def test_beta_args_rejects(args):
    with pytest.raises(DomainError):
        BetaArgs(*args)


def test_incomplete_beta_completion():
    for a in np.geomspace(0.1, 10, 9):
        for b in np.geomspace(0.1, 10, 9):
            full = incomplete_beta(BetaArgs(1.0, a, b))
            ref = math.gamma(a) * math.gamma(b) / math.gamma(a + b)
            assert abs(full - ref) / ref < 1e-11


GRID = [0.3, 0.5, 1.0, 1.5, 2.7]


@pytest.mark.parametrize("a", GRID)
@pytest.mark.parametrize("b", GRID)
def test_incomplete_beta_against_weighted_quadrature(a, b):
    # scipy's QAWS handles (t)^(a-1) and (1-t)^(b-1) at both ends analytically.
    for x in (0.1, 0.5, 0.9):
        oracle, _ = sp_integrate.quad(lambda t: (1 - t) ** (b - 1), 0, x, weight="alg",
                                      wvar=(a - 1, 0), epsabs=0, epsrel=2e-14, limit=200)
        assert incomplete_beta(BetaArgs(x, a, b)) == pytest.approx(oracle, rel=1e-10)


def test_incomplete_beta_monotone_in_x():
    xs = np.linspace(0, 1, 41)
    vals = [incomplete_beta(BetaArgs(x, 0.4, 0.7)) for x in xs]
    assert np.all(np.diff(vals) > 0)
