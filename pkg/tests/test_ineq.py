import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from rlfejer.errors import DomainError, HypothesisWarning, MissingParameterError
from rlfejer.funcspace import FunctionSpec, HolderPair, builtin_catalog
from rlfejer.ineq import (
    InequalityReport,
    ReductionPair,
    SandwichKind,
    Theorem,
    bound_formula,
    bound_hypothesis,
    bound_rhs,
    fejer_midpoint_lhs,
    identity_residual,
    kernel_k,
    reduction_audit,
    sandwich,
    t7_coefficient,
)
from rlfejer.quad import Interval

CAT = builtin_catalog()
UNIT = Interval(0.0, 1.0)


def spec(label, iv=UNIT, s=1.0, q=2.0):
    return CAT.function(label).make(iv, s, q)


def weight(label, iv=UNIT):
    return CAT.weight(label).make(iv)


def _qaws_pair(h, iv, alpha):
    """Midpoint operator pair through scipy's algebraic-weight quadrature."""
    m = iv.mid
    lo, _ = sp_integrate.quad(h, iv.a, m, weight="alg", wvar=(alpha - 1, 0),
                              epsabs=0, epsrel=1e-13)
    hi, _ = sp_integrate.quad(h, m, iv.b, weight="alg", wvar=(0, alpha - 1),
                              epsabs=0, epsrel=1e-13)
    return (lo + hi) / math.gamma(alpha)


# -- kernel and identity ----------------------------------------------------

def test_kernel_endpoints_vanish():
    g = weight("cos2")
    assert kernel_k(0.0, UNIT, 0.5, g) == 0.0
    assert kernel_k(1.0, UNIT, 0.5, g) == 0.0


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.0, 2.0])
def test_kernel_constant_weight(alpha):
    iv = Interval(1.0, 3.0)
    one = weight("one", iv)
    for t in (1.1, 1.5, 2.0):
        assert kernel_k(t, iv, alpha, one) == pytest.approx((t - 1) ** alpha / alpha, rel=1e-11)
    for t in (2.2, 2.9):
        assert kernel_k(t, iv, alpha, one) == pytest.approx(-(3 - t) ** alpha / alpha, rel=1e-11)


def test_kernel_midpoint_takes_left_branch():
    one = weight("one")
    assert kernel_k(0.5, UNIT, 1.0, one) == pytest.approx(0.5)


def test_kernel_domain():
    with pytest.raises(DomainError):
        kernel_k(1.5, UNIT, 0.5, weight("one"))


def test_identity_examples():
    c = FunctionSpec(lambda t: 3.0 + 0 * t, UNIT, lambda t: 0 * t, "const")
    for alpha in (0.3, 1.0, 2.0):
        assert identity_residual(c, weight("vabs"), UNIT, alpha) < 1e-10
    lin = FunctionSpec(lambda t: t, UNIT, lambda t: np.ones_like(t), "t")
    assert identity_residual(lin, weight("one"), UNIT, 1.0) < 1e-10
    sq = spec("quadratic")
    res, lhs, rhs, err = identity_residual(sq, weight("parabola"), UNIT, 0.5, full_output=True)
    # Both sides evaluated independently in 30-digit arithmetic.
    frozen = -0.012664834298458180252
    assert lhs == pytest.approx(frozen, rel=1e-10)
    assert rhs == pytest.approx(frozen, rel=1e-10)
    assert res < 1e-7


@pytest.mark.parametrize("iv", [Interval(0, 1), Interval(1, 3)])
def test_identity_lhs_against_independent_quadrature(iv):
    f, g, alpha = spec("exp", iv), weight("cos2", iv), 0.3
    _, lhs, _, _ = identity_residual(f, g, iv, alpha, full_output=True)
    pg = _qaws_pair(lambda t: g(t), iv, alpha)
    pfg = _qaws_pair(lambda t: f(t) * g(t), iv, alpha)
    assert lhs == pytest.approx(float(f(iv.mid)) * pg - pfg, rel=1e-9, abs=1e-12)


# -- midpoint Fejer left-hand side -------------------------------------------

def test_fejer_lhs_examples():
    for alpha in (0.3, 1.0, 2.0):
        assert fejer_midpoint_lhs(spec("linear"), weight("parabola"), UNIT, alpha) == 0.0
    c = FunctionSpec(lambda t: 2.0 + 0 * t, UNIT, lambda t: 0 * t, "const")
    assert fejer_midpoint_lhs(c, weight("cos2"), UNIT, 0.5) == 0.0
    assert fejer_midpoint_lhs(spec("quadratic"), weight("one"), UNIT, 1.0) == pytest.approx(1 / 12, rel=1e-12)


def test_fejer_lhs_mpmath_value():
    iv = Interval(1, 3)
    frozen = 1.2036044449018800629
    got = fejer_midpoint_lhs(spec("quadratic", iv), weight("one", iv), iv, 0.5)
    assert got == pytest.approx(frozen, rel=1e-10)


# -- sandwiches ---------------------------------------------------------------

def test_hh_example():
    tri = sandwich(SandwichKind.HH, spec("quadratic"), UNIT)
    assert (tri.left, tri.middle, tri.right) == pytest.approx((0.25, 1 / 3, 0.5), rel=1e-12)
    assert tri.holds() and tri.hypotheses_ok


def test_s_hh_example_is_right_tight():
    f = CAT.function("tpow").make(UNIT, 0.5)
    tri = sandwich(SandwichKind.S_HH, f, UNIT, s=0.5)
    assert tri.left == pytest.approx(0.5, rel=1e-14)
    assert tri.middle == pytest.approx(2 / 3, rel=1e-10)
    assert tri.right == pytest.approx(2 / 3, rel=1e-14)
    assert tri.holds()


@pytest.mark.parametrize("alpha", [0.3, 1.0, 2.5])
def test_frac_hh_affine_left_equality(alpha):
    iv = Interval(1, 3)
    tri = sandwich(SandwichKind.FRAC_HH, spec("linear", iv), iv, order=alpha)
    assert tri.left == pytest.approx(tri.middle, rel=1e-9)
    assert tri.holds()


def test_frac_hh_middle_mpmath():
    tri = sandwich(SandwichKind.FRAC_HH, spec("exp"), UNIT, order=0.5)
    assert tri.middle == pytest.approx(1.7463651075929432790, rel=1e-10)


def test_fejer_with_unit_weight_scales_hh():
    for iv in (UNIT, Interval(1, 3)):
        for label in ("quadratic", "exp", "linear"):
            f = spec(label, iv)
            hh = sandwich(SandwichKind.HH, f, iv)
            fj = sandwich(SandwichKind.FEJER, f, iv, g=weight("one", iv))
            L = iv.width
            for x, y in ((hh.left, fj.left), (hh.middle, fj.middle), (hh.right, fj.right)):
                assert abs(L * x - y) <= 1e-9 * max(1.0, abs(y))


def test_frac_fejer_reduces_to_fejer_at_alpha_one():
    iv = Interval(1, 3)
    f, g = spec("exp", iv), weight("vabs", iv)
    frac = sandwich(SandwichKind.FRAC_FEJER, f, iv, g=g, order=1.0)
    cls = sandwich(SandwichKind.FEJER, f, iv, g=g)
    # J_{a+}(h)(b) + J_{b-}(h)(a) at alpha = 1 is twice the plain integral.
    assert frac.middle == pytest.approx(2 * cls.middle, rel=1e-10)
    assert frac.left == pytest.approx(2 * cls.left, rel=1e-10)


def test_sandwich_missing_parameters():
    with pytest.raises(MissingParameterError):
        sandwich(SandwichKind.FEJER, spec("exp"), UNIT)
    with pytest.raises(MissingParameterError):
        sandwich(SandwichKind.FRAC_HH, spec("exp"), UNIT)
    with pytest.raises(MissingParameterError):
        sandwich(SandwichKind.S_HH, spec("exp"), UNIT)


def test_sandwich_warns_on_uncertified_hypothesis():
    with pytest.warns(HypothesisWarning):
        tri = sandwich(SandwichKind.HH, spec("neg_quadratic"), UNIT)
    assert not tri.hypotheses_ok
    assert not tri.holds()


# -- bounds -------------------------------------------------------------------

def test_t4_and_t7_examples():
    f, g = spec("linear"), weight("one")
    lin = FunctionSpec(lambda t: t, UNIT, lambda t: np.ones_like(t), "t")
    assert bound_rhs("T4", lin, g, UNIT, 1.0) == pytest.approx(0.25, rel=1e-14)
    assert bound_rhs("T7", lin, g, UNIT, 1.0, s=1.0) == pytest.approx(0.25, rel=1e-12)
    assert bound_rhs(Theorem.T4, f, g, UNIT, 1.0) == pytest.approx(0.5, rel=1e-14)


def test_t9_and_t6_substitution_values():
    lin = FunctionSpec(lambda t: t, UNIT, lambda t: np.ones_like(t), "t")
    g = weight("one")
    hq = HolderPair(2.0, 2.0)
    # By hand: T9 = 4 / (24 sqrt 3), T6 = 4 / (8 sqrt 3).
    t9 = bound_rhs("T9", lin, g, UNIT, 1.0, s=1.0, hq=hq)
    t6 = bound_rhs("T6", lin, g, UNIT, 1.0, hq=hq)
    assert t9 == pytest.approx(1 / (6 * math.sqrt(3)), rel=1e-13)
    assert t6 == pytest.approx(1 / (2 * math.sqrt(3)), rel=1e-13)


def test_bound_missing_parameters():
    f, g = spec("exp"), weight("one")
    with pytest.raises(MissingParameterError):
        bound_rhs("T7", f, g, UNIT, 1.0)
    with pytest.raises(MissingParameterError):
        bound_rhs("T5", f, g, UNIT, 1.0)
    with pytest.raises(MissingParameterError):
        bound_rhs("T9", f, g, UNIT, 1.0, s=0.5)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0, 1.5, 2.0, 3.0])
def test_t7_coefficient_identity_at_s1(alpha):
    lhs = t7_coefficient(alpha, 1.0)
    rhs = 2.0 ** -(alpha + 1) / (alpha + 1)
    assert abs(lhs - rhs) / rhs < 1e-12


def test_bound_formula_matches_brute_force_t5_by_hand():
    # alpha = 1, q = 2, |f'(a)| = 1, |f'(b)| = 2, width 1, ||g|| = 1:
    # 1 / (2^{2.5} * 2 * sqrt(3)) * (sqrt(4 + 8) + sqrt(2 + 16))
    expected = (math.sqrt(12) + math.sqrt(18)) / (2**2.5 * 2 * math.sqrt(3))
    got = bound_formula("T5", alpha=1.0, width=1.0, g_sup=1.0, da=1.0, db=2.0, hq=2.0)
    assert got == pytest.approx(expected, rel=1e-14)


def test_bound_hypothesis():
    iv = UNIT
    assert bound_hypothesis("T7", spec("spow", iv, 0.5), iv, 0.5).certified
    assert not bound_hypothesis("T7", spec("spow_q", iv, 0.5, 3.0), iv, 0.5).certified
    assert bound_hypothesis("T8", spec("spow_q", iv, 0.5, 3.0), iv, 0.5, 3.0).certified
    assert bound_hypothesis("T4", spec("quadratic"), iv).certified


def test_linear_f_bounds_nondegenerate():
    f, g = spec("linear"), weight("parabola")
    for alpha in (0.3, 1.0, 2.0):
        assert fejer_midpoint_lhs(f, g, UNIT, alpha) == 0.0
        for th in Theorem:
            rhs = bound_rhs(th, f, g, UNIT, alpha, s=0.5, hq=2.0)
            assert rhs > 0


# -- reductions ----------------------------------------------------------------

def test_reduction_t7_t4_vanishes():
    rows = reduction_audit("T7->T4", [0.5, 1.0])
    assert len(rows) == 2
    assert all(r.relative_difference <= 1e-12 for r in rows)


def test_reduction_t8_t5_reports_printed_gap():
    (row,) = reduction_audit(ReductionPair.T8_T5, [1.0], [2.0])
    # At s = 1 the printed T8 is T5 times ((alpha+2)/(alpha+1+q))^(1/q).
    assert row.new_bound_at_s1 / row.classical_bound == pytest.approx(math.sqrt(3 / 4), rel=1e-12)
    assert row.relative_difference > 0.1


def test_reduction_t9_t6_reports_printed_gap():
    rows = reduction_audit("T9->T6", [1.0], [2.0, 3.0])
    for r in rows:
        p = r.q / (r.q - 1)
        ratio = 1.0 / ((r.alpha * p + 1) ** (1 / p) * (r.alpha + 2) ** (1 / p))
        assert r.new_bound_at_s1 / r.classical_bound == pytest.approx(ratio, rel=1e-12)


# -- report row ------------------------------------------------------------------

def test_report_row_semantics():
    r = InequalityReport("x", "bounds", "T4", 0, 1, lhs=0.0, rhs=0.0)
    assert r.ratio == 0.0 and r.holds
    r = InequalityReport("x", "bounds", "T4", 0, 1, lhs=1.0, rhs=2.0)
    assert r.slack == 1.0 and r.ratio == 0.5 and r.holds
    r = InequalityReport("x", "bounds", "T4", 0, 1, lhs=1.0 + 1e-10, rhs=1.0)
    assert r.holds
    r = InequalityReport("x", "bounds", "T4", 0, 1, lhs=1.0 + 1e-8, rhs=1.0)
    assert not r.holds and r.failed
    r = InequalityReport("x", "bounds", "T4", 0, 1, lhs=2.0, rhs=1.0, certified=False)
    assert not r.failed
