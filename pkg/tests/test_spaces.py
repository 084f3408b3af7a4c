import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hclab.errors import DivergentNorm, NonIntegrableOnBall
from hclab.functions import (
    AngularWitness,
    BallIndicator,
    Constant,
    LogSymbol,
    OuterPower,
    RadialBand,
    RadialPower,
    RadialStep,
    SignWitness,
    Sum,
)
from hclab.spaces import BallFamily, ball_average, ball_oscillation, bmo_estimate, lp_norm, maximal_estimate
from hclab.weights import Ball, build_weight

W1 = build_weight(0.0, "constant", 1)


class TestLpNorm:
    def test_extremal_family(self):
        f = OuterPower(1, 0.0, 2.0, 0.1)
        assert lp_norm(f, W1, 2.0) == pytest.approx(math.sqrt(10.0), rel=1e-12)

    def test_extremal_family_quadrature_route(self):
        f = OuterPower(1, 0.0, 2.0, 0.1)
        assert lp_norm(f, W1, 2.0, method="quadrature") == pytest.approx(math.sqrt(10.0), rel=1e-9)

    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 7.0])
    def test_ball_indicator(self, p):
        assert lp_norm(BallIndicator(), W1, p) == pytest.approx(2 ** (1 / p), rel=1e-14)

    def test_zero(self):
        assert lp_norm(Constant(0.0), W1, 2.0) == 0.0

    def test_divergent(self):
        with pytest.raises(DivergentNorm):
            lp_norm(Constant(1.0), W1, 2.0)
        with pytest.raises(DivergentNorm):
            lp_norm(RadialBand(-0.5, 1.0, math.inf, 1.0), W1, 2.0)

    def test_plane_weighted(self):
        # int_{|x|<1} |x|^alpha dx = 2 pi / (2 + alpha)
        w = build_weight(1.0, "constant", 2)
        assert lp_norm(BallIndicator(), w, 1.0) == pytest.approx(2 * math.pi / 3, rel=1e-13)

    def test_non_radial_plane(self):
        # int_{|x|<1} x1^2/|x|^2 dx = pi / 2
        f = AngularWitness("axis_square") * BallIndicator()
        w = build_weight(0.0, "constant", 2)
        assert lp_norm(f, w, 1.0) == pytest.approx(math.pi / 2, rel=1e-10)

    def test_non_radial_line(self):
        f = SignWitness() * RadialStep((0.0, 1.0, 2.0), (1.0, 3.0))
        assert lp_norm(f, W1, 2.0) == pytest.approx(math.sqrt(2 * (1 + 9)), rel=1e-12)


class TestBallFunctionals:
    def test_log_oscillation_dual_route(self):
        # oracle: mpmath quadrature split at the level crossing; the exact value is 2/e
        assert ball_oscillation(LogSymbol(), W1, Ball((1.0,), 1.0)) == pytest.approx(2 / math.e, rel=1e-10)

    def test_log_oscillation_weighted(self):
        # oracle: mpmath at 30 digits
        w = build_weight(1.0, "constant", 1)
        assert ball_oscillation(LogSymbol(), w, Ball((-1.0,), 2.0)) == pytest.approx(0.46353111739115981, rel=1e-10)

    def test_quadratic_oscillation(self):
        # the variance of log on (0, 2) is 1
        assert ball_oscillation(LogSymbol(), W1, Ball((1.0,), 1.0), 2.0) == pytest.approx(1.0, rel=1e-9)

    @pytest.mark.parametrize("c, r", [(0.3, 1.0), (-0.9, 1.0), (0.0, 2.0)])
    def test_sign_witness_oscillation(self, c, r):
        a, b = c + r, r - c  # lengths of the positive and negative parts
        assert ball_oscillation(SignWitness(), W1, Ball((c,), r)) == pytest.approx(4 * a * b / (a + b) ** 2, rel=1e-12)

    def test_average(self):
        assert ball_average(BallIndicator(), W1, Ball((1.0,), 1.0)) == pytest.approx(0.5, rel=1e-14)

    def test_not_integrable(self):
        with pytest.raises(NonIntegrableOnBall):
            ball_average(RadialPower(-1.5), W1, Ball((0.0,), 1.0))

    def test_maximal(self):
        assert maximal_estimate(Constant(1.0), W1, 2.5) == pytest.approx(1.0)
        assert maximal_estimate(BallIndicator(), W1, 3.0) == pytest.approx(0.25, rel=1e-12)
        assert maximal_estimate(Constant(0.0), W1, 3.0) == 0.0


class TestBMOEstimate:
    def test_constant(self):
        assert bmo_estimate(Constant(3.0), W1) == 0.0

    def test_ball_indicator(self):
        assert bmo_estimate(BallIndicator(), W1) == pytest.approx(0.5, rel=1e-12)

    def test_sign_witness_centred(self):
        # independent closed form 4ab/(a+b)^2 at a = b
        fam = BallFamily(((0.0,),), r_min=0.25, r_max=4.0, count=5)
        assert bmo_estimate(SignWitness(), W1, fam) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.xfail(strict=True, reason="with the mean-oscillation definition used here the centred value "
                                           "is 4ab/(a+b)^2 = 1, not 1/2; see the decisions ledger")
    def test_sign_witness_stated_value(self):
        fam = BallFamily(((0.0,),), r_min=0.25, r_max=4.0, count=5)
        assert abs(bmo_estimate(SignWitness(), W1, fam) - 0.5) <= 1e-9

    def test_log_weighted(self):
        for alpha in (0.0, 1.0):
            w = build_weight(alpha, "constant", 1)
            fam = BallFamily.standard(1)
            a = bmo_estimate(LogSymbol(), w, fam)
            b = bmo_estimate(LogSymbol(), w, fam.doubled())
            assert math.isfinite(a) and a < 10
            assert b >= a
            assert abs(b - a) <= 0.05 * a

    def test_plane(self):
        w = build_weight(0.0, "constant", 2)
        fam = BallFamily.standard(2, -1, 1, r_min=0.5, r_max=2.0, count=3)
        est = bmo_estimate(BallIndicator(), w, fam)
        assert 0.3 < est <= 0.5 + 1e-6

    def test_family_round_trip(self):
        fam = BallFamily.standard(2, -2, 2, count=5)
        assert BallFamily.from_dict(fam.to_dict()) == fam


# ---------------------------------------------------------------------------
# properties

def _profile(rng):
    edges = np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 2.0, 3))])
    return Sum((RadialStep(tuple(edges), tuple(rng.uniform(-2, 2, 3))),
                RadialBand(float(rng.uniform(-2, -0.5)), float(edges[-1]), math.inf, float(rng.uniform(-1, 1)))))


@settings(max_examples=30, deadline=None)
@given(k=st.integers(0, 2 ** 31), c=st.floats(-10, 10), p=st.floats(1, 4), n=st.integers(1, 3))
def test_norm_homogeneity(k, c, p, n):
    f = _profile(np.random.default_rng(k))
    w = build_weight(0.0, "constant", n)
    try:
        base = lp_norm(f, w, p)
    except DivergentNorm:
        return
    assert lp_norm(c * f, w, p) == pytest.approx(abs(c) * base, rel=1e-12, abs=1e-300)


@settings(max_examples=30, deadline=None)
@given(k=st.integers(0, 2 ** 31), lam=st.floats(0.1, 10), p=st.floats(1, 4), alpha=st.floats(-0.5, 2))
def test_dilation_covariance(k, lam, p, alpha):
    rng = np.random.default_rng(k)
    edges = np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 2.0, 3))])
    vals = tuple(rng.uniform(-2, 2, 3))
    f = RadialStep(tuple(edges), vals)
    f_lam = RadialStep(tuple(edges / lam), vals)  # f(lam x)
    w = build_weight(alpha, "constant", 2)
    assert lp_norm(f_lam, w, p) == pytest.approx(lam ** (-(2 + alpha) / p) * lp_norm(f, w, p), rel=1e-10)


WITNESSES = [SignWitness(), BallIndicator(), LogSymbol(), RadialStep((0.0, 0.5, 2.0), (1.0, -1.0))]


@settings(max_examples=12, deadline=None)
@given(i=st.integers(0, len(WITNESSES) - 1), alpha=st.floats(-0.5, 1.5), lo=st.integers(-3, 0), hi=st.integers(1, 3))
def test_family_monotone(i, alpha, lo, hi):
    w = build_weight(alpha, "constant", 1)
    small = BallFamily.standard(1, lo, hi, r_min=0.25, r_max=4.0, count=5)
    big = BallFamily.standard(1, lo - 1, hi + 1, r_min=0.125, r_max=8.0, count=7)
    assert bmo_estimate(WITNESSES[i], w, big) >= bmo_estimate(WITNESSES[i], w, small) * (1 - 1e-12)


@settings(max_examples=12, deadline=None)
@given(i=st.integers(0, len(WITNESSES) - 1), alpha=st.floats(-0.5, 1.5))
def test_power_mean(i, alpha):
    w = build_weight(alpha, "constant", 1)
    fam = BallFamily.standard(1, -2, 2, r_min=0.25, r_max=4.0, count=5)
    e1 = bmo_estimate(WITNESSES[i], w, fam, 1.0)
    e2 = bmo_estimate(WITNESSES[i], w, fam, 2.0)
    assert e1 <= e2 * (1 + 1e-9) + 1e-12
