import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hclab.errors import NonFiniteSphereConstant, NonIntegrable, NonPositiveProfile
from hclab.weights import Ball, ball_mass, build_weight, combine_weights, doubling_ratio_scan, lemma1_check


class TestBuildWeight:
    def test_line(self):
        assert build_weight(0.0, "constant", 1).sphere_constant == 2.0

    def test_plane(self):
        assert build_weight(0.0, "constant", 2).sphere_constant == pytest.approx(2 * math.pi, rel=1e-14)

    def test_axis_power(self):
        # oracle: int_0^{2 pi} |cos| = 4
        assert build_weight(1.0, "axis_power", 2).sphere_constant == pytest.approx(4.0, rel=1e-12)

    def test_tabulated_plane(self):
        theta = np.linspace(0, 2 * math.pi, 400, endpoint=False)
        w = build_weight(0.5, "tabulated", 2, table=1.0 + 0.0 * theta)
        assert w.sphere_constant == pytest.approx(2 * math.pi, rel=1e-12)

    def test_nonpositive(self):
        with pytest.raises(NonPositiveProfile):
            build_weight(0.0, "tabulated", 2, table=np.array([1.0, 0.0, 1.0]))

    def test_evaluation(self):
        w = build_weight(1.0, "axis_power", 2)
        assert w(np.array([-3.0, 4.0])) == pytest.approx(3.0)


class TestBallMass:
    def test_unit_interval(self):
        assert ball_mass(build_weight(0.0, "constant", 1), Ball((0.0,), 1.0)) == pytest.approx(2.0)

    def test_linear_weight(self):
        assert ball_mass(build_weight(1.0, "constant", 1), Ball((1.0,), 1.0)) == pytest.approx(2.0, rel=1e-12)

    def test_nonintegrable(self):
        with pytest.raises(NonIntegrable):
            ball_mass(build_weight(-2.0, "constant", 1), Ball((0.0,), 1.0))

    def test_disc_offset(self):
        w = build_weight(0.0, "constant", 2)
        assert ball_mass(w, Ball((3.0, 1.0), 0.5)) == pytest.approx(math.pi / 4, rel=1e-6)


class TestDoubling:
    def test_lebesgue_line(self):
        assert doubling_ratio_scan(build_weight(0.0, "constant", 1)) == pytest.approx(2.0)

    def test_linear_centred(self):
        w = build_weight(1.0, "constant", 1)
        assert doubling_ratio_scan(w, centers=[(0.0,)], radii=[0.5, 1.0, 3.0]) == pytest.approx(4.0)

    def test_lebesgue_plane(self):
        w = build_weight(0.0, "constant", 2)
        assert doubling_ratio_scan(w, centers=[(0.0, 0.0), (2.0, 0.0)], radii=[0.5, 1.0]) == pytest.approx(4.0, rel=1e-6)


class TestPowerIntegralIdentity:
    @pytest.mark.parametrize("w, eps, value", [
        (build_weight(0.0, "constant", 1), 0.5, 4.0),
        (build_weight(1.0, "constant", 1), 1.0, 2.0),
        (build_weight(0.0, "constant", 2), 1.0, 2 * math.pi),
    ])
    def test_examples(self, w, eps, value):
        chk = lemma1_check(w, eps)
        assert chk.lhs == pytest.approx(value, rel=1e-9)
        assert chk.rhs == pytest.approx(value, rel=1e-14)
        assert chk.mirror_lhs == pytest.approx(value, rel=1e-9)

    @pytest.mark.parametrize("alpha, profile, n", [(0.0, "constant", 1), (1.0, "constant", 1),
                                                   (1.0, "axis_power", 2), (-0.5, "constant", 3)])
    @pytest.mark.parametrize("eps", [0.1, 0.5, 1.0, 2.0])
    def test_error_estimate_bounds_residual(self, alpha, profile, n, eps):
        chk = lemma1_check(build_weight(alpha, profile, n), eps)
        assert abs(chk.lhs - chk.rhs) <= 10 * chk.error_estimate + 1e-12 * chk.rhs


@settings(max_examples=30, deadline=None)
@given(alpha=st.floats(-0.9, 3), c=st.floats(-5, 5), r=st.floats(0.05, 5), lam=st.floats(0.1, 10))
def test_mass_homogeneity_line(alpha, c, r, lam):
    w = build_weight(alpha, "constant", 1)
    B = Ball((c,), r)
    assert ball_mass(w, B.scaled(lam)) == pytest.approx(lam ** (1 + alpha) * ball_mass(w, B), rel=1e-10)


@settings(max_examples=10, deadline=None)
@given(alpha=st.floats(-1.5, 2), x=st.floats(-3, 3), r=st.floats(0.2, 3), lam=st.floats(0.25, 4))
def test_mass_homogeneity_plane(alpha, x, r, lam):
    w = build_weight(alpha, "constant", 2)
    B = Ball((x, 0.5), r)
    assert ball_mass(w, B.scaled(lam)) == pytest.approx(lam ** (2 + alpha) * ball_mass(w, B), rel=1e-6)


@settings(max_examples=20, deadline=None)
@given(a=st.floats(0.1, 5), b=st.floats(0.1, 5), alpha=st.floats(-0.95, 2))
def test_sphere_constant_additivity(a, b, alpha):
    w1 = build_weight(alpha, "constant", 2)
    w2 = build_weight(alpha, "axis_power", 2)
    combo = combine_weights([(a, w1), (b, w2)])
    assert combo.sphere_constant == pytest.approx(a * w1.sphere_constant + b * w2.sphere_constant, rel=1e-14)


def test_axis_power_not_integrable():
    with pytest.raises(NonFiniteSphereConstant):
        build_weight(-1.0, "axis_power", 2).sphere_constant
