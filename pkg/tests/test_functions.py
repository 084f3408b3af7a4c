import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hclab.errors import ParamOutOfRange, UndefinedAtOrigin
from hclab.functions import (
    AngularWitness,
    BallIndicator,
    Constant,
    InnerPower,
    LogSymbol,
    OuterPower,
    RadialBand,
    RadialPower,
    RadialStep,
    SignWitness,
    Sum,
    build_function,
    evaluate,
    homogeneity_info,
)


class TestBuild:
    def test_outer_power(self):
        f = build_function("f_eps", n=1, alpha=0.0, p=2.0, eps=0.1)
        assert f(2.0) == pytest.approx(2 ** -0.6, rel=1e-15)
        assert f(0.5) == 0.0

    def test_inner_power(self):
        g = InnerPower(1, 0.0, 2.0, 0.1)
        assert g(0.5) == pytest.approx(0.5 ** -0.4, rel=1e-15)
        assert g(2.0) == 0.0

    def test_sign_witness(self):
        assert build_function("f0")(-3.0) == -1.0

    def test_ball_indicator(self):
        assert build_function("ball_indicator")(np.array([2.0, 0.0])) == 0.0
        assert BallIndicator()(np.array([0.3, 0.4])) == 1.0

    def test_nested(self):
        f = build_function({"kind": "sum", "terms": [
            {"kind": "scaled", "c": 2.0, "f": {"kind": "ball_indicator"}},
            {"kind": "product", "factors": [{"kind": "f0"}, {"kind": "radial_power", "lam": 1.0}]},
        ]})
        assert f(-0.5) == pytest.approx(2.0 - 0.5)
        assert f(3.0) == pytest.approx(3.0)

    def test_round_trip(self):
        f = Sum((RadialBand(-0.5, 0.5, math.inf, 2.0), RadialStep((0.0, 1.0, 2.0), (1.0, -1.0))))
        g = build_function(f.to_dict())
        for r in (0.25, 0.75, 1.5, 3.0):
            assert g(r) == f(r)

    @pytest.mark.parametrize("params", [dict(n=1, alpha=0.0, p=2.0, eps=1.5), dict(n=1, alpha=0.0, p=0.5, eps=0.1)])
    def test_bad_parameters(self, params):
        with pytest.raises(ParamOutOfRange):
            OuterPower(**params)

    def test_unknown_kind(self):
        with pytest.raises(ParamOutOfRange):
            build_function("nope")


class TestEvaluate:
    def test_log(self):
        assert evaluate(LogSymbol(), math.e) == pytest.approx(1.0, rel=1e-15)

    def test_product(self):
        assert evaluate(SignWitness() * BallIndicator(), 0.5) == 1.0

    def test_angular_sign(self):
        assert evaluate(AngularWitness("axis_sign"), np.array([-2.0, 0.0])) == -1.0

    def test_negative_power_at_origin(self):
        with pytest.raises(UndefinedAtOrigin):
            RadialPower(-0.5)(0.0)

    def test_vectorized_matches_scalar(self):
        f = Sum((2.0 * OuterPower(2, 0.5, 3.0, 0.2), AngularWitness("axis_abs")))
        X = np.random.default_rng(0).normal(size=(50, 2)) * 3
        many = f.evaluate_many(X)
        assert np.allclose(many, [f(x) for x in X], rtol=1e-15, atol=0)


class TestHomogeneity:
    def test_witnesses(self):
        assert homogeneity_info(SignWitness()) == (0, 1)
        assert homogeneity_info(AngularWitness()) == (0, 0)
        assert homogeneity_info(OuterPower(1, 0.0, 2.0, 0.1)) is None

    def test_product_adds(self):
        assert (SignWitness() * SignWitness()).homogeneity() == (0, 0)
        assert (RadialPower(1.5) * SignWitness()).homogeneity() == (1.5, 1)

    def test_sum_needs_agreement(self):
        assert (RadialPower(1.0) + RadialPower(1.0)).homogeneity() == (1.0, 0)
        assert (RadialPower(1.0) + RadialPower(2.0)).homogeneity() is None
        assert (SignWitness() + AngularWitness()).homogeneity() is None

    def test_scaled_keeps(self):
        assert (3.0 * SignWitness()).homogeneity() == (0, 1)


# ---------------------------------------------------------------------------
# dilation identity on homogeneous descriptors

HOMOGENEOUS = [
    SignWitness(),
    AngularWitness("axis_square"),
    AngularWitness("axis_abs"),
    AngularWitness("axis_sign"),
    Constant(2.5),
    RadialPower(1.5),
    RadialPower(-0.5),
    SignWitness() * RadialPower(2.0),
    AngularWitness("axis_sign") * RadialPower(-1.0) + 3.0 * AngularWitness("axis_sign") * RadialPower(-1.0),
    -2.0 * (SignWitness() * AngularWitness("axis_square")),
]


@settings(max_examples=25, deadline=None)
@given(idx=st.integers(0, len(HOMOGENEOUS) - 1), seed=st.integers(0, 2 ** 32 - 1))
def test_dilation_identity(idx, seed):
    f = HOMOGENEOUS[idx]
    lam, kappa = f.homogeneity()
    rng = np.random.default_rng(seed)
    n = 2
    # 40 batches of 25 points: 10^3 random (t, x) pairs over the run
    X = rng.normal(size=(40, n)) * rng.uniform(0.1, 10, size=(40, 1))
    t = rng.uniform(0.05, 20, size=40) * rng.choice([-1.0, 1.0], size=40)
    base = f.evaluate_many(X)
    moved = f.evaluate_many(t[:, None] * X)
    expect = np.sign(t) ** kappa * np.abs(t) ** lam * base
    assert np.allclose(moved, expect, rtol=1e-12, atol=1e-300)


@settings(max_examples=60, deadline=None)
@given(i=st.integers(0, len(HOMOGENEOUS) - 1), j=st.integers(0, len(HOMOGENEOUS) - 1), c=st.floats(-3, 3))
def test_algebra_closure(i, j, c):
    f, g = HOMOGENEOUS[i], HOMOGENEOUS[j]
    hf, hg = f.homogeneity(), g.homogeneity()
    assert (f * g).homogeneity() == (hf[0] + hg[0], (hf[1] + hg[1]) % 2)
    assert (f + g).homogeneity() == (hf if hf == hg else None)
    assert (c * f).homogeneity() == hf
