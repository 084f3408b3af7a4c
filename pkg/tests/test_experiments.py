import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hclab.errors import DivergentNorm, HypothesisViolated
from hclab.experiments import (
    SweepPlan,
    adjoint_spec,
    adjointness_check,
    bmo_bound_experiment,
    commutator_bound_check,
    commutator_necessity_sweep,
    hardy_demo_sweep,
    hardy_inequality_demo,
    sharpness_sweep,
    weighted_pairing,
)
from hclab.functions import (
    AngularWitness,
    BallIndicator,
    Constant,
    InnerPower,
    LogSymbol,
    OuterPower,
    RadialStep,
    SignWitness,
)
from hclab.kernels import CurveSpec, KernelSpec, lp_constant
from hclab.operators import OperatorSpec, operator_image
from hclab.spaces import BallFamily, lp_norm
from hclab.weights import build_weight

ONE = KernelSpec.constant()
T = CurveSpec.power(1.0)
W1 = build_weight(0.0, "constant", 1)
HARDY_PLAN = SweepPlan(ONE, T, W1, 2.0)


class TestSharpnessSweep:
    def test_classical(self):
        rep = sharpness_sweep(HARDY_PLAN, "U")
        assert rep.theoretical_constant.value == 2.0
        assert abs(rep.extrapolated_limit - 2.0) <= 0.02 * 2.0
        assert rep.verdict == "sharp-confirmed"
        assert len(rep.sweep_points) == 8

    def test_exact_ratios(self):
        # closed form for this bundle: r(eps) = 2 / sqrt(1 + 2 eps)
        rep = sharpness_sweep(HARDY_PLAN, "U")
        for eps, r, lb in rep.sweep_points:
            assert r == pytest.approx(2 / math.sqrt(1 + 2 * eps), rel=1e-10)
            assert lb <= r

    def test_direct_ratio_route(self):
        # second route: norms of the operator image by radial quadrature
        eps = 0.125
        f = OuterPower(1, 0.0, 2.0, eps)
        direct = lp_norm(operator_image(OperatorSpec("U", ONE, T, 1), f), W1, 2.0, method="quadrature") / lp_norm(f, W1, 2.0)
        rep = sharpness_sweep(SweepPlan(ONE, T, W1, 2.0, (eps,)), "U")
        assert rep.sweep_points[0][1] == pytest.approx(direct, rel=1e-8)

    def test_cesaro(self):
        rep = sharpness_sweep(HARDY_PLAN, "V")
        assert abs(rep.extrapolated_limit - 2 / 3) <= 0.02 * 2 / 3

    def test_trivial_integrand(self):
        rep = sharpness_sweep(SweepPlan(KernelSpec.power(1.0, 0.5), T, W1, 2.0), "U")
        assert rep.theoretical_constant.value == pytest.approx(1.0)
        assert all(r <= 1.0 + 1e-9 for r in rep.ratios)

    def test_inner_family_for_negative_gamma(self):
        psi = KernelSpec.power(2.0, 1.0)
        s = CurveSpec.power(-0.5)
        w = build_weight(0.5, "constant", 2)
        rep = sharpness_sweep(SweepPlan(psi, s, w, 3.0), "U")
        c = lp_constant(psi, s, 2, 0.5, 3.0).value
        assert abs(rep.extrapolated_limit - c) <= 0.02 * c

    def test_plan_validation(self):
        with pytest.raises(Exception):
            SweepPlan(ONE, T, W1, 2.0, (0.1, 0.2))

    def test_non_power_curve(self):
        with pytest.raises(HypothesisViolated):
            sharpness_sweep(SweepPlan(ONE, CurveSpec.from_callable(lambda t: t), W1, 2.0), "U")


class TestBMOBound:
    def test_angular_witness(self):
        w2 = build_weight(0.0, "constant", 2)
        rep = bmo_bound_experiment(ONE, T, w2, [AngularWitness("axis_sign")])
        assert rep.details["witnesses"][0]["ratio"] == 1.0

    def test_sign_witness(self):
        rep = bmo_bound_experiment(ONE, T, W1, [SignWitness()])
        assert rep.details["witnesses"][0]["ratio"] == 1.0

    def test_ball_indicator(self):
        rep = bmo_bound_experiment(ONE, T, W1, [BallIndicator()])
        assert rep.details["witnesses"][0]["ratio"] <= 1.05


class TestAdjointness:
    def test_indicator_bundle(self):
        res = adjointness_check(BallIndicator(), BallIndicator(), ONE, T, W1, 2.0)
        assert res["lhs"] == pytest.approx(2.0, rel=1e-12)
        assert res["residual"] <= 2e-6

    def test_zero(self):
        res = adjointness_check(Constant(0.0), BallIndicator(), ONE, T, W1, 2.0)
        assert res["residual"] == 0.0

    def test_extremal_pair(self):
        # U keeps supports outside the unit ball there, so the inner profile goes first
        res = adjointness_check(InnerPower(1, 0.0, 2.0, 0.1), OuterPower(1, 0.0, 2.0, 0.1), ONE, T, W1, 2.0)
        assert res["residual"] <= 1e-6 * (1 + abs(res["lhs"]))
        assert res["lhs"] > 0

    def test_unbounded(self):
        with pytest.raises(HypothesisViolated):
            adjointness_check(BallIndicator(), BallIndicator(), ONE, T, W1, 1.0)

    def test_adjoint_of_adjoint_kernel(self):
        spec = adjoint_spec(ONE, T, 1, 0.0)
        # V' has kernel |s|^-alpha psi and curve 1/s
        assert spec.s.gamma == -1.0

    def test_pairing_symmetry(self):
        f = RadialStep((0.0, 1.0, 2.0), (1.0, 2.0))
        g = BallIndicator()
        assert weighted_pairing(f, g, W1) == pytest.approx(weighted_pairing(g, f, W1))

    @settings(max_examples=15, deadline=None)
    @given(a=st.floats(0.5, 2), b=st.floats(-0.5, 1), gamma=st.floats(0.3, 2), alpha=st.floats(-0.5, 1),
           p=st.floats(1.5, 3), e1=st.floats(0.05, 0.5), e2=st.floats(0.05, 0.5))
    def test_random_pairs(self, a, b, gamma, alpha, p, e1, e2):
        psi, s = KernelSpec.power(a, b), CurveSpec.power(-gamma)
        w = build_weight(alpha, "constant", 1)
        assume(lp_constant(psi, s, 1, alpha, p).finite)
        q = p / (p - 1)
        res = adjointness_check(OuterPower(1, alpha, p, e1), InnerPower(1, alpha, q, e2), psi, s, w, p)
        assert res["residual"] <= 1e-6 * (1 + abs(res["lhs"]))


class TestCommutator:
    def test_log_necessity(self):
        rep = commutator_necessity_sweep(HARDY_PLAN, LogSymbol())
        assert abs(rep.extrapolated_limit - 4.0) <= 0.05 * 4.0
        assert all(lb <= r * (1 + 1e-9) for _, r, lb in rep.sweep_points)

    def test_zero_kernel(self):
        plan = SweepPlan(KernelSpec.constant(0.0), T, W1, 2.0)
        rep = commutator_necessity_sweep(plan, LogSymbol())
        assert all(r == 0.0 for r in rep.ratios)

    def test_indicator_decay(self):
        rep = commutator_necessity_sweep(HARDY_PLAN, BallIndicator())
        assert rep.details["bounded"]
        assert rep.details["indicator_ratio"] == pytest.approx(1.0, rel=1e-9)
        assert [d for d, _ in rep.details["decay_sequence"]] == [2.0, 4.0, 8.0, 16.0]

    def test_constant_symbol(self):
        rep = commutator_bound_check(ONE, T, Constant(2.0), [BallIndicator()], W1, 2.0)
        assert all(r == 0.0 for r in rep.ratios)
        assert rep.details["set_ratios"][0]["ratio"] == 0.0

    def test_log_bound(self):
        fam = BallFamily.standard(1, -3, 3, r_min=2.0 ** -4, r_max=2.0 ** 4, count=9)
        rep = commutator_bound_check(ONE, T, LogSymbol(), [BallIndicator()], W1, 2.0, fam=fam)
        assert rep.verdict == "bound-only"
        assert rep.theoretical_constant.value == pytest.approx(8.0, rel=1e-12)
        assert rep.details["max_growth"] < 10


class TestHardyDemo:
    def test_indicator(self):
        lhs, rhs = hardy_inequality_demo(BallIndicator(), 2.0, 1.0)
        assert lhs == pytest.approx(math.sqrt(2.0), rel=1e-10)
        assert rhs * 2.0 == pytest.approx(2.0, rel=1e-12)

    def test_zero(self):
        assert hardy_inequality_demo(Constant(0.0) * BallIndicator(), 2.0, 1.0) == (0.0, 0.0)

    def test_near_extremal(self):
        rep = hardy_demo_sweep(2.0, 1.0)
        assert abs(rep.extrapolated_limit - 2.0) <= 0.05 * 2.0

    @settings(max_examples=20, deadline=None)
    @given(k=st.integers(0, 2 ** 31), p=st.floats(1.2, 4), b=st.floats(0.2, 3))
    def test_inequality_holds(self, k, p, b):
        assume(b < p)  # otherwise the weight is not integrable at 0 and both sides diverge
        rng = np.random.default_rng(k)
        edges = np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 2.0, 4))])
        f = RadialStep(tuple(edges), tuple(rng.uniform(0.0, 3.0, 4)))
        lhs, rhs = hardy_inequality_demo(f, p, b)
        assert lhs <= (p / b) * rhs * (1 + 1e-9)

    def test_divergent_weight(self):
        with pytest.raises(DivergentNorm):
            hardy_inequality_demo(BallIndicator(), 2.0, 2.0)


# ---------------------------------------------------------------------------
# sweep properties on random power bundles

@settings(max_examples=12, deadline=None)
@given(a=st.floats(0.5, 2), b=st.floats(-0.3, 2), gamma=st.sampled_from([-1.5, -0.5, 0.5, 1.0, 2.0]),
       n=st.integers(1, 3), alpha=st.floats(-0.5, 1.5), p=st.floats(1.0, 4.0))
def test_sweep_properties(a, b, gamma, n, alpha, p):
    psi, s = KernelSpec.power(a, b), CurveSpec.power(gamma)
    c = lp_constant(psi, s, n, alpha, p)
    assume(c.finite)
    w = build_weight(alpha, "constant", n)
    rep = sharpness_sweep(SweepPlan(psi, s, w, p, (2.0 ** -3, 2.0 ** -5, 2.0 ** -7)), "U")
    for _, r, lb in rep.sweep_points:
        assert r <= c.value * (1 + 10 * 1e-10)
        assert lb <= r * (1 + 10 * 1e-10)
