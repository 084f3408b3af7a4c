"""The acceptance suite: one function per criterion, shared by ``hclab check-all`` and the tests.

Each check returns a :class:`CriterionResult` whose ``detail`` holds every
number that entered the verdict. Random draws come from a Philox stream keyed
by the seed, so results are reproducible.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .experiments import (
    SweepPlan,
    adjointness_check,
    bmo_bound_experiment,
    commutator_bound_check,
    commutator_necessity_sweep,
    hardy_inequality_demo,
    sharpness_sweep,
)
from .functions import AngularWitness, BallIndicator, InnerPower, LogSymbol, OuterPower, RadialBand, RadialPower, RadialStep, SignWitness, Sum
from .kernels import CurveSpec, KernelSpec, bmo_constant, cesaro_constant, effective_kernel, lp_constant
from .operators import OperatorSpec, apply_H_radial, apply_U
from .quadrature import QuadratureConfig
from .spaces import BallFamily, bmo_estimate
from .weights import build_weight, lemma1_check


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    runtime: float = 0.0

    def line(self) -> str:
        return f"criterion {self.number:>2} {'PASS' if self.passed else 'FAIL'}  {self.name}"

    def to_dict(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "runtime_s": self.runtime}


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed), counter=[0, 0, 0, int(stream)]))


def _hardy_bundle():
    return KernelSpec.constant(), CurveSpec.power(1.0), build_weight(0.0, "constant", 1)


def _timed(fn: Callable) -> Callable:
    def run(seed: int = 0, cfg: QuadratureConfig | None = None) -> CriterionResult:
        start = time.perf_counter()
        res = fn(seed, cfg or QuadratureConfig(rng_seed=seed))
        res.runtime = time.perf_counter() - start
        limit = res.detail.get("runtime_limit_s")
        if limit is not None:
            res.detail["runtime_ok"] = res.runtime < limit
            res.passed = res.passed and res.runtime < limit
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_timed
def criterion_1(seed, cfg):
    """Classical Hardy: constant 2, sweep limit in [1.96, 2.00], every ratio <= 2 + 1e-8."""
    psi, s, w = _hardy_bundle()
    const = lp_constant(psi, s, 1, 0.0, 2.0, cfg)
    rep = sharpness_sweep(SweepPlan(psi, s, w, 2.0), "U", cfg)
    ok_const = const.finite and const.value == 2.0 and const.method == "closed-form"
    ok_limit = 1.96 <= rep.extrapolated_limit <= 2.00
    ok_ratios = all(r <= 2.0 + 1e-8 for r in rep.ratios)
    return CriterionResult(1, "classical Hardy sharpness", ok_const and ok_limit and ok_ratios, {
        "lp_constant": const.value, "limit": rep.extrapolated_limit, "max_ratio": max(rep.ratios),
        "verdict": rep.verdict, "runtime_limit_s": 10.0})


@_timed
def criterion_2(seed, cfg):
    """Weighted Hardy p/b = 4 and the inequality on random step functions."""
    psi, s, _ = _hardy_bundle()
    const = lp_constant(psi, s, 1, 0.5, 2.0, cfg)
    rng = _rng(seed, 2)
    worst = 0.0
    rows = []
    for _ in range(10):
        k = int(rng.integers(1, 6))
        edges = np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 2.0, k))])
        values = rng.uniform(0.0, 3.0, k)
        lhs, rhs = hardy_inequality_demo(RadialStep(tuple(edges), tuple(values)), 2.0, 0.5, cfg)
        rows.append([lhs, rhs])
        worst = max(worst, lhs / (4.0 * rhs))
    ok = abs(const.value - 4.0) <= 1e-10 and worst <= 1.0
    return CriterionResult(2, "weighted Hardy constant p/b", ok, {
        "lp_constant": const.value, "max_lhs_over_4rhs": worst, "pairs": rows})


@_timed
def criterion_3(seed, cfg):
    """Outer and inner power integrals of a homogeneous weight both equal c_w / eps."""
    weights = {
        "1": build_weight(0.0, "constant", 1),
        "|x|": build_weight(1.0, "constant", 1),
        "|x1| (n=2)": build_weight(1.0, "axis_power", 2),
    }
    worst = 0.0
    rows = {}
    for name, w in weights.items():
        for eps in (0.1, 0.5, 1.0, 2.0):
            chk = lemma1_check(w, eps, cfg)
            err = max(abs(chk.lhs - chk.rhs), abs(chk.mirror_lhs - chk.rhs)) / chk.rhs
            rows[f"{name}, eps={eps}"] = err
            worst = max(worst, err)
    return CriterionResult(3, "outer/inner power integral identity", worst <= 1e-8, {
        "max_rel_error": worst, "cases": rows, "runtime_limit_s": 5.0})


def _random_power_bundle(rng):
    a = float(rng.uniform(0.5, 2.0))
    b = float(rng.uniform(-0.5, 2.0))
    psi = KernelSpec.power(a, b) if rng.random() < 0.5 else KernelSpec.product(a, b, float(rng.uniform(0.5, 3.0)))
    gamma = float(rng.uniform(0.3, 2.0))
    n = int(rng.integers(1, 4))
    alpha = float(rng.uniform(-0.5, 2.0))
    p = float(rng.uniform(1.0, 4.0))
    return psi, CurveSpec.power(gamma), n, alpha, p


@_timed
def criterion_4(seed, cfg):
    """Cesaro constant equals the U-constant of |s|^n psi bit for bit; V sweep tends to 2/3."""
    rng = _rng(seed, 4)
    mismatches = 0
    for _ in range(50):
        psi, s, n, alpha, p = _random_power_bundle(rng)
        a = cesaro_constant(psi, s, n, alpha, p, cfg)
        b = lp_constant(effective_kernel(psi, s, n), s, n, alpha, p, cfg)
        if not (a.finite == b.finite and (a.value == b.value or not a.finite)):
            mismatches += 1
    psi, s, w = _hardy_bundle()
    rep = sharpness_sweep(SweepPlan(psi, s, w, 2.0), "V", cfg)
    ok_limit = abs(rep.extrapolated_limit - 2.0 / 3.0) <= 0.02 * (2.0 / 3.0)
    return CriterionResult(4, "Cesaro duality", mismatches == 0 and ok_limit, {
        "mismatches": mismatches, "limit": rep.extrapolated_limit, "verdict": rep.verdict})


@_timed
def criterion_5(seed, cfg):
    """Adjointness residual <= 1e-6 (1 + |lhs|) on the ball-indicator bundle and random extremal pairs."""
    psi, s, w = _hardy_bundle()
    base = adjointness_check(BallIndicator(), BallIndicator(), psi, s, w, 2.0, cfg)
    ok = abs(base["lhs"] - 2.0) <= 1e-6 * 3.0 and base["residual"] <= 1e-6 * (1 + abs(base["lhs"]))
    rng = _rng(seed, 5)
    rows = []
    for _ in range(10):
        alpha = float(rng.uniform(-0.5, 1.0))
        p = float(rng.uniform(1.5, 3.0))
        q = p / (p - 1.0)
        gamma = -float(rng.uniform(0.3, 2.0))
        kern = KernelSpec.power(float(rng.uniform(0.5, 2.0)), float(rng.uniform(-0.5, 1.0)))
        wt = build_weight(alpha, "constant", 1)
        f = OuterPower(1, alpha, p, float(rng.uniform(0.05, 0.5)))
        g = InnerPower(1, alpha, q, float(rng.uniform(0.05, 0.5)))
        res = adjointness_check(f, g, kern, CurveSpec.power(gamma), wt, p, cfg)
        rows.append(res)
        ok = ok and res["residual"] <= 1e-6 * (1 + abs(res["lhs"]))
    return CriterionResult(5, "adjointness", ok, {
        "indicator": base, "random_max_residual": max(r["residual"] for r in rows),
        "random_lhs": [r["lhs"] for r in rows]})


def _random_kernel(rng):
    return KernelSpec.beta(float(rng.uniform(0.2, 3.0)), float(rng.uniform(-0.8, 2.0)), float(rng.uniform(-0.8, 2.0)))


@_timed
def criterion_6(seed, cfg):
    """BMO: exact f1 identity, the f0 value on centred intervals, and random-kernel witness ratios."""
    psi = KernelSpec.constant()
    s = CurveSpec.power(1.0)
    w1 = build_weight(0.0, "constant", 1)
    w2 = build_weight(0.0, "constant", 2)
    const = bmo_constant(psi, cfg)
    exact = bmo_bound_experiment(psi, s, w2, [AngularWitness("axis_square"), AngularWitness("axis_sign")], cfg=cfg)
    f1_ratios = [r["ratio"] for r in exact.details["witnesses"]]
    ok_f1 = all(r == const.value for r in f1_ratios)

    fam = BallFamily(((0.0,),), r_min=0.25, r_max=4.0, count=5)
    f0_est = bmo_estimate(SignWitness(), w1, fam, 1.0, cfg)
    ok_f0 = abs(f0_est - 0.5) <= 1e-9

    rng = _rng(seed, 6)
    small = BallFamily.standard(1, -2, 2, r_min=0.125, r_max=8.0, count=7)
    worst = 0.0
    for _ in range(10):
        k = _random_kernel(rng)
        c = bmo_constant(k, cfg).value
        r1 = bmo_bound_experiment(k, s, w1, [SignWitness(), BallIndicator()], small, cfg)
        r2 = bmo_bound_experiment(k, s, w2, [AngularWitness("axis_square")], cfg=cfg)
        for row in r1.details["witnesses"] + r2.details["witnesses"]:
            worst = max(worst, row["ratio"] / c)
    ok_rand = worst <= 1.05
    return CriterionResult(6, "BMO bounds", ok_f1 and ok_f0 and ok_rand, {
        "bmo_constant": const.value, "f1_ratios": f1_ratios, "f1_exact": ok_f1,
        "f0_estimate": f0_est, "f0_target": 0.5, "f0_ok": ok_f0,
        "random_max_ratio_over_constant": worst, "random_ok": ok_rand})


@_timed
def criterion_7(seed, cfg):
    """Commutator: necessity limit 4 +- 5%, bounded indicator decay, bounded sufficiency sweep (constant 8)."""
    psi, s, w = _hardy_bundle()
    plan = SweepPlan(psi, s, w, 2.0)
    nec = commutator_necessity_sweep(plan, LogSymbol(), cfg)
    ok_nec = abs(nec.extrapolated_limit - 4.0) <= 0.05 * 4.0
    ind = commutator_necessity_sweep(plan, BallIndicator(), cfg)
    ok_ind = bool(ind.details["bounded"])
    bnd = commutator_bound_check(psi, s, LogSymbol(), [BallIndicator()], w, 2.0, cfg)
    ok_bnd = bnd.verdict == "bound-only" and abs(bnd.theoretical_constant.value - 8.0) <= 1e-10
    return CriterionResult(7, "commutator necessity and sufficiency", ok_nec and ok_ind and ok_bnd, {
        "necessity_limit": nec.extrapolated_limit, "decay_sequence": ind.details["decay_sequence"],
        "indicator_ratio": ind.details["indicator_ratio"], "bound_constant": bnd.theoretical_constant.value,
        "bound_ratios": bnd.ratios, "bound_verdict": bnd.verdict})


def random_radial_descriptor(rng, n: int):
    """A random radial test function, integrable near the origin in R^n."""
    terms = []
    for _ in range(int(rng.integers(1, 4))):
        kind = int(rng.integers(0, 4))
        if kind == 0:
            lo = float(rng.uniform(0.0, 1.0))
            terms.append(RadialBand(float(rng.uniform(-2.0, 2.0)), lo, lo + float(rng.uniform(0.2, 3.0)),
                                    float(rng.uniform(-2.0, 2.0))))
        elif kind == 1:
            k = int(rng.integers(1, 4))
            edges = np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 1.5, k))])
            terms.append(RadialStep(tuple(edges), tuple(rng.uniform(-2.0, 2.0, k))))
        elif kind == 2:
            terms.append(BallIndicator())
        else:
            terms.append(RadialPower(float(rng.uniform(-0.9 * n, 1.5))))
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


@_timed
def criterion_8(seed, cfg):
    """Ball average equals U with psi = n t^(n-1), s = t on random radial functions."""
    rng = _rng(seed, 8)
    worst = 0.0
    for i in range(20):
        n = 1 + i % 3
        f = random_radial_descriptor(rng, n)
        x = rng.normal(size=n)
        x *= float(rng.uniform(0.2, 4.0)) / np.linalg.norm(x)
        a = apply_H_radial(f, n, x, cfg)
        b = apply_U(OperatorSpec.hardy(n), f, x, cfg)
        worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    return CriterionResult(8, "radial equivalence of H and U", worst <= 1e-9, {"max_discrepancy": worst})


@_timed
def criterion_9(seed, cfg):
    """log|x| has a finite BMO estimate that is stable under family doubling."""
    rows = {}
    ok = True
    for name, alpha in (("1", 0.0), ("|x|", 1.0)):
        w = build_weight(alpha, "constant", 1)
        fam = BallFamily.standard(1)
        e1 = bmo_estimate(LogSymbol(), w, fam, 1.0, cfg)
        e2 = bmo_estimate(LogSymbol(), w, fam.doubled(), 1.0, cfg)
        stable = abs(e2 - e1) <= 0.05 * e1
        rows[name] = {"estimate": e1, "doubled": e2, "stable": stable}
        ok = ok and stable and math.isfinite(e1) and e1 < 10.0
    return CriterionResult(9, "log|x| in weighted BMO", ok, {"weights": rows, "cap": 10.0})


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9)


def run_all(seed: int = 0, rel_tol: float | None = None) -> list[CriterionResult]:
    """Criteria 1-9 (criterion 10, determinism, compares two full runs of this function)."""
    kw = {"rng_seed": seed}
    if rel_tol is not None:
        kw["rel_tol"] = rel_tol
    cfg = QuadratureConfig(**kw)
    return [c(seed, cfg) for c in CRITERIA]
