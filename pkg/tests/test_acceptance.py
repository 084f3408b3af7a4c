"""Acceptance criteria 1-10, each at its stated tolerance.

The criteria are computed by ``hclab check-all`` (run twice through the CLI
for the determinism check); every test below re-asserts the numbers from the
first report and records one PASS/FAIL line for the terminal summary.
"""

import json
import time

import pytest

from hclab.cli import main
from hclab.reporting import strip_timing

SEED = 20240601


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    out = []
    for name in ("first", "second"):
        d = tmp_path_factory.mktemp(name)
        t0 = time.perf_counter()
        code = main(["check-all", "--seed", str(SEED), "--out", str(d)])
        out.append((code, (d / "check-all.json").read_text(), time.perf_counter() - t0))
    return out


@pytest.fixture(scope="module")
def criteria(runs):
    data = json.loads(runs[0][1])
    return {c["number"]: c for c in data["criteria"]}


@pytest.fixture
def record(acceptance_lines):
    def _record(number, name, checks):
        ok = all(checks)
        acceptance_lines.append(f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {name}")
        print(acceptance_lines[-1])
        return ok
    return _record


def test_criterion_1_classical_sharpness(criteria, record):
    d = criteria[1]["detail"]
    assert record(1, "classical Hardy sharpness", [
        d["lp_constant"] == 2.0,
        1.96 <= d["limit"] <= 2.0,
        d["max_ratio"] <= 2 + 1e-8,
        criteria[1]["runtime_s"] < 10,
    ])


def test_criterion_2_weighted_constant(criteria, record):
    d = criteria[2]["detail"]
    assert record(2, "weighted Hardy constant p/b", [
        abs(d["lp_constant"] - 4.0) <= 1e-10,
        len(d["pairs"]) == 10,
        all(lhs <= 4 * rhs for lhs, rhs in d["pairs"]),
    ])


def test_criterion_3_power_integral_identity(criteria, record):
    d = criteria[3]["detail"]
    assert record(3, "outer/inner power integral identity", [
        len(d["cases"]) == 12,
        all(e <= 1e-8 for e in d["cases"].values()),
        criteria[3]["runtime_s"] < 5,
    ])


def test_criterion_4_cesaro_duality(criteria, record):
    d = criteria[4]["detail"]
    assert record(4, "Cesaro duality", [
        d["mismatches"] == 0,
        abs(d["limit"] - 2 / 3) <= 0.02 * 2 / 3,
    ])


def test_criterion_5_adjointness(criteria, record):
    d = criteria[5]["detail"]
    ind = d["indicator"]
    assert record(5, "adjointness", [
        ind["lhs"] == pytest.approx(2.0, rel=1e-12),
        ind["residual"] <= 1e-6 * (1 + abs(ind["lhs"])),
        len(d["random_lhs"]) == 10,
        d["random_max_residual"] <= 1e-6,
    ])


def test_criterion_6_f1_exact(criteria):
    d = criteria[6]["detail"]
    assert all(r == d["bmo_constant"] for r in d["f1_ratios"])


@pytest.mark.xfail(strict=True, reason="the centred sign-witness oscillation is 4ab/(a+b)^2 = 1, "
                                       "not the stated 1/2; see the decisions ledger")
def test_criterion_6_f0_stated_value(criteria):
    assert abs(criteria[6]["detail"]["f0_estimate"] - 0.5) <= 1e-9


def test_criterion_6_f0_actual_value(criteria):
    # what the estimator does return on centred intervals
    assert criteria[6]["detail"]["f0_estimate"] == pytest.approx(1.0, rel=1e-12)


def test_criterion_6_random_kernels(criteria):
    assert criteria[6]["detail"]["random_max_ratio_over_constant"] <= 1.05


def test_criterion_6_line(criteria, record):
    # the full criterion, including the unattainable f0 part; the line is reported, not asserted
    d = criteria[6]["detail"]
    ok = record(6, "BMO bounds", [
        all(r == d["bmo_constant"] for r in d["f1_ratios"]),
        abs(d["f0_estimate"] - 0.5) <= 1e-9,
        d["random_max_ratio_over_constant"] <= 1.05,
    ])
    assert ok == criteria[6]["passed"]


def test_criterion_7_commutator(criteria, record):
    d = criteria[7]["detail"]
    ratios = d["bound_ratios"]
    decay = [v for _, v in d["decay_sequence"]]
    assert record(7, "commutator necessity and sufficiency", [
        abs(d["necessity_limit"] - 4.0) <= 0.05 * 4.0,
        [delta for delta, _ in d["decay_sequence"]] == [2.0, 4.0, 8.0, 16.0],
        max(decay) <= 10 * decay[0],
        d["bound_constant"] == pytest.approx(8.0, rel=1e-12),
        max(ratios) < 10 * min(ratios),
        d["bound_verdict"] == "bound-only",
    ])


def test_criterion_8_radial_equivalence(criteria, record):
    assert record(8, "radial equivalence of H and U", [criteria[8]["detail"]["max_discrepancy"] <= 1e-9])


def test_criterion_9_log_bmo(criteria, record):
    w = criteria[9]["detail"]["weights"]
    assert record(9, "log|x| in weighted BMO", [
        set(w) == {"1", "|x|"},
        all(v["estimate"] < 10 for v in w.values()),
        all(abs(v["doubled"] - v["estimate"]) <= 0.05 * v["estimate"] for v in w.values()),
    ])


def test_criterion_10_determinism(runs, record):
    (code1, text1, t1), (code2, text2, t2) = runs
    assert record(10, "determinism and runtime", [
        code1 == code2,
        strip_timing(text1) == strip_timing(text2),
        max(t1, t2) < 180,
    ])
