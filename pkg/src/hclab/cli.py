"""Command-line front end.

Usage::

    hclab sharpness --config classical-hardy.cfg --out reports --format json --format svg
    hclab constant --config kernel.cfg
    hclab check-all --seed 0

Exit codes: 0 when the verdict is ``sharp-confirmed`` or ``bound-only``,
2 when it is ``violated`` (or an acceptance criterion fails), 1 on errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .config import (
    KINDS,
    RunConfig,
    build_curve_from,
    build_function_from,
    build_kernel_from,
    build_weight_from,
    epsilons_from,
    family_from,
    load_config,
    quadrature_from,
)
from .errors import HCLabError
from .experiments import (
    ExperimentReport,
    SweepPlan,
    adjointness_check,
    bmo_bound_experiment,
    commutator_bound_check,
    commutator_necessity_sweep,
    hardy_demo_sweep,
    hardy_inequality_demo,
    sharpness_sweep,
)
from .functions import BallIndicator, LogSymbol
from .kernels import (
    SharpConstant,
    bmo_constant,
    cesaro_constant,
    commutator_constant,
    infinite_lp_constant,
    lp_constant,
)
from .operators import OperatorSpec, apply
from .reporting import FORMATS, SCHEMA, dumps, emit_report
from .spaces import bmo_estimate, lp_norm

EXIT_OK, EXIT_ERROR, EXIT_VIOLATED = 0, 1, 2


def _p(cfg: RunConfig) -> float:
    return float(cfg.number("sweep", "p", 2))


def _function(cfg: RunConfig, section: str, default):
    return build_function_from(cfg, section) if section in cfg.sections else default


def _x(cfg: RunConfig, n: int) -> np.ndarray:
    raw = cfg.get("experiment", "x", 1)
    vals = raw if isinstance(raw, list) else [raw]
    x = np.array([float(v) for v in vals], dtype=float)
    if x.size == 1 and n > 1:
        x = np.concatenate([x, np.zeros(n - 1)])
    if x.size != n:
        raise HCLabError(f"[experiment] x has {x.size} coordinates, expected {n}")
    return x


def _safe(fn) -> SharpConstant:
    try:
        return fn()
    except HCLabError:
        return SharpConstant.infinite()


def cmd_constant(cfg: RunConfig, qc) -> ExperimentReport:
    psi, s, w, p = build_kernel_from(cfg), build_curve_from(cfg), build_weight_from(cfg), _p(cfg)
    op = str(cfg.get("experiment", "operator", "U"))
    start = time.perf_counter()
    table = {
        "lp": _safe(lambda: lp_constant(psi, s, w.n, w.alpha, p, qc)),
        "lp_infinite": _safe(lambda: infinite_lp_constant(psi, s, w.n, w.alpha, p, qc)),
        "cesaro": _safe(lambda: cesaro_constant(psi, s, w.n, w.alpha, p, qc)),
        "bmo": _safe(lambda: bmo_constant(psi, qc)),
    }
    try:
        cc = commutator_constant(psi, s, w.n, w.alpha, p, qc)
        table["commutator_necessity"], table["commutator_bound"] = cc.necessity, cc.bound
    except HCLabError:
        pass
    main = {"U": "lp", "V": "cesaro", "U_inf": "lp_infinite"}.get(op, "lp")
    const = table[main]
    return ExperimentReport(
        name=f"constant-{op}",
        theoretical_constant=const,
        verdict="bound-only",
        runtime=time.perf_counter() - start,
        details={
            "operator": op,
            "constant_verdict": "finite" if const.finite else "infinite",
            "constants": {k: {"value": v.to_json(), "method": v.method} for k, v in table.items()},
        },
    )


def cmd_apply(cfg: RunConfig, qc) -> ExperimentReport:
    psi, s, w = build_kernel_from(cfg), build_curve_from(cfg), build_weight_from(cfg)
    op = str(cfg.get("experiment", "operator", "U"))
    f = _function(cfg, "function", BallIndicator())
    b = _function(cfg, "symbol", None)
    spec = OperatorSpec(op, psi, s, w.n, b)
    x = _x(cfg, w.n)
    start = time.perf_counter()
    value = apply(spec, f, x, qc)
    return ExperimentReport(name=f"apply-{op}", theoretical_constant=None, runtime=time.perf_counter() - start,
                            details={"operator": op, "x": x.tolist(), "function": f.kind, "value": value})


def cmd_norm(cfg: RunConfig, qc) -> ExperimentReport:
    w, p = build_weight_from(cfg), _p(cfg)
    f = _function(cfg, "function", BallIndicator())
    start = time.perf_counter()
    value = lp_norm(f, w, p, qc)
    return ExperimentReport(name="norm", theoretical_constant=None, runtime=time.perf_counter() - start,
                            details={"function": f.kind, "p": p, "value": value})


def cmd_bmo(cfg: RunConfig, qc) -> ExperimentReport:
    psi, s, w = build_kernel_from(cfg), build_curve_from(cfg), build_weight_from(cfg)
    f = _function(cfg, "function", BallIndicator())
    fam = family_from(cfg, w.n) if "family" in cfg.sections else None
    rep = bmo_bound_experiment(psi, s, w, [f], fam, qc)
    rep.details["bmo_estimate"] = bmo_estimate(f, w, fam, 1.0, qc)
    return rep


def _plan(cfg: RunConfig) -> SweepPlan:
    return SweepPlan(build_kernel_from(cfg), build_curve_from(cfg), build_weight_from(cfg), _p(cfg), epsilons_from(cfg))


def cmd_sharpness(cfg: RunConfig, qc) -> ExperimentReport:
    return sharpness_sweep(_plan(cfg), str(cfg.get("experiment", "operator", "U")), qc)


def cmd_commutator(cfg: RunConfig, qc) -> ExperimentReport:
    plan = _plan(cfg)
    b = _function(cfg, "symbol", LogSymbol())
    mode = str(cfg.get("experiment", "mode", "necessity"))
    if mode == "necessity":
        return commutator_necessity_sweep(plan, b, qc)
    if mode == "bound":
        f = _function(cfg, "function", BallIndicator())
        fam = family_from(cfg, plan.n) if "family" in cfg.sections else None
        return commutator_bound_check(plan.psi, plan.s, b, [f], plan.w, plan.p, qc, plan.epsilons, fam)
    raise HCLabError(f"unknown commutator mode {mode!r} (use necessity or bound)")


def cmd_adjoint(cfg: RunConfig, qc) -> ExperimentReport:
    psi, s, w, p = build_kernel_from(cfg), build_curve_from(cfg), build_weight_from(cfg), _p(cfg)
    f = _function(cfg, "function", BallIndicator())
    g = _function(cfg, "dual", BallIndicator())
    start = time.perf_counter()
    res = adjointness_check(f, g, psi, s, w, p, qc)
    tol = 1e-6 * (1.0 + abs(res["lhs"]))
    return ExperimentReport(
        name="adjoint",
        theoretical_constant=None,
        verdict="bound-only" if res["residual"] <= tol else "violated",
        tolerances={"residual": tol},
        runtime=time.perf_counter() - start,
        details=res,
    )


def cmd_hardy_demo(cfg: RunConfig, qc) -> ExperimentReport:
    w, p = build_weight_from(cfg), _p(cfg)
    b = float(cfg.number("experiment", "b", p - 1.0 - w.alpha))
    rep = hardy_demo_sweep(p, b, epsilons_from(cfg), qc)
    if "function" in cfg.sections:
        lhs, rhs = hardy_inequality_demo(build_function_from(cfg, "function"), p, b, qc)
        rep.details.update({"lhs": lhs, "rhs": rhs, "holds": lhs <= (p / b) * rhs * (1 + qc.rel_tol)})
        if not rep.details["holds"]:
            rep.verdict = "violated"
    return rep


COMMANDS = {
    "constant": cmd_constant,
    "apply": cmd_apply,
    "norm": cmd_norm,
    "bmo": cmd_bmo,
    "sharpness": cmd_sharpness,
    "commutator": cmd_commutator,
    "adjoint": cmd_adjoint,
    "hardy-demo": cmd_hardy_demo,
}


def check_all_payload(seed: int, rel_tol: float | None = None) -> tuple[dict, bool]:
    from .acceptance import run_all

    results = run_all(seed, rel_tol)
    payload = {
        "schema": SCHEMA,
        "command": "check-all",
        "seed": seed,
        "criteria": [r.to_dict() for r in results],
        "passed": all(r.passed for r in results),
        "timing": {"runtime_s": sum(r.runtime for r in results)},
    }
    for r in results:
        print(r.line())
    return payload, payload["passed"]


def _summary(rep: ExperimentReport) -> str:
    tc = rep.theoretical_constant
    const = "n/a" if tc is None else ("infinite" if not tc.finite else f"{tc.value:.12g}")
    parts = [f"{rep.name}: constant={const}"]
    if rep.extrapolated_limit is not None:
        parts.append(f"limit={rep.extrapolated_limit:.12g}")
    if "value" in rep.details:
        parts.append(f"value={rep.details['value']:.12g}")
    parts.append(f"verdict={rep.verdict}")
    return " ".join(parts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hclab", description="Sharp-constant experiments for Hausdorff-type operators.")
    parser.add_argument("command", choices=KINDS + ("run",),
                        help="experiment to run; 'run' takes the kind from [experiment] in the config")
    parser.add_argument("--config", type=Path, help="experiment configuration file")
    parser.add_argument("--out", type=Path, default=Path("reports"), help="output directory (default: reports)")
    parser.add_argument("--format", dest="formats", action="append", choices=FORMATS,
                        help="report format, repeatable (default: json)")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (unsigned 64-bit)")
    parser.add_argument("--rel-tol", type=float, default=None, help="relative quadrature tolerance")
    return parser


def run(args: argparse.Namespace) -> int:
    formats = args.formats or ["json"]
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        raise HCLabError("--seed must be an unsigned 64-bit integer")
    cfg = load_config(args.config) if args.config else RunConfig()
    kind = cfg.kind if args.command == "run" else args.command
    seed = args.seed if args.seed is not None else int(cfg.number("quadrature", "rng_seed", 0))

    if kind == "check-all":
        payload, passed = check_all_payload(seed, args.rel_tol)
        args.out.mkdir(parents=True, exist_ok=True)
        path = args.out / "check-all.json"
        with open(path, "w", newline="\n") as fh:
            fh.write(dumps(payload))
        print(f"wrote {path}")
        return EXIT_OK if passed else EXIT_VIOLATED

    qc = quadrature_from(cfg, seed, args.rel_tol)
    rep = COMMANDS[kind](cfg, qc)
    print(_summary(rep))
    stem = args.config.stem if args.config else kind
    for fmt in formats:
        path = emit_report(rep, fmt, args.out, stem, command=kind, config=cfg.to_dict(), seed=seed)
        print(f"wrote {path}")
    return EXIT_VIOLATED if rep.verdict == "violated" else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except HCLabError as exc:
        print(f"hclab: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"hclab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
