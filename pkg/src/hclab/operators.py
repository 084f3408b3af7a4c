"""Pointwise application of the Hardy–Cesàro family of operators.

``U f(x) = int_0^1 f(s(t) x) psi(t) dt``; the Cesàro companion ``V`` is ``U``
with kernel ``|s|^n psi``; the infinite-horizon operator integrates over the
whole support of ``psi``; ``H`` is the n-dimensional Hardy average over the
ball ``|y| < |x|``; the commutator is ``b U f - U(b f)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import (
    DivergenceSuspected,
    DivergentPointValue,
    NonRadialInput,
    ParamOutOfRange,
    UndefinedAtOrigin,
)
from .functions import Opaque, TestFunction
from .kernels import CurveSpec, KernelSpec, effective_kernel
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_adaptive, integrate_improper

OPERATOR_KINDS = ("U", "V", "U_inf", "H")


@dataclass(frozen=True)
class OperatorSpec:
    """Which operator to apply, with its kernel, curve, dimension and optional symbol."""

    kind: str
    psi: KernelSpec
    s: CurveSpec
    n: int = 1
    b: Optional[TestFunction] = None

    def __post_init__(self):
        if self.kind not in OPERATOR_KINDS:
            raise ParamOutOfRange(f"unknown operator kind {self.kind!r}")
        if self.n < 1:
            raise ParamOutOfRange("dimension must be >= 1")

    @classmethod
    def hardy(cls, n: int) -> "OperatorSpec":
        """``H`` as the member of the family with ``psi = n t^(n-1)`` and ``s = t``."""
        return cls("U", KernelSpec.power(float(n), float(n - 1)), CurveSpec.power(1.0), n)

    def with_symbol(self, b: TestFunction) -> "OperatorSpec":
        return replace(self, b=b)


def _point(x, n: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    x = x.reshape(1) if x.ndim == 0 else x
    if n is not None and x.size != n:
        raise ParamOutOfRange(f"point has dimension {x.size}, operator has {n}")
    return x


def _safe_exp(y: float) -> float:
    if y > 700:
        return math.inf
    if y < -745:
        return 0.0
    return math.exp(y)


# ---------------------------------------------------------------------------
# the sets {t : |s(t) x| > c}


def _t_window(lo: float, hi: float, r: float, gamma: float, upper: float) -> tuple[float, float]:
    """The ``t`` range on which ``lo < t**gamma * r < hi``, clipped to ``[0, upper]``."""
    a = -math.inf if lo <= 0 else math.log(lo)
    b = math.inf if math.isinf(hi) else math.log(hi)
    lr = math.log(r)
    y1, y2 = (a - lr) / gamma, (b - lr) / gamma
    if gamma < 0:
        y1, y2 = y2, y1
    t1 = 0.0 if y1 == -math.inf else _safe_exp(y1)
    t2 = math.inf if y2 == math.inf else _safe_exp(y2)
    return max(t1, 0.0), min(t2, upper)


def _scan_grid(upper: float) -> np.ndarray:
    ts = np.concatenate([np.geomspace(1e-12, 1e-3, 60), np.linspace(1e-3, 1.0, 400)])
    if upper > 1:
        ts = np.concatenate([ts, np.geomspace(1.0, min(upper, 1e8), 200)[1:]])
    return ts[ts < upper] if math.isfinite(upper) else ts


def cutoff_times(s: CurveSpec, r: float, c: float, upper: float = 1.0) -> tuple:
    """Times ``t`` in ``(0, upper)`` with ``|s(t)| * r == c``.

    Exact for power curves; a grid scan refined by bisection otherwise.
    """
    if r <= 0 or c <= 0 or math.isinf(c):
        return ()
    if s.is_power:
        t = _safe_exp((math.log(c) - math.log(r)) / s.gamma)
        return (t,) if 0 < t < upper else ()
    g = lambda t: abs(s(t)) * r - c
    ts = _scan_grid(upper)
    vals = np.array([g(t) for t in ts])
    out = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        out.append(brentq(g, ts[i], ts[i + 1], xtol=1e-15, rtol=1e-15))
    return tuple(out)


def outer_set(s: CurveSpec, x, c: float = 1.0, upper: float = 1.0) -> list[tuple[float, float]]:
    """Intervals of ``t`` in ``(0, upper)`` where ``|s(t) x| > c``; the complement is the inner set."""
    r = float(np.linalg.norm(_point(x)))
    if r == 0:
        return []
    if s.is_power:
        t1, t2 = _t_window(c, math.inf, r, s.gamma, upper)
        return [(t1, t2)] if t1 < t2 else []
    edges = [0.0, *cutoff_times(s, r, c, upper), upper]
    out = []
    for a, b in zip(edges, edges[1:]):
        mid = 0.5 * (a + b) if math.isfinite(b) else a + 1.0
        if abs(s(mid)) * r > c:
            out.append((a, b))
    return out


def _curve_breaks(s: CurveSpec, upper: float) -> set:
    if s.is_power:
        return {b for b in s.sign_breaks if b < upper}
    ts = _scan_grid(upper)
    vals = np.array([s(t) for t in ts])
    out = set()
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        out.add(brentq(s, ts[i], ts[i + 1], xtol=1e-15, rtol=1e-15))
    return out


def _breakpoints(funcs, s: CurveSpec, psi: KernelSpec, r: float, upper: float) -> list:
    pts = set(psi.breakpoints()) | _curve_breaks(s, upper)
    for f in funcs:
        for c in f.radial_breakpoints():
            pts.update(cutoff_times(s, r, c, upper))
    return sorted(p for p in pts if 0 < p < upper)


# ---------------------------------------------------------------------------
# U and friends


def _integrate_t(g, psi: KernelSpec, pts: list, upper: float, cfg: QuadratureConfig) -> float:
    left = psi.t_exp if psi.t_exp < 0 else None
    right = psi.one_minus_exp if (psi.is_beta_type and psi.one_minus_exp < 0) else None
    try:
        if math.isfinite(upper):
            return integrate_adaptive(g, 0.0, upper, cfg, left_exponent=left,
                                      right_exponent=right, points=pts).require()
        mid = max([1.0, *pts])
        head = integrate_adaptive(g, 0.0, mid, cfg, left_exponent=left, points=pts).require()
        return head + integrate_improper(g, mid, cfg).require()
    except DivergenceSuspected as exc:
        raise DivergentPointValue(str(exc)) from None


def _exact_radial(pieces, psi: KernelSpec, s: CurveSpec, r: float, upper: float, cfg) -> float:
    total = 0.0
    for p in pieces:
        t1, t2 = _t_window(p.lo, p.hi, r, s.gamma, upper)
        if not t1 < t2:
            continue
        m = psi.moment(s.gamma * p.exp, t1, t2, cfg)
        if not m.finite:
            raise DivergentPointValue("integrand is not integrable near the ends of the kernel support")
        total += p.coef * r ** p.exp * m.value
    return total


def _exact_homogeneous(f: TestFunction, lam: float, kappa: int, psi, s, x, upper, cfg) -> float:
    fx = f.evaluate(x)
    if fx == 0:
        return 0.0
    total = 0.0
    for t1, t2, sign in s.segments(upper):
        m = psi.moment(s.gamma * lam, t1, t2, cfg)
        if not m.finite:
            raise DivergentPointValue("kernel moment diverges")
        total += (sign ** kappa) * m.value
    return fx * total


def _apply(psi: KernelSpec, s: CurveSpec, f: TestFunction, x: np.ndarray, upper: float,
           cfg: QuadratureConfig) -> float:
    r = float(np.linalg.norm(x))
    if r == 0:
        try:
            f0 = f.evaluate(x)
        except UndefinedAtOrigin as exc:
            raise DivergentPointValue(str(exc)) from None
        m = psi.moment(0.0, 0.0, upper, cfg)
        if not m.finite:
            raise DivergentPointValue("kernel is not integrable")
        return f0 * m.value
    if s.is_power:
        pieces = f.radial_pieces()
        if pieces is not None:
            return _exact_radial(pieces, psi, s, r, upper, cfg)
        h = f.homogeneity()
        if h is not None:
            return _exact_homogeneous(f, h[0], h[1], psi, s, x, upper, cfg)
    pts = _breakpoints([f], s, psi, r, upper)
    g = lambda t: f._eval(s(t) * x) * psi(t)
    return _integrate_t(g, psi, pts, upper, cfg)


def apply_U(spec: OperatorSpec, f: TestFunction, x, cfg: QuadratureConfig | None = None) -> float:
    """``int_0^1 f(s(t) x) psi(t) dt``."""
    return _apply(spec.psi, spec.s, f, _point(x, spec.n), 1.0, cfg or DEFAULT_CONFIG)


def apply_V(spec: OperatorSpec, f: TestFunction, x, cfg: QuadratureConfig | None = None) -> float:
    """The Cesàro companion, evaluated as ``U`` with kernel ``|s|^n psi``."""
    return apply_U(replace(spec, psi=effective_kernel(spec.psi, spec.s, spec.n)), f, x, cfg)


def apply_U_infinite(spec: OperatorSpec, f: TestFunction, x, cfg: QuadratureConfig | None = None) -> float:
    """``int_0^inf f(s(t) x) psi(t) dt`` over the support of ``psi``."""
    return _apply(spec.psi, spec.s, f, _point(x, spec.n), spec.psi.upper, cfg or DEFAULT_CONFIG)


def apply_H_radial(f: TestFunction, n: int, x, cfg: QuadratureConfig | None = None) -> float:
    """Average of a radial ``f`` over the ball ``|y| < |x|`` in R^n.

    Computed as ``n int_0^1 f_rad(|x| u) u^(n-1) du`` by quadrature split at
    the radial breakpoints of ``f``.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not f.is_radial:
        raise NonRadialInput(f"{f.kind} is not radial")
    r = float(np.linalg.norm(_point(x, n)))
    if r == 0:
        raise UndefinedAtOrigin("the ball average is taken over |y| < |x|, which is empty at x = 0")
    left = n - 1.0
    pieces = f.radial_pieces()
    if pieces is not None:
        near0 = [p.exp for p in pieces if p.lo == 0 and p.coef != 0]
        if near0:
            left += min(near0)
        if left <= -1:
            raise DivergentPointValue("f is not integrable near the origin")
    pts = [c / r for c in f.radial_breakpoints() if 0 < c < r]
    g = lambda u: f.radial_value(r * u) * u ** (n - 1)
    return n * integrate_adaptive(g, 0.0, 1.0, cfg, left_exponent=left if left < 0 else None,
                                  points=pts).require()


def apply_commutator(spec: OperatorSpec, f: TestFunction, x, cfg: QuadratureConfig | None = None) -> float:
    """``int (b(x) - b(s(t) x)) f(s(t) x) psi(t) dt`` as one quadrature."""
    cfg = cfg or DEFAULT_CONFIG
    if spec.b is None:
        raise ParamOutOfRange("commutator needs a symbol b")
    b = spec.b
    x = _point(x, spec.n)
    psi, s = spec.psi, spec.s
    upper = 1.0 if spec.kind != "U_inf" else psi.upper
    if spec.kind == "V":
        psi = effective_kernel(psi, s, spec.n)
    r = float(np.linalg.norm(x))
    if r == 0:
        return 0.0
    bx = b.evaluate(x)
    if b.kind == "constant":
        return 0.0
    pts = _breakpoints([f, b], s, psi, r, upper)

    def g(t):
        y = s(t) * x
        fy = f._eval(y)
        if fy == 0:
            return 0.0
        return (bx - b._eval(y)) * fy * psi(t)

    return _integrate_t(g, psi, pts, upper, cfg)


_APPLY = {"U": apply_U, "V": apply_V, "U_inf": apply_U_infinite}


def apply(spec: OperatorSpec, f: TestFunction, x, cfg: QuadratureConfig | None = None) -> float:
    """Dispatch on ``spec.kind`` (and on ``spec.b`` for commutators)."""
    if spec.b is not None:
        return apply_commutator(spec, f, x, cfg)
    if spec.kind == "H":
        return apply_H_radial(f, spec.n, x, cfg)
    return _APPLY[spec.kind](spec, f, x, cfg)


def operator_image(spec: OperatorSpec, f: TestFunction, cfg: QuadratureConfig | None = None) -> TestFunction:
    """``T f`` as a test function (radial and homogeneous whenever ``f`` is)."""
    breaks = set(f.radial_breakpoints())
    if spec.b is not None:
        breaks |= set(spec.b.radial_breakpoints())
    if spec.s.is_power:
        for tau in spec.psi.breakpoints():
            breaks |= {c / tau ** spec.s.gamma for c in list(breaks)}
    if spec.b is None:
        homog = f.homogeneity()
    else:
        hb = spec.b.homogeneity()
        homog = f.homogeneity() if hb == (0.0, 0) else None
    return Opaque(lambda y: apply(spec, f, y, cfg), radial=f.is_radial and (spec.b is None or spec.b.is_radial),
                  breakpoints=sorted(breaks), homogeneity=homog, dim=spec.n)
