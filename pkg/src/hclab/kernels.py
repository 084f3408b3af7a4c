"""Kernel (psi) and curve (s) descriptors plus the closed-form operator constants.

Every constant here is an integral over ``t`` of a power of ``|s(t)|``
against ``psi``. For the power/Beta-type kernel families and power curves
``|s(t)| = t**gamma`` these reduce to (incomplete) Beta and Gamma
functions; everything else goes through :mod:`hclab.quadrature`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy import special as sp

from .errors import DivergenceSuspected, DivergentNorm, NonFiniteError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_adaptive, integrate_improper

BETA_FAMILIES = ("constant", "power", "riemann_liouville", "product", "beta")
KERNEL_FAMILIES = BETA_FAMILIES + ("exponential", "tabulated", "callable")


@dataclass(frozen=True)
class SharpConstant:
    """A constant that may be the tagged verdict "infinite"."""

    value: float
    finite: bool = True
    method: str = "closed-form"
    error_estimate: float = 0.0

    @classmethod
    def infinite(cls, method: str = "closed-form") -> "SharpConstant":
        return cls(math.inf, False, method)

    def __float__(self):
        return float(self.value)

    def scaled(self, c: float) -> "SharpConstant":
        if not self.finite:
            return self if c > 0 else SharpConstant(0.0, True, self.method)
        return SharpConstant(c * self.value, True, self.method, abs(c) * self.error_estimate)

    def __add__(self, other: "SharpConstant") -> "SharpConstant":
        if not (self.finite and other.finite):
            return SharpConstant.infinite(self.method if not self.finite else other.method)
        method = self.method if self.method == other.method else "mixed"
        return SharpConstant(self.value + other.value, True, method, self.error_estimate + other.error_estimate)

    def to_json(self):
        return self.value if self.finite else "infinite"


# ---------------------------------------------------------------------------
# kernels


@dataclass(frozen=True)
class KernelSpec:
    """``psi`` on [0, 1] (or [0, inf) for the exponential family).

    Beta-type families are ``coef * t**t_exp * (1 - t)**one_minus_exp``;
    the exponential family is ``coef * t**t_exp * exp(-rate * t)``.
    """

    family: str
    coef: float = 1.0
    t_exp: float = 0.0
    one_minus_exp: float = 0.0
    rate: float = 0.0
    knots: tuple = ()
    values: tuple = ()
    func: Callable | None = field(default=None, compare=False)
    params: tuple = ()

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.coef < 0:
            raise ValueError("kernel coefficient must be non-negative")
        if self.family == "tabulated":
            k = np.asarray(self.knots, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if k.size < 2 or k.size != v.size or np.any(np.diff(k) <= 0) or k[0] != 0 or k[-1] != 1:
                raise ValueError("tabulated kernel needs increasing knots from 0 to 1")
            if np.any(v < 0):
                raise ValueError("tabulated kernel must be non-negative")
        if self.family == "callable" and self.func is None:
            raise ValueError("callable kernel needs func")

    # constructors ----------------------------------------------------------
    @classmethod
    def constant(cls, c: float = 1.0) -> "KernelSpec":
        return cls("constant", coef=float(c), params=(float(c),))

    @classmethod
    def power(cls, a: float, b: float) -> "KernelSpec":
        return cls("power", coef=float(a), t_exp=float(b), params=(float(a), float(b)))

    @classmethod
    def riemann_liouville(cls, beta: float) -> "KernelSpec":
        if not beta > 0:
            raise ValueError("Riemann-Liouville order must be positive")
        return cls("riemann_liouville", coef=float(beta), one_minus_exp=float(beta) - 1, params=(float(beta),))

    @classmethod
    def product(cls, a: float, b: float, beta: float) -> "KernelSpec":
        """``a t**b * beta (1 - t)**(beta - 1)``."""
        if not beta > 0:
            raise ValueError("Riemann-Liouville order must be positive")
        return cls("product", coef=float(a) * beta, t_exp=float(b), one_minus_exp=beta - 1.0,
                   params=(float(a), float(b), float(beta)))

    @classmethod
    def beta(cls, coef: float, t_exp: float, one_minus_exp: float) -> "KernelSpec":
        return cls("beta", coef=float(coef), t_exp=float(t_exp), one_minus_exp=float(one_minus_exp),
                   params=(float(coef), float(t_exp), float(one_minus_exp)))

    @classmethod
    def exponential(cls, coef: float = 1.0, t_exp: float = 0.0, rate: float = 1.0) -> "KernelSpec":
        """``coef * t**t_exp * exp(-rate t)`` on [0, inf)."""
        if rate < 0:
            raise ValueError("rate must be non-negative")
        return cls("exponential", coef=float(coef), t_exp=float(t_exp), rate=float(rate),
                   params=(float(coef), float(t_exp), float(rate)))

    @classmethod
    def tabulated(cls, knots, values) -> "KernelSpec":
        return cls("tabulated", knots=tuple(float(k) for k in knots), values=tuple(float(v) for v in values))

    @classmethod
    def from_callable(cls, func: Callable[[float], float], *, half_line: bool = False,
                      t_exp: float = 0.0, one_minus_exp: float = 0.0) -> "KernelSpec":
        """Opaque kernel; ``t_exp``/``one_minus_exp`` are endpoint behaviour hints."""
        return cls("callable", func=func, t_exp=t_exp, one_minus_exp=one_minus_exp,
                   rate=1.0 if half_line else 0.0)

    # structure -------------------------------------------------------------
    @property
    def is_beta_type(self) -> bool:
        return self.family in BETA_FAMILIES

    @property
    def half_line(self) -> bool:
        return self.family == "exponential" or (self.family == "callable" and self.rate > 0)

    @property
    def upper(self) -> float:
        return math.inf if self.half_line else 1.0

    def __call__(self, t):
        if isinstance(t, (float, int)) and self.family != "callable":
            return self._scalar(float(t))
        t = np.asarray(t, dtype=float)
        if self.family in BETA_FAMILIES:
            with np.errstate(divide="ignore", invalid="ignore"):
                out = self.coef * t ** self.t_exp * (1.0 - t) ** self.one_minus_exp
            out = np.where((t >= 0) & (t <= 1), out, 0.0)
        elif self.family == "exponential":
            with np.errstate(divide="ignore", invalid="ignore"):
                out = self.coef * t ** self.t_exp * np.exp(-self.rate * t)
            out = np.where(t >= 0, out, 0.0)
        elif self.family == "tabulated":
            out = np.interp(t, self.knots, self.values, left=0.0, right=0.0)
        else:
            out = np.vectorize(lambda u: float(self.func(u)), otypes=[float])(t)
        return out if out.ndim else float(out)

    def _scalar(self, t: float) -> float:
        if t < 0:
            return 0.0
        if self.family in BETA_FAMILIES:
            if t > 1:
                return 0.0
            if self.coef == 0:
                return 0.0
            out = self.coef
            if self.t_exp:
                out *= t ** self.t_exp if t > 0 else (math.inf if self.t_exp < 0 else 0.0)
            if self.one_minus_exp:
                out *= (1.0 - t) ** self.one_minus_exp if t < 1 else (math.inf if self.one_minus_exp < 0 else 0.0)
            return out
        if self.family == "exponential":
            base = t ** self.t_exp if t > 0 else (1.0 if self.t_exp == 0 else (math.inf if self.t_exp < 0 else 0.0))
            return self.coef * base * math.exp(-self.rate * t)
        return float(np.interp(t, self.knots, self.values, left=0.0, right=0.0))

    def times_power(self, e: float) -> "KernelSpec":
        """The kernel ``t**e * psi(t)``."""
        if e == 0:
            return self
        if self.family in BETA_FAMILIES:
            return KernelSpec.beta(self.coef, self.t_exp + e, self.one_minus_exp)
        if self.family == "exponential":
            return KernelSpec.exponential(self.coef, self.t_exp + e, self.rate)
        base = self
        return KernelSpec.from_callable(lambda t: t ** e * base(t), half_line=self.half_line,
                                        t_exp=self.t_exp + e, one_minus_exp=self.one_minus_exp)

    def scaled(self, c: float) -> "KernelSpec":
        if c < 0:
            raise ValueError("kernels are non-negative")
        if self.family in BETA_FAMILIES:
            return KernelSpec.beta(c * self.coef, self.t_exp, self.one_minus_exp)
        if self.family == "exponential":
            return KernelSpec.exponential(c * self.coef, self.t_exp, self.rate)
        if self.family == "tabulated":
            return KernelSpec.tabulated(self.knots, [c * v for v in self.values])
        base = self
        return KernelSpec.from_callable(lambda t: c * base(t), half_line=self.half_line,
                                        t_exp=self.t_exp, one_minus_exp=self.one_minus_exp)

    def breakpoints(self) -> tuple:
        return tuple(k for k in self.knots[1:-1]) if self.family == "tabulated" else ()

    # integrals ---------------------------------------------------------------
    def moment(self, e: float = 0.0, t1: float = 0.0, t2: float | None = None,
               cfg: QuadratureConfig | None = None, method: str = "auto") -> SharpConstant:
        """``int_{t1}^{t2} t**e psi(t) dt`` (``t2`` defaults to the support end)."""
        t2 = self.upper if t2 is None else min(t2, self.upper)
        if t1 >= t2 or self.coef == 0:
            return SharpConstant(0.0, True, "closed-form")
        if method != "quadrature":
            exact = self._closed_moment(e, t1, t2)
            if exact is not None:
                return exact
        return self._quad_moment(lambda t: t ** e, self.t_exp + e, t1, t2, cfg)

    def log_moment(self, e: float = 0.0, t1: float = 0.0, t2: float | None = None,
                   cfg: QuadratureConfig | None = None, method: str = "auto") -> SharpConstant:
        """``int_{t1}^{t2} t**e log(1/t) psi(t) dt``; positive on [0, 1]."""
        t2 = self.upper if t2 is None else min(t2, self.upper)
        if t1 >= t2 or self.coef == 0:
            return SharpConstant(0.0, True, "closed-form")
        a = self.t_exp + e
        if method != "quadrature" and t1 == 0:
            if self.family in BETA_FAMILIES and t2 == 1:
                c = self.one_minus_exp
                if a <= -1 or c <= -1:
                    return SharpConstant.infinite()
                val = self.coef * sp.beta(a + 1, c + 1) * (sp.digamma(a + c + 2) - sp.digamma(a + 1))
                return SharpConstant(float(val))
            if self.family == "exponential" and math.isinf(t2) and self.rate > 0:
                if a <= -1:
                    return SharpConstant.infinite()
                lam = self.rate
                val = self.coef * math.exp(sp.gammaln(a + 1) - (a + 1) * math.log(lam)) * (math.log(lam) - sp.digamma(a + 1))
                return SharpConstant(float(val))
        if method != "quadrature" and self.family in BETA_FAMILIES and self.one_minus_exp == 0 and t1 > 0:
            return SharpConstant(self.coef * (_log_power_antiderivative(a, t2) - _log_power_antiderivative(a, t1)))
        # log(1/t) adds no power to the endpoint behaviour
        hint = a - min(1e-3, 0.5 * (a + 1)) if -1 < a < 0 else a
        return self._quad_moment(lambda t: t ** e * math.log(1.0 / t), hint, t1, t2, cfg)

    def _closed_moment(self, e, t1, t2) -> SharpConstant | None:
        a = self.t_exp + e
        if self.family in BETA_FAMILIES:
            c = self.one_minus_exp
            if (t1 == 0 and a <= -1) or (t2 == 1 and c <= -1):
                return SharpConstant.infinite()
            if c == 0:
                # pure power: exact rational arithmetic beats the Beta route
                return SharpConstant(self.coef * _power_integral(a, t1, t2))
            if a > -1 and c > -1:
                if t1 == 0 and t2 == 1:
                    return SharpConstant(float(self.coef * sp.beta(a + 1, c + 1)))
                full = sp.beta(a + 1, c + 1)
                lo = sp.betainc(a + 1, c + 1, t1) if t1 > 0 else 0.0
                hi = sp.betainc(a + 1, c + 1, t2) if t2 < 1 else 1.0
                if hi - lo < 1e-6 and t1 > 0:
                    # cancellation: fall back to quadrature on the short window
                    return None
                return SharpConstant(float(self.coef * full * (hi - lo)))
            return None
        if self.family == "exponential":
            lam = self.rate
            if t1 == 0 and a <= -1:
                return SharpConstant.infinite()
            if math.isinf(t2) and lam == 0:
                return SharpConstant.infinite()
            if lam == 0:
                return SharpConstant(self.coef * _power_integral(a, t1, t2))
            if a > -1:
                s = a + 1
                lo = sp.gammainc(s, lam * t1) if t1 > 0 else 0.0
                hi = sp.gammainc(s, lam * t2) if math.isfinite(t2) else 1.0
                if hi - lo < 1e-6 and t1 > 0:
                    upper = sp.gammaincc(s, lam * t1) - (sp.gammaincc(s, lam * t2) if math.isfinite(t2) else 0.0)
                    if upper < 1e-6:
                        return None
                    frac = upper
                else:
                    frac = hi - lo
                scale = math.exp(sp.gammaln(s) - s * math.log(lam))
                return SharpConstant(float(self.coef * scale * frac))
            return None
        return None

    def _quad_moment(self, factor, left_exp, t1, t2, cfg) -> SharpConstant:
        """Quadrature of ``factor(t) psi(t)`` over ``(t1, t2)``."""
        cfg = cfg or DEFAULT_CONFIG
        g = lambda t: factor(t) * self(t)
        left = left_exp if (t1 == 0 and left_exp is not None and left_exp < 0) else None
        if left is not None and left <= -1:
            return SharpConstant.infinite("quadrature")
        right_exp = self.one_minus_exp if (t2 == 1 and self.one_minus_exp < 0) else None
        if right_exp is not None and right_exp <= -1:
            return SharpConstant.infinite("quadrature")
        pts = [k for k in self.breakpoints() if t1 < k < t2]
        if t1 > 0 and math.isfinite(t2) and t2 > 1e6 * t1:
            # one piece per few decades keeps the adaptive rule resolved on a wide log range
            lo, hi = math.log(t1), math.log(t2)
            pts = sorted(set(pts) | {math.exp(u) for u in np.arange(lo, hi, 8.0)[1:]})
        try:
            if right_exp is not None and self.is_beta_type:
                res = self._reflected_quad(factor, g, left, right_exp, t1, cfg)
            elif math.isinf(t2):
                head_end = max(t1, 1.0)
                head = (integrate_adaptive(g, t1, head_end, cfg, left_exponent=left, points=pts)
                        if head_end > t1 else None)
                tail = integrate_improper(g, head_end, cfg, left_exponent=None)
                res = tail if head is None else head + tail
            else:
                res = integrate_adaptive(g, t1, t2, cfg, left_exponent=left, right_exponent=right_exp, points=pts)
        except (DivergenceSuspected, NonFiniteError):
            return SharpConstant.infinite("quadrature")
        if not res.converged and not math.isfinite(res.value):
            return SharpConstant.infinite("quadrature")
        return SharpConstant(res.value, True, "quadrature", res.error_estimate)

    def _reflected_quad(self, factor, g, left, right_exp, t1, cfg):
        # near t = 1 evaluate (1 - t)**c as u**c with u = 1 - t computed exactly
        mid = max(0.5, t1)
        h = lambda u: factor(1.0 - u) * self.coef * (1.0 - u) ** self.t_exp * u ** self.one_minus_exp
        tail = integrate_adaptive(h, 0.0, 1.0 - mid, cfg, left_exponent=right_exp)
        if mid == t1:
            return tail
        return integrate_adaptive(g, t1, mid, cfg, left_exponent=left) + tail

    def to_dict(self) -> dict:
        if self.family == "callable":
            raise ValueError("callable kernels cannot be serialized")
        if self.family == "tabulated":
            return {"family": "tabulated", "knots": list(self.knots), "values": list(self.values)}
        names = {
            "constant": ("c",),
            "power": ("a", "b"),
            "riemann_liouville": ("beta",),
            "product": ("a", "b", "beta"),
            "beta": ("coef", "t_exp", "one_minus_exp"),
            "exponential": ("coef", "t_exp", "rate"),
        }[self.family]
        return {"family": self.family, **dict(zip(names, self.params))}

    @classmethod
    def from_dict(cls, d: dict) -> "KernelSpec":
        fam = d["family"]
        if fam == "tabulated":
            return cls.tabulated(d["knots"], d["values"])
        if fam == "constant":
            return cls.constant(float(d.get("c", 1.0)))
        if fam == "power":
            return cls.power(float(d.get("a", 1.0)), float(d["b"]))
        if fam == "riemann_liouville":
            return cls.riemann_liouville(float(d["beta"]))
        if fam == "product":
            return cls.product(float(d.get("a", 1.0)), float(d["b"]), float(d["beta"]))
        if fam == "beta":
            return cls.beta(float(d.get("coef", 1.0)), float(d["t_exp"]), float(d["one_minus_exp"]))
        if fam == "exponential":
            return cls.exponential(float(d.get("coef", 1.0)), float(d.get("t_exp", 0.0)), float(d.get("rate", 1.0)))
        raise ValueError(f"unknown kernel family {fam!r}")


def _log_power_antiderivative(a: float, t: float) -> float:
    """An antiderivative of ``t**a log(1/t)`` on ``t > 0``."""
    lt = math.log(t)
    if a == -1:
        return -0.5 * lt * lt
    k = a + 1.0
    return t ** k * (1.0 / (k * k) - lt / k)


def _power_integral(a: float, t1: float, t2: float) -> float:
    if a == -1:
        return math.log(t2 / t1)
    if math.isinf(t2):
        if a >= -1:
            return math.inf
        return -t1 ** (a + 1) / (a + 1)
    return (t2 ** (a + 1) - t1 ** (a + 1)) / (a + 1)


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class CurveSpec:
    """``s(t) = sign(t) * t**gamma`` with piecewise-constant sign, or an opaque callable."""

    family: str
    gamma: float = 1.0
    sign_breaks: tuple = ()
    signs: tuple = (1,)
    func: Callable | None = field(default=None, compare=False)
    envelope: tuple | None = None

    def __post_init__(self):
        if self.family not in ("power", "reciprocal", "sign_changing", "callable"):
            raise ValueError(f"unknown curve family {self.family!r}")
        if self.family != "callable":
            if self.gamma == 0:
                raise ValueError("curve exponent must be non-zero")
            if len(self.signs) != len(self.sign_breaks) + 1 or any(s not in (1, -1) for s in self.signs):
                raise ValueError("need one sign in {+1,-1} per segment")
            if any(b <= 0 for b in self.sign_breaks) or list(self.sign_breaks) != sorted(self.sign_breaks):
                raise ValueError("sign breaks must be positive and increasing")
        elif self.func is None:
            raise ValueError("callable curve needs func")
        if self.envelope is not None and not validate_curve_bounds(self, *self.envelope):
            raise ValueError(f"declared envelope {self.envelope} does not hold")

    @classmethod
    def power(cls, gamma: float = 1.0, sign: int = 1, envelope=None) -> "CurveSpec":
        return cls("power", gamma=float(gamma), signs=(int(sign),), envelope=envelope)

    @classmethod
    def reciprocal(cls) -> "CurveSpec":
        return cls("reciprocal", gamma=-1.0)

    @classmethod
    def sign_changing(cls, gamma: float, breaks, signs) -> "CurveSpec":
        return cls("sign_changing", gamma=float(gamma), sign_breaks=tuple(float(b) for b in breaks),
                   signs=tuple(int(s) for s in signs))

    @classmethod
    def from_callable(cls, func: Callable[[float], float]) -> "CurveSpec":
        return cls("callable", func=func)

    @property
    def is_power(self) -> bool:
        return self.family != "callable"

    @property
    def constant_sign(self) -> bool:
        return self.is_power and len(set(self.signs)) == 1

    def sign_at(self, t: float) -> int:
        if not self.is_power:
            return 1 if self.func(t) >= 0 else -1
        i = int(np.searchsorted(self.sign_breaks, t, side="right"))
        return self.signs[i]

    def __call__(self, t: float) -> float:
        if not self.is_power:
            return float(self.func(t))
        return self.sign_at(t) * t ** self.gamma

    def segments(self, upper: float = 1.0):
        """``(t1, t2, sign)`` triples covering ``(0, upper)``."""
        edges = [0.0, *[b for b in self.sign_breaks if b < upper], upper]
        return [(edges[i], edges[i + 1], self.signs[i]) for i in range(len(edges) - 1)]

    def reciprocal_curve(self) -> "CurveSpec":
        """``1 / s``."""
        if not self.is_power:
            f = self.func
            return CurveSpec.from_callable(lambda t: 1.0 / f(t))
        if len(self.signs) == 1:
            return CurveSpec.power(-self.gamma, self.signs[0])
        return CurveSpec.sign_changing(-self.gamma, self.sign_breaks, self.signs)

    def _reflected_quad(self, factor, g, left, right_exp, t1, cfg):
        # near t = 1 evaluate (1 - t)**c as u**c with u = 1 - t computed exactly
        mid = max(0.5, t1)
        h = lambda u: factor(1.0 - u) * self.coef * (1.0 - u) ** self.t_exp * u ** self.one_minus_exp
        tail = integrate_adaptive(h, 0.0, 1.0 - mid, cfg, left_exponent=right_exp)
        if mid == t1:
            return tail
        return integrate_adaptive(g, t1, mid, cfg, left_exponent=left) + tail

    def to_dict(self) -> dict:
        if self.family == "callable":
            raise ValueError("callable curves cannot be serialized")
        d = {"family": self.family, "gamma": self.gamma}
        if self.family == "power":
            d["sign"] = self.signs[0]
        if self.family == "sign_changing":
            d["breaks"] = list(self.sign_breaks)
            d["signs"] = list(self.signs)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CurveSpec":
        fam = d["family"]
        if fam == "power":
            return cls.power(float(d.get("gamma", 1.0)), int(d.get("sign", 1)))
        if fam == "reciprocal":
            return cls.reciprocal()
        if fam == "sign_changing":
            return cls.sign_changing(float(d["gamma"]), d["breaks"], d["signs"])
        raise ValueError(f"unknown curve family {fam!r}")


def validate_curve_bounds(s: CurveSpec, beta: float, gamma: float, grid: int = 1000) -> bool:
    """True iff ``t**beta <= |s(t)| <= t**gamma`` on (0, 1]."""
    if grid < 2:
        raise ValueError("grid must have at least two points")
    if s.is_power:
        return gamma <= s.gamma <= beta
    ts = np.unique(np.concatenate([np.logspace(-12, 0, grid), np.linspace(1.0 / grid, 1.0, grid)]))
    vals = np.abs(np.array([s(t) for t in ts]))
    tol = 1e-12
    return bool(np.all(ts ** beta <= vals * (1 + tol)) and np.all(vals <= ts ** gamma * (1 + tol)))


# ---------------------------------------------------------------------------
# constants


def effective_kernel(psi: KernelSpec, s: CurveSpec, n: int) -> KernelSpec:
    """The kernel ``|s(t)|**n psi(t)`` of the Cesaro companion."""
    if s.is_power:
        return psi.times_power(s.gamma * n)
    return KernelSpec.from_callable(lambda t: abs(s(t)) ** n * psi(t), half_line=psi.half_line,
                                    t_exp=psi.t_exp, one_minus_exp=psi.one_minus_exp)


def _curve_moment(psi: KernelSpec, s: CurveSpec, power: float, cfg, method, upper=None) -> SharpConstant:
    """``int |s(t)|**power psi(t) dt`` over the kernel support."""
    if s.is_power:
        return psi.moment(s.gamma * power, cfg=cfg, method=method, t2=upper)
    g = lambda t: abs(s(t)) ** power * psi(t)
    k = KernelSpec.from_callable(g, half_line=psi.half_line, t_exp=psi.t_exp, one_minus_exp=psi.one_minus_exp)
    return k.moment(0.0, cfg=cfg, method="quadrature", t2=upper)


def _index(n: int, alpha: float, p: float) -> float:
    if not p >= 1:
        raise ValueError("p must be in [1, inf)")
    return 0.0 if math.isinf(p) else (n + alpha) / p


def lp_constant(psi: KernelSpec, s: CurveSpec, n: int, alpha: float, p: float,
                cfg: QuadratureConfig | None = None, method: str = "auto") -> SharpConstant:
    """Norm of U on L^p(w): ``int_0^1 |s(t)|**(-(n+alpha)/p) psi(t) dt``."""
    return _curve_moment(psi, s, -_index(n, alpha, p), cfg, method, upper=1.0)


def infinite_lp_constant(psi: KernelSpec, s: CurveSpec, n: int, alpha: float, p: float,
                         cfg: QuadratureConfig | None = None, method: str = "auto") -> SharpConstant:
    """Same integral over the whole support of ``psi`` (possibly [0, inf))."""
    return _curve_moment(psi, s, -_index(n, alpha, p), cfg, method)


def cesaro_constant(psi: KernelSpec, s: CurveSpec, n: int, alpha: float, p: float,
                    cfg: QuadratureConfig | None = None, method: str = "auto") -> SharpConstant:
    """Norm of V on L^p(w), evaluated as the U-constant of ``|s|**n psi``."""
    return lp_constant(effective_kernel(psi, s, n), s, n, alpha, p, cfg, method)


def bmo_constant(psi: KernelSpec, cfg: QuadratureConfig | None = None) -> SharpConstant:
    return psi.moment(0.0, cfg=cfg)


def signed_bmo_factor(psi: KernelSpec, s: CurveSpec, cfg: QuadratureConfig | None = None) -> float:
    """``int_0^1 sgn(s(t)) psi(t) dt``."""
    if not s.is_power:
        total = integrate_adaptive(lambda t: math.copysign(1.0, s(t)) * psi(t), 0.0, 1.0, cfg)
        return total.value
    total = 0.0
    for t1, t2, sign in s.segments(psi.upper):
        part = psi.moment(0.0, t1, t2, cfg)
        if not part.finite:
            raise DivergentNorm("kernel is not integrable on a sign segment")
        total += sign * part.value
    return total


class CommutatorConstant(NamedTuple):
    necessity: SharpConstant
    bound: SharpConstant


def commutator_constant(psi: KernelSpec, s: CurveSpec, n: int, alpha: float, p: float,
                        cfg: QuadratureConfig | None = None, method: str = "auto") -> CommutatorConstant:
    """The log-weighted necessity integral and the full sufficiency constant.

    ``necessity = int |s|^-k |log(1/|s|)| psi`` and
    ``bound = int |s|^-k (2 + |log(1/|s|)|) psi`` with ``k = (n+alpha)/p``.
    """
    k = _index(n, alpha, p)
    if s.is_power:
        nec = psi.log_moment(-s.gamma * k, t2=1.0, cfg=cfg, method=method).scaled(abs(s.gamma))
    else:
        g = lambda t: abs(s(t)) ** (-k) * abs(math.log(1.0 / abs(s(t)))) * psi(t)
        nec = KernelSpec.from_callable(g, t_exp=psi.t_exp).moment(0.0, cfg=cfg, method="quadrature")
    lp = lp_constant(psi, s, n, alpha, p, cfg, method)
    return CommutatorConstant(nec, lp.scaled(2.0) + nec)
