"""Absolutely homogeneous weights ``w(tx) = |t|**alpha w(x)`` and ball masses."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import gammaln

from .errors import NonFiniteSphereConstant, NonIntegrable, NonPositiveProfile
from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    integrate_adaptive,
    integrate_improper,
    sphere_area,
    sphere_mc_integrate,
)

PROFILES = ("constant", "axis_power", "tabulated", "sum")


@dataclass(frozen=True, eq=False)
class HomogeneousWeight:
    """A weight in W_alpha.

    ``profile`` is one of ``constant`` (``scale * |x|**alpha``), ``axis_power``
    (``|x_1|**alpha``), ``tabulated`` (``|x|**alpha * phi(x/|x|)`` with phi
    stored on a grid) or ``sum`` (positive combination of weights of equal
    degree). For ``n = 1`` every weight is ``scale * |x|**alpha``.
    """

    alpha: float
    n: int
    profile: str
    sphere_constant: float
    scale: float = 1.0
    table: np.ndarray | None = None
    parts: tuple = ()
    sphere_constant_error: float = 0.0
    locally_integrable: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "locally_integrable", self.alpha > -self.n)

    # evaluation -------------------------------------------------------------
    def angular(self, theta) -> np.ndarray:
        """Values of the weight on unit vectors ``theta`` with shape ``(..., n)``."""
        theta = np.asarray(theta, dtype=float)
        if self.n == 1 and theta.ndim == 0:
            theta = theta[..., None]
        if self.profile == "constant":
            return np.full(theta.shape[:-1], self.scale)
        if self.profile == "axis_power":
            with np.errstate(divide="ignore"):
                return np.abs(theta[..., 0]) ** self.alpha
        if self.profile == "tabulated":
            return _table_eval(self.table, theta)
        return sum(c * w.angular(theta) for c, w in self.parts)

    def __call__(self, x) -> np.ndarray:
        """Weight at points ``x`` of shape ``(..., n)`` (scalars allowed for n = 1)."""
        x = np.asarray(x, dtype=float)
        if self.n == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x[..., None]
        r = np.linalg.norm(x, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            theta = x / np.where(r > 0, r, 1.0)[..., None]
            out = r ** self.alpha * self.angular(theta)
        return np.where(r > 0, out, 0.0)

    def to_dict(self) -> dict:
        d = {"alpha": self.alpha, "n": self.n, "profile": self.profile}
        if self.profile == "constant":
            d["scale"] = self.scale
        elif self.profile == "tabulated":
            d["table"] = np.asarray(self.table).tolist()
        elif self.profile == "sum":
            d["parts"] = [[c, w.to_dict()] for c, w in self.parts]
        return d

    @classmethod
    def from_dict(cls, d: dict, cfg: QuadratureConfig | None = None) -> "HomogeneousWeight":
        if d["profile"] == "sum":
            parts = [(float(c), cls.from_dict(w, cfg)) for c, w in d["parts"]]
            return combine_weights(parts)
        table = d.get("table")
        return build_weight(
            float(d["alpha"]),
            d["profile"],
            int(d["n"]),
            scale=float(d.get("scale", 1.0)),
            table=None if table is None else np.asarray(table, dtype=float),
            cfg=cfg,
        )

    def __repr__(self):
        return f"HomogeneousWeight(alpha={self.alpha}, n={self.n}, profile={self.profile!r}, c={self.sphere_constant:.6g})"


def _table_eval(table: np.ndarray, theta: np.ndarray) -> np.ndarray:
    if table.ndim == 1:
        m = table.size
        ang = np.mod(np.arctan2(theta[..., 1], theta[..., 0]), 2 * math.pi) * m / (2 * math.pi)
        i0 = np.floor(ang).astype(int) % m
        frac = ang - np.floor(ang)
        return (1 - frac) * table[i0] + frac * table[(i0 + 1) % m]
    n_lat, n_lon = table.shape
    polar = np.arccos(np.clip(theta[..., 2], -1.0, 1.0))
    lon = np.mod(np.arctan2(theta[..., 1], theta[..., 0]), 2 * math.pi)
    # cell-centred latitudes, periodic longitudes
    u = np.clip(polar * n_lat / math.pi - 0.5, 0.0, n_lat - 1.0)
    v = lon * n_lon / (2 * math.pi)
    i0 = np.minimum(np.floor(u).astype(int), n_lat - 1)
    i1 = np.minimum(i0 + 1, n_lat - 1)
    fu = u - i0
    j0 = np.floor(v).astype(int) % n_lon
    j1 = (j0 + 1) % n_lon
    fv = v - np.floor(v)
    top = (1 - fv) * table[i0, j0] + fv * table[i0, j1]
    bot = (1 - fv) * table[i1, j0] + fv * table[i1, j1]
    return (1 - fu) * top + fu * bot


def _symmetrize(table: np.ndarray) -> np.ndarray:
    if table.ndim == 1:
        m = table.size
        if m % 2:
            raise ValueError("circle table needs an even number of angles")
        return 0.5 * (table + np.roll(table, -m // 2))
    n_lat, n_lon = table.shape
    if n_lon % 2:
        raise ValueError("sphere table needs an even number of longitudes")
    antipode = np.roll(table[::-1, :], -n_lon // 2, axis=1)
    return 0.5 * (table + antipode)


def axis_power_sphere_constant(alpha: float, n: int) -> float:
    """Integral of ``|theta_1|**alpha`` over S_n."""
    if n == 1:
        return 2.0
    if alpha <= -1:
        raise NonFiniteSphereConstant(f"|x_1|^{alpha} is not integrable on the sphere")
    log_c = math.log(2.0) + 0.5 * (n - 1) * math.log(math.pi) + gammaln(0.5 * (alpha + 1)) - gammaln(0.5 * (n + alpha))
    return math.exp(log_c)


def build_weight(
    alpha: float,
    profile: str = "constant",
    n: int = 1,
    *,
    scale: float = 1.0,
    table=None,
    cfg: QuadratureConfig | None = None,
) -> HomogeneousWeight:
    """Construct a weight of degree ``alpha`` and compute its sphere constant."""
    cfg = cfg or DEFAULT_CONFIG
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if profile not in PROFILES[:3]:
        raise ValueError(f"unknown profile {profile!r}")
    if n == 1 and profile == "axis_power":
        profile, scale = "constant", 1.0
    if n == 1 and profile != "constant":
        raise ValueError("in one dimension a homogeneous weight is c|x|^alpha")
    if profile == "constant":
        if not scale > 0:
            raise NonPositiveProfile("constant profile must be positive")
        return HomogeneousWeight(alpha, n, "constant", scale * sphere_area(n), scale=scale)
    if profile == "axis_power":
        return HomogeneousWeight(alpha, n, "axis_power", axis_power_sphere_constant(alpha, n))

    table = np.asarray(table, dtype=float)
    if np.any(~np.isfinite(table)) or np.any(table <= 0):
        raise NonPositiveProfile("tabulated profile must be finite and positive")
    if n == 2 and table.ndim == 1:
        table = _symmetrize(table)
        # trapezoid is exact for periodic piecewise-linear data
        c = float(2 * math.pi * table.mean())
        return HomogeneousWeight(alpha, n, "tabulated", c, table=table)
    if n == 3 and table.ndim == 2:
        table = _symmetrize(table)
        probe = HomogeneousWeight(alpha, n, "tabulated", 1.0, table=table)
        res = sphere_mc_integrate(probe.angular, 3, cfg.mc_samples, cfg.rng_seed)
        if not (math.isfinite(res.value) and res.value > 0):
            raise NonFiniteSphereConstant("tabulated sphere constant is not finite and positive")
        return HomogeneousWeight(alpha, n, "tabulated", res.value, table=table, sphere_constant_error=res.error_estimate)
    raise ValueError("tabulated profiles need a 1-D table for n=2 or a (lat, lon) table for n=3")


def combine_weights(parts: Sequence[tuple[float, HomogeneousWeight]]) -> HomogeneousWeight:
    """Positive combination ``sum c_i w_i`` of weights sharing degree and dimension."""
    parts = tuple((float(c), w) for c, w in parts)
    if not parts:
        raise ValueError("need at least one weight")
    alpha, n = parts[0][1].alpha, parts[0][1].n
    if any(w.alpha != alpha or w.n != n for _, w in parts):
        raise ValueError("combined weights must share alpha and n")
    if any(not c > 0 for c, _ in parts):
        raise NonPositiveProfile("combination coefficients must be positive")
    c_total = sum(c * w.sphere_constant for c, w in parts)
    err = sum(c * w.sphere_constant_error for c, w in parts)
    if n == 1:
        scale = sum(c * w.scale for c, w in parts)
        return HomogeneousWeight(alpha, 1, "constant", c_total, scale=scale)
    return HomogeneousWeight(alpha, n, "sum", c_total, parts=parts, sphere_constant_error=err)


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float

    def __post_init__(self):
        c = self.center
        if np.ndim(c) == 0:
            c = (float(c),)
        object.__setattr__(self, "center", tuple(float(v) for v in c))
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    def scaled(self, lam: float) -> "Ball":
        return Ball(tuple(lam * v for v in self.center), lam * self.radius)


def _power_antiderivative(x: float, alpha: float) -> float:
    # F' = |x|^alpha, alpha != -1
    return math.copysign(abs(x) ** (alpha + 1), x) / (alpha + 1)


def ball_mass(w: HomogeneousWeight, B: Ball, cfg: QuadratureConfig | None = None) -> float:
    """``w(B)``: exact for n = 1 and origin-centred balls, quadrature/MC otherwise."""
    cfg = cfg or DEFAULT_CONFIG
    if B.dim != w.n:
        raise ValueError("ball and weight dimensions differ")
    x0 = np.asarray(B.center)
    d0 = float(np.linalg.norm(x0))
    r = B.radius
    k = w.n + w.alpha
    if not w.locally_integrable and d0 <= r:
        raise NonIntegrable(f"|x|^{w.alpha} is not integrable near the origin in R^{w.n}")
    if d0 == 0.0:
        return w.sphere_constant * r ** k / k
    if w.n == 1:
        lo, hi = x0[0] - r, x0[0] + r
        if w.alpha == -1:
            return w.scale * math.log(hi / lo) * (1 if lo > 0 else -1)
        return w.scale * (_power_antiderivative(hi, w.alpha) - _power_antiderivative(lo, w.alpha))
    if w.n == 2:
        return _ball_mass_circle(w, x0, d0, r, cfg)
    return _ball_mass_mc(w, x0, r, cfg)


def _radial_span(k: float, rho1: float, rho2: float) -> float:
    if k == 0:
        return math.log(rho2 / rho1)
    if rho1 <= 0:
        return rho2 ** k / k
    return (rho2 ** k - rho1 ** k) / k


def _ball_mass_circle(w, x0, d0, r, cfg):
    k = w.n + w.alpha
    phi0 = math.atan2(x0[1], x0[0])

    def integrand(phi):
        th = np.array([math.cos(phi), math.sin(phi)])
        proj = float(th @ x0)
        disc = proj * proj - d0 * d0 + r * r
        if disc <= 0:
            return 0.0
        sq = math.sqrt(disc)
        rho2 = proj + sq
        rho1 = proj - sq
        if rho2 <= 0:
            return 0.0
        return float(w.angular(th)) * _radial_span(k, max(rho1, 0.0), rho2)

    kinks = [phi0 + j * math.pi / 2 for j in range(-4, 5)]
    if d0 > r:
        half = math.asin(r / d0)
        lo, hi = phi0 - half, phi0 + half
    else:
        lo, hi = phi0 - math.pi, phi0 + math.pi
    # axis_power weights are non-smooth across the axes
    axes = [j * math.pi / 2 for j in range(-8, 9)]
    pts = [p for p in kinks + axes if lo < p < hi]
    return integrate_adaptive(integrand, lo, hi, cfg, points=pts).value


def _ball_mass_mc(w, x0, r, cfg):
    rng = np.random.Generator(np.random.Philox(key=int(cfg.rng_seed)))
    n = w.n
    z = rng.standard_normal((cfg.mc_samples, n))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    rad = r * rng.random(cfg.mc_samples) ** (1.0 / n)
    pts = x0 + z * rad[:, None]
    vol = math.pi ** (n / 2) / math.exp(gammaln(1 + n / 2)) * r ** n
    return float(vol * np.mean(w(pts)))


def default_doubling_samples(n: int):
    radii = [2.0 ** k for k in range(-10, 11)]
    centers = [tuple([0.0] * n)]
    for k in (-4, -2, 0, 2, 4):
        for i in range(n):
            for sgn in (1.0, -1.0):
                c = [0.0] * n
                c[i] = sgn * 2.0 ** k
                centers.append(tuple(c))
    return centers, radii


def doubling_ratio_scan(w: HomogeneousWeight, centers=None, radii=None, cfg: QuadratureConfig | None = None) -> float:
    """Largest sampled ``w(B(x, 2r)) / w(B(x, r))``; a lower bound for the doubling constant."""
    dc, dr = default_doubling_samples(w.n)
    centers = dc if centers is None else centers
    radii = dr if radii is None else radii
    best = 0.0
    for c in centers:
        for r in radii:
            small = ball_mass(w, Ball(c, r), cfg)
            big = ball_mass(w, Ball(c, 2 * r), cfg)
            best = max(best, big / small)
    return best


class PowerIdentityCheck(NamedTuple):
    lhs: float
    rhs: float
    mirror_lhs: float
    error_estimate: float


def _angular_mass(w: HomogeneousWeight):
    """rho -> integral of w over the sphere of radius rho, divided by rho**(n-1)."""
    if w.n == 1:
        return lambda rho: float(w(rho) + w(-rho))
    e = np.zeros(w.n)
    e[0] = 1.0
    if w.profile == "axis_power":
        e[:] = 1.0 / math.sqrt(w.n)
    base = float(w(e))
    c = w.sphere_constant
    return lambda rho: c * float(w(rho * e)) / base


def lemma1_check(w: HomogeneousWeight, eps: float, cfg: QuadratureConfig | None = None) -> PowerIdentityCheck:
    """Compare the outer integral of ``w(x)|x|^-(n+alpha+eps)`` with ``c_w / eps``.

    The mirror value is the inner integral of ``w(x)|x|^-(n+alpha-eps)``
    over the unit ball, which has the same closed form.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    cfg = cfg or DEFAULT_CONFIG
    mass = _angular_mass(w)
    n, a = w.n, w.alpha
    outer = integrate_improper(
        lambda rho: mass(rho) * rho ** (n - 1) * rho ** (-(n + a + eps)), 1.0, cfg, scale=1.0 / eps
    )
    inner = integrate_adaptive(
        lambda rho: mass(rho) * rho ** (n - 1) * rho ** (-(n + a - eps)), 0.0, 1.0, cfg,
        left_exponent=eps - 1 if eps < 1 else None,
    )
    return PowerIdentityCheck(outer.value, w.sphere_constant / eps, inner.value, outer.error_estimate + inner.error_estimate)
