"""Weighted norms, BMO seminorm estimates and the weighted maximal function.

Norms use a polar reduction: radial functions need one integral in
``y = log r``; other functions add a sum over directions. BMO and maximal
estimates take a maximum over a finite family of balls, so they are lower
bounds for the true suprema.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._parallel import pmap
from .errors import DivergenceSuspected, DivergentNorm, NonIntegrable, NonIntegrableOnBall
from .functions import LogSymbol, Scaled, TestFunction
from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    integrate_adaptive,
    integrate_improper,
    sphere_points,
)
from .weights import Ball, HomogeneousWeight, ball_mass

# ---------------------------------------------------------------------------
# L^p norms


def _pieces_disjoint(pieces) -> bool:
    spans = sorted((p.lo, p.hi) for p in pieces)
    return all(a[1] <= b[0] for a, b in zip(spans, spans[1:]))


def _radial_power_integral(k: float, lo: float, hi: float) -> float:
    """``int_lo^hi r**(k-1) dr``; raises DivergentNorm when infinite."""
    if (lo == 0 and k <= 0) or (math.isinf(hi) and k >= 0):
        raise DivergentNorm(f"int r^{k - 1} dr diverges on ({lo}, {hi})")
    if k == 0:
        return math.log(hi / lo)
    top = 0.0 if math.isinf(hi) else hi ** k
    bottom = 0.0 if lo == 0 else lo ** k
    return (top - bottom) / k


def _log_rate(H, y1: float, y2: float) -> float | None:
    """Decay rate of ``H`` from ``y1`` towards ``y2``; None if it vanishes there."""
    h1, h2 = abs(H(y1)), abs(H(y2))
    if h1 == 0 or h2 == 0:
        return None
    return (math.log(h1) - math.log(h2)) / abs(y2 - y1)


def _line_integral_y(H, knots, left_rate, right_rate, left_tail, right_tail, cfg, check) -> float:
    """``int H(y) dy`` over the real line split at ``knots``."""
    knots = sorted(knots)
    total = 0.0
    for a, b in zip(knots, knots[1:]):
        total += integrate_adaptive(H, a, b, cfg).require()
    try:
        if right_tail:
            scale = 1.0 if not right_rate or right_rate <= 0 else min(max(1.0 / right_rate, 1e-3), 1e6)
            total += integrate_improper(H, knots[-1], cfg, scale=scale, check_divergence=check).require()
        if left_tail:
            scale = 1.0 if not left_rate or left_rate <= 0 else min(max(1.0 / left_rate, 1e-3), 1e6)
            total += integrate_improper(lambda u: H(-u), -knots[0], cfg, scale=scale,
                                        check_divergence=check).require()
    except DivergenceSuspected as exc:
        raise DivergentNorm(str(exc)) from None
    return total


def _radial_pth_integral(prof, n_alpha: float, p: float, breaks, pieces, cfg) -> float:
    """``int_0^inf r^(n+alpha-1) |prof(r)|^p dr`` by quadrature in ``y = log r``."""

    def H(y):
        if abs(y) > 300:
            return 0.0
        v = prof(math.exp(y))
        if not v:
            return 0.0
        return math.exp(min(n_alpha * y + p * math.log(abs(v)), 700.0))

    if pieces is not None:
        live = [q for q in pieces if q.coef != 0]
        if _pieces_disjoint(live):
            # log-domain evaluation keeps slowly decaying tails finite for any y
            spans = [(-math.inf if q.lo == 0 else math.log(q.lo), math.inf if math.isinf(q.hi) else math.log(q.hi),
                      math.log(abs(q.coef)), q.exp) for q in live]

            def H(y):
                for a, b, lc, e in spans:
                    if a < y < b:
                        return math.exp(n_alpha * y + p * (lc + e * y))
                return 0.0
        if not live:
            return 0.0
        lo = min(q.lo for q in live)
        hi = max(q.hi for q in live)
        knots = {math.log(b) for b in breaks if lo <= b <= hi}
        right_tail = math.isinf(hi)
        left_tail = lo == 0
        right_rate = left_rate = None
        if right_tail:
            right_rate = min(-(n_alpha + p * q.exp) for q in live if math.isinf(q.hi))
            if right_rate <= 0:
                raise DivergentNorm("function is not p-integrable at infinity")
        if left_tail:
            left_rate = min(n_alpha + p * q.exp for q in live if q.lo == 0)
            if left_rate <= 0:
                raise DivergentNorm("function is not p-integrable at the origin")
        if not knots:
            knots = {0.0}
        if left_tail and right_tail and len(knots) == 1:
            knots |= {min(knots) - 1.0}
        return _line_integral_y(H, knots, left_rate, right_rate, left_tail, right_tail, cfg, False)
    knots = {math.log(b) for b in breaks} or {0.0}
    if len(knots) == 1:
        knots |= {min(knots) - 1.0}
    y0, y1 = min(knots), max(knots)
    right_rate = _log_rate(H, y1 + 5.0, y1 + 10.0)
    left_rate = _log_rate(H, y0 - 5.0, y0 - 10.0)
    return _line_integral_y(H, knots, left_rate, right_rate, True, True, cfg, True)


def _direction_grid(n: int, cfg: QuadratureConfig):
    """Unit directions and quadrature weights for the sphere."""
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if n == 2:
        m = 256
        th = 2 * math.pi * (np.arange(m) + 0.5) / m
        return np.stack([np.cos(th), np.sin(th)], axis=1), np.full(m, 2 * math.pi / m)
    from .quadrature import sphere_area

    m = min(cfg.mc_samples, 512)
    return sphere_points(n, m, cfg.rng_seed), np.full(m, sphere_area(n) / m)


def lp_norm(f: TestFunction, w: HomogeneousWeight, p: float, cfg: QuadratureConfig | None = None,
            method: str = "auto") -> float:
    """``(int |f|^p w dx)^(1/p)``.

    Radial functions reduce to ``c_w int_0^inf r^(n+alpha-1) |f(r)|^p dr``,
    taken in closed form for disjoint power bands (``method="auto"``) or by
    quadrature. Raises :class:`DivergentNorm` when the integral is infinite.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not p >= 1:
        raise ValueError("p must be >= 1")
    if isinstance(f, Scaled):
        return abs(f.c) * lp_norm(f.f, w, p, cfg, method)
    n_alpha = w.n + w.alpha
    pieces = f.radial_pieces()
    if pieces is not None:
        live = [q for q in pieces if q.coef != 0]
        if not live:
            return 0.0
        if method != "quadrature" and _pieces_disjoint(live):
            total = sum(abs(q.coef) ** p * _radial_power_integral(n_alpha + p * q.exp, q.lo, q.hi) for q in live)
        else:
            total = _radial_pth_integral(f.radial_value, n_alpha, p, f.radial_breakpoints(), pieces, cfg)
        return (w.sphere_constant * total) ** (1.0 / p)
    if f.is_radial:
        total = _radial_pth_integral(f.radial_value, n_alpha, p, f.radial_breakpoints(), None, cfg)
        return (w.sphere_constant * total) ** (1.0 / p)
    h = f.homogeneity()
    if h is not None:
        # |x|^lam phi(theta) is never p-integrable unless it vanishes
        dirs, _ = _direction_grid(w.n, cfg)
        if np.any(f.evaluate_many(dirs) != 0):
            raise DivergentNorm("non-zero homogeneous functions are not in L^p")
        return 0.0
    dirs, dw = _direction_grid(w.n, cfg)
    ang = w.angular(dirs)
    total = 0.0
    for theta, wt, a in zip(dirs, dw, ang):
        if a == 0:
            continue
        prof = lambda r, th=theta: f._eval(r * th)
        total += wt * a * _radial_pth_integral(prof, n_alpha, p, f.radial_breakpoints(), None, cfg)
    return total ** (1.0 / p)


# ---------------------------------------------------------------------------
# ball families


@dataclass(frozen=True)
class BallFamily:
    """Centres times a geometric grid of radii: the sampled stand-in for a sup over balls."""

    centers: tuple
    r_min: float = 2.0 ** -10
    r_max: float = 2.0 ** 10
    count: int = 41
    include_centered_at_origin: bool = True

    def __post_init__(self):
        if not self.r_min > 0:
            raise ValueError("r_min must be positive")
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.count > 1 and not self.r_max > self.r_min:
            raise ValueError("need r_max > r_min")
        cs = tuple(tuple(float(v) for v in np.atleast_1d(c)) for c in self.centers)
        if len({len(c) for c in cs}) > 1:
            raise ValueError("centres must share a dimension")
        object.__setattr__(self, "centers", cs)

    @classmethod
    def standard(cls, n: int = 1, k_min: int = -5, k_max: int = 13, **kw) -> "BallFamily":
        """Centres ``0`` and ``+-2^k e_1`` for ``k_min <= k <= k_max``."""
        centers = []
        for k in range(k_min, k_max + 1):
            for sgn in (1.0, -1.0):
                c = [0.0] * n
                c[0] = sgn * 2.0 ** k
                centers.append(tuple(c))
        return cls(tuple(centers), **kw)

    @property
    def dim(self) -> int:
        return len(self.centers[0]) if self.centers else 1

    def radii(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.r_min])
        return np.geomspace(self.r_min, self.r_max, self.count)

    def all_centers(self) -> list:
        cs = list(self.centers)
        origin = tuple([0.0] * self.dim)
        if self.include_centered_at_origin and origin not in cs:
            cs.insert(0, origin)
        return cs

    def balls(self) -> list:
        return [Ball(c, float(r)) for c in self.all_centers() for r in self.radii()]

    def doubled(self) -> "BallFamily":
        """A superset: radii grid refined by 2 and geometric midpoints between centres on each ray."""
        rays: dict = {}
        for c in self.centers:
            v = np.asarray(c)
            nv = float(np.linalg.norm(v))
            if nv == 0:
                continue
            key = tuple(np.round(v / nv, 12))
            rays.setdefault(key, []).append(nv)
        new = list(self.centers)
        for key, norms in rays.items():
            norms = sorted(norms)
            for a, b in zip(norms, norms[1:]):
                new.append(tuple(math.sqrt(a * b) * np.asarray(key)))
        count = 2 * self.count - 1 if self.count > 1 else 1
        return BallFamily(tuple(new), self.r_min, self.r_max, count, self.include_centered_at_origin)

    def to_dict(self) -> dict:
        return {"centers": [list(c) for c in self.centers], "r_min": self.r_min, "r_max": self.r_max,
                "count": self.count, "include_centered_at_origin": self.include_centered_at_origin}

    @classmethod
    def from_dict(cls, d: dict) -> "BallFamily":
        return cls(tuple(tuple(c) for c in d["centers"]), float(d["r_min"]), float(d["r_max"]),
                   int(d["count"]), bool(d.get("include_centered_at_origin", True)))


# ---------------------------------------------------------------------------
# ball averages
#
# n = 1: composite Gauss-Legendre, split at every breakpoint of the integrand
# and graded geometrically towards 0 and across long panels.  n >= 2: a fixed
# set of uniform points in the unit ball, moved onto each ball.

_GL_ORDER = 16


@lru_cache(maxsize=None)
def _gl(order: int = _GL_ORDER):
    return np.polynomial.legendre.leggauss(order)


def _panel_nodes(a: float, b: float, alpha: float):
    """Nodes and weights for ``int_a^b`` with ``0 <= a < b``, graded towards 0 when ``a == 0``."""
    x, wt = _gl()
    if a == 0:
        levels = int(min(1000, math.ceil(45.0 / max(alpha + 1.0, 0.05))))
        edges = b * 2.0 ** -np.arange(levels + 1)[::-1]
        edges = np.concatenate([[0.0], edges])
        # the innermost panel carries a negligible share for integrable singularities
        lo, hi = edges[1:-1], edges[2:]
    else:
        m = max(1, int(math.ceil(math.log2(b / a))))
        edges = np.geomspace(a, b, m + 1)
        lo, hi = edges[:-1], edges[1:]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * wt[None, :]).ravel()
    return nodes, weights


def _line_rule(a: float, b: float, cuts, alpha: float):
    """Nodes and weights for ``int_a^b`` split at ``cuts`` and at 0."""
    edges = sorted({a, b, *[c for c in cuts if a < c < b], *([0.0] if a < 0 < b else [])})
    nodes, weights = [], []
    for lo, hi in zip(edges, edges[1:]):
        if hi <= 0:
            xs, ws = _panel_nodes(-hi, -lo, alpha)
            nodes.append(-xs)
        else:
            xs, ws = _panel_nodes(lo, hi, alpha)
            nodes.append(xs)
        weights.append(ws)
    return np.concatenate(nodes), np.concatenate(weights)


@lru_cache(maxsize=8)
def _unit_ball_points(n: int, samples: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=int(seed) + 7919))
    z = rng.standard_normal((samples, n))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return z * (rng.random(samples) ** (1.0 / n))[:, None]


def _axis_cuts(f: TestFunction, B: Ball, extra=()) -> list:
    c, r = B.center[0], B.radius
    cuts = set(f.axis_breakpoints()) | set(extra)
    for b in f.radial_breakpoints():
        cuts |= {b, -b}
    return [v for v in cuts if c - r < v < c + r]


def _check_ball(f: TestFunction, w: HomogeneousWeight, B: Ball):
    d0 = float(np.linalg.norm(B.center))
    if d0 > B.radius:
        return
    if not w.locally_integrable:
        raise NonIntegrableOnBall(f"weight is not integrable on {B}")
    pieces = f.radial_pieces()
    if pieces is not None:
        for q in pieces:
            if q.lo == 0 and q.coef != 0 and w.n + w.alpha + q.exp <= 0:
                raise NonIntegrableOnBall(f"f is not integrable on {B}")


def _level_radii(f: TestFunction, m: float) -> list:
    """Radii where a radial ``f`` crosses the level ``m`` (kinks of ``|f - m|``)."""
    if isinstance(f, LogSymbol):
        return [math.exp(m)] if -700 < m < 700 else []
    pieces = f.radial_pieces()
    out = []
    if pieces:
        for q in pieces:
            if q.exp != 0 and q.coef != 0 and m / q.coef > 0:
                rr = (m / q.coef) ** (1.0 / q.exp)
                if q.lo < rr < q.hi:
                    out.append(rr)
    return out


def _samples(f: TestFunction, w: HomogeneousWeight, B: Ball, cfg: QuadratureConfig):
    """Node values of f and quadrature weights (including the weight function) on B."""
    if w.n == 1:
        c, r = B.center[0], B.radius
        xs, ws = _line_rule(c - r, c + r, _axis_cuts(f, B), w.alpha)
        return xs, f.evaluate_many(xs), ws * w(xs)
    pts = np.asarray(B.center) + B.radius * _unit_ball_points(w.n, min(cfg.mc_samples, 4096), cfg.rng_seed)
    return pts, f.evaluate_many(pts), w(pts)


def ball_oscillation(f: TestFunction, w: HomogeneousWeight, B: Ball, exponent: float = 1.0,
                     cfg: QuadratureConfig | None = None) -> float:
    """``((1/w(B)) int_B |f - f_B|^q w)^(1/q)`` with the weighted mean ``f_B``."""
    cfg = cfg or DEFAULT_CONFIG
    _check_ball(f, w, B)
    xs, fv, ww = _samples(f, w, B, cfg)
    mass = float(np.sum(ww))
    if mass <= 0:
        return 0.0
    if np.ptp(fv) == 0:
        return 0.0
    mean = float(np.dot(fv, ww)) / mass
    if w.n == 1:
        kinks = [s * rr for rr in _level_radii(f, mean) for s in (1.0, -1.0)]
        if kinks:
            c, r = B.center[0], B.radius
            xs, ws = _line_rule(c - r, c + r, _axis_cuts(f, B, kinks), w.alpha)
            fv, ww = f.evaluate_many(xs), ws * w(xs)
            mass = float(np.sum(ww))
    osc = float(np.dot(np.abs(fv - mean) ** exponent, ww)) / mass
    return osc ** (1.0 / exponent)


def bmo_estimate(f: TestFunction, w: HomogeneousWeight, fam: BallFamily | None = None,
                 exponent: float = 1.0, cfg: QuadratureConfig | None = None) -> float:
    """Largest weighted mean oscillation over the family (a lower bound for the seminorm)."""
    if exponent < 1:
        raise ValueError("exponent must be >= 1")
    fam = fam or BallFamily.standard(w.n)
    vals = pmap(lambda B: ball_oscillation(f, w, B, exponent, cfg), fam.balls())
    return max(vals) if vals else 0.0


def ball_average(f: TestFunction, w: HomogeneousWeight, B: Ball, cfg: QuadratureConfig | None = None) -> float:
    """``(1/w(B)) int_B |f| w``."""
    cfg = cfg or DEFAULT_CONFIG
    _check_ball(f, w, B)
    xs, fv, ww = _samples(f, w, B, cfg)
    if w.n == 1:
        try:
            mass = ball_mass(w, B, cfg)
        except NonIntegrable as exc:
            raise NonIntegrableOnBall(str(exc)) from None
    else:
        mass = float(np.sum(ww))
    return float(np.dot(np.abs(fv), ww)) / mass if mass > 0 else 0.0


def maximal_estimate(f: TestFunction, w: HomogeneousWeight, x, radii=None,
                     cfg: QuadratureConfig | None = None) -> float:
    """Largest centred-ball average of ``|f|`` about ``x`` over the radius grid."""
    radii = np.geomspace(2.0 ** -10, 2.0 ** 10, 41) if radii is None else radii
    x = tuple(np.atleast_1d(np.asarray(x, dtype=float)))
    return max(ball_average(f, w, Ball(x, float(r)), cfg) for r in radii)
