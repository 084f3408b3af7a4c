"""Deterministic numerical integration used by every other module.

The adaptive engine is QUADPACK (via :func:`scipy.integrate.quad`) wrapped
with two transformations:

* endpoint power substitution ``t = a + (b - a) v**m`` that smooths an
  integrand behaving like ``(t - a)**kappa`` near the endpoint, and
* the compactifying map ``u = a + L v / (1 - v)`` for integrals over
  ``(a, inf)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import integrate as _spi
from scipy.special import gammaln

from .errors import (
    DivergenceSuspected,
    InsufficientPoints,
    NonConvergenceError,
    NonFiniteError,
)

__all__ = [
    "QuadratureConfig",
    "IntegralResult",
    "NonMonotoneSequenceWarning",
    "integrate_adaptive",
    "integrate_improper",
    "sphere_area",
    "sphere_mc_integrate",
    "extrapolate_limit",
    "substitution_power",
]

# Tail pieces for divergence probing span [L R^k, L R^(k+1)].
_TAIL_RATIO = 2.0 ** 8
_TAIL_PIECES = 6
# A tail piece counts as "not shrinking" when it keeps this share of the previous one.
_NON_SHRINK = 0.999


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 200
    singularity_exponent_hint: float | None = None
    mc_samples: int = 20000
    rng_seed: int = 0

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.mc_samples < 1:
            raise ValueError("mc_samples must be >= 1")
        if self.singularity_exponent_hint is not None and not self.singularity_exponent_hint > -1:
            raise ValueError("singularity exponent hint must exceed -1")
        if not 0 <= int(self.rng_seed) < 2 ** 64:
            raise ValueError("rng_seed must be a 64-bit unsigned integer")

    def with_hint(self, kappa: float | None) -> "QuadratureConfig":
        return QuadratureConfig(
            self.rel_tol, self.abs_tol, self.max_subdivisions, kappa, self.mc_samples, self.rng_seed
        )


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    subdivisions_used: int
    converged: bool

    def require(self) -> float:
        """Return the value, raising :class:`NonConvergenceError` if the budget ran out."""
        if not self.converged:
            raise NonConvergenceError(
                f"integral did not converge: value={self.value!r}, error={self.error_estimate!r}"
            )
        return self.value

    def __add__(self, other: "IntegralResult") -> "IntegralResult":
        return IntegralResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.subdivisions_used + other.subdivisions_used,
            self.converged and other.converged,
        )


class NonMonotoneSequenceWarning(UserWarning):
    pass


def substitution_power(kappa: float | None) -> int:
    """Exponent m of the substitution t = v**m that removes a t**kappa singularity."""
    if kappa is None or kappa >= 0:
        return 1
    if kappa <= -1:
        raise ValueError("non-integrable endpoint exponent %r" % kappa)
    return max(1, math.ceil(2.0 / (1.0 + kappa)))


def _checked(f: Callable[[float], float]) -> Callable[[float], float]:
    def wrapped(t):
        y = f(t)
        y = float(y)
        if not math.isfinite(y):
            raise NonFiniteError(f"integrand returned {y!r} at t={t!r}")
        return y

    return wrapped


def _quad_piece(g, lo, hi, cfg: QuadratureConfig, epsabs: float):
    out = _spi.quad(g, lo, hi, epsabs=epsabs, epsrel=cfg.rel_tol, limit=cfg.max_subdivisions, full_output=1)
    value, err, info = out[0], out[1], out[2]
    ok = len(out) < 4
    return value, abs(err), int(info.get("last", 1)), ok


def _left_mapped(f, a, c, m):
    width = c - a
    if m == 1:
        return lambda v: f(a + width * v)

    def g(v):
        d = width * v ** m
        t = a + d
        if d == 0.0 or t == a:
            return 0.0
        return f(t) * m * width * v ** (m - 1)

    return g


def _right_mapped(f, c, b, m):
    width = b - c
    if m == 1:
        return lambda v: f(b - width * v)

    def g(v):
        d = width * v ** m
        t = b - d
        if d == 0.0 or t == b:
            return 0.0
        return f(t) * m * width * v ** (m - 1)

    return g


def integrate_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    cfg: QuadratureConfig | None = None,
    *,
    left_exponent: float | None = None,
    right_exponent: float | None = None,
    points: Iterable[float] = (),
) -> IntegralResult:
    """Integrate ``f`` over the finite interval ``(a, b)``.

    ``left_exponent`` (default: the config hint) and ``right_exponent`` give
    the power behaviour of ``f`` at each end; ``points`` are interior
    breakpoints where ``f`` is not smooth.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integrate_adaptive needs finite limits; use integrate_improper")
    if not a < b:
        raise ValueError(f"need a < b, got a={a!r}, b={b!r}")
    if left_exponent is None:
        left_exponent = cfg.singularity_exponent_hint
    ml = substitution_power(left_exponent)
    mr = substitution_power(right_exponent)
    f = _checked(f)

    cuts = sorted({float(p) for p in points if a < p < b})
    if ml > 1 and mr > 1 and not cuts:
        cuts = [0.5 * (a + b)]
    edges = [a, *cuts, b]
    npieces = len(edges) - 1
    epsabs = cfg.abs_tol / npieces

    value = err = 0.0
    used = 0
    ok_all = True
    for i in range(npieces):
        lo, hi = edges[i], edges[i + 1]
        if i == 0 and ml > 1:
            g, glo, ghi = _left_mapped(f, lo, hi, ml), 0.0, 1.0
        elif i == npieces - 1 and mr > 1:
            g, glo, ghi = _right_mapped(f, lo, hi, mr), 0.0, 1.0
        else:
            g, glo, ghi = f, lo, hi
        v, e, n_used, ok = _quad_piece(g, glo, ghi, cfg, epsabs)
        value += v
        err += e
        used += n_used
        ok_all = ok_all and ok
    converged = ok_all and err <= max(cfg.abs_tol, cfg.rel_tol * abs(value))
    return IntegralResult(value, err, used, converged)


def _tail_piece(f, a, scale, k, cfg):
    y0, y1 = k * math.log(_TAIL_RATIO), (k + 1) * math.log(_TAIL_RATIO)

    def g(y):
        ey = math.exp(y)
        return f(a + scale * ey) * scale * ey

    v, _, _, _ = _quad_piece(_checked(g), y0, y1, cfg, cfg.abs_tol)
    return v


def integrate_improper(
    f: Callable[[float], float],
    a: float,
    cfg: QuadratureConfig | None = None,
    *,
    scale: float = 1.0,
    left_exponent: float | None = None,
    check_divergence: bool = True,
) -> IntegralResult:
    """Integrate ``f`` over ``(a, inf)`` through ``u = a + scale * v / (1 - v)``.

    ``scale`` should be of the order of the length over which ``f`` decays.
    Raises :class:`DivergenceSuspected` when three successive tail pieces
    ``[a + scale R^k, a + scale R^(k+1)]`` each add more than ``rel_tol`` of
    the running partial integral without shrinking.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not scale > 0:
        raise ValueError("scale must be positive")
    if left_exponent is None:
        left_exponent = cfg.singularity_exponent_hint

    if check_divergence:
        head = integrate_adaptive(f, a, a + scale, cfg, left_exponent=left_exponent).value
        partial = head
        streak = 0
        prev = None
        for k in range(_TAIL_PIECES):
            piece = _tail_piece(f, a, scale, k, cfg)
            partial += piece
            big = abs(piece) > cfg.rel_tol * abs(partial)
            growing = prev is not None and abs(piece) >= _NON_SHRINK * abs(prev)
            streak = streak + 1 if (big and (growing or prev is None)) else 0
            if streak >= 3:
                raise DivergenceSuspected(
                    f"tail pieces are not shrinking (last piece {piece!r}, partial {partial!r})"
                )
            prev = piece

    def g(v):
        w = 1.0 - v
        if w <= 0.0:
            return 0.0
        u = a + scale * v / w
        if not math.isfinite(u):
            return 0.0
        return f(u) * scale / (w * w)

    return integrate_adaptive(g, 0.0, 1.0, cfg, left_exponent=left_exponent)


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n (counting measure when n = 1)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if n == 1:
        return 2.0
    return float(2.0 * math.exp(0.5 * n * math.log(math.pi) - gammaln(0.5 * n)))


def sphere_points(n: int, samples: int, seed: int) -> np.ndarray:
    """Uniform points on S_n drawn from a counter-based (Philox) stream keyed by ``seed``."""
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    z = rng.standard_normal((samples, n))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _eval_on_points(g, pts: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(g(pts), dtype=float)
        if vals.shape == (pts.shape[0],):
            return vals
    except (TypeError, ValueError, IndexError):
        pass
    return np.array([float(g(p)) for p in pts])


def sphere_mc_integrate(g: Callable, n: int, samples: int, seed: int) -> IntegralResult:
    """Monte Carlo estimate of the surface integral of ``g`` over S_n.

    ``g`` receives an ``(N, n)`` array of unit vectors (a per-point callable
    also works, more slowly). The error estimate is the standard error.
    """
    if n < 2:
        raise ValueError("sphere_mc_integrate needs n >= 2")
    if samples < 2:
        raise ValueError("need at least two samples")
    pts = sphere_points(n, samples, seed)
    vals = _eval_on_points(g, pts)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("integrand returned non-finite values on the sphere")
    area = sphere_area(n)
    mean = float(np.mean(vals))
    stderr = float(area * np.std(vals, ddof=1) / math.sqrt(samples))
    return IntegralResult(area * mean, stderr, samples, True)


def extrapolate_limit(pairs: Sequence[tuple[float, float]]) -> float:
    """Richardson extrapolation of ``value(eps)`` to ``eps -> 0``.

    All points enter one Neville table evaluated at zero, so the model
    ``L + c1 eps + c2 eps**2 + ...`` is eliminated term by term.
    """
    pts = [(float(e), float(v)) for e, v in pairs]
    if len(pts) < 2:
        raise InsufficientPoints("extrapolation needs at least two (eps, value) pairs")
    eps = [e for e, _ in pts]
    if any(not e > 0 for e in eps):
        raise ValueError("eps values must be positive")
    if any(e1 <= e2 for e1, e2 in zip(eps, eps[1:])):
        warnings.warn("eps values are not strictly decreasing; sorting", NonMonotoneSequenceWarning)
        pts = sorted(pts, key=lambda q: -q[0])
        eps = [e for e, _ in pts]
        if len(set(eps)) != len(eps):
            raise InsufficientPoints("duplicate eps values")
    vals = [v for _, v in pts]
    if all(v == vals[0] for v in vals):
        return vals[0]
    table = list(vals)
    m = len(eps)
    for level in range(1, m):
        for i in range(m - level):
            e_i, e_j = eps[i], eps[i + level]
            table[i] = (e_i * table[i + 1] - e_j * table[i]) / (e_i - e_j)
    return table[0]
