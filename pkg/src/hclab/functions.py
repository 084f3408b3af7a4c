"""Test functions as descriptor trees.

Primitives carry enough structure for exact reductions elsewhere:

* ``homogeneity()`` -> ``(lam, kappa)`` when ``f(t x) = sgn(t)**kappa |t|**lam f(x)``
  for every ``t != 0``;
* ``radial_pieces()`` -> the function as a finite sum of radial power bands
  ``coef * |x|**exp * 1{lo < |x| < hi}``, when it has that form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import ParamOutOfRange, UndefinedAtOrigin


class Piece(NamedTuple):
    lo: float
    hi: float
    coef: float
    exp: float


def _as_point(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x.reshape(1) if x.ndim == 0 else x


def _as_points(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    return X


class TestFunction:
    """Base class; subclasses implement ``_eval`` and ``_eval_many``."""

    __test__ = False  # not a pytest class
    kind = "abstract"

    def evaluate(self, x) -> float:
        return float(self._eval(_as_point(x)))

    __call__ = evaluate

    def evaluate_many(self, X) -> np.ndarray:
        """Values at the rows of an ``(N, n)`` array (or a 1-D array of scalars for n = 1)."""
        return np.asarray(self._eval_many(_as_points(X)), dtype=float)

    def _eval(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def _eval_many(self, X: np.ndarray) -> np.ndarray:
        return np.array([self._eval(x) for x in X])

    def homogeneity(self):
        return None

    def radial_pieces(self):
        return None

    @property
    def is_radial(self) -> bool:
        return self.radial_pieces() is not None

    def radial_value(self, r: float) -> float:
        """Value at any point of norm ``r`` (radial functions only)."""
        pieces = self.radial_pieces()
        if pieces is None:
            raise TypeError(f"{self.kind} is not radial")
        return _pieces_value(pieces, r)

    def radial_breakpoints(self) -> tuple:
        """Radii across which the function may jump or kink."""
        pieces = self.radial_pieces()
        if pieces is None:
            return ()
        return tuple(sorted({b for p in pieces for b in (p.lo, p.hi) if 0 < b < math.inf}))

    def axis_breakpoints(self) -> tuple:
        """Values of ``x_1`` across which a 1-D restriction may be non-smooth."""
        return ()

    def to_dict(self) -> dict:
        raise ValueError(f"{self.kind} cannot be serialized")

    # algebra -----------------------------------------------------------------
    def __add__(self, other):
        other = _lift(other)
        return Sum((self, other))

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Scaled(float(other), self)
        return Product(self, _lift(other))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __neg__(self):
        return Scaled(-1.0, self)

    def __sub__(self, other):
        return self + (-_lift(other))


def _lift(obj) -> TestFunction:
    if isinstance(obj, TestFunction):
        return obj
    if isinstance(obj, (int, float)):
        return Constant(float(obj))
    raise TypeError(f"cannot combine TestFunction with {type(obj).__name__}")


def _pieces_value(pieces, r):
    total = 0.0
    for p in pieces:
        if p.lo < r < p.hi:
            total += p.coef * (r ** p.exp if p.exp else 1.0)
    return total


def _pieces_many(pieces, r):
    out = np.zeros_like(r)
    for p in pieces:
        mask = (r > p.lo) & (r < p.hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = p.coef * (r ** p.exp if p.exp else np.ones_like(r))
        out += np.where(mask, vals, 0.0)
    return out


class _RadialPieces(TestFunction):
    """Shared behaviour for primitives that are finite sums of radial bands."""

    def _eval(self, x):
        return _pieces_value(self.radial_pieces(), float(np.linalg.norm(x)))

    def _eval_many(self, X):
        return _pieces_many(self.radial_pieces(), np.linalg.norm(X, axis=1))


def _check_index(n, alpha, p, eps):
    if not 0 < eps < 1:
        raise ParamOutOfRange(f"eps must lie in (0, 1), got {eps!r}")
    if not p >= 1:
        raise ParamOutOfRange(f"p must be >= 1, got {p!r}")
    if n < 1:
        raise ParamOutOfRange("dimension must be >= 1")


@dataclass(frozen=True, eq=True)
class OuterPower(_RadialPieces):
    """``|x|**(-(n+alpha)/p - eps)`` outside the unit ball (the extremal family f_eps)."""

    n: int
    alpha: float
    p: float
    eps: float
    kind = "f_eps"

    def __post_init__(self):
        _check_index(self.n, self.alpha, self.p, self.eps)

    @property
    def exponent(self) -> float:
        return -(self.n + self.alpha) / self.p - self.eps

    def radial_pieces(self):
        return (Piece(1.0, math.inf, 1.0, self.exponent),)

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "alpha": self.alpha, "p": self.p, "eps": self.eps}


@dataclass(frozen=True, eq=True)
class InnerPower(_RadialPieces):
    """``|x|**(-(n+alpha)/p + eps)`` inside the unit ball (g_eps)."""

    n: int
    alpha: float
    p: float
    eps: float
    kind = "g_eps"

    def __post_init__(self):
        _check_index(self.n, self.alpha, self.p, self.eps)

    @property
    def exponent(self) -> float:
        return -(self.n + self.alpha) / self.p + self.eps

    def radial_pieces(self):
        return (Piece(0.0, 1.0, 1.0, self.exponent),)

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "alpha": self.alpha, "p": self.p, "eps": self.eps}


@dataclass(frozen=True, eq=True)
class BallIndicator(_RadialPieces):
    """Indicator of the open unit ball centred at the origin."""

    kind = "ball_indicator"

    def radial_pieces(self):
        return (Piece(0.0, 1.0, 1.0, 0.0),)

    def to_dict(self):
        return {"kind": self.kind}


@dataclass(frozen=True, eq=True)
class Constant(_RadialPieces):
    c: float = 1.0
    kind = "constant"

    def radial_pieces(self):
        return (Piece(0.0, math.inf, self.c, 0.0),) if self.c else ()

    def homogeneity(self):
        return (0.0, 0)

    def _eval(self, x):
        return self.c

    def _eval_many(self, X):
        return np.full(X.shape[0], self.c)

    def to_dict(self):
        return {"kind": self.kind, "c": self.c}


@dataclass(frozen=True, eq=True)
class RadialPower(_RadialPieces):
    """``|x|**lam`` on the whole space."""

    lam: float
    kind = "radial_power"

    def radial_pieces(self):
        return (Piece(0.0, math.inf, 1.0, self.lam),)

    def homogeneity(self):
        return (self.lam, 0)

    def _eval(self, x):
        r = float(np.linalg.norm(x))
        if r == 0:
            if self.lam < 0:
                raise UndefinedAtOrigin("negative radial power at the origin")
            return 1.0 if self.lam == 0 else 0.0
        return r ** self.lam

    def to_dict(self):
        return {"kind": self.kind, "lam": self.lam}


@dataclass(frozen=True, eq=True)
class RadialBand(_RadialPieces):
    """``coef * |x|**exp`` on ``lo < |x| < hi``."""

    exp: float
    lo: float = 0.0
    hi: float = math.inf
    coef: float = 1.0
    kind = "radial_band"

    def __post_init__(self):
        if not 0 <= self.lo < self.hi:
            raise ParamOutOfRange("need 0 <= lo < hi")

    def radial_pieces(self):
        return (Piece(self.lo, self.hi, self.coef, self.exp),)

    def to_dict(self):
        return {"kind": self.kind, "exp": self.exp, "lo": self.lo,
                "hi": "inf" if math.isinf(self.hi) else self.hi, "coef": self.coef}


@dataclass(frozen=True, eq=True)
class RadialStep(_RadialPieces):
    """Piecewise constant in ``|x|``: ``values[i]`` on ``edges[i] < |x| < edges[i+1]``, 0 beyond."""

    edges: tuple
    values: tuple
    kind = "radial_step"

    def __post_init__(self):
        e = tuple(float(v) for v in self.edges)
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(e) != len(self.values) + 1 or e[0] != 0 or any(a >= b for a, b in zip(e, e[1:])):
            raise ParamOutOfRange("edges must start at 0, increase, and bracket every value")

    def radial_pieces(self):
        return tuple(Piece(a, b, v, 0.0) for a, b, v in zip(self.edges, self.edges[1:], self.values) if v)

    def to_dict(self):
        return {"kind": self.kind, "edges": list(self.edges), "values": list(self.values)}


@dataclass(frozen=True, eq=True)
class SignWitness(TestFunction):
    """``sgn x_1``."""

    kind = "f0"

    def _eval(self, x):
        return float(np.sign(x[0]))

    def _eval_many(self, X):
        return np.sign(X[:, 0])

    def homogeneity(self):
        return (0.0, 1)

    def axis_breakpoints(self):
        return (0.0,)

    def to_dict(self):
        return {"kind": self.kind}


ANGULAR_PROFILES = {
    # name: (vectorised phi on unit vectors, parity kappa)
    "axis_square": (lambda th: th[..., 0] ** 2, 0),
    "axis_abs": (lambda th: np.abs(th[..., 0]), 0),
    "axis_sign": (lambda th: np.sign(th[..., 0]), 1),
}


@dataclass(frozen=True, eq=True)
class AngularWitness(TestFunction):
    """``phi(x / |x|)`` for a bounded angular profile; undefined at the origin.

    With an even profile this is degree-0 homogeneous with parity 0.
    """

    profile: str = "axis_square"
    kind = "f1"

    def __post_init__(self):
        if self.profile not in ANGULAR_PROFILES:
            raise ParamOutOfRange(f"unknown angular profile {self.profile!r}")

    @property
    def parity(self) -> int:
        return ANGULAR_PROFILES[self.profile][1]

    def _eval(self, x):
        r = float(np.linalg.norm(x))
        if r == 0:
            raise UndefinedAtOrigin("angular witness is undefined at the origin")
        return float(ANGULAR_PROFILES[self.profile][0](x / r))

    def _eval_many(self, X):
        r = np.linalg.norm(X, axis=1, keepdims=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            return ANGULAR_PROFILES[self.profile][0](X / r)

    def homogeneity(self):
        return (0.0, self.parity)

    def axis_breakpoints(self):
        return (0.0,)

    def to_dict(self):
        return {"kind": self.kind, "profile": self.profile}


@dataclass(frozen=True, eq=True)
class LogSymbol(TestFunction):
    """``log |x|``."""

    kind = "log"

    def _eval(self, x):
        r = float(np.linalg.norm(x))
        if r == 0:
            raise UndefinedAtOrigin("log|x| is undefined at the origin")
        return math.log(r)

    def _eval_many(self, X):
        with np.errstate(divide="ignore"):
            return np.log(np.linalg.norm(X, axis=1))

    @property
    def is_radial(self) -> bool:
        return True

    def radial_value(self, r):
        if r == 0:
            raise UndefinedAtOrigin("log|x| is undefined at the origin")
        return math.log(r)

    def to_dict(self):
        return {"kind": self.kind}


class Opaque(TestFunction):
    """Arbitrary callable on points; disables the exact fast paths unless hints are given."""

    kind = "opaque"

    def __init__(self, fn: Callable, *, radial: bool = False, breakpoints: Sequence[float] = (),
                 homogeneity=None, vectorized: Callable | None = None, dim: int = 1):
        self.fn = fn
        self.dim = int(dim)
        self._radial = radial
        self._breaks = tuple(sorted(float(b) for b in breakpoints))
        self._homog = homogeneity
        self._vec = vectorized

    def _eval(self, x):
        return float(self.fn(x))

    def _eval_many(self, X):
        if self._vec is not None:
            return self._vec(X)
        return super()._eval_many(X)

    def homogeneity(self):
        return self._homog

    @property
    def is_radial(self) -> bool:
        return self._radial

    def radial_value(self, r):
        if not self._radial:
            raise TypeError("opaque function is not declared radial")
        e = np.zeros(self.dim)
        e[0] = r
        return float(self.fn(e))

    def radial_breakpoints(self):
        return self._breaks

    def axis_breakpoints(self):
        return (0.0,)

    def __repr__(self):
        return f"Opaque(radial={self._radial}, breakpoints={self._breaks})"


@dataclass(frozen=True, eq=True)
class Scaled(TestFunction):
    c: float
    f: TestFunction
    kind = "scaled"

    def _eval(self, x):
        return self.c * self.f._eval(x)

    def _eval_many(self, X):
        return self.c * self.f._eval_many(X)

    def homogeneity(self):
        return self.f.homogeneity()

    def radial_pieces(self):
        pieces = self.f.radial_pieces()
        if pieces is None:
            return None
        return tuple(Piece(p.lo, p.hi, self.c * p.coef, p.exp) for p in pieces if self.c)

    @property
    def is_radial(self):
        return self.f.is_radial

    def radial_value(self, r):
        return self.c * self.f.radial_value(r)

    def radial_breakpoints(self):
        return self.f.radial_breakpoints()

    def axis_breakpoints(self):
        return self.f.axis_breakpoints()

    def to_dict(self):
        return {"kind": self.kind, "c": self.c, "f": self.f.to_dict()}


@dataclass(frozen=True, eq=True)
class Sum(TestFunction):
    terms: tuple
    kind = "sum"

    def _eval(self, x):
        return sum(t._eval(x) for t in self.terms)

    def _eval_many(self, X):
        return sum(t._eval_many(X) for t in self.terms)

    def homogeneity(self):
        hs = [t.homogeneity() for t in self.terms]
        if any(h is None for h in hs):
            return None
        first = hs[0]
        if all(h[0] == first[0] and h[1] % 2 == first[1] % 2 for h in hs):
            return first
        return None

    def radial_pieces(self):
        out = []
        for t in self.terms:
            pieces = t.radial_pieces()
            if pieces is None:
                return None
            out.extend(pieces)
        return tuple(out)

    @property
    def is_radial(self):
        return all(t.is_radial for t in self.terms)

    def radial_value(self, r):
        return sum(t.radial_value(r) for t in self.terms)

    def radial_breakpoints(self):
        return tuple(sorted({b for t in self.terms for b in t.radial_breakpoints()}))

    def axis_breakpoints(self):
        return tuple(sorted({b for t in self.terms for b in t.axis_breakpoints()}))

    def to_dict(self):
        return {"kind": self.kind, "terms": [t.to_dict() for t in self.terms]}


@dataclass(frozen=True, eq=True)
class Product(TestFunction):
    f: TestFunction
    g: TestFunction
    kind = "product"

    def _eval(self, x):
        return self.f._eval(x) * self.g._eval(x)

    def _eval_many(self, X):
        return self.f._eval_many(X) * self.g._eval_many(X)

    def homogeneity(self):
        a, b = self.f.homogeneity(), self.g.homogeneity()
        if a is None or b is None:
            return None
        return (a[0] + b[0], (a[1] + b[1]) % 2)

    def radial_pieces(self):
        pa, pb = self.f.radial_pieces(), self.g.radial_pieces()
        if pa is None or pb is None:
            return None
        out = []
        for p in pa:
            for q in pb:
                lo, hi = max(p.lo, q.lo), min(p.hi, q.hi)
                if lo < hi and p.coef * q.coef:
                    out.append(Piece(lo, hi, p.coef * q.coef, p.exp + q.exp))
        return tuple(out)

    @property
    def is_radial(self):
        return self.f.is_radial and self.g.is_radial

    def radial_value(self, r):
        return self.f.radial_value(r) * self.g.radial_value(r)

    def radial_breakpoints(self):
        return tuple(sorted(set(self.f.radial_breakpoints()) | set(self.g.radial_breakpoints())))

    def axis_breakpoints(self):
        return tuple(sorted(set(self.f.axis_breakpoints()) | set(self.g.axis_breakpoints())))

    def to_dict(self):
        return {"kind": self.kind, "factors": [self.f.to_dict(), self.g.to_dict()]}


_PRIMITIVES = {
    "f_eps": OuterPower,
    "g_eps": InnerPower,
    "f0": SignWitness,
    "f1": AngularWitness,
    "log": LogSymbol,
    "ball_indicator": BallIndicator,
    "radial_power": RadialPower,
    "radial_band": RadialBand,
    "radial_step": RadialStep,
    "constant": Constant,
}


def build_function(descriptor, **params) -> TestFunction:
    """Build a test function from a primitive name plus parameters, or from a dict."""
    if isinstance(descriptor, TestFunction):
        return descriptor
    if isinstance(descriptor, str):
        descriptor = {"kind": descriptor, **params}
    d = dict(descriptor)
    kind = d.pop("kind")
    if kind == "sum":
        return Sum(tuple(build_function(t) for t in d["terms"]))
    if kind == "scaled":
        return Scaled(float(d["c"]), build_function(d["f"]))
    if kind == "product":
        f, g = d["factors"]
        return Product(build_function(f), build_function(g))
    if kind not in _PRIMITIVES:
        raise ParamOutOfRange(f"unknown function kind {kind!r}")
    if kind == "radial_band" and d.get("hi") == "inf":
        d["hi"] = math.inf
    if kind in ("f_eps", "g_eps"):
        d["n"] = int(d["n"])
    if kind == "radial_step":
        d["edges"] = tuple(d["edges"])
        d["values"] = tuple(d["values"])
    try:
        return _PRIMITIVES[kind](**d)
    except TypeError as exc:
        raise ParamOutOfRange(f"bad parameters for {kind!r}: {exc}") from None


def evaluate(f: TestFunction, x) -> float:
    return f.evaluate(x)


def homogeneity_info(f: TestFunction):
    return f.homogeneity()
