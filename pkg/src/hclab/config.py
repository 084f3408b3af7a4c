"""Experiment configuration files.

INI-style text with sections such as ``[experiment]``, ``[weight]``,
``[kernel]``, ``[curve]``, ``[sweep]``, ``[quadrature]``, ``[function]`` and
``[symbol]``. Numbers are read exactly as fractions, so ``p = 3/2`` and
``eps = 0.1`` both mean the rational value written. Comma-separated values
become lists.

Example::

    [experiment]
    kind = sharpness
    operator = U

    [weight]
    alpha = 0
    n = 1

    [kernel]
    family = constant

    [curve]
    family = power
    gamma = 1

    [sweep]
    p = 2
    k_min = 3
    k_max = 10
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConfigParseError
from .functions import TestFunction, build_function
from .kernels import CurveSpec, KernelSpec
from .quadrature import QuadratureConfig
from .spaces import BallFamily
from .weights import HomogeneousWeight, build_weight

KINDS = ("constant", "apply", "norm", "bmo", "sharpness", "commutator", "adjoint", "hardy-demo", "check-all")


def parse_value(text: str):
    """A Fraction for numeric literals (``3/2``, ``0.1``, ``1e-10``), a list for comma lists, else the string."""
    text = text.strip()
    if "," in text:
        return [parse_value(t) for t in text.split(",") if t.strip()]
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        return text


def format_value(value) -> str:
    if isinstance(value, list):
        return ", ".join(format_value(v) for v in value) + ("," if len(value) == 1 else "")
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, Fraction)):
        f = Fraction(value)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    if isinstance(value, float):
        return format_value(Fraction(value))
    return str(value)


@dataclass
class RunConfig:
    """Parsed configuration: ``sections[name][key] -> Fraction | str | list``."""

    sections: dict = field(default_factory=dict)

    def get(self, section: str, key: str, default=None):
        return self.sections.get(section, {}).get(key, default)

    def number(self, section: str, key: str, default=None) -> float | None:
        v = self.get(section, key, default)
        if v is None:
            return None
        try:
            return float(v)
        except (TypeError, ValueError):
            raise ConfigParseError(f"[{section}] {key} must be a number, got {v!r}") from None

    @property
    def kind(self) -> str:
        return str(self.get("experiment", "kind", "sharpness"))

    def to_dict(self) -> dict:
        """JSON-friendly copy (fractions as strings)."""
        return {s: {k: _jsonable(v) for k, v in kv.items()} for s, kv in sorted(self.sections.items())}


def _jsonable(v):
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    if isinstance(v, Fraction):
        return format_value(v)
    return v


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigParseError(str(exc)) from None
    sections = {s: {k: parse_value(v) for k, v in cp.items(s)} for s in cp.sections()}
    cfg = RunConfig(sections)
    validate_config(cfg)
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigParseError(f"cannot read {path}: {exc}") from None


def serialize_config(cfg: RunConfig) -> str:
    lines = []
    for name in cfg.sections:
        lines.append(f"[{name}]")
        for k, v in cfg.sections[name].items():
            lines.append(f"{k} = {format_value(v)}")
        lines.append("")
    return "\n".join(lines)


def validate_config(cfg: RunConfig) -> None:
    if cfg.kind not in KINDS:
        raise ConfigParseError(f"unknown experiment kind {cfg.kind!r}")
    # building each part surfaces malformed descriptors early
    try:
        build_weight_from(cfg)
        build_kernel_from(cfg)
        build_curve_from(cfg)
        quadrature_from(cfg)
        for sec in ("function", "symbol", "dual"):
            if sec in cfg.sections:
                build_function_from(cfg, sec)
        epsilons_from(cfg)
    except ConfigParseError:
        raise
    except (ValueError, TypeError, KeyError, ArithmeticError) as exc:
        raise ConfigParseError(f"invalid configuration: {exc}") from None
    except Exception as exc:  # library validation errors
        raise ConfigParseError(f"invalid configuration: {exc}") from None


# ---------------------------------------------------------------------------
# builders


def _floats(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, Fraction):
            out[k] = float(v)
        elif isinstance(v, list):
            out[k] = [float(x) if isinstance(x, Fraction) else x for x in v]
        else:
            out[k] = v
    return out


def build_weight_from(cfg: RunConfig) -> HomogeneousWeight:
    d = _floats(cfg.sections.get("weight", {}))
    return build_weight(float(d.get("alpha", 0.0)), str(d.get("profile", "constant")), int(d.get("n", 1)),
                        scale=float(d.get("scale", 1.0)))


def build_kernel_from(cfg: RunConfig) -> KernelSpec:
    d = _floats(cfg.sections.get("kernel", {}))
    d.setdefault("family", "constant")
    return KernelSpec.from_dict(d)


def build_curve_from(cfg: RunConfig) -> CurveSpec:
    d = _floats(cfg.sections.get("curve", {}))
    d.setdefault("family", "power")
    if "breaks" in d and not isinstance(d["breaks"], list):
        d["breaks"] = [d["breaks"]]
    if "signs" in d and not isinstance(d["signs"], list):
        d["signs"] = [d["signs"]]
    return CurveSpec.from_dict(d)


def build_function_from(cfg: RunConfig, section: str = "function") -> TestFunction:
    d = _floats(cfg.sections.get(section, {}))
    if "kind" not in d:
        raise ConfigParseError(f"[{section}] needs a kind")
    for key in ("edges", "values"):
        if key in d and not isinstance(d[key], list):
            d[key] = [d[key]]
    return build_function(d)


def quadrature_from(cfg: RunConfig, seed: int | None = None, rel_tol: float | None = None) -> QuadratureConfig:
    d = _floats(cfg.sections.get("quadrature", {}))
    kw = {}
    for key in ("rel_tol", "abs_tol"):
        if key in d:
            kw[key] = float(d[key])
    for key in ("max_subdivisions", "mc_samples", "rng_seed"):
        if key in d:
            kw[key] = int(d[key])
    if seed is not None:
        kw["rng_seed"] = int(seed)
    if rel_tol is not None:
        kw["rel_tol"] = float(rel_tol)
    return QuadratureConfig(**kw)


def epsilons_from(cfg: RunConfig) -> tuple:
    sw = cfg.sections.get("sweep", {})
    if "epsilons" in sw:
        eps = sw["epsilons"]
        eps = eps if isinstance(eps, list) else [eps]
        return tuple(float(e) for e in eps)
    k_min = int(sw.get("k_min", 3))
    k_max = int(sw.get("k_max", 10))
    return tuple(2.0 ** -k for k in range(k_min, k_max + 1))


def family_from(cfg: RunConfig, n: int) -> BallFamily:
    d = _floats(cfg.sections.get("family", {}))
    return BallFamily.standard(
        n,
        int(d.get("k_min", -5)),
        int(d.get("k_max", 13)),
        r_min=float(d.get("r_min", 2.0 ** -10)),
        r_max=float(d.get("r_max", 2.0 ** 10)),
        count=int(d.get("count", 41)),
    )
