"""Catalog of g-functions for standard generalized power law (GPL) members.

A standard GPL variable Z has survival ``S(z) = (1 + z) ** -g(z)`` for z > 0.
Each catalog entry provides ``g``, its analytic derivative, the hazard
``g/(1+z) + g'(z) log(1+z)`` in log form and the cumulative hazard
``g(z) log(1+z)`` in the closed forms of the location-scale survival table.

Kinds with a finite limit of g at infinity (the Pareto-like block) give
regularly varying tails; the remaining kinds do not.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._errors import DomainError, ParameterError

__all__ = [
    "GFunction",
    "KINDS",
    "FINITE_LIMIT_KINDS",
    "ConditionReport",
    "g_eval",
    "g_prime",
    "validate_gpl_conditions",
    "tail_limit_class",
    "default_grid",
]

_SMALL_Z = 1e-8


@dataclass(frozen=True)
class _KindInfo:
    group: int  # 1: g tends to alpha, 2: g grows without bound, 3: no alpha
    has_alpha: bool
    beta_lower: float | None  # None: kind takes no beta
    beta_closed: bool = True
    nests_pareto: bool = False


_CATALOG = {
    "constant": _KindInfo(1, True, None, nests_pareto=True),
    "log_shift": _KindInfo(1, True, -1.0, True, True),
    "ratio_z": _KindInfo(1, True, -1.0, True, True),
    "power_ratio": _KindInfo(1, True, -1.0, False, True),
    "log_ratio": _KindInfo(1, True, -1.0, False, True),
    "affine_linear": _KindInfo(2, True, 0.0, True, True),
    "benini": _KindInfo(2, True, 0.0, True, True),
    "z_over_log": _KindInfo(2, True, 0.0, True, True),
    "power_growth": _KindInfo(2, True, 0.0, True, True),
    "pps": _KindInfo(2, True, -1.0, False, True),
    "exponential": _KindInfo(3, False, None),
    "rayleigh": _KindInfo(3, False, None),
    "weibull": _KindInfo(3, False, 0.0, False),
    "gompertz": _KindInfo(3, False, 0.0, False),
}

#: Stable string identifiers of every catalog row.
KINDS = tuple(_CATALOG)
#: Kinds whose g has a strictly positive finite limit (equal to alpha) at infinity.
FINITE_LIMIT_KINDS = tuple(k for k, v in _CATALOG.items() if v.group == 1)


def _log1p_minus_z(z):
    """log(1+z) - z without cancellation for small z."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-2
    zs = np.where(small, z, 0.0)
    series = np.zeros_like(zs)
    for k in range(12, 1, -1):
        series = series + ((-1.0) ** (k + 1)) * zs**k / k
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.log1p(z) - z
    return np.where(small, series, direct)


def _q(z, L):
    """z / log(1+z), with a series branch at the origin."""
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = z / L
    return np.where(z < _SMALL_Z, 1.0 + z / 2.0 - z * z / 12.0, direct)


def _q_minus_one(z, L):
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = -_log1p_minus_z(z) / L
    return np.where(z < _SMALL_Z, z / 2.0 - z * z / 12.0, direct)


def _q_prime(z, L):
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (_log1p_minus_z(z) + z * z / (1.0 + z)) / (L * L)
    return np.where(z < _SMALL_Z, 0.5 - z / 6.0, direct)


def _expm1_over_z(z):
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        direct = np.expm1(z) / z
    series = 1.0 + z / 2.0 + z * z / 6.0 + z**3 / 24.0
    return np.where(z < 1e-3, series, direct)


def _expm1_over_z_prime(z):
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        direct = (z * np.exp(z) - np.expm1(z)) / (z * z)
    series = 0.5 + z / 3.0 + z * z / 8.0 + z**3 / 30.0
    direct = np.where(z > 700.0, np.inf, direct)
    return np.where(z < 1e-3, series, direct)


def _check_z(z):
    z = np.asarray(z, dtype=float)
    if np.any(~(z > 0)):
        raise DomainError("g-functions are defined for z > 0 only")
    return z


@dataclass(frozen=True)
class GFunction:
    """One parameterized row of the g-function catalog.

    Parameters
    ----------
    kind : str
        Catalog identifier, one of :data:`KINDS`.
    alpha : float, optional
        Tail scale parameter; required for group 1 and 2 kinds, absent otherwise.
    beta : float, optional
        Shape parameter, with the admissible range of the catalog row.
    """

    kind: str
    alpha: float | None = None
    beta: float | None = None
    _info: _KindInfo = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        info = _CATALOG.get(self.kind)
        if info is None:
            raise ParameterError(f"unknown g kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "_info", info)
        if info.has_alpha:
            if self.alpha is None or not (float(self.alpha) > 0) or not math.isfinite(self.alpha):
                raise ParameterError(f"{self.kind}: alpha must be a finite positive number")
            object.__setattr__(self, "alpha", float(self.alpha))
        elif self.alpha is not None:
            raise ParameterError(f"{self.kind}: takes no alpha parameter")
        if info.beta_lower is None:
            if self.beta is not None:
                raise ParameterError(f"{self.kind}: takes no beta parameter")
            return
        if self.beta is None or not math.isfinite(self.beta):
            raise ParameterError(f"{self.kind}: beta is required")
        b = float(self.beta)
        ok = b >= info.beta_lower if info.beta_closed else b > info.beta_lower
        if not ok:
            op = ">=" if info.beta_closed else ">"
            raise ParameterError(f"{self.kind}: beta must be {op} {info.beta_lower}, got {b}")
        object.__setattr__(self, "beta", b)

    # -- metadata -------------------------------------------------------
    @property
    def group(self) -> int:
        return self._info.group

    @property
    def nests_pareto(self) -> bool:
        return self._info.nests_pareto

    @property
    def param_names(self) -> tuple[str, ...]:
        names = []
        if self._info.has_alpha:
            names.append("alpha")
        if self._info.beta_lower is not None:
            names.append("beta")
        return tuple(names)

    def params(self) -> dict:
        return {n: getattr(self, n) for n in self.param_names}

    def replace(self, **params) -> "GFunction":
        kw = self.params()
        kw.update(params)
        return GFunction(self.kind, **kw)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params()}

    @classmethod
    def from_dict(cls, d: dict) -> "GFunction":
        d = dict(d)
        return cls(d.pop("kind"), **d)

    # -- evaluation -----------------------------------------------------
    def g(self, z):
        """Evaluate g(z) for z > 0."""
        z = _check_z(z)
        a, b, k = self.alpha, self.beta, self.kind
        L = np.log1p(z)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if k == "constant":
                out = np.full_like(z, a)
            elif k == "log_shift":
                out = a * ((1.0 + b) + L) / (1.0 + L)
            elif k == "ratio_z":
                one_minus_h = np.where(
                    z < _SMALL_Z,
                    z / 2.0 - 5.0 * z * z / 12.0,
                    (_log1p_minus_z(z) + z * L) / ((1.0 + z) * L),
                )
                out = a * ((1.0 + b) - b * one_minus_h)
            elif k == "power_ratio":
                out = a * np.exp(b * (np.log(z) - L))
            elif k == "log_ratio":
                out = a * np.exp(b * (np.log(L) - np.log1p(L)))
            elif k == "affine_linear":
                out = a * (1.0 + b * (1.0 + z))
            elif k == "benini":
                out = a * (1.0 + b * L)
            elif k == "z_over_log":
                out = a * (1.0 + b * _q(z, L))
            elif k == "power_growth":
                out = a * np.exp(b * L)
            elif k == "pps":
                out = a * np.exp(b * np.log(L))
            elif k == "exponential":
                out = _q(z, L)
            elif k == "rayleigh":
                out = z * _q(z, L) / 2.0
            elif k == "weibull":
                out = z ** (b - 1.0) * _q(z, L)
            else:  # gompertz
                out = b * _expm1_over_z(z) * _q(z, L)
        return out

    def g_prime(self, z):
        """Analytic derivative dg/dz for z > 0."""
        z = _check_z(z)
        a, b, k = self.alpha, self.beta, self.kind
        L = np.log1p(z)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if k == "constant":
                out = np.zeros_like(z)
            elif k == "log_shift":
                out = -a * b / ((1.0 + L) ** 2 * (1.0 + z))
            elif k == "ratio_z":
                out = a * b * _log1p_minus_z(z) / ((1.0 + z) ** 2 * L * L)
                out = np.where(z < _SMALL_Z, a * b * (-0.5 + 5.0 * z / 6.0), out)
            elif k == "power_ratio":
                out = self.g(z) * b / (z * (1.0 + z))
            elif k == "log_ratio":
                out = self.g(z) * b / (L * (1.0 + L) * (1.0 + z))
            elif k == "affine_linear":
                out = np.full_like(z, a * b)
            elif k == "benini":
                out = a * b / (1.0 + z)
            elif k == "z_over_log":
                out = a * b * _q_prime(z, L)
            elif k == "power_growth":
                out = a * b * np.exp((b - 1.0) * L)
            elif k == "pps":
                out = a * b * np.exp((b - 1.0) * np.log(L)) / (1.0 + z)
            elif k == "exponential":
                out = _q_prime(z, L)
            elif k == "rayleigh":
                out = (_q(z, L) + z * _q_prime(z, L)) / 2.0
            elif k == "weibull":
                out = (b - 1.0) * z ** (b - 2.0) * _q(z, L) + z ** (b - 1.0) * _q_prime(z, L)
            else:  # gompertz
                out = b * (_expm1_over_z_prime(z) * _q(z, L) + _expm1_over_z(z) * _q_prime(z, L))
        return out

    def cumulative_hazard(self, z):
        """g(z) * log(1+z), i.e. -log S(z), for z >= 0 (zero at the origin)."""
        z = np.asarray(z, dtype=float)
        if np.any(z < 0):
            raise DomainError("cumulative hazard is defined for z >= 0")
        a, b, k = self.alpha, self.beta, self.kind
        L = np.log1p(z)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if k == "constant":
                out = a * L
            elif k == "log_shift":
                out = a * L * ((1.0 + b) + L) / (1.0 + L)
            elif k == "ratio_z":
                out = a * (L + b * z / (1.0 + z))
            elif k == "power_ratio":
                out = a * L * np.exp(b * (np.log(z) - L))
            elif k == "log_ratio":
                out = a * np.exp((b + 1.0) * np.log(L) - b * np.log1p(L))
            elif k == "affine_linear":
                out = a * L * (1.0 + b * (1.0 + z))
            elif k == "benini":
                out = a * L * (1.0 + b * L)
            elif k == "z_over_log":
                out = a * (L + b * z)
            elif k == "power_growth":
                out = a * L * np.exp(b * L)
            elif k == "pps":
                out = a * np.exp((b + 1.0) * np.log(L))
            elif k == "exponential":
                out = z.copy()
            elif k == "rayleigh":
                out = z * z / 2.0
            elif k == "weibull":
                out = z**b
            else:  # gompertz
                out = b * np.expm1(z)
        return np.where(z == 0, 0.0, out)

    def log_hazard(self, z):
        """log of the hazard g/(1+z) + g'(z) log(1+z) for z > 0."""
        z = _check_z(z)
        a, b, k = self.alpha, self.beta, self.kind
        L = np.log1p(z)
        base = math.log(a) - L if a is not None else None
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if k == "constant":
                out = base
            elif k == "log_shift":
                out = base + np.log1p(b / (1.0 + L) ** 2)
            elif k == "ratio_z":
                out = base + np.log((1.0 + b) + z) - L
            elif k == "power_ratio":
                qq = _q(z, L)
                out = base + b * (np.log(z) - L) + np.log((1.0 + b) + _q_minus_one(z, L)) - np.log(qq)
            elif k == "log_ratio":
                out = base + b * (np.log(L) - np.log1p(L)) + np.log((1.0 + b) + L) - np.log1p(L)
            elif k == "affine_linear":
                out = base + np.log1p(b * (1.0 + z) * (1.0 + L))
            elif k == "benini":
                out = base + np.log1p(2.0 * b * L)
            elif k == "z_over_log":
                out = base + np.log1p(b * (1.0 + z))
            elif k == "power_growth":
                out = base + np.log1p(b * L) + b * L
            elif k == "pps":
                out = base + math.log1p(b) + b * np.log(L)
            elif k == "exponential":
                out = np.zeros_like(z)
            elif k == "rayleigh":
                out = np.log(z)
            elif k == "weibull":
                out = math.log(b) + (b - 1.0) * np.log(z)
            else:  # gompertz
                out = math.log(b) + z
        return out

    def hazard(self, z):
        return np.exp(self.log_hazard(z))

    def tail_limit(self) -> float:
        """lim g(z) as z -> infinity.

        alpha for group 1 kinds and for any Pareto-nesting kind at beta = 0;
        0 for the PPS row with beta < 0 (g = alpha * log(1+z)**beta decays,
        although g * log(1+z) still diverges); ``math.inf`` otherwise.
        """
        if self.group == 1 or (self.nests_pareto and self.beta == 0.0):
            return self.alpha
        if self.kind == "pps" and self.beta < 0:
            return 0.0
        return math.inf


def g_eval(spec: GFunction, z):
    return spec.g(z)


def g_prime(spec: GFunction, z):
    return spec.g_prime(z)


def tail_limit_class(spec: GFunction) -> float:
    """Limit of g at infinity: alpha (finite class), ``math.inf``, or 0 (PPS with beta < 0)."""
    return spec.tail_limit()


def default_grid(n: int = 512, lo: float = 1e-8, hi: float = 1e8) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), n)


@dataclass
class ConditionReport:
    """Outcome of the grid audit of the GPL defining conditions."""

    kind: str
    origin_ok: bool
    infinity_ok: bool
    derivative_violations: list
    min_margin: float
    positive_ok: bool

    @property
    def passed(self) -> bool:
        return (self.origin_ok and self.infinity_ok and self.positive_ok
                and not self.derivative_violations)


def validate_gpl_conditions(spec: GFunction, grid=None, *, n_edge: int = 5,
                            infinity_threshold: float = 10.0, tol: float = 1e-10) -> ConditionReport:
    """Audit the GPL conditions on a grid of positive points.

    Checks that (1+z)^g(z) decreases monotonically towards 1 over the
    smallest grid points, that it grows past ``infinity_threshold`` over the
    largest ones, and that ``g'/g >= -1/((1+z) log(1+z))`` everywhere.
    Violations are reported, never raised.
    """
    z = default_grid() if grid is None else np.asarray(grid, dtype=float)
    if z.size == 0 or np.any(z <= 0) or np.any(np.diff(z) <= 0):
        raise DomainError("grid must be nonempty, strictly positive and increasing")
    g = spec.g(z)
    gp = spec.g_prime(z)
    L = np.log1p(z)
    positive_ok = bool(np.all(g > 0))
    # log of (1+z)^g(z)
    log_pow = spec.cumulative_hazard(z)

    head = log_pow[:n_edge]
    origin_ok = bool(np.all(np.isfinite(head)) and np.all(head >= 0)
                     and np.all(np.diff(head) > 0) and head[0] < 1.0)
    tail = log_pow[-n_edge:]
    # comparisons rather than differences so overflowed (inf) entries count as growth
    infinity_ok = bool(np.all(tail[1:] >= tail[:-1]) and tail[-1] > log_pow[0]
                       and tail[-1] > math.log(infinity_threshold))

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        margin = gp * (1.0 + z) * L / g + 1.0
    finite = np.isfinite(margin)
    # overflowed rows (e.g. gompertz far out) have g' > 0 and satisfy the condition
    margin = np.where(finite, margin, np.where(gp >= 0, np.inf, -np.inf))
    bad = z[margin < -tol]
    return ConditionReport(spec.kind, origin_ok, infinity_ok, [float(v) for v in bad],
                           float(np.min(margin)), positive_ok)
