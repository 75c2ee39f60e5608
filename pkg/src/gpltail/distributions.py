"""The GPL hierarchy and the comparison size distributions.

Every GPL and Pareto-type family is handled through the change of variable
``z = ((x - mu) / sigma) ** (1 / gamma)`` feeding a catalog g-function;
Pareto-type members additionally keep their own closed-form survival so the
hierarchy reductions can be cross-checked.  Dagum and lognormal are
parameterized as

* Dagum: ``F(x) = [1 + (x / b) ** -a] ** -p`` with ``gamma = 1/a``,
  ``sigma = b``, ``alpha = p``;
* lognormal: ``log X ~ Normal(mu, sigma)``.

Neither form is printed with the source model; both are the usual textbook
choices.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from ._errors import ConvergenceError, ParameterError
from .gfunction import GFunction
from .rng import RandomSource, as_random_source

__all__ = [
    "FAMILIES",
    "GPL_FAMILIES",
    "DistributionSpec",
    "survival",
    "cdf",
    "density",
    "log_density",
    "log_survival",
    "log_cdf",
    "quantile",
    "sample",
    "reduce_hierarchy",
    "support_lower_bound",
    "standard_gpl",
    "gpl1",
    "gpl2",
    "gpl3",
    "pareto1",
    "pareto2",
    "pareto3",
    "pareto4",
    "lomax",
    "fisk",
    "burr12",
    "dagum",
    "lognormal",
    "chosen_gpl2",
]

SCHEMA_VERSION = 1

GPL_FAMILIES = ("StandardGPL", "GPL1", "GPL2", "GPL3")
FAMILIES = GPL_FAMILIES + (
    "Pareto1", "Pareto2", "Pareto3", "Pareto4",
    "Lomax", "Fisk", "BurrXII", "Dagum", "Lognormal",
)

# which scalar parameters each family carries
_FIELDS = {
    "StandardGPL": (),
    "GPL1": ("sigma",),
    "GPL2": ("mu", "sigma"),
    "GPL3": ("mu", "sigma", "gamma"),
    "Pareto1": ("sigma", "alpha"),
    "Pareto2": ("mu", "sigma", "alpha"),
    "Pareto3": ("mu", "sigma", "gamma"),
    "Pareto4": ("mu", "sigma", "gamma", "alpha"),
    "Lomax": ("sigma", "alpha"),
    "Fisk": ("sigma", "gamma"),
    "BurrXII": ("sigma", "gamma", "alpha"),
    "Dagum": ("sigma", "gamma", "alpha"),
    "Lognormal": ("mu", "sigma"),
}

_EQ_TOL = 1e-12


@dataclass(frozen=True)
class DistributionSpec:
    """A member of the GPL hierarchy or a comparison family.

    Unused fields stay ``None``.  Build instances with the module-level
    constructors (:func:`gpl2`, :func:`lomax`, ...) rather than directly.
    """

    family: str
    g: GFunction | None = None
    mu: float | None = None
    sigma: float | None = None
    gamma: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}")
        fields = _FIELDS[self.family]
        for name in ("mu", "sigma", "gamma", "alpha"):
            val = getattr(self, name)
            if name not in fields:
                if val is not None:
                    raise ParameterError(f"{self.family} takes no {name}")
                continue
            if val is None or not math.isfinite(val):
                raise ParameterError(f"{self.family}: {name} must be a finite number")
            if name != "mu" and not val > 0:
                raise ParameterError(f"{self.family}: {name} must be > 0, got {val}")
            object.__setattr__(self, name, float(val))
        if self.family in GPL_FAMILIES:
            if not isinstance(self.g, GFunction):
                raise ParameterError(f"{self.family} requires a GFunction")
        elif self.g is not None:
            raise ParameterError(f"{self.family} takes no g-function")

    @property
    def params(self) -> dict:
        out = {name: getattr(self, name) for name in _FIELDS[self.family]}
        if self.g is not None:
            out.update(self.g.params())
        return out

    @property
    def lower_bound(self) -> float:
        return support_lower_bound(self)

    # -- serialization --------------------------------------------------
    def to_dict(self) -> dict:
        d = {"schema_version": SCHEMA_VERSION, "family": self.family,
             "params": {name: getattr(self, name) for name in _FIELDS[self.family]}}
        if self.g is not None:
            d["g_kind"] = self.g.kind
            d["params"].update(self.g.params())
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "DistributionSpec":
        version = d.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ParameterError(f"unsupported model schema version {version}")
        family = d["family"]
        params = dict(d.get("params", {}))
        g = None
        if family in GPL_FAMILIES:
            g = GFunction(d["g_kind"], alpha=params.pop("alpha", None), beta=params.pop("beta", None))
        return cls(family, g=g, **params)

    @classmethod
    def from_json(cls, text: str) -> "DistributionSpec":
        return cls.from_dict(json.loads(text))

    # convenience wrappers
    def survival(self, x):
        return survival(self, x)

    def cdf(self, x):
        return cdf(self, x)

    def pdf(self, x):
        return density(self, x)

    def logpdf(self, x):
        return log_density(self, x)

    def quantile(self, p):
        return quantile(self, p)

    def sample(self, n, rng):
        return sample(self, n, rng)


# -- constructors --------------------------------------------------------

def standard_gpl(g: GFunction) -> DistributionSpec:
    return DistributionSpec("StandardGPL", g=g)


def gpl1(sigma: float, g: GFunction) -> DistributionSpec:
    return DistributionSpec("GPL1", g=g, sigma=sigma)


def gpl2(mu: float, sigma: float, g: GFunction) -> DistributionSpec:
    return DistributionSpec("GPL2", g=g, mu=mu, sigma=sigma)


def gpl3(mu: float, sigma: float, gamma: float, g: GFunction) -> DistributionSpec:
    return DistributionSpec("GPL3", g=g, mu=mu, sigma=sigma, gamma=gamma)


def pareto1(sigma: float, alpha: float) -> DistributionSpec:
    return DistributionSpec("Pareto1", sigma=sigma, alpha=alpha)


def pareto2(mu: float, sigma: float, alpha: float) -> DistributionSpec:
    return DistributionSpec("Pareto2", mu=mu, sigma=sigma, alpha=alpha)


def pareto3(mu: float, sigma: float, gamma: float) -> DistributionSpec:
    return DistributionSpec("Pareto3", mu=mu, sigma=sigma, gamma=gamma)


def pareto4(mu: float, sigma: float, gamma: float, alpha: float) -> DistributionSpec:
    return DistributionSpec("Pareto4", mu=mu, sigma=sigma, gamma=gamma, alpha=alpha)


def lomax(sigma: float, alpha: float) -> DistributionSpec:
    return DistributionSpec("Lomax", sigma=sigma, alpha=alpha)


def fisk(sigma: float, gamma: float) -> DistributionSpec:
    return DistributionSpec("Fisk", sigma=sigma, gamma=gamma)


def burr12(sigma: float, gamma: float, alpha: float) -> DistributionSpec:
    return DistributionSpec("BurrXII", sigma=sigma, gamma=gamma, alpha=alpha)


def dagum(a: float, b: float, p: float) -> DistributionSpec:
    """Dagum type I with cdf ``[1 + (x/b)^-a]^-p``."""
    if not a > 0:
        raise ParameterError("Dagum: a must be > 0")
    return DistributionSpec("Dagum", sigma=b, gamma=1.0 / a, alpha=p)


def lognormal(mu: float, sigma: float) -> DistributionSpec:
    return DistributionSpec("Lognormal", mu=mu, sigma=sigma)


def chosen_gpl2(alpha: float, beta: float, sigma: float) -> DistributionSpec:
    """GPL(II) with mu = 0 and g(z) = alpha * [log(1+z) / (1 + log(1+z))] ** beta.

    Survival is ``exp(-alpha * L**(beta+1) / (1+L)**beta)`` with
    ``L = log(1 + x/sigma)``.
    """
    return gpl2(0.0, sigma, GFunction("log_ratio", alpha=alpha, beta=beta))


# -- internals -----------------------------------------------------------

def support_lower_bound(spec: DistributionSpec) -> float:
    f = spec.family
    if f in ("GPL1", "Pareto1"):
        return spec.sigma
    if f in ("GPL2", "GPL3", "Pareto2", "Pareto3", "Pareto4"):
        return spec.mu
    return 0.0


def _canonical(spec: DistributionSpec):
    """(mu, sigma, gamma, g) of the GPL(III) form of a GPL or Pareto-type spec."""
    f = spec.family
    if f == "StandardGPL":
        return 0.0, 1.0, 1.0, spec.g
    if f == "GPL1":
        return spec.sigma, spec.sigma, 1.0, spec.g
    if f == "GPL2":
        return spec.mu, spec.sigma, 1.0, spec.g
    if f == "GPL3":
        return spec.mu, spec.sigma, spec.gamma, spec.g
    const = GFunction("constant", alpha=spec.alpha if spec.alpha is not None else 1.0)
    if f == "Pareto1":
        return spec.sigma, spec.sigma, 1.0, const
    if f == "Pareto2":
        return spec.mu, spec.sigma, 1.0, const
    if f in ("Pareto3", "Pareto4"):
        return spec.mu, spec.sigma, spec.gamma, const
    if f == "Lomax":
        return 0.0, spec.sigma, 1.0, const
    if f in ("Fisk", "BurrXII"):
        return 0.0, spec.sigma, spec.gamma, const
    return None


def _std_z(spec, x):
    """Standardized variable z and log(u) with u = (x - mu)/sigma, on x > mu."""
    mu, sigma, gamma, _ = _canonical(spec)
    u = (x - mu) / sigma
    with np.errstate(divide="ignore", invalid="ignore"):
        logu = np.log(u)
        z = u if gamma == 1.0 else np.exp(logu / gamma)
    return z, logu


def _closed_log_survival(spec, x):
    """Table-form log-survival for the Pareto-type families (x above support)."""
    f = spec.family
    mu = spec.mu if spec.mu is not None else 0.0
    a = spec.alpha if spec.alpha is not None else 1.0
    if f == "Pareto1":
        return -a * np.log(x / spec.sigma)
    u = (x - mu) / spec.sigma
    if f in ("Pareto2", "Lomax"):
        return -a * np.log1p(u)
    return -a * np.log1p(u ** (1.0 / spec.gamma))


def _as_array(x):
    return np.asarray(x, dtype=float)


def log_survival(spec: DistributionSpec, x):
    """log S(x), accurate far into the upper tail."""
    x = _as_array(x)
    f = spec.family
    out = np.zeros_like(x)
    if f == "Lognormal":
        with np.errstate(divide="ignore"):
            t = (np.log(np.where(x > 0, x, 1.0)) - spec.mu) / spec.sigma
        return np.where(x > 0, special.log_ndtr(-t), 0.0)
    if f == "Dagum":
        inside = x > 0
        xs = np.where(inside, x, 1.0)
        with np.errstate(over="ignore", divide="ignore"):
            # log F = -p * log(1 + (x/b)^-a)
            logF = -spec.alpha * np.logaddexp(0.0, -np.log(xs / spec.sigma) / spec.gamma)
            ls = np.where(logF > -0.6931471805599453, np.log(-np.expm1(logF)), np.log1p(-np.exp(logF)))
        return np.where(inside, ls, 0.0)
    lb = support_lower_bound(spec)
    inside = x > lb
    xs = np.where(inside, x, lb + spec.sigma if spec.sigma else lb + 1.0)
    if f in GPL_FAMILIES:
        _, _, _, g = _canonical(spec)
        z, _ = _std_z(spec, xs)
        vals = -g.cumulative_hazard(z)
    else:
        vals = _closed_log_survival(spec, xs)
    out = np.where(inside, vals, 0.0)
    return out


def survival(spec: DistributionSpec, x):
    """S(x) = P(X > x); equal to 1 at and below the support lower bound."""
    return np.exp(log_survival(spec, x))


def cdf(spec: DistributionSpec, x):
    """F(x) = 1 - S(x)."""
    return 1.0 - survival(spec, x)


def log_cdf(spec: DistributionSpec, x):
    """log F(x) computed without forming 1 - S(x) when S is close to 1."""
    x = _as_array(x)
    if spec.family == "Lognormal":
        with np.errstate(divide="ignore"):
            t = (np.log(np.where(x > 0, x, 1.0)) - spec.mu) / spec.sigma
        return np.where(x > 0, special.log_ndtr(t), -np.inf)
    if spec.family == "Dagum":
        inside = x > 0
        xs = np.where(inside, x, 1.0)
        return np.where(inside, -spec.alpha * np.logaddexp(0.0, -np.log(xs / spec.sigma) / spec.gamma), -np.inf)
    ls = log_survival(spec, x)
    with np.errstate(divide="ignore"):
        return np.where(ls > -0.6931471805599453, np.log(-np.expm1(ls)), np.log1p(-np.exp(ls)))


def log_density(spec: DistributionSpec, x):
    """log f(x) evaluated in log space; ``-inf`` outside the support."""
    x = _as_array(x)
    f = spec.family
    if f == "Lognormal":
        inside = x > 0
        xs = np.where(inside, x, 1.0)
        lx = np.log(xs)
        t = (lx - spec.mu) / spec.sigma
        vals = -0.5 * t * t - lx - math.log(spec.sigma) - 0.5 * math.log(2.0 * math.pi)
        return np.where(inside, vals, -np.inf)
    if f == "Dagum":
        inside = x > 0
        xs = np.where(inside, x, 1.0)
        a, b, p = 1.0 / spec.gamma, spec.sigma, spec.alpha
        lr = np.log(xs / b)
        vals = math.log(a * p) - np.log(xs) + a * p * lr - (p + 1.0) * np.logaddexp(0.0, a * lr)
        return np.where(inside, vals, -np.inf)
    mu, sigma, gamma, g = _canonical(spec)
    lb = support_lower_bound(spec)
    inside = x > lb
    xs = np.where(inside, x, lb + sigma)
    z, logu = _std_z(spec, xs)
    z = np.maximum(z, np.finfo(float).tiny)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        vals = g.log_hazard(z) - g.cumulative_hazard(z) - math.log(sigma)
        if gamma != 1.0:
            # dz/dx = z / (gamma * (x - mu))
            vals = vals - math.log(gamma) + (1.0 / gamma - 1.0) * logu
    return np.where(inside, vals, -np.inf)


def density(spec: DistributionSpec, x):
    """Probability density; zero outside the support."""
    return np.exp(log_density(spec, x))


def _cumhaz_target(p):
    p = _as_array(p)
    if np.any(~((p > 0) & (p < 1))):
        raise ParameterError("quantile requires 0 < p < 1")
    return -np.log1p(-p)


def _solve_cumulative_hazard(g: GFunction, target, max_iter: int = 200):
    """Vectorized inverse of z -> g.cumulative_hazard(z).

    Works on t = log z: a bracket grown geometrically around each root is
    refined by Newton steps, falling back to bisection whenever a step
    leaves the bracket.
    """
    target = np.atleast_1d(_as_array(target)).astype(float)
    out = np.zeros_like(target)
    pos = target > 0
    if not np.any(pos):
        return out
    tgt = target[pos]

    def H(t):
        with np.errstate(over="ignore", invalid="ignore"):
            return g.cumulative_hazard(np.exp(t))

    lo = np.full_like(tgt, -2.0)
    hi = np.full_like(tgt, 2.0)
    step = 2.0
    for _ in range(60):
        need_lo = H(lo) >= tgt
        need_hi = H(hi) < tgt
        if not (np.any(need_lo) or np.any(need_hi)):
            break
        lo = np.where(need_lo, lo - step, lo)
        hi = np.where(need_hi, hi + step, hi)
        step *= 2.0
        if np.any(lo < -745.0) or np.any(hi > 709.0):
            lo = np.maximum(lo, -745.0)
            hi = np.minimum(hi, 709.0)
    else:  # pragma: no cover - guarded by the clamps above
        raise ConvergenceError("could not bracket quantile")

    t = 0.5 * (lo + hi)
    converged = np.zeros_like(tgt, dtype=bool)
    for _ in range(max_iter):
        z = np.exp(t)
        with np.errstate(over="ignore", invalid="ignore"):
            h = g.cumulative_hazard(z)
            # dH/dt = hazard(z) * z
            slope = np.exp(g.log_hazard(z) + t)
        resid = h - tgt
        lo = np.where(resid < 0, t, lo)
        hi = np.where(resid >= 0, t, hi)
        converged = (np.abs(resid) <= 1e-13 * np.maximum(1.0, tgt)) | (hi - lo <= 1e-15 * np.maximum(1.0, np.abs(t)))
        if np.all(converged):
            break
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            newton = t - resid / slope
        ok = np.isfinite(newton) & (newton > lo) & (newton < hi)
        t = np.where(converged, t, np.where(ok, newton, 0.5 * (lo + hi)))
    else:
        if not np.all(converged):
            raise ConvergenceError(f"quantile root-finder exceeded {max_iter} iterations")
    out[pos] = np.exp(t)
    return out


def _quantile_from_cumhaz(spec: DistributionSpec, target):
    """x with -log S(x) = target (target >= 0)."""
    target = _as_array(target)
    f = spec.family
    if f == "Lognormal":
        # S = exp(-target)  =>  x = exp(mu + sigma * Phi^-1(1 - S))
        with np.errstate(divide="ignore"):
            zq = -special.ndtri(np.exp(-target))
        return np.exp(spec.mu + spec.sigma * zq)
    if f == "Dagum":
        a, b, p = 1.0 / spec.gamma, spec.sigma, spec.alpha
        logF = np.log(-np.expm1(-target))
        # (x/b)^-a = F^(-1/p) - 1
        with np.errstate(divide="ignore"):
            return b * np.expm1(-logF / p) ** (-1.0 / a)
    mu, sigma, gamma, g = _canonical(spec)
    if g.kind == "constant":
        z = np.expm1(target / g.alpha)
    else:
        z = _solve_cumulative_hazard(g, target).reshape(target.shape)
    return mu + sigma * z**gamma


def quantile(spec: DistributionSpec, p):
    """Inverse cdf: x with F(x) = p for 0 < p < 1."""
    p_arr = _as_array(p)
    out = _quantile_from_cumhaz(spec, _cumhaz_target(p_arr))
    return out if np.ndim(p) else float(out)


def sample(spec: DistributionSpec, n: int, rng) -> np.ndarray:
    """n inverse-transform variates, reproducible for a given random source."""
    if int(n) != n or n < 1:
        raise ParameterError("sample size must be a positive integer")
    src = as_random_source(rng)
    gen = src.generator()
    # exponential(1) draws are -log S(X); avoids forming 1 - U in the tail
    e = gen.standard_exponential(int(n))
    return np.asarray(_quantile_from_cumhaz(spec, e), dtype=float)


# -- hierarchy -----------------------------------------------------------

def _eq(a, b) -> bool:
    return abs(a - b) <= _EQ_TOL * max(1.0, abs(a), abs(b))


def _step(spec: DistributionSpec):
    f = spec.family
    g = spec.g
    const_g = g is not None and g.kind == "constant"
    if f == "GPL3":
        if _eq(spec.gamma, 1.0):
            return gpl2(spec.mu, spec.sigma, g)
        if const_g:
            return pareto4(spec.mu, spec.sigma, spec.gamma, g.alpha)
    if f == "GPL2":
        if const_g:
            return pareto2(spec.mu, spec.sigma, g.alpha)
        if _eq(spec.mu, spec.sigma):
            return gpl1(spec.sigma, g)
    if f == "GPL1" and const_g:
        return pareto1(spec.sigma, g.alpha)
    if f == "Pareto4":
        if _eq(spec.gamma, 1.0):
            return pareto2(spec.mu, spec.sigma, spec.alpha)
        if _eq(spec.alpha, 1.0):
            return pareto3(spec.mu, spec.sigma, spec.gamma)
        if _eq(spec.mu, 0.0):
            return burr12(spec.sigma, spec.gamma, spec.alpha)
    if f == "Pareto3":
        if _eq(spec.gamma, 1.0):
            return pareto2(spec.mu, spec.sigma, 1.0)
        if _eq(spec.mu, 0.0):
            return fisk(spec.sigma, spec.gamma)
    if f == "Pareto2":
        if _eq(spec.mu, 0.0):
            return lomax(spec.sigma, spec.alpha)
        if _eq(spec.mu, spec.sigma):
            return pareto1(spec.sigma, spec.alpha)
    if f == "BurrXII":
        if _eq(spec.gamma, 1.0):
            return lomax(spec.sigma, spec.alpha)
        if _eq(spec.alpha, 1.0):
            return fisk(spec.sigma, spec.gamma)
    if f == "Fisk" and _eq(spec.gamma, 1.0):
        return lomax(spec.sigma, 1.0)
    return None


def reduce_hierarchy(spec: DistributionSpec) -> DistributionSpec | None:
    """Most specific equivalent family, or ``None`` when no reduction applies.

    Reductions follow the special-case edges of the GPL/Pareto hierarchy
    (gamma = 1, mu = 0, mu = sigma, constant g, alpha = 1), applied until
    none matches.  Edge conditions are tested with a relative tolerance of
    1e-12.
    """
    current = _step(spec)
    if current is None:
        return None
    while True:
        nxt = _step(current)
        if nxt is None:
            return current
        current = nxt
