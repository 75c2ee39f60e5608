"""Left-censored maximum likelihood, standard errors, BIC and the Hill estimator."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from ._errors import DegenerateSampleError, ParameterError, SingularInformationError
from .distributions import (
    DistributionSpec,
    burr12,
    dagum,
    fisk,
    gpl2,
    log_cdf,
    log_density,
    lognormal,
    lomax,
    pareto1,
)
from .gfunction import GFunction, _CATALOG

__all__ = [
    "CensoredSample",
    "FitResult",
    "Model",
    "FIT_FAMILIES",
    "make_model",
    "censored_log_likelihood",
    "fit_mle",
    "standard_errors",
    "observed_information_se",
    "bic",
    "hill_estimator",
]

SCHEMA_VERSION = 1
REFERENCE_INIT = {"alpha": 1.0, "beta": 0.0, "sigma": 1.0}


@dataclass(frozen=True)
class CensoredSample:
    """Observed values above a censor threshold plus a count of censored units.

    ``observed`` holds the N - r uncensored values (sorted on construction);
    the r censored units are only known to be ``<= censor_threshold``.
    """

    observed: np.ndarray
    censored_count: int = 0
    censor_threshold: float = 4.0

    def __post_init__(self):
        obs = np.sort(np.asarray(self.observed, dtype=float).ravel())
        obs.setflags(write=False)
        object.__setattr__(self, "observed", obs)
        r = int(self.censored_count)
        if r != self.censored_count or r < 0:
            raise ParameterError("censored_count must be a nonnegative integer")
        object.__setattr__(self, "censored_count", r)
        if not np.all(np.isfinite(obs)):
            raise ParameterError("observed values must be finite")
        if obs.size and r and obs[0] <= self.censor_threshold:
            raise ParameterError("observed values must exceed the censor threshold")
        if obs.size + r < 1:
            raise DegenerateSampleError("sample is empty (N = 0)")

    @property
    def n_total(self) -> int:
        return int(self.observed.size + self.censored_count)

    @property
    def n_observed(self) -> int:
        return int(self.observed.size)

    @classmethod
    def from_values(cls, values, censor_threshold: float = 4.0) -> "CensoredSample":
        """Censor raw values: everything ``<= censor_threshold`` becomes a censored unit."""
        v = np.asarray(values, dtype=float)
        keep = v > censor_threshold
        return cls(v[keep], int(np.count_nonzero(~keep)), censor_threshold)

    def scaled(self, c: float) -> "CensoredSample":
        return CensoredSample(self.observed * c, self.censored_count, self.censor_threshold * c)

    def to_dict(self) -> dict:
        return {"observed": self.observed.tolist(), "censored_count": self.censored_count,
                "censor_threshold": self.censor_threshold}


# -- models --------------------------------------------------------------

_LOG = "log"
_IDENT = "identity"


def _to_free(kind, lower, v):
    if kind == _IDENT:
        return v
    with np.errstate(divide="ignore"):
        return math.log(v - lower) if v > lower else -math.inf


def _from_free(kind, lower, u):
    if kind == _IDENT:
        return u
    return lower + math.exp(min(u, 700.0))


@dataclass(frozen=True)
class Model:
    """A fittable family: named free parameters and how they map to a spec.

    Positive (or bounded-below) parameters are optimized on the log scale of
    their distance to the bound.
    """

    name: str
    param_names: tuple
    builder: Callable[[dict], DistributionSpec]
    bounds: tuple  # per parameter: (transform, lower bound)
    default_init: Callable[["CensoredSample"], dict]
    fixed: dict = field(default_factory=dict)

    @property
    def n_params(self) -> int:
        return len(self.param_names)

    def build(self, params: dict) -> DistributionSpec:
        return self.builder({**self.fixed, **params})

    def to_free(self, params: dict) -> np.ndarray:
        return np.array([_to_free(k, lo, float(params[n]))
                         for n, (k, lo) in zip(self.param_names, self.bounds)])

    def from_free(self, u) -> dict:
        return {n: _from_free(k, lo, float(ui))
                for n, (k, lo), ui in zip(self.param_names, self.bounds, u)}

    def params_of(self, spec: DistributionSpec) -> dict:
        p = spec.params
        if self.name == "dagum":
            return {"a": 1.0 / spec.gamma, "b": spec.sigma, "p": spec.alpha}
        return {n: p[n] for n in self.param_names}


def _median(sample: CensoredSample) -> float:
    if sample.n_observed:
        return float(np.median(sample.observed))
    return float(sample.censor_threshold) if sample.censor_threshold > 0 else 1.0


def _log_moments(sample: CensoredSample):
    obs = sample.observed
    if obs.size >= 2 and np.all(obs > 0):
        lx = np.log(obs)
        return float(lx.mean()), float(max(lx.std(), 1e-3))
    return math.log(max(_median(sample), 1e-300)), 1.0


def _gpl2_model(g_kind: str) -> Model:
    info = _CATALOG[g_kind]
    names, bounds = [], []
    if info.has_alpha:
        names.append("alpha")
        bounds.append((_LOG, 0.0))
    if info.beta_lower is not None:
        names.append("beta")
        bounds.append((_LOG, info.beta_lower))
    names.append("sigma")
    bounds.append((_LOG, 0.0))

    def build(p):
        g = GFunction(g_kind, alpha=p.get("alpha"), beta=p.get("beta"))
        return gpl2(0.0, p["sigma"], g)

    def init(sample):
        d = {"sigma": 1.0}
        if info.has_alpha:
            d["alpha"] = 1.0
        if info.beta_lower is not None:
            d["beta"] = 0.0 if info.beta_lower < 0 else (0.1 if info.has_alpha else 1.0)
        return d

    name = "gpl2" if g_kind == "log_ratio" else f"gpl2:{g_kind}"
    return Model(name, tuple(names), build, tuple(bounds), init)


def _simple(name, names, bounds, build, init):
    return Model(name, tuple(names), build, tuple(bounds), init)


#: Names accepted by :func:`make_model`.
FIT_FAMILIES = ("gpl2", "lomax", "fisk", "burr12", "dagum", "lognormal", "pareto1")


def make_model(family: str, g_kind: str | None = None, **fixed) -> Model:
    """Fittable model by name.

    ``"gpl2"`` is GPL(II) with mu = 0 and, by default, the log-ratio
    g-function (pass ``g_kind`` to pick another catalog row).  ``"pareto1"``
    fits only alpha and needs a fixed ``sigma``.
    """
    fam = family.lower()
    if fam.startswith("gpl2:"):
        fam, g_kind = "gpl2", fam.split(":", 1)[1]
    if fam == "gpl2":
        kind = g_kind or "log_ratio"
        if kind not in _CATALOG:
            raise ParameterError(f"unknown g kind {kind!r}")
        return _gpl2_model(kind)
    if g_kind is not None:
        raise ParameterError(f"{family} takes no g-function")
    pos = (_LOG, 0.0)
    if fam == "lomax":
        return _simple("lomax", ("alpha", "sigma"), (pos, pos),
                       lambda p: lomax(p["sigma"], p["alpha"]),
                       lambda s: {"alpha": 1.0, "sigma": _median(s)})
    if fam == "fisk":
        return _simple("fisk", ("sigma", "gamma"), (pos, pos),
                       lambda p: fisk(p["sigma"], p["gamma"]),
                       lambda s: {"sigma": _median(s), "gamma": 1.0})
    if fam in ("burr12", "burrxii", "singh_maddala"):
        return _simple("burr12", ("sigma", "gamma", "alpha"), (pos, pos, pos),
                       lambda p: burr12(p["sigma"], p["gamma"], p["alpha"]),
                       lambda s: {"sigma": _median(s), "gamma": 1.0, "alpha": 1.0})
    if fam == "dagum":
        return _simple("dagum", ("a", "b", "p"), (pos, pos, pos),
                       lambda p: dagum(p["a"], p["b"], p["p"]),
                       lambda s: {"a": 1.0, "b": _median(s), "p": 1.0})
    if fam == "lognormal":
        return _simple("lognormal", ("mu", "sigma"), ((_IDENT, 0.0), pos),
                       lambda p: lognormal(p["mu"], p["sigma"]),
                       lambda s: dict(zip(("mu", "sigma"), _log_moments(s))))
    if fam == "pareto1":
        if "sigma" not in fixed:
            raise ParameterError("pareto1 fits need a fixed sigma (the tail lower bound)")
        return Model("pareto1", ("alpha",), lambda p: pareto1(p["sigma"], p["alpha"]),
                     (pos,), lambda s: {"alpha": 1.0}, dict(fixed))
    raise ParameterError(f"unknown family {family!r}; expected one of {FIT_FAMILIES}")


# -- likelihood ----------------------------------------------------------

def censored_log_likelihood(spec: DistributionSpec, sample: CensoredSample) -> float:
    """r * log F(x0) + sum of log f over the observed values.

    Returns ``-inf`` when an observed value lies outside the support or the
    censor threshold carries no probability mass.
    """
    ll = 0.0
    if sample.censored_count:
        lc = float(log_cdf(spec, sample.censor_threshold))
        if not lc > -math.inf:
            return -math.inf
        ll += sample.censored_count * lc
    if sample.n_observed:
        with np.errstate(all="ignore"):
            ll += float(np.sum(log_density(spec, sample.observed)))
    return ll if not math.isnan(ll) else -math.inf


def bic(log_likelihood: float, d: int, n: int) -> float:
    """log L - d/2 * log N (larger is better)."""
    if n < 1:
        raise ParameterError("N must be >= 1")
    return float(log_likelihood - 0.5 * d * math.log(n))


def hill_estimator(tail_values, x_min: float) -> float:
    """Hill estimate n / sum(log(x_i / x_min)) of the Pareto tail index."""
    x = np.asarray(tail_values, dtype=float)
    if x.size < 1:
        raise ParameterError("need at least one tail value")
    if not x_min > 0 or np.any(x < x_min):
        raise ParameterError("tail values must be >= x_min > 0")
    s = float(np.sum(np.log(x / x_min)))
    if s == 0.0:
        raise ZeroDivisionError("all tail values equal x_min; Hill estimate is undefined")
    return x.size / s


# -- standard errors -----------------------------------------------------

def _hessian(f, theta, rel_step=1e-4):
    theta = np.asarray(theta, dtype=float)
    k = theta.size
    with np.errstate(all="ignore"):
        return _hessian_body(f, theta, rel_step, k)


def _hessian_body(f, theta, rel_step, k):
    h = rel_step * np.maximum(np.abs(theta), 1e-2)
    f0 = f(theta)
    H = np.empty((k, k))
    for i in range(k):
        ei = np.zeros(k)
        ei[i] = h[i]
        H[i, i] = (f(theta + ei) - 2.0 * f0 + f(theta - ei)) / h[i] ** 2
        for j in range(i):
            ej = np.zeros(k)
            ej[j] = h[j]
            H[i, j] = H[j, i] = (f(theta + ei + ej) - f(theta + ei - ej)
                                 - f(theta - ei + ej) + f(theta - ei - ej)) / (4.0 * h[i] * h[j])
    return H


def observed_information_se(loglik: Callable, theta, rel_step: float = 1e-4,
                            cond_limit: float = 1e-10) -> np.ndarray:
    """Square roots of diag(I^-1), with I the negative finite-difference Hessian.

    Raises SingularInformationError when I is not numerically positive definite.
    """
    H = _hessian(loglik, theta, rel_step)
    info = -0.5 * (H + H.T)
    if not np.all(np.isfinite(info)):
        raise SingularInformationError("information matrix has non-finite entries")
    eig = np.linalg.eigvalsh(info)
    if eig[0] <= cond_limit * max(eig[-1], 0.0) or eig[-1] <= 0:
        raise SingularInformationError(
            f"information matrix not positive definite (eigenvalues {eig.tolist()})")
    cov = np.linalg.inv(info)
    return np.sqrt(np.diag(cov))


def standard_errors(model: Model, params: dict, sample: CensoredSample) -> dict:
    """Observed-information standard errors of the model parameters at ``params``."""
    names = model.param_names

    def ll(theta):
        try:
            spec = model.build(dict(zip(names, theta)))
        except ParameterError:
            return math.nan
        return censored_log_likelihood(spec, sample)

    se = observed_information_se(ll, [params[n] for n in names])
    return dict(zip(names, (float(v) for v in se)))


# -- fitting -------------------------------------------------------------

@dataclass
class FitResult:
    model: str
    spec: DistributionSpec
    params: dict
    std_errors: dict | None
    log_likelihood: float
    bic: float
    n_params: int
    n_obs: int
    converged: bool
    iterations: int
    gradient_norm: float
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "model": self.model,
            "spec": self.spec.to_dict(),
            "params": self.params,
            "std_errors": self.std_errors,
            "log_likelihood": self.log_likelihood,
            "bic": self.bic,
            "n_params": self.n_params,
            "n_obs": self.n_obs,
            "converged": self.converged,
            "iterations": self.iterations,
            "gradient_norm": self.gradient_norm,
            "message": self.message,
        }


_BAD = 1e10
# free-parameter magnitude treated as a drift to the edge of the parameter space
_BOUNDARY = 25.0


def _objective(model: Model, sample: CensoredSample):
    n = sample.n_total

    def f(u):
        try:
            spec = model.build(model.from_free(u))
        except (ParameterError, OverflowError):
            return _BAD
        ll = censored_log_likelihood(spec, sample)
        return -ll / n if math.isfinite(ll) else _BAD

    return f


def _fd_grad(f, u, rel_step=1e-6):
    u = np.asarray(u, dtype=float)
    g = np.empty_like(u)
    for i in range(u.size):
        h = rel_step * max(1.0, abs(u[i]))
        e = np.zeros_like(u)
        e[i] = h
        g[i] = (f(u + e) - f(u - e)) / (2.0 * h)
    return g


def _run(model, sample, init: dict, maxiter: int, gtol: float):
    f = _objective(model, sample)
    u0 = model.to_free(init)
    if not np.all(np.isfinite(u0)):
        raise ParameterError(f"initial values {init} lie on or outside the parameter bounds")
    total_iter = 0
    u = u0
    res = None
    for _ in range(3):
        res = optimize.minimize(f, u, jac=lambda v: _fd_grad(f, v), method="L-BFGS-B",
                                options={"maxiter": maxiter, "gtol": gtol * 1e-3, "ftol": 1e-15,
                                         "maxcor": 20})
        total_iter += int(res.nit)
        u = res.x
        gn = float(np.linalg.norm(_fd_grad(f, u)))
        if gn < gtol or res.nit == 0:
            break
    fval = f(u)
    gn = float(np.linalg.norm(_fd_grad(f, u)))
    return u, fval, gn, total_iter, str(res.message)


def fit_mle(model: Model | str, sample: CensoredSample, init: dict | None = None, *,
            gtol: float = 1e-6, maxiter: int = 1000, multistart: bool = True,
            compute_se: bool = True) -> FitResult:
    """Censored maximum-likelihood fit.

    The optimizer works on log-transformed parameters and minimizes the
    negative mean log-likelihood with L-BFGS-B and central-difference
    gradients.  ``converged`` means the gradient norm of that objective in the
    transformed space fell below ``gtol``.  For GPL(II) the default start is
    (alpha, beta, sigma) = (1, 0, 1); if that does not converge the fit is
    restarted from sigma = sample median, alpha = 1, beta in {-0.5, 0, 1}.
    Non-convergence is reported in the result, never raised.
    """
    if isinstance(model, str):
        model = make_model(model)
    d = model.n_params
    if sample.n_observed < d + 1:
        raise DegenerateSampleError(
            f"{model.name} needs at least {d + 1} uncensored points, got {sample.n_observed}")
    start = dict(init) if init is not None else model.default_init(sample)
    f = _objective(model, sample)
    f_init = f(model.to_free(start))

    starts = [start]
    if multistart:
        med = _median(sample)
        if model.name.startswith("gpl2"):
            base = model.default_init(sample)
            for b in (-0.5, 0.0, 1.0):
                alt = dict(base, sigma=med)
                if "alpha" in alt:
                    alt["alpha"] = 1.0
                if "beta" in alt:
                    lo = dict(zip(model.param_names, model.bounds))["beta"][1]
                    alt["beta"] = b if b > lo else lo + 0.5
                starts.append(alt)
        else:
            starts.append(model.default_init(sample))

    best = None
    tried = set()
    for s in starts:
        key = tuple(sorted(s.items()))
        if key in tried:
            continue
        tried.add(key)
        try:
            u, fval, gn, nit, msg = _run(model, sample, s, maxiter, gtol)
        except (ParameterError, FloatingPointError, ValueError, OverflowError) as exc:
            u, fval, gn, nit, msg = model.to_free(s), f_init, math.inf, 0, f"failed: {exc}"
        cand = (gn < gtol and fval < _BAD, -fval, u, gn, nit, msg)
        if best is None or (cand[0], cand[1]) > (best[0], best[1]):
            best = cand
        if best[0] and s is start:
            break
    converged, neg_f, u, gn, nit, msg = best
    if -neg_f < -f_init:  # never return something worse than the start
        u, neg_f, gn, converged = model.to_free(start), -f_init, math.inf, False
        msg = "optimizer did not improve on the initial values"

    if np.any(np.abs(u) > _BOUNDARY):
        converged = False
        msg = f"{msg}; estimate drifted to the parameter-space boundary"
    params = model.from_free(u)
    spec = model.build(params)
    ll = censored_log_likelihood(spec, sample)
    se = None
    if compute_se and math.isfinite(ll):
        try:
            se = standard_errors(model, params, sample)
        except SingularInformationError as exc:
            msg = f"{msg}; standard errors unavailable: {exc}"
    n = sample.n_total
    return FitResult(model.name, spec, params, se, float(ll),
                     bic(ll, d, n) if math.isfinite(ll) else -math.inf,
                     d, n, bool(converged), int(nit), float(gn), msg)
