"""Power-law upper-tail detection.

The tail model is the classical Pareto ``S(x) = (x / x_min) ** -alpha`` with
``x_min`` the smallest tail value and alpha the Hill estimate.  Fit quality is
measured with a Kolmogorov-Smirnov distance against the plotting-position
empirical cdf ``rank / (n + 1)``, and its p-value is estimated by a fully
parametric bootstrap (simulate from the fitted Pareto, refit, recompute).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ._errors import DegenerateSampleError, NoTailError, ParameterError
from .distributions import DistributionSpec, cdf, pareto1
from .estimation import CensoredSample, hill_estimator
from .rng import RandomSource, as_random_source

__all__ = [
    "TailReport",
    "empirical_cdf",
    "ks_statistic",
    "bootstrap_pvalue_ks",
    "find_tail_lower_bound",
]

SCHEMA_VERSION = 1
MIN_TAIL = 10
# elements per simulated block of replicates
_BLOCK_ELEMENTS = 1 << 21
# stream index reserved for the screening reference table
_SCREEN_STREAM = (1 << 63) - 1


@dataclass
class TailReport:
    x_min: float
    alpha_hat: float
    tail_size: int
    n_total: int
    tail_fraction: float
    ks_statistic: float
    p_value: float
    replicates: int
    candidates_tested: int = 0

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, **asdict(self)}


def empirical_cdf(sorted_values, query):
    """(number of values <= query) / (n + 1)."""
    v = np.asarray(sorted_values, dtype=float)
    if v.size < 1:
        raise ParameterError("need at least one value")
    return np.searchsorted(v, query, side="right") / (v.size + 1.0)


def ks_statistic(tail_values, spec: DistributionSpec) -> float:
    """max_i |F_n(x_i) - F(x_i)| over the sample points, F_n the plotting-position cdf."""
    x = np.sort(np.asarray(tail_values, dtype=float))
    fn = empirical_cdf(x, x)
    return float(np.max(np.abs(fn - cdf(spec, x))))


def _pareto_ks_logs(y, fn):
    """KS of a Hill-fitted Pareto given sorted y = log(x / min x) and the ecdf values."""
    s = y.sum(axis=-1, keepdims=True)
    n = y.shape[-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = n / s
    F = -np.expm1(-alpha * y)
    return np.max(np.abs(fn - F), axis=-1)


def _empirical_ks(x_sorted):
    """KS and Hill alpha of sorted tail values against Pareto(min, Hill)."""
    y = np.log(x_sorted / x_sorted[0])
    fn = np.searchsorted(x_sorted, x_sorted, side="right") / (x_sorted.size + 1.0)
    s = float(y.sum())
    if s == 0.0:
        raise ZeroDivisionError("all tail values are equal; Hill estimate is undefined")
    alpha = x_sorted.size / s
    F = -np.expm1(-alpha * y)
    return float(np.max(np.abs(fn - F))), alpha


def _replicate_ks(n: int, alpha: float, replicates: int, src: RandomSource) -> np.ndarray:
    """KS statistics of ``replicates`` Pareto samples of size n, each refitted.

    Samples are generated already sorted: log(x / x_min) of a Pareto sample
    is exponential with rate alpha, and sorted exponentials are cumulative
    sums of E_j / (n - j + 1).  Blocks of replicates draw from derived
    streams so the result does not depend on evaluation order.
    """
    rows = max(1, _BLOCK_ELEMENTS // n)
    fn = np.arange(1, n + 1) / (n + 1.0)
    weights = 1.0 / np.arange(n, 0, -1, dtype=float)
    out = np.empty(replicates)
    for b, start in enumerate(range(0, replicates, rows)):
        m = min(rows, replicates - start)
        gen = src.child(b).generator()
        e = gen.standard_exponential((m, n))
        logs = np.cumsum(e * weights, axis=1) / alpha
        y = logs - logs[:, :1]
        out[start:start + m] = _pareto_ks_logs(y, fn)
    return out


def _pvalue(empirical: float, replicate_stats) -> float:
    """Fraction of replicates whose statistic strictly exceeds the empirical one."""
    r = np.asarray(replicate_stats, dtype=float)
    if r.size == 0:
        return math.nan
    return float(np.count_nonzero(empirical < r)) / r.size


def bootstrap_pvalue_ks(tail_values, replicates: int, rng) -> tuple[float, DistributionSpec]:
    """Parametric-bootstrap KS p-value for a Pareto fit to ``tail_values``.

    The Pareto is fitted with x_min = min(tail_values) and the Hill alpha;
    every replicate is simulated from that fit, refitted the same way and
    scored.  Returns ``(p_value, fitted_spec)``.
    """
    x = np.sort(np.asarray(tail_values, dtype=float))
    if x.size < 2:
        raise ParameterError("need at least two tail values")
    if replicates < 1:
        raise ParameterError("replicates must be >= 1")
    ks, alpha = _empirical_ks(x)
    reps = _replicate_ks(x.size, alpha, int(replicates), as_random_source(rng))
    return _pvalue(ks, reps), pareto1(float(x[0]), alpha)


class _Screen:
    """Coarse stage of the lower-bound scan.

    The Hill-refitted KS statistic is pivotal: its null distribution depends
    on the tail size only.  A reference sample of sqrt(n) * KS is simulated
    once per scan on a log-spaced grid of tail sizes; a candidate whose
    approximate p-value from that table is below ``ratio * significance`` is
    rejected without running its own bootstrap.
    """

    def __init__(self, n_max: int, significance: float, src: RandomSource, replicates: int = 400,
                 ratio: float = 0.25):
        sizes = np.unique(np.round(np.logspace(math.log10(MIN_TAIL), math.log10(max(n_max, MIN_TAIL)),
                                               24)).astype(int))
        self.log_sizes = np.log(sizes)
        self.tables = [np.sort(math.sqrt(m) * _replicate_ks(int(m), 1.0, replicates, src.child(i)))
                       for i, m in enumerate(sizes)]
        self.cutoff = ratio * significance

    def _exceed(self, i: int, t: float) -> float:
        tab = self.tables[i]
        return (tab.size - np.searchsorted(tab, t, side="right")) / tab.size

    def rejects(self, n: int, ks: float) -> bool:
        t = math.sqrt(n) * ks
        j = int(np.searchsorted(self.log_sizes, math.log(n)))
        if j == 0 or j == self.log_sizes.size:
            p = self._exceed(min(j, self.log_sizes.size - 1), t)
        else:
            w = (math.log(n) - self.log_sizes[j - 1]) / (self.log_sizes[j] - self.log_sizes[j - 1])
            p = (1 - w) * self._exceed(j - 1, t) + w * self._exceed(j, t)
        return p < self.cutoff


def find_tail_lower_bound(sample, significance: float = 0.1, replicates: int = 1000, rng=None, *,
                          min_tail: int = MIN_TAIL, screen: bool = True) -> TailReport:
    """Smallest sample value above which a Pareto tail is not rejected.

    Candidates are the distinct observed values in ascending order.  For each
    one the tail (values >= candidate) is fitted by Hill and its bootstrap KS
    p-value computed with ``replicates`` replicates; the first candidate with
    ``p >= significance`` is returned.  With ``screen=True`` clearly rejected
    candidates are skipped via a simulated reference table before the full
    bootstrap (disabled automatically when ``significance <= 0.01``).

    Raises NoTailError when no candidate with at least ``min_tail`` values
    is accepted.
    """
    if isinstance(sample, CensoredSample):
        x = np.asarray(sample.observed, dtype=float)
        n_total = sample.n_total
    else:
        x = np.sort(np.asarray(sample, dtype=float))
        n_total = x.size
    if not 0.0 <= significance <= 1.0:
        raise ParameterError("significance must lie in [0, 1]")
    uniq, first = np.unique(x, return_index=True)
    if uniq.size < 10:
        raise DegenerateSampleError("need at least 10 distinct uncensored values")
    if np.any(x <= 0):
        raise ParameterError("tail scan needs positive values")
    src = as_random_source(rng)
    sizes = x.size - first
    admissible = np.nonzero(sizes >= min_tail)[0]
    if admissible.size == 0:
        raise NoTailError(f"no candidate leaves a tail of at least {min_tail} values")

    scr = _Screen(int(sizes[admissible[0]]), significance, src.child(_SCREEN_STREAM)) \
        if screen and significance > 0.01 else None
    tested = 0
    for k in admissible:
        tail = x[first[k]:]
        n = tail.size
        try:
            ks, alpha = _empirical_ks(tail)
        except ZeroDivisionError:
            continue
        if scr is not None and scr.rejects(n, ks):
            continue
        tested += 1
        reps = _replicate_ks(n, alpha, int(replicates), src.child(int(k)))
        p = _pvalue(ks, reps)
        if p >= significance:
            return TailReport(float(uniq[k]), float(hill_estimator(tail, uniq[k])), int(n), int(n_total),
                              100.0 * n / n_total, ks, p, int(replicates), tested)
    raise NoTailError("no lower bound candidate reached the significance level")
