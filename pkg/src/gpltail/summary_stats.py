"""Quantile-based descriptive statistics of a (left-censored) size sample."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._errors import DegenerateSampleError, ParameterError
from .estimation import CensoredSample

__all__ = ["QuantileSummary", "empirical_quantile", "summarize"]

SCHEMA_VERSION = 1
_PROBS = (1 / 8, 2 / 8, 3 / 8, 4 / 8, 5 / 8, 6 / 8, 7 / 8)


def empirical_quantile(sorted_values, p: float) -> float:
    """Linear interpolation of the order statistics at rank p * (n + 1).

    The rank is clamped to [1, n], so p outside [1/(n+1), n/(n+1)] returns the
    sample minimum or maximum.
    """
    v = np.asarray(sorted_values, dtype=float)
    n = v.size
    if n < 1:
        raise ParameterError("need at least one value")
    if not 0.0 <= p <= 1.0:
        raise ParameterError("p must lie in [0, 1]")
    h = min(max(p * (n + 1), 1.0), float(n))
    lo = int(math.floor(h))
    frac = h - lo
    if frac == 0.0:
        return float(v[lo - 1])
    return float(v[lo - 1] + frac * (v[lo] - v[lo - 1]))


@dataclass
class QuantileSummary:
    sample_size: int
    censored_count: int
    maximum: float
    median: float
    half_iqr: float
    quartile_dev_coeff: float | None
    bowley_skew: float | None
    moors_kurtosis: float | None
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, **asdict(self)}


def summarize(sample: CensoredSample, strict: bool = True) -> QuantileSummary:
    """Median, half-IQR, quartile deviation, Bowley skewness and Moors kurtosis.

    Quantiles are taken over the uncensored values only.  Whenever the
    censored share r/N exceeds a requested probability the corresponding
    quantile of the full population is not identified and a warning is
    attached.  A zero interquartile range raises DegenerateSampleError when
    ``strict``; otherwise the ratio measures are returned as ``None``.

    Kurtosis follows the printed form
    ``[(Q(7/8) - Q(5/8)) - (Q(3/8) - Q(1/8))] / [Q(6/8) - Q(2/8)]``.
    """
    x = sample.observed
    if x.size == 0:
        raise DegenerateSampleError("no observed values to summarize")
    q = {p: empirical_quantile(x, p) for p in _PROBS}
    q1, q2, q3 = q[2 / 8], q[4 / 8], q[6 / 8]
    warnings = []
    share = sample.censored_count / sample.n_total
    for p in _PROBS:
        if share > p:
            warnings.append(f"censored share {share:.4f} exceeds p={p:.3f}; Q(p) is not identified")
    iqr = q3 - q1
    qdc = skew = kurt = None
    if iqr == 0.0:
        if strict:
            raise DegenerateSampleError("interquartile range is zero; ratio measures undefined")
        warnings.append("zero interquartile range; ratio measures unavailable")
    else:
        skew = (q3 - 2.0 * q2 + q1) / iqr
        kurt = ((q[7 / 8] - q[5 / 8]) - (q[3 / 8] - q[1 / 8])) / iqr
        qdc = iqr / (q3 + q1) if (q3 + q1) != 0 else None
    return QuantileSummary(sample.n_total, sample.censored_count, float(x[-1]), q2, iqr / 2.0,
                           qdc, skew, kurt, warnings)
