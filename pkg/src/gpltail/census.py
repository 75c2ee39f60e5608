"""Census-file ingestion, rank-size series and information-criterion model comparison."""
from __future__ import annotations

import csv
import io
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._errors import DegenerateSampleError, GPLError, ValidationError
from .distributions import DistributionSpec, survival
from .estimation import CensoredSample, FitResult, fit_mle, make_model

__all__ = [
    "CensusFile",
    "read_census_csv",
    "load_census_csv",
    "write_census_csv",
    "month_tag",
    "RankSizeSeries",
    "rank_size_series",
    "ComparisonReport",
    "compare_models",
    "COMPARISON_FAMILIES",
]

SCHEMA_VERSION = 1
COMPARISON_FAMILIES = ("gpl2", "dagum", "lognormal", "lomax", "burr12", "fisk")
_MONTH = re.compile(r"(\d{4})-(\d{2})")


def month_tag(path) -> str | None:
    """YYYY-MM tag embedded in a file name, if any."""
    m = _MONTH.search(Path(path).name)
    return f"{m.group(1)}-{m.group(2)}" if m else None


@dataclass
class CensusFile:
    units: list
    workers: list  # int, or None for censored units
    month: str | None = None
    censor_threshold: float = 4.0

    def to_sample(self) -> CensoredSample:
        obs = [w for w in self.workers if w is not None]
        r = sum(1 for w in self.workers if w is None)
        if not obs and not r:
            raise DegenerateSampleError("census file has no data rows")
        return CensoredSample(np.asarray(obs, dtype=float), r, self.censor_threshold)


def read_census_csv(path, censor_marker: str = "<5", censor_threshold: float = 4) -> CensusFile:
    """Parse a ``unit,workers`` file; censored units carry ``censor_marker``."""
    text = Path(path).read_text(encoding="utf-8-sig")
    lines = text.splitlines()
    if not lines:
        raise DegenerateSampleError(f"{path}: empty file")
    try:
        dialect = csv.Sniffer().sniff(lines[0], delimiters=",;\t")
    except csv.Error:
        dialect = csv.excel
    reader = csv.reader(io.StringIO(text), dialect)
    header = next(reader, None)
    if header is None or len(header) < 2:
        raise ValidationError("expected a header row with two columns", line=1)
    units, workers, seen = [], [], set()
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ValidationError(f"expected 2 columns, found {len(row)}", line=lineno)
        unit, raw = row[0].strip(), row[1].strip()
        if unit in seen:
            raise ValidationError(f"duplicate unit identifier {unit!r}", line=lineno)
        seen.add(unit)
        if raw == censor_marker:
            value = None
        else:
            try:
                value = int(raw)
            except ValueError:
                raise ValidationError(f"cannot parse workers value {raw!r}", line=lineno) from None
            if value <= censor_threshold:
                raise ValidationError(
                    f"value {value} <= censor threshold {censor_threshold} but not marked "
                    f"{censor_marker!r}", line=lineno)
        units.append(unit)
        workers.append(value)
    if not units:
        raise DegenerateSampleError(f"{path}: no data rows")
    return CensusFile(units, workers, month_tag(path), float(censor_threshold))


def load_census_csv(path, censor_marker: str = "<5", censor_threshold: float = 4) -> CensoredSample:
    return read_census_csv(path, censor_marker, censor_threshold).to_sample()


def write_census_csv(path, sample: CensoredSample, censor_marker: str = "<5", prefix: str = "u") -> None:
    """Write a sample back out in the ``unit,workers`` layout (values rounded to integers)."""
    rows = [(f"{prefix}{i:06d}", censor_marker) for i in range(sample.censored_count)]
    rows += [(f"{prefix}{sample.censored_count + i:06d}", str(int(round(v))))
             for i, v in enumerate(sample.observed)]
    tmp = f"{path}.tmp"
    with open(tmp, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["unit", "workers"])
        w.writerows(rows)
    os.replace(tmp, path)


@dataclass
class RankSizeSeries:
    """Aligned rank-size rows: data points first, then model fill points (rank NaN)."""

    x: np.ndarray
    empirical_rank: np.ndarray
    model_value: np.ndarray
    n_data: int

    def rows(self):
        for x, r, m in zip(self.x, self.empirical_rank, self.model_value):
            yield float(x), (None if np.isnan(r) else int(r)), float(m)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "empirical_rank", "model_value"])
        for x, r, m in self.rows():
            w.writerow([repr(x), "" if r is None else r, repr(m)])
        return buf.getvalue()


def rank_size_series(values, spec: DistributionSpec, n_total: int | None = None,
                     n_fill: int = 200) -> RankSizeSeries:
    """Rank-size points and the model curve ``(n + 1) * S(x)``.

    Ranks count down from the largest value (rank 1).  ``n_total`` defaults to
    the number of values; pass N for censored samples so the model curve is
    scaled by N + 1.
    """
    if isinstance(values, CensoredSample):
        n_total = values.n_total if n_total is None else n_total
        values = values.observed
    x = np.sort(np.asarray(values, dtype=float))[::-1]
    if x.size == 0:
        raise DegenerateSampleError("rank-size series needs at least one value")
    n = x.size if n_total is None else int(n_total)
    ranks = np.arange(1, x.size + 1, dtype=float)
    lo, hi = float(x[-1]), float(x[0])
    if lo > 0 and hi > lo:
        fill = np.logspace(np.log10(lo), np.log10(hi), n_fill)
    else:
        fill = np.linspace(lo, hi if hi > lo else lo + 1.0, n_fill)
    xs = np.concatenate([x, fill])
    model = (n + 1.0) * survival(spec, xs)
    rank_col = np.concatenate([ranks, np.full(n_fill, np.nan)])
    return RankSizeSeries(xs, rank_col, model, int(x.size))


@dataclass
class ComparisonReport:
    reference: str
    fits: dict
    bic_differences: dict
    failures: dict = field(default_factory=dict)
    n_obs: int = 0

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "reference": self.reference,
            "n_obs": self.n_obs,
            "fits": {k: v.to_dict() for k, v in self.fits.items()},
            "bic_differences": self.bic_differences,
            "failures": self.failures,
        }


def compare_models(sample: CensoredSample, families=COMPARISON_FAMILIES,
                   reference: str = "gpl2") -> ComparisonReport:
    """Fit each family by censored ML and report BIC(reference) - BIC(other).

    Positive differences favour the reference model.  Families whose fit
    fails or does not converge are listed under ``failures`` and left out of
    the differences.
    """
    families = list(families)
    if reference not in families:
        reference = families[0]
    fits: dict[str, FitResult] = {}
    failures = {}
    for fam in families:
        try:
            res = fit_mle(make_model(fam), sample)
        except GPLError as exc:
            failures[fam] = str(exc)
            continue
        fits[fam] = res
        if not res.converged:
            failures[fam] = res.message or "not converged"
    diffs = {}
    ref = fits.get(reference)
    if ref is not None and ref.converged:
        for fam, res in fits.items():
            if fam != reference and res.converged:
                diffs[fam] = ref.bic - res.bic
    return ComparisonReport(reference, fits, diffs, failures, sample.n_total)
