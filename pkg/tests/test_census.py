import csv
import io
import json
import math

import numpy as np
import pytest

from gpltail import RandomSource
from gpltail import distributions as D
from gpltail._errors import DegenerateSampleError, ValidationError
from gpltail.census import (
    compare_models,
    load_census_csv,
    month_tag,
    rank_size_series,
    read_census_csv,
    write_census_csv,
)
from gpltail.estimation import CensoredSample


def write(tmp_path, text, name="2017-12.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


# -- loading -----------------------------------------------------------------

def test_load_example(tmp_path):
    s = load_census_csv(write(tmp_path, "unit,workers\nA,<5\nB,10\nC,7\n"))
    assert s.observed.tolist() == [7.0, 10.0]
    assert s.censored_count == 1 and s.censor_threshold == 4.0


def test_month_tag(tmp_path):
    assert read_census_csv(write(tmp_path, "unit,workers\nA,9\n")).month == "2017-12"
    assert month_tag("data/afiliados_2009-03_final.csv") == "2009-03"
    assert month_tag("plain.csv") is None


def test_semicolon_delimiter_and_custom_marker(tmp_path):
    s = load_census_csv(write(tmp_path, "unit;workers\nA;*\nB;12\n"), censor_marker="*")
    assert s.observed.tolist() == [12.0] and s.censored_count == 1


@pytest.mark.parametrize("text", ["", "unit,workers\n", "unit,workers\n\n\n"])
def test_empty_data(tmp_path, text):
    with pytest.raises(DegenerateSampleError):
        load_census_csv(write(tmp_path, text))


@pytest.mark.parametrize("text,line,what", [
    ("unit,workers\nA,10\nA,12\n", 3, "duplicate"),
    ("unit,workers\nA,10\nB,4\n", 3, "censor threshold"),
    ("unit,workers\nA,ten\n", 2, "cannot parse"),
    ("unit,workers\nA,10,3\n", 2, "2 columns"),
    ("unit,workers\nA,10\nB,7.5\n", 3, "cannot parse"),
])
def test_validation_errors_carry_line(tmp_path, text, line, what):
    with pytest.raises(ValidationError, match=f"line {line}: .*{what}"):
        load_census_csv(write(tmp_path, text))


def test_round_trip(tmp_path):
    x = np.ceil(D.sample(D.chosen_gpl2(1, 0.5, 100), 3000, RandomSource(1)))
    s = CensoredSample.from_values(x, 4.0)
    p = tmp_path / "out.csv"
    write_census_csv(p, s)
    t = load_census_csv(p)
    assert t.n_total == s.n_total and t.censored_count == s.censored_count
    np.testing.assert_array_equal(t.observed, s.observed)
    assert not (tmp_path / "out.csv.tmp").exists()


# -- rank-size series --------------------------------------------------------

def test_rank_size_examples():
    x = np.array([1.5, 2, 3, 4, 5, 6, 7, 10, 8])
    series = rank_size_series(x, D.pareto1(1, 1))
    assert series.x.size == x.size + 200
    assert series.x[0] == 10.0 and series.empirical_rank[0] == 1
    assert series.model_value[0] == pytest.approx(1.0, rel=1e-14)
    assert np.all(np.isnan(series.empirical_rank[x.size:]))
    np.testing.assert_array_equal(series.empirical_rank[:x.size], np.arange(1, 10))


def test_rank_size_censored_uses_n_total():
    s = CensoredSample([5.0, 10.0], 8, 4.0)
    series = rank_size_series(s, D.pareto1(1, 1))
    assert series.model_value[0] == pytest.approx(11 * 0.1, rel=1e-14)


def test_rank_size_csv():
    text = rank_size_series([2.0, 3.0, 9.0], D.pareto1(1, 1), n_fill=5).to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["x", "empirical_rank", "model_value"]
    assert len(rows) == 1 + 3 + 5
    assert rows[1][:2] == ["9.0", "1"] and rows[4][1] == ""


# -- model comparison --------------------------------------------------------

def test_compare_single_family():
    s = CensoredSample.from_values(D.sample(D.lomax(50, 1.2), 500, RandomSource(2)), 4.0)
    rep = compare_models(s, ["lomax"])
    assert rep.bic_differences == {} and rep.fits["lomax"].converged


def test_compare_gpl2_data_prefers_gpl2():
    x = D.sample(D.chosen_gpl2(1.0, 0.8, 50.0), 8000, RandomSource(3))
    rep = compare_models(CensoredSample.from_values(x, 4.0))
    assert set(rep.bic_differences) == {"dagum", "lognormal", "lomax", "burr12", "fisk"}
    assert rep.bic_differences["lomax"] > 0
    assert all(f.n_obs == 8000 for f in rep.fits.values())
    d = json.loads(json.dumps(rep.to_dict()))
    assert d["reference"] == "gpl2"


@pytest.mark.parametrize("seed", range(3))
def test_compare_lomax_nesting_bound(seed):
    s = CensoredSample.from_values(D.sample(D.lomax(100, 1.5), 5000, RandomSource(40 + seed)), 4.0)
    rep = compare_models(s, ["gpl2", "lomax"])
    diff = rep.bic_differences["lomax"]
    half_log_n = 0.5 * math.log(s.n_total)
    # GPL(II) nests Lomax, so its log-likelihood is at least as large up to optimizer tolerance
    assert -half_log_n - 1e-4 <= diff <= -half_log_n + 5.0
