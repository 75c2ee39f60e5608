"""The ten acceptance criteria, each at its stated tolerance and time budget.

Every test records one PASS/FAIL line that is repeated in the terminal
summary under "acceptance criteria".
"""
import math
import subprocess
import sys
import time

import numpy as np
from scipy import stats

from gpltail import GFunction, RandomSource
from gpltail import distributions as D
from gpltail.census import compare_models
from gpltail.estimation import CensoredSample, censored_log_likelihood, fit_mle
from gpltail.gfunction import FINITE_LIMIT_KINDS
from gpltail.gof import anderson_darling_censored
from gpltail.tail_analysis import bootstrap_pvalue_ks, find_tail_lower_bound

import oracles as O
from cases import EDGES, FAMILY_SETTINGS, edge_grid, spliced_sample, total_mass

TRUTH = {"alpha": 1.0, "beta": 0.5, "sigma": 100.0}


def gpl2_censored(seed, n=8000):
    x = D.sample(D.chosen_gpl2(TRUTH["alpha"], TRUTH["beta"], TRUTH["sigma"]), n, RandomSource(seed))
    return CensoredSample.from_values(x, 4.0)


def test_criterion_01_hierarchy_identities(record):
    t0 = time.perf_counter()
    worst = 0.0
    for _, pairs in EDGES:
        for general, special in pairs:
            x = edge_grid(special, 64)
            worst = max(worst, float(np.max(np.abs(D.survival(general, x) - D.survival(special, x)))))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 1.0
    record(1, ok, f"{len(EDGES)} edges x 3 settings, max |dS| = {worst:.1e}, {dt:.2f}s")
    assert ok


def test_criterion_02_regular_variation_and_tail_equivalence(record):
    t0 = time.perf_counter()
    z = 1e8
    worst_rv, worst_eq, worst_kind = 0.0, 0.0, ""
    for kind in FINITE_LIMIT_KINDS:
        betas = [None] if kind == "constant" else [-0.5, 0.5]
        for alpha in (0.5, 1.0, 2.0):
            for beta in betas:
                spec = D.standard_gpl(GFunction(kind, alpha=alpha, beta=beta))
                s_z = float(D.survival(spec, z))
                for t in (2.0, 5.0, 10.0):
                    ratio = float(D.survival(spec, t * z)) / s_z
                    worst_rv = max(worst_rv, abs(ratio / t ** -alpha - 1.0))
                eq = abs(s_z / (1.0 + z) ** -alpha - 1.0)
                if eq > worst_eq:
                    worst_eq, worst_kind = eq, f"{kind}(alpha={alpha}, beta={beta})"
    dt = time.perf_counter() - t0
    rv_ok, eq_ok = worst_rv <= 0.01, worst_eq <= 0.01
    ok = rv_ok and eq_ok and dt < 1.0
    record(2, ok, f"S(tz)/S(z) vs t^-alpha max rel err {worst_rv:.2%} ({'ok' if rv_ok else 'fail'}); "
                  f"S(z)(1+z)^alpha max |.-1| {worst_eq:.2%} at {worst_kind} "
                  f"({'ok' if eq_ok else 'fail'}); {dt:.2f}s")
    assert ok


def test_criterion_03_expanded_likelihood(record):
    t0 = time.perf_counter()
    gen = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        a, b, sig = gen.uniform(0.2, 4), gen.uniform(-0.95, 4), 10 ** gen.uniform(-1, 3.5)
        x = 4.0 + 10 ** gen.uniform(-3, 5, int(gen.integers(1, 500)))
        r = int(gen.integers(0, 100))
        ours = censored_log_likelihood(D.chosen_gpl2(a, b, sig), CensoredSample(x, r, 4.0))
        ref = O.expanded_log_likelihood(a, b, sig, x, r, 4.0)
        worst = max(worst, abs(ours - ref) / abs(ref))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-8 and dt < 5.0
    record(3, ok, f"100 draws, max rel diff {worst:.1e}, {dt:.2f}s")
    assert ok


def test_criterion_04_mle_recovery(record):
    t0 = time.perf_counter()
    hits, converged = 0, 0
    for seed in range(20):
        res = fit_mle("gpl2", gpl2_censored(seed), init={"alpha": 1.0, "beta": 0.0, "sigma": 1.0})
        converged += res.converged
        if res.converged and res.std_errors is not None:
            hits += all(abs(res.params[k] - v) <= 3 * res.std_errors[k] for k, v in TRUTH.items())
    dt = time.perf_counter() - t0
    ok = hits >= 18 and dt < 300
    record(4, ok, f"{hits}/20 trials with every parameter within 3 SE ({converged}/20 converged), {dt:.1f}s")
    assert ok


def test_criterion_05_zipf_splice(record):
    t0 = time.perf_counter()
    hits = 0
    for seed in range(20):
        rep = find_tail_lower_bound(spliced_sample(seed, 8000, 768), 0.1, 500, RandomSource(seed))
        hits += 0.9 <= rep.alpha_hat <= 1.1 and 5.0 <= rep.tail_fraction <= 15.0
    dt = time.perf_counter() - t0
    ok = hits >= 14 and dt < 900
    record(5, ok, f"{hits}/20 trials with alpha in [0.9, 1.1] and tail share in [5%, 15%], {dt:.1f}s")
    assert ok


def test_criterion_06_pvalue_calibration(record):
    t0 = time.perf_counter()
    ps = []
    for seed in range(200):
        x = D.sample(D.pareto1(1.0, 1.0), 768, RandomSource(10_000 + seed))
        ps.append(bootstrap_pvalue_ks(x, 200, RandomSource(seed))[0])
    ks_p = stats.kstest(ps, "uniform").pvalue
    dt = time.perf_counter() - t0
    ok = ks_p > 0.01 and dt < 600
    record(6, ok, f"uniformity KS p = {ks_p:.3f} over 200 p-values, {dt:.1f}s")
    assert ok


def test_criterion_07_censored_ad(record):
    t0 = time.perf_counter()
    spec = D.pareto1(1, 1)
    e1 = abs(anderson_darling_censored(CensoredSample([2.0], 0, 0.5), spec) - (-1 + 2 * math.log(2)))
    e2 = abs(anderson_darling_censored(CensoredSample([2.0, 2.0], 0, 0.5), spec) - (-2 + 4 * math.log(2)))
    gen = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        spec = D.chosen_gpl2(gen.uniform(0.5, 2), gen.uniform(-0.5, 2), gen.uniform(10, 500))
        x = D.quantile(spec, gen.uniform(1e-4, 1 - 1e-4, int(gen.integers(2, 400))))
        ours = anderson_darling_censored(CensoredSample(x, 0, 0.0), spec)
        worst = max(worst, abs(ours - O.classical_ad(D.cdf(spec, x))))
    dt = time.perf_counter() - t0
    ok = e1 <= 1e-12 and e2 <= 1e-12 and worst <= 1e-10 and dt < 5.0
    record(7, ok, f"hand values err {max(e1, e2):.1e}, classical max diff {worst:.1e}, {dt:.2f}s")
    assert ok


def test_criterion_08_bic_comparison(record):
    t0 = time.perf_counter()
    positive, diffs = 0, []
    for seed in range(20):
        rep = compare_models(gpl2_censored(seed), ["gpl2", "lomax"])
        d = rep.bic_differences.get("lomax")
        diffs.append(d)
        positive += d is not None and d > 0
    dt = time.perf_counter() - t0
    ok = positive >= 16 and dt < 600
    lo = min(d for d in diffs if d is not None)
    record(8, ok, f"BIC(GPL2) - BIC(Lomax) > 0 in {positive}/20 trials (min {lo:.1f}), {dt:.1f}s")
    assert ok


def test_criterion_09_normalization(record):
    t0 = time.perf_counter()
    worst, where = 0.0, ""
    for family, specs in FAMILY_SETTINGS.items():
        for spec in specs:
            err = abs(total_mass(spec) - 1.0)
            if err >= worst:
                worst, where = err, family
    dt = time.perf_counter() - t0
    ok = worst <= 1e-6 and dt < 30
    record(9, ok, f"{len(FAMILY_SETTINGS)} families x 3 settings, max |mass - 1| = {worst:.1e} ({where}), {dt:.1f}s")
    assert ok


def test_criterion_10_cli_determinism(record, tmp_path):
    t0 = time.perf_counter()
    cli = [sys.executable, "-m", "gpltail"]
    data = tmp_path / "2017-12.csv"
    subprocess.run(cli + ["simulate", "--n", "2000", "--seed", "1", "--out", str(data)], check=True)
    same = {}
    for cmd in ("tail", "gof"):
        outs = [subprocess.run(cli + [cmd, "--seed", "42", str(data)], check=True,
                               capture_output=True).stdout for _ in range(2)]
        same[cmd] = outs[0] == outs[1] and len(outs[0]) > 0
    dt = time.perf_counter() - t0
    ok = all(same.values()) and dt < 60
    record(10, ok, f"byte-identical reruns: tail {same['tail']}, gof {same['gof']}, {dt:.1f}s")
    assert ok
