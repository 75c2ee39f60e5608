"""Parameter settings shared by the module tests and the acceptance suite."""
import warnings

import numpy as np
from scipy import integrate

from gpltail import GFunction
from gpltail import distributions as D

const = lambda a: GFunction("constant", alpha=a)

# every special-case edge of the hierarchy diagram: (label, [(general, special), ...])
EDGES = [
    ("GPL3 -> P(IV), g = alpha", [
        (D.gpl3(mu, s, c, const(a)), D.pareto4(mu, s, c, a))
        for mu, s, c, a in [(0, 1, 2, 1.5), (1, 3, 0.5, 0.7), (-2, 0.5, 1.3, 3)]]),
    ("GPL3 -> P(III), g = 1", [
        (D.gpl3(mu, s, c, const(1.0)), D.pareto3(mu, s, c))
        for mu, s, c in [(0, 1, 2), (1, 3, 0.5), (-2, 0.5, 1.3)]]),
    ("GPL3 -> GPL2, gamma = 1", [
        (D.gpl3(mu, s, 1.0, g), D.gpl2(mu, s, g))
        for mu, s, g in [(0, 1, GFunction("log_ratio", alpha=1, beta=0.5)),
                         (2, 5, GFunction("benini", alpha=0.8, beta=1)),
                         (-1, 0.3, GFunction("weibull", beta=1.7))]]),
    ("P(IV) -> P(III), alpha = 1", [
        (D.pareto4(mu, s, c, 1.0), D.pareto3(mu, s, c))
        for mu, s, c in [(0, 1, 2), (1, 3, 0.5), (-2, 0.5, 1.3)]]),
    ("P(IV) -> P(II), gamma = 1", [
        (D.pareto4(mu, s, 1.0, a), D.pareto2(mu, s, a))
        for mu, s, a in [(0, 1, 1.5), (1, 3, 0.7), (-2, 0.5, 3)]]),
    ("P(IV) -> Burr XII, mu = 0", [
        (D.pareto4(0.0, s, c, a), D.burr12(s, c, a))
        for s, c, a in [(1, 2, 1.5), (3, 0.5, 0.7), (0.5, 1.3, 3)]]),
    ("Burr XII -> Fisk, alpha = 1", [
        (D.burr12(s, c, 1.0), D.fisk(s, c)) for s, c in [(1, 2), (3, 0.5), (0.5, 1.3)]]),
    ("Burr XII -> Lomax, gamma = 1", [
        (D.burr12(s, 1.0, a), D.lomax(s, a)) for s, a in [(1, 1.5), (3, 0.7), (0.5, 3)]]),
    ("P(III) -> Fisk, mu = 0", [
        (D.pareto3(0.0, s, c), D.fisk(s, c)) for s, c in [(1, 2), (3, 0.5), (0.5, 1.3)]]),
    ("GPL2 -> GPL1, mu = sigma", [
        (D.gpl2(s, s, g), D.gpl1(s, g))
        for s, g in [(1, GFunction("log_ratio", alpha=1, beta=0.5)),
                     (5, GFunction("pps", alpha=0.8, beta=1)),
                     (0.3, GFunction("ratio_z", alpha=2, beta=-1))]]),
    ("GPL2 -> P(II), g = alpha", [
        (D.gpl2(mu, s, const(a)), D.pareto2(mu, s, a))
        for mu, s, a in [(0, 1, 1.5), (1, 3, 0.7), (-2, 0.5, 3)]]),
    ("P(II) -> P(I), mu = sigma", [
        (D.pareto2(s, s, a), D.pareto1(s, a)) for s, a in [(1, 1.5), (3, 0.7), (0.5, 3)]]),
    ("P(II) -> Lomax, mu = 0", [
        (D.pareto2(0.0, s, a), D.lomax(s, a)) for s, a in [(1, 1.5), (3, 0.7), (0.5, 3)]]),
    ("GPL1 -> P(I), g = alpha", [
        (D.gpl1(s, const(a)), D.pareto1(s, a)) for s, a in [(1, 1.5), (3, 0.7), (0.5, 3)]]),
    ("GPL1 = GPL3(sigma, sigma, 1)", [
        (D.gpl3(s, s, 1.0, g), D.gpl1(s, g))
        for s, g in [(1, GFunction("log_shift", alpha=1, beta=0.5)),
                     (4, GFunction("power_growth", alpha=0.5, beta=0.5)),
                     (0.2, GFunction("gompertz", beta=0.4))]]),
]


def edge_grid(spec, n=64):
    """n log-spaced points above the support lower bound."""
    s = spec.sigma if spec.sigma is not None else 1.0
    return spec.lower_bound + s * np.logspace(-3, 4, n)


# three settings for each of the 13 families
FAMILY_SETTINGS = {
    "StandardGPL": [D.standard_gpl(GFunction("log_ratio", alpha=1, beta=0.5)),
                    D.standard_gpl(GFunction("benini", alpha=1, beta=1)),
                    D.standard_gpl(GFunction("weibull", beta=1.5))],
    "GPL1": [D.gpl1(2, GFunction("log_shift", alpha=1.5, beta=0.5)),
             D.gpl1(1, GFunction("power_ratio", alpha=0.8, beta=-0.5)),
             D.gpl1(10, GFunction("pps", alpha=1, beta=0.5))],
    "GPL2": [D.gpl2(1, 3, GFunction("log_ratio", alpha=1, beta=0.8)),
             D.chosen_gpl2(0.7, 1.5, 100),
             D.gpl2(-2, 0.5, GFunction("gompertz", beta=0.3))],
    "GPL3": [D.gpl3(0, 1, 2, GFunction("log_ratio", alpha=1, beta=0.5)),
             D.gpl3(5, 2, 0.5, GFunction("ratio_z", alpha=1, beta=1)),
             D.gpl3(0, 10, 1.5, GFunction("rayleigh"))],
    "Pareto1": [D.pareto1(1, 1), D.pareto1(2, 0.7), D.pareto1(0.1, 3)],
    "Pareto2": [D.pareto2(0, 1, 1), D.pareto2(1, 2, 0.7), D.pareto2(-1, 0.5, 3)],
    "Pareto3": [D.pareto3(0, 1, 1), D.pareto3(1, 2, 0.5), D.pareto3(0, 1, 1.5)],
    "Pareto4": [D.pareto4(0, 1, 2, 1.5), D.pareto4(1, 2, 0.5, 0.7), D.pareto4(-1, 3, 1, 2)],
    "Lomax": [D.lomax(1, 1), D.lomax(100, 1.5), D.lomax(0.5, 0.8)],
    "Fisk": [D.fisk(1, 1), D.fisk(2, 0.5), D.fisk(50, 1.2)],
    "BurrXII": [D.burr12(1, 1, 1), D.burr12(2, 0.5, 2), D.burr12(100, 1.5, 1.2)],
    "Dagum": [D.dagum(2, 1, 1), D.dagum(1.5, 100, 0.5), D.dagum(3, 10, 2)],
    "Lognormal": [D.lognormal(0, 1), D.lognormal(5, 1.5), D.lognormal(-1, 0.3)],
}


def total_mass(spec) -> float:
    """Quadrature of the density over the support, in t = log(x - lower bound)."""
    lb = spec.lower_bound
    f = lambda t: float(D.density(spec, lb + np.exp(t))) * np.exp(t)
    edges = np.arange(-60.0, 241.0, 10.0)
    with warnings.catch_warnings():
        # integrable endpoint singularities (e.g. power_ratio with beta < 0) trip quad's heuristics
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return sum(integrate.quad(f, a, b, limit=200, epsabs=1e-14, epsrel=1e-12)[0]
                   for a, b in zip(edges[:-1], edges[1:]))


def spliced_sample(seed, n_total=8000, n_tail=768, splice_at=1000.0, alpha=1.0):
    """Lognormal body truncated below ``splice_at`` plus an exact Pareto tail above it."""
    from gpltail import RandomSource

    gen = RandomSource(seed).generator()
    body = D.lognormal(np.log(100.0), 0.7)
    top = float(D.cdf(body, splice_at))
    x_body = D.quantile(body, gen.uniform(0.0, top, n_total - n_tail))
    x_tail = splice_at * (1.0 - gen.uniform(size=n_tail)) ** (-1.0 / alpha)
    return np.concatenate([x_body, x_tail])
