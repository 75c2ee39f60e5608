"""Generalized Power Law (GPL) size distributions for left-censored data.

Submodules
----------
gfunction      catalog of g-functions and their GPL conditions
distributions  the GPL hierarchy and comparison families
estimation     censored maximum likelihood, standard errors, BIC
tail_analysis  Pareto tail detection with bootstrap KS p-values
gof            censored Anderson-Darling and bootstrap p-values
summary_stats  quantile-based descriptive statistics
census         CSV ingestion, rank-size series, model comparison
cli            batch command-line front end
"""
from ._errors import (ConvergenceError, DegenerateSampleError, DomainError, GPLError,
                      NoTailError, ParameterError, SingularInformationError, ValidationError)
from .census import (ComparisonReport, CensusFile, RankSizeSeries, compare_models,
                     load_census_csv, rank_size_series, read_census_csv, write_census_csv)
from .distributions import (FAMILIES, DistributionSpec, burr12, cdf, chosen_gpl2, dagum, density,
                            fisk, gpl1, gpl2, gpl3, log_density, log_survival, lognormal, lomax,
                            pareto1, pareto2, pareto3, pareto4, quantile, reduce_hierarchy, sample,
                            standard_gpl, survival)
from .estimation import (CensoredSample, FitResult, bic, censored_log_likelihood, fit_mle,
                         hill_estimator, make_model, standard_errors)
from .gfunction import KINDS, GFunction, tail_limit_class, validate_gpl_conditions
from .gof import GofReport, anderson_darling_censored, bootstrap_gof, bootstrap_pvalue_ad
from .rng import RandomSource
from .summary_stats import QuantileSummary, summarize
from .tail_analysis import TailReport, bootstrap_pvalue_ks, find_tail_lower_bound, ks_statistic

__version__ = "0.1.0"
