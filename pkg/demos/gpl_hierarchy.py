"""
GPL distributions and their special cases
=========================================

A GPL survival function is ``(1 + z) ** -g(z)``.  Choosing g picks a member
of the family; a constant g gives back the classical Pareto laws.
"""

import numpy as np

from gpltail import GFunction, validate_gpl_conditions
from gpltail import distributions as D

# the log-ratio g used for the fitted model, and its admissibility check
g = GFunction("log_ratio", alpha=1.0, beta=0.5)
print(validate_gpl_conditions(g))

# GPL(II) with mu = 0 is the chosen model; its survival at a few sizes
spec = D.chosen_gpl2(1.0, 0.5, 100.0)
x = np.array([10.0, 100.0, 1e3, 1e4, 1e5])
print("S(x):", D.survival(spec, x))

# constant g collapses GPL(II) to Pareto(II), and mu = 0 to Lomax
lomax_as_gpl = D.gpl2(0.0, 100.0, GFunction("constant", alpha=1.5))
print("max |S_gpl - S_lomax|:", np.max(np.abs(D.survival(lomax_as_gpl, x) - D.survival(D.lomax(100, 1.5), x))))
print("reduced form:", D.reduce_hierarchy(lomax_as_gpl).family)

# regular variation of the standard form: S(tz)/S(z) approaches t^-alpha far in the tail
std = D.standard_gpl(g)
z = 1e8
for t in (2.0, 5.0, 10.0):
    print(f"t={t:>4}: S(tz)/S(z) = {float(D.survival(std, t * z) / D.survival(std, z)):.5f}"
          f"  vs t^-alpha = {t ** -1.0:.5f}")

# ... but S(z) (1+z)^alpha tends to exp(alpha*beta) for this g, not to 1
for z in (1e8, 1e50, 1e300):
    print(f"S(z)(1+z)^alpha at {z:.0e}: {float(D.survival(std, z)) * (1 + z):.5f}")
print(f"exp(alpha*beta) = {np.exp(0.5):.5f}")
