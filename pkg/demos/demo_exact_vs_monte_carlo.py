"""
Exact moments versus Monte Carlo
================================

Polynomials are integrated exactly through the Dirichlet moment formula on
barycentric coordinates. Everything else falls back to seeded Monte Carlo
with a standard error.
"""

import math

import numpy as np

from hhbounds import Polynomial, integrate_mc, integrate_polynomial, unit_simplex
from hhbounds.quadrature import cartesian_to_barycentric

# the second moment of a coordinate on the unit simplex is 2/(n+2)!
for n in (1, 2, 4, 8):
    S = unit_simplex(n)
    p = cartesian_to_barycentric(S, Polynomial.variable(n, 0) ** 2)
    exact = integrate_polynomial(S, p).value
    mc = integrate_mc(S, lambda x: x[:, 0] ** 2, 200_000, n)
    print(f"n={n}: exact {exact:.6e}  2/(n+2)! {2 / math.factorial(n + 2):.6e}  "
          f"mc {mc.value:.6e} +- {mc.std_error:.1e}")

# a non-polynomial integrand: int over the unit triangle of exp(x+y) is 1
S = unit_simplex(2)
for seed in (1, 2):
    est = integrate_mc(S, lambda x: np.exp(x.sum(axis=1)), 1_000_000, seed)
    print(f"seed {seed}: {est.value:.7f} +- {est.std_error:.1e}")
