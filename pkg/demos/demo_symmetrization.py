"""
Symmetrizing a Wright-convex function
=====================================

A Wright-convex function here is a linear map plus a convex function. The
linear part can be huge, yet summing f over all cyclic maps turns it into
a constant, so the symmetrization F is convex.
"""

import numpy as np

from hhbounds import make_norm_power, make_wright, random_simplex, symmetrize
from hhbounds.functions import midpoint_convexity_deficit
from hhbounds.symmetrization import additive_symmetrization_constant, vertex_sum_identity

S = random_simplex(2, rng_seed=3)
w = np.array([800.0, -450.0])
f = make_wright(w, make_norm_power(4))
F = symmetrize(f, S)

b = S.barycenter
print("F(b) =", F(b), " (n+1) f(b) =", 3 * f(b))
print("vertex sums:", vertex_sum_identity(F))

# the linear part alone symmetrizes to <w, sum of vertices>
probes = np.random.default_rng(0).normal(scale=5.0, size=(100, 2))
print("additive constant:", additive_symmetrization_constant(w, S, probes),
      "expected", w @ S.vertices.sum(axis=0))

print("midpoint deficit of F:", midpoint_convexity_deficit(F, S, 10_000, 0))
