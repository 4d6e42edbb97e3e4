"""
Simplices, barycentric coordinates and cyclic maps
==================================================

A simplex in R^n is stored as its n+1 vertices. Every point has a unique
set of barycentric weights, and rotating those weights gives the cyclic
maps that drive the symmetrization.
"""

import numpy as np

from hhbounds import apply_cyclic, from_barycentric, make_simplex, to_barycentric

S = make_simplex([[0.0, 0.0], [2.0, 0.0], [0.5, 1.5]])
print("volume:", S.volume)
print("barycenter:", S.barycenter)

# weights of a point inside and a point outside the triangle
for x in ([0.5, 0.5], [3.0, 1.0]):
    t = to_barycentric(S, x)
    print(x, "->", np.round(t, 4), "sum", t.sum())

# round trip
t = np.array([0.2, 0.3, 0.5])
print("from weights", t, "->", from_barycentric(S, t))

# the shift by k sends vertex j to vertex j-k and fixes the barycenter
for k in range(3):
    print("shift", k, "vertices ->", np.round(apply_cyclic(S, k, S.vertices), 12).tolist())
print("barycenter fixed:", np.allclose(apply_cyclic(S, 1, S.barycenter), S.barycenter))

# on an interval the single non-trivial shift is the reflection x -> a+b-x
I = make_simplex([[1.0], [4.0]])
print("reflection of 1.5 in [1, 4]:", apply_cyclic(I, 1, [1.5]))
