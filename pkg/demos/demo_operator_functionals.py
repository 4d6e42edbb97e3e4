"""
Chains with a positive linear functional
========================================

The middle term of the symmetrized chain can be any positive functional
that reproduces the means of the coordinates. The barycenter and the vertex
average sit at the two ends; a degree-2 rule lands in between.
"""

import numpy as np

from hhbounds import (
    make_barycenter_functional,
    make_quadrature_functional,
    make_vertex_average_functional,
    make_wright,
    operator_hh,
    random_simplex,
)
from hhbounds.functions import make_exp_linear

S = random_simplex(2, rng_seed=4)
f = make_wright(np.array([3.0, 1.0]), make_exp_linear([0.8, -0.5]))

for T in (make_barycenter_functional(S), make_quadrature_functional(S),
          make_vertex_average_functional(S), None):
    r = operator_hh(f, S, T)
    name = "integral mean" if T is None else T.name
    print(f"{name:15s} {r.lower:.6f} <= {r.middle.value:.6f} <= {r.upper:.6f}  "
          f"margins ({r.margin_lower:.2e}, {r.margin_upper:.2e})")

# mixtures of positive functionals stay admissible
mix = make_barycenter_functional(S).mix(make_vertex_average_functional(S), 0.25)
print(mix.name, operator_hh(f, S, mix).status.value)
