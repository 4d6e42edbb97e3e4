"""
Hermite-Hadamard chains
=======================

Four inequality chains are evaluated on the same simplex. Each report
carries the three terms, the margins and a verdict.
"""

from hhbounds import (
    classical_hh,
    make_exp_linear,
    make_norm_power,
    make_simplex,
    make_strongly_convex,
    make_strongly_wright,
    random_simplex,
    strongly_convex_hh,
    strongly_wright_hh,
    wright_hh,
)
from hhbounds.functions import make_concave_control, make_zero


def show(r):
    print(f"{r.family.value:16s} {r.lower:10.5f} <= {r.middle.value:10.5f} "
          f"({r.middle.kind}) <= {r.upper:10.5f}  {r.status.value}")


# x^2 on [0, 1]: classical (1/4, 1/3, 1/2), Wright (1/2, 2/3, 1)
I = make_simplex([0.0, 1.0])
show(classical_hh(make_norm_power(2), I))
show(wright_hh(make_norm_power(2), I))

# strong convexity tightens both ends
S = random_simplex(3, rng_seed=1)
f = make_strongly_convex(make_exp_linear([0.3, -0.2, 0.1]), 2.0)
r = strongly_convex_hh(f, S)
show(r)
print("  classical ends were", r.classical)

# c|x|^2 on [0, 1] makes all three terms of the strongly Wright chain equal c/3
show(strongly_wright_hh(make_strongly_wright(0.0, make_zero(), 1.5), I))

# a concave control breaks the chain
show(classical_hh(make_concave_control(make_norm_power(2)), I))
