"""Hermite-Hadamard bounds on simplices for convex, Wright-convex and
strongly (Wright-)convex functions.

The package is organised bottom-up:

``simplex``
    simplices, barycentric coordinates and the cyclic vertex maps
``quadrature``
    exact polynomial integration and Monte Carlo over simplices
``functions``
    self-describing test functions for each convexity class
``symmetrization``
    the cyclic symmetrization ``F = sum_k f o sigma_k`` and its identities
``bounds``
    the inequality chains and their verdicts
``cli``
    the ``hhbounds`` command line front end
"""

from .bounds import (
    BoundReport,
    Family,
    IntegratorConfig,
    PositiveLinearFunctional,
    Status,
    classical_hh,
    make_barycenter_functional,
    make_quadrature_functional,
    make_vertex_average_functional,
    operator_hh,
    strongly_convex_hh,
    strongly_wright_hh,
    wright_hh,
)
from .functions import (
    ClassTag,
    FunctionSpec,
    from_descriptor,
    make_affine,
    make_concave_control,
    make_exp_linear,
    make_max_affine,
    make_norm_power,
    make_quadratic_form,
    make_strongly_convex,
    make_strongly_wright,
    make_wright,
    make_zero,
    midpoint_convexity_deficit,
    strong_wright_deficit,
)
from .polynomial import Polynomial
from .quadrature import (
    IntegralEstimate,
    integrate_mc,
    integrate_polynomial,
    mean_norm_sq,
    moment_unit_simplex,
    sample_uniform,
)
from .simplex import (
    CyclicPermutation,
    Simplex,
    apply_cyclic,
    from_barycentric,
    make_simplex,
    random_simplex,
    regular_simplex,
    to_barycentric,
    unit_simplex,
)
from .symmetrization import (
    SymmetrizedFunction,
    additive_symmetrization_constant,
    strong_convexity_modulus_check,
    symmetrize,
    vertex_sum_identity,
)

__version__ = "0.1.0"
