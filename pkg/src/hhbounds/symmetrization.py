"""Symmetrization of a function over the cyclic vertex maps of a simplex.

For a simplex ``S`` with vertices ``v_0..v_n`` the symmetrization of ``f`` is

    F(x) = sum_{k=0}^{n} f(sigma_k(x)),

where ``sigma_k`` rotates the barycentric coordinates of ``x`` by ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .functions import ClassTag, FunctionSpec, _norm_sq
from ._rng import seed_sequence
from .polynomial import Polynomial
from .quadrature import cartesian_to_barycentric, sample_uniform
from .simplex import Simplex, apply_cyclic, to_barycentric

__all__ = [
    "SymmetrizedFunction",
    "ConstancyViolation",
    "symmetrize",
    "vertex_sum_identity",
    "additive_symmetrization_constant",
    "strong_convexity_modulus_check",
    "cyclic_linear_parts",
    "symmetrized_norm_sq_modulus",
]


class ConstancyViolation(AssertionError):
    def __init__(self, message, worst_probe=None, spread=None):
        super().__init__(message)
        self.worst_probe = worst_probe
        self.spread = spread


@dataclass(frozen=True, eq=False)
class SymmetrizedFunction:
    base: Callable
    simplex: Simplex
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.simplex.n

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        x2 = np.atleast_2d(x)
        t = to_barycentric(self.simplex, x2)
        verts = self.simplex.vertices
        total = np.zeros(x2.shape[0])
        # the barycentric solve is done once and rolled for every shift
        for k in range(self.n + 1):
            total += np.asarray(self.base(np.roll(t, -k, axis=1) @ verts), dtype=float).reshape(-1)
        return float(total[0]) if single else total

    @property
    def polynomial_form(self) -> Optional[Polynomial]:
        """Barycentric polynomial of ``F`` on this simplex, if ``base`` is polynomial."""
        if "poly" not in self._cache:
            self._cache["poly"] = _symmetrized_polynomial(self.base, self.simplex)
        return self._cache["poly"]

    @property
    def class_tag(self) -> Optional[ClassTag]:
        return getattr(self.base, "class_tag", None)

    @property
    def base_modulus(self) -> Optional[float]:
        return getattr(self.base, "modulus", None)


def symmetrize(f, S: Simplex) -> SymmetrizedFunction:
    """Sum of ``f`` composed with each of the ``n + 1`` cyclic maps of ``S``.

    ``f`` is a :class:`FunctionSpec` or any vectorised callable. The polynomial
    form of the result is built on first use.
    """
    return SymmetrizedFunction(f, S)


def _symmetrized_polynomial(f, S: Simplex) -> Optional[Polynomial]:
    # sigma_k maps S onto itself, so a polynomial valid on S is all F needs
    cart = f.polynomial_on(S) if isinstance(f, FunctionSpec) else None
    if cart is None:
        return None
    p = cartesian_to_barycentric(S, cart)
    m = S.n + 1
    # sigma_k rotates barycentric coordinates, so F's polynomial is the sum of
    # the rotated copies of p
    poly = Polynomial(m)
    for k in range(m):
        poly = poly + p.permute([(i + k) % m for i in range(m)])
    return poly


def vertex_sum_identity(F: SymmetrizedFunction) -> tuple[float, float]:
    """``(sum_i F(v_i), (n+1) sum_i f(v_i))``; equal for every ``f``."""
    v = F.simplex.vertices
    lhs = float(np.sum(F(v)))
    rhs = (F.n + 1) * float(np.sum(np.asarray(F.base(v), dtype=float)))
    return lhs, rhs


def additive_symmetrization_constant(w, S: Simplex, probes, tol: float = 1e-10,
                                     cyclic=apply_cyclic) -> float:
    """Check that the symmetrization of ``x -> <w, x>`` is constant.

    The constant is ``<w, v_0 + ... + v_n>``. Every probe (inside or outside
    ``S``) must reproduce it to within ``tol * (1 + |constant|)``; otherwise
    :class:`ConstancyViolation` reports the worst probe. ``cyclic`` is the map
    ``(S, k, x) -> sigma_k(x)`` and can be swapped for testing.
    """
    w = np.asarray(w, dtype=float)
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    if probes.size == 0:
        raise ValueError("need at least one probe")
    const = float(w @ S.vertices.sum(axis=0))
    values = np.zeros(probes.shape[0])
    for k in range(S.n + 1):
        values += np.atleast_2d(cyclic(S, k, probes)) @ w
    err = np.abs(values - const)
    worst = int(np.argmax(err))
    if err[worst] > tol * (1.0 + abs(const)):
        raise ConstancyViolation(
            f"symmetrized linear map is not constant: spread {err[worst]:.3e} at probe {worst}",
            worst_probe=probes[worst], spread=float(err[worst]),
        )
    return const


def strong_convexity_modulus_check(F: SymmetrizedFunction, c: float, trials: int = 1000,
                                   rng_seed=None, modulus: Optional[float] = None) -> float:
    """Largest sampled strong-convexity violation of ``F`` with modulus ``(n+1) c``.

    Returns the max over ``(x, y, t)`` with ``x, y`` uniform in the simplex of
    ``F(tx+(1-t)y) - t F(x) - (1-t) F(y) + m t(1-t) ||x-y||^2``, where ``m``
    defaults to ``(n+1) c``. Pass ``modulus`` to test a different ``m``.
    """
    S = F.simplex
    m = (S.n + 1) * c if modulus is None else modulus
    if trials < 2:
        raise ValueError("trials must be >= 2")
    pair_seed, t_seed = seed_sequence(rng_seed).spawn(2)
    pts = sample_uniform(S, 2 * trials, pair_seed)
    x, y = pts[:trials], pts[trials:]
    t = np.random.default_rng(t_seed).uniform(0.0, 1.0, size=(trials, 1))
    # the endpoints t = 0, 1 are exact equalities; keep them in the sample
    t[:2, 0] = (0.0, 1.0)
    lhs = F(t * x + (1 - t) * y)
    rhs = t[:, 0] * F(x) + (1 - t[:, 0]) * F(y) - m * (t * (1 - t))[:, 0] * _norm_sq(x - y)
    return float((lhs - rhs).max())


def cyclic_linear_parts(S: Simplex) -> list[np.ndarray]:
    """Linear parts ``A_k`` of the affine maps ``sigma_k(x) = A_k x + b_k``."""
    n = S.n
    out = []
    for k in range(n + 1):
        b = apply_cyclic(S, k, np.zeros(n))
        cols = apply_cyclic(S, k, np.eye(n)) - b
        out.append(cols.T)
    return out


def symmetrized_norm_sq_modulus(S: Simplex) -> float:
    """Strong-convexity modulus of the symmetrization of ``||x||^2`` on ``S``.

    Equals the smallest eigenvalue of ``sum_k A_k^T A_k``. It is ``n + 1`` when
    every ``A_k`` is orthogonal (``n = 1`` or a regular simplex) and smaller in
    general; a strongly Wright-convex ``f`` with modulus ``c`` has a
    symmetrization that is strongly convex with modulus at least ``c`` times
    this number.
    """
    M = sum(A.T @ A for A in cyclic_linear_parts(S))
    return float(np.linalg.eigvalsh(M).min())
