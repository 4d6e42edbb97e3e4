"""Integration over simplices.

Polynomials are integrated exactly through the Dirichlet moment formula

    int_S prod t_i^a_i dx = |S| n! prod(a_i!) / (n + |a|)!

in barycentric coordinates. Everything else goes through plain Monte Carlo
with uniform samples and a reported standard error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from ._rng import seed_sequence
from .polynomial import Polynomial
from .simplex import Simplex, from_barycentric

__all__ = [
    "EXACT",
    "MONTE_CARLO",
    "IntegralEstimate",
    "NonFiniteSample",
    "moment_unit_simplex",
    "barycentric_moment",
    "cartesian_to_barycentric",
    "integrate_polynomial",
    "mean_polynomial",
    "sample_uniform",
    "integrate_mc",
    "mean_mc",
    "mean_norm_sq",
    "mean_norm_sq_closed_form",
    "norm_sq_polynomial",
    "CHUNK_SIZE",
]

EXACT = "exact"
MONTE_CARLO = "monte_carlo"

# fixed so that results never depend on how a run is split up
CHUNK_SIZE = 1 << 16


class NonFiniteSample(ArithmeticError):
    pass


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    kind: str = EXACT
    std_error: float = 0.0
    n_samples: int = 0

    def __post_init__(self):
        if self.kind == EXACT:
            if self.std_error != 0.0 or self.n_samples != 0:
                raise ValueError("exact estimates carry no sampling error")
        elif self.kind == MONTE_CARLO:
            if self.n_samples < 2 or self.std_error < 0:
                raise ValueError("Monte Carlo estimates need >= 2 samples and std_error >= 0")
        else:
            raise ValueError(f"unknown estimate kind {self.kind!r}")

    @property
    def is_exact(self) -> bool:
        return self.kind == EXACT

    def scaled(self, factor: float) -> "IntegralEstimate":
        return IntegralEstimate(
            self.value * factor, self.kind, self.std_error * abs(factor), self.n_samples
        )

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "kind": self.kind,
            "std_error": self.std_error,
            "n_samples": self.n_samples,
        }


def _dirichlet_ratio(n: int, alpha) -> Fraction:
    num = 1
    for a in alpha:
        num *= math.factorial(int(a))
    return Fraction(num, math.factorial(n + sum(int(a) for a in alpha)))


def moment_unit_simplex(n: int, alpha) -> float:
    """``int x_1^a_1 ... x_n^a_n dx`` over the unit simplex in R^n.

    Computed as an exact rational ``prod(a_i!) / (n + |a|)!`` and rounded once.
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n:
        raise ValueError(f"multi-index needs {n} entries, got {len(alpha)}")
    if min(alpha, default=0) < 0:
        raise ValueError("exponents must be non-negative")
    return float(_dirichlet_ratio(n, alpha))


def barycentric_moment(S: Simplex, alpha) -> float:
    """``int_S prod t_i^a_i dx`` for barycentric exponents ``alpha`` (n+1 entries)."""
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != S.n + 1:
        raise ValueError(f"barycentric multi-index needs {S.n + 1} entries")
    return S.volume * float(math.factorial(S.n) * _dirichlet_ratio(S.n, alpha))


def _as_barycentric_poly(S: Simplex, p) -> Polynomial:
    if isinstance(p, Polynomial):
        poly = p
    else:
        poly = Polynomial(S.n + 1, {tuple(alpha): c for c, alpha in p})
    if poly.nvars != S.n + 1:
        raise ValueError(f"expected a polynomial in {S.n + 1} barycentric variables")
    return poly


def cartesian_to_barycentric(S: Simplex, p: Polynomial) -> Polynomial:
    """Rewrite a polynomial in ``x_1..x_n`` as one in the barycentric ``t_0..t_n`` of ``S``."""
    if p.nvars != S.n:
        raise ValueError(f"expected a polynomial in {S.n} Cartesian variables")
    # x_j = sum_i t_i v_ij
    forms = [Polynomial.linear(S.vertices[:, j]) for j in range(S.n)]
    return p.substitute(forms)


def integrate_polynomial(S: Simplex, p) -> IntegralEstimate:
    """Exact ``int_S p dx`` for ``p`` in barycentric coordinates.

    ``p`` is a :class:`Polynomial` in ``n + 1`` variables or an iterable of
    ``(coefficient, multi_index)`` pairs.
    """
    poly = _as_barycentric_poly(S, p)
    total = math.fsum(c * barycentric_moment(S, alpha) for alpha, c in poly.terms.items())
    return IntegralEstimate(total)


def mean_polynomial(S: Simplex, p) -> IntegralEstimate:
    """Exact integral mean ``(1/|S|) int_S p dx`` (no volume factor)."""
    poly = _as_barycentric_poly(S, p)
    fact = math.factorial(S.n)
    total = math.fsum(
        c * float(fact * _dirichlet_ratio(S.n, alpha)) for alpha, c in poly.terms.items()
    )
    return IntegralEstimate(total)


def _chunk_rngs(count: int, rng_seed):
    seq = seed_sequence(rng_seed)
    nchunks = -(-count // CHUNK_SIZE)
    for i, child in enumerate(seq.spawn(nchunks)):
        yield np.random.default_rng(child), min(CHUNK_SIZE, count - i * CHUNK_SIZE)


def _sample_chunks(S: Simplex, count: int, rng_seed):
    for rng, m in _chunk_rngs(count, rng_seed):
        # flat Dirichlet weights from normalised exponential spacings
        e = rng.standard_exponential((m, S.n + 1))
        t = e / e.sum(axis=1, keepdims=True)
        yield from_barycentric(S, t)


def sample_uniform(S: Simplex, count: int, rng_seed=None) -> np.ndarray:
    """``count`` i.i.d. uniform points on ``S``, shape ``(count, n)``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return np.vstack(list(_sample_chunks(S, count, rng_seed)))


def mean_mc(S: Simplex, f: Callable, count: int, rng_seed=None) -> IntegralEstimate:
    """Monte Carlo estimate of the integral mean ``(1/|S|) int_S f dx``.

    ``f`` must accept an ``(m, n)`` array and return ``m`` values.
    """
    if count < 2:
        raise ValueError("Monte Carlo needs at least 2 samples")
    # streaming sums; chunk boundaries are fixed by CHUNK_SIZE so the result
    # does not depend on anything but (S, f, count, seed)
    total = 0.0
    total_sq = 0.0
    shift = None
    for pts in _sample_chunks(S, count, rng_seed):
        vals = np.asarray(f(pts), dtype=float).reshape(-1)
        if not np.all(np.isfinite(vals)):
            raise NonFiniteSample("integrand returned a non-finite value")
        if shift is None:
            shift = float(vals[0])
        d = vals - shift
        total += float(d.sum())
        total_sq += float(d @ d)
    mean_d = total / count
    var = max(total_sq - count * mean_d**2, 0.0) / (count - 1)
    return IntegralEstimate(shift + mean_d, MONTE_CARLO, math.sqrt(var / count), count)


def integrate_mc(S: Simplex, f: Callable, count: int, rng_seed=None) -> IntegralEstimate:
    """Monte Carlo estimate of ``int_S f dx`` (the mean times ``|S|``)."""
    return mean_mc(S, f, count, rng_seed).scaled(S.volume)


def norm_sq_polynomial(n: int) -> Polynomial:
    return Polynomial.quadratic(np.eye(n))


def mean_norm_sq(S: Simplex) -> float:
    """Exact ``(1/|S|) int_S ||x||^2 dx`` via the barycentric moment engine."""
    p = cartesian_to_barycentric(S, norm_sq_polynomial(S.n))
    return mean_polynomial(S, p).value


def mean_norm_sq_closed_form(S: Simplex) -> float:
    """``(sum ||v_i||^2 + ||sum v_i||^2) / ((n+1)(n+2))``; an independent route to :func:`mean_norm_sq`."""
    v = S.vertices
    n = S.n
    s = v.sum(axis=0)
    return float((np.sum(v * v) + s @ s) / ((n + 1) * (n + 2)))
