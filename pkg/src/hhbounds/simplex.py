"""Simplices in R^n, barycentric coordinates and the cyclic vertex maps.

Points are plain numpy arrays. Functions that take a point also accept a
stack of points of shape ``(m, n)`` and then return a stack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

__all__ = [
    "SimplexError",
    "DegenerateSimplex",
    "DimensionMismatch",
    "SolveFailure",
    "WeightSumError",
    "GenerationFailure",
    "Simplex",
    "CyclicPermutation",
    "make_simplex",
    "unit_simplex",
    "regular_simplex",
    "to_barycentric",
    "from_barycentric",
    "apply_cyclic",
    "cyclic_group",
    "random_simplex",
    "DEGENERACY_RATIO",
    "WEIGHT_SUM_TOL",
    "RANDOM_SIMPLEX_RETRIES",
]

DEGENERACY_RATIO = 1e-8
WEIGHT_SUM_TOL = 1e-10
RANDOM_SIMPLEX_RETRIES = 100


class SimplexError(ValueError):
    pass


class DegenerateSimplex(SimplexError):
    pass


class DimensionMismatch(SimplexError):
    pass


class SolveFailure(SimplexError):
    pass


class WeightSumError(SimplexError):
    pass


class GenerationFailure(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Simplex:
    """Non-degenerate simplex with vertices ``v_0, ..., v_n`` in R^n.

    Build it with :func:`make_simplex`; the constructor does the same
    validation. ``vertices`` has shape ``(n + 1, n)``.
    """

    vertices: np.ndarray
    volume: float = field(init=False)
    barycenter: np.ndarray = field(init=False)
    _lu: tuple = field(init=False, repr=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2:
            raise DimensionMismatch("vertices must be a 2-d array of shape (n+1, n)")
        n = v.shape[1]
        if n < 1 or v.shape[0] != n + 1:
            raise DimensionMismatch(
                f"expected n+1 points in R^n, got {v.shape[0]} points of dimension {n}"
            )
        if not np.all(np.isfinite(v)):
            raise SimplexError("vertex coordinates must be finite")

        edges = v[1:] - v[0]
        volume = abs(np.linalg.det(edges)) / math.factorial(n)
        diam = max(np.linalg.norm(v[i] - v[j]) for i in range(n + 1) for j in range(i))
        if diam == 0.0 or volume < DEGENERACY_RATIO * diam**n:
            raise DegenerateSimplex(
                f"volume {volume:.3e} below threshold for diameter {diam:.3e}"
            )

        # rows 0..n-1: vertex coordinates, last row: ones
        system = np.vstack([v.T, np.ones(n + 1)])
        lu = lu_factor(system, check_finite=False)
        v.setflags(write=False)
        bc = v.mean(axis=0)
        bc.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "volume", float(volume))
        object.__setattr__(self, "barycenter", bc)
        object.__setattr__(self, "_lu", lu)

    @property
    def n(self) -> int:
        return self.vertices.shape[1]

    def __len__(self):
        return self.n + 1

    def to_dict(self) -> dict:
        return {"n": self.n, "vertices": self.vertices.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Simplex":
        s = make_simplex(data["vertices"])
        if "n" in data and int(data["n"]) != s.n:
            raise DimensionMismatch(f"declared n={data['n']} but vertices live in R^{s.n}")
        return s


@dataclass(frozen=True)
class CyclicPermutation:
    """The cyclic shift ``i -> (i + shift) mod order`` of ``{0, ..., n}``."""

    shift: int
    order: int

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("order must be at least 2")
        object.__setattr__(self, "shift", self.shift % self.order)

    def __call__(self, i: int) -> int:
        return (i + self.shift) % self.order

    def compose(self, other: "CyclicPermutation") -> "CyclicPermutation":
        if other.order != self.order:
            raise ValueError("cannot compose shifts of different orders")
        return CyclicPermutation(self.shift + other.shift, self.order)

    def inverse(self) -> "CyclicPermutation":
        return CyclicPermutation(-self.shift, self.order)


def make_simplex(vertices) -> Simplex:
    """Validate ``vertices`` (n+1 points in R^n) and build a :class:`Simplex`."""
    try:
        v = np.asarray(vertices, dtype=float)
    except ValueError as exc:
        raise DimensionMismatch("vertices must all have the same dimension") from exc
    if v.ndim == 1 and v.size == 2:
        # two scalars: the interval [v0, v1]
        v = v.reshape(2, 1)
    return Simplex(v)


def unit_simplex(n: int) -> Simplex:
    """Simplex with vertices 0, e_1, ..., e_n."""
    return make_simplex(np.vstack([np.zeros(n), np.eye(n)]))


def regular_simplex(n: int, scale: float = 1.0) -> Simplex:
    """Regular simplex in R^n centred at the origin with edge length ``scale * sqrt(2)``."""
    # project the standard basis of R^{n+1} onto the hyperplane sum = 0, then pick
    # an orthonormal basis of that hyperplane
    e = np.eye(n + 1) - 1.0 / (n + 1)
    q, _ = np.linalg.qr(e[:, :n])
    return make_simplex(scale * e @ q)


def _as_points(S: Simplex, x) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    single = x.ndim <= 1
    x2 = np.atleast_2d(x.reshape(-1) if x.ndim == 0 else x)
    if x2.shape[-1] != S.n:
        raise DimensionMismatch(f"point has dimension {x2.shape[-1]}, simplex has {S.n}")
    return x2, single


def to_barycentric(S: Simplex, x) -> np.ndarray:
    """Barycentric coordinates of ``x`` with respect to the vertices of ``S``.

    The result sums to one; entries are negative for points outside ``S``.
    """
    x2, single = _as_points(S, x)
    rhs = np.hstack([x2, np.ones((x2.shape[0], 1))]).T
    t = lu_solve(S._lu, rhs, check_finite=False).T
    if not np.all(np.isfinite(t)):
        raise SolveFailure("barycentric system is numerically singular")
    return t[0] if single else t


def from_barycentric(S: Simplex, t, tol: float = WEIGHT_SUM_TOL) -> np.ndarray:
    """Map barycentric weights ``t`` (summing to one) to the point ``sum t_i v_i``."""
    t = np.asarray(t, dtype=float)
    single = t.ndim == 1
    t2 = np.atleast_2d(t)
    if t2.shape[-1] != S.n + 1:
        raise DimensionMismatch(f"expected {S.n + 1} weights, got {t2.shape[-1]}")
    err = np.abs(t2.sum(axis=1) - 1.0)
    if np.any(err > tol):
        raise WeightSumError(f"weights sum off by {err.max():.3e}")
    x = t2 @ S.vertices
    return x[0] if single else x


def apply_cyclic(S: Simplex, sigma, x) -> np.ndarray:
    """Image of ``x`` under the affine map induced by the cyclic shift ``sigma``.

    ``sigma`` is a :class:`CyclicPermutation` or an integer shift ``k``; the map
    sends ``sum t_i v_i`` to ``sum t_{(i+k) mod (n+1)} v_i`` and is defined on
    all of R^n.
    """
    k = sigma.shift if isinstance(sigma, CyclicPermutation) else int(sigma)
    t = to_barycentric(S, x)
    return np.roll(t, -k, axis=-1) @ S.vertices


def cyclic_group(S: Simplex) -> list[CyclicPermutation]:
    return [CyclicPermutation(k, S.n + 1) for k in range(S.n + 1)]


def random_simplex(n: int, rng_seed=None) -> Simplex:
    """Random simplex with vertices drawn uniformly from ``[-1, 1]^n``.

    ``rng_seed`` may be an int, a ``SeedSequence`` or a ``Generator``. Degenerate
    draws are redrawn, at most ``RANDOM_SIMPLEX_RETRIES`` times.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(rng_seed)
    for _ in range(RANDOM_SIMPLEX_RETRIES):
        v = rng.uniform(-1.0, 1.0, size=(n + 1, n))
        try:
            return make_simplex(v)
        except DegenerateSimplex:
            continue
    raise GenerationFailure(f"no non-degenerate simplex after {RANDOM_SIMPLEX_RETRIES} draws")
