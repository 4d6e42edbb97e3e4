"""Hermite-Hadamard chains on simplices.

Each ``*_hh`` function returns a :class:`BoundReport` holding the three terms
``lower <= middle <= upper``, the signed margins and a verdict. Middles are
exact whenever the integrand has a polynomial form and Monte Carlo
otherwise; the verdict uses a guard band suited to the kind of middle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .functions import ClassTag, FunctionSpec, WrongClass
from .polynomial import Polynomial
from .quadrature import (
    EXACT,
    IntegralEstimate,
    cartesian_to_barycentric,
    mean_mc,
    mean_norm_sq,
    mean_polynomial,
)
from .simplex import Simplex, to_barycentric
from .symmetrization import SymmetrizedFunction, symmetrize

__all__ = [
    "Family",
    "Status",
    "BoundReport",
    "IntegratorConfig",
    "PositiveLinearFunctional",
    "MomentMismatch",
    "FAMILY_CLASSES",
    "EXACT_RTOL",
    "MC_SIGMAS",
    "integral_mean",
    "classical_hh",
    "wright_hh",
    "strongly_convex_hh",
    "strongly_wright_hh",
    "operator_hh",
    "strong_corrections",
    "make_vertex_average_functional",
    "make_barycenter_functional",
    "make_quadrature_functional",
    "degree2_rule",
    "MOMENT_TOL",
]

EXACT_RTOL = 1e-9
MC_SIGMAS = 4.0
MOMENT_TOL = 1e-10


class Family(str, enum.Enum):
    CLASSICAL = "classical"
    WRIGHT = "wright"
    STRONGLY_CONVEX = "strongly_convex"
    STRONGLY_WRIGHT = "strongly_wright"
    OPERATOR = "operator"


class Status(str, enum.Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


_T = ClassTag
# which hypothesis classes each chain is stated for; the control class is
# admitted wherever the chain is meant to catch it
FAMILY_CLASSES = {
    Family.CLASSICAL: {_T.CONVEX, _T.STRONGLY_CONVEX, _T.NONCONVEX_CONTROL},
    Family.WRIGHT: {_T.CONVEX, _T.STRONGLY_CONVEX, _T.WRIGHT_CONVEX,
                    _T.STRONGLY_WRIGHT_CONVEX, _T.NONCONVEX_CONTROL},
    Family.STRONGLY_CONVEX: {_T.STRONGLY_CONVEX},
    Family.STRONGLY_WRIGHT: {_T.STRONGLY_CONVEX, _T.STRONGLY_WRIGHT_CONVEX},
    Family.OPERATOR: {_T.CONVEX, _T.STRONGLY_CONVEX, _T.WRIGHT_CONVEX,
                      _T.STRONGLY_WRIGHT_CONVEX, _T.NONCONVEX_CONTROL},
}


class MomentMismatch(ValueError):
    pass


@dataclass(frozen=True)
class IntegratorConfig:
    """How middles are computed: ``"auto"`` (exact when polynomial), ``"exact"`` or ``"mc"``."""

    method: str = "auto"
    mc_samples: int = 200_000
    seed: Optional[int] = 0

    def __post_init__(self):
        if self.method not in ("auto", "exact", "mc"):
            raise ValueError(f"unknown integration method {self.method!r}")
        if self.mc_samples < 2:
            raise ValueError("mc_samples must be >= 2")


@dataclass(frozen=True)
class BoundReport:
    family: Family
    lower: float
    middle: IntegralEstimate
    upper: float
    margin_lower: float
    margin_upper: float
    status: Status
    guard: float
    terms: dict = field(default_factory=dict, compare=False)
    classical: Optional[tuple] = None

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    def to_dict(self) -> dict:
        out = {
            "family": self.family.value,
            "lower": self.lower,
            "middle": {
                "value": self.middle.value,
                "kind": self.middle.kind,
                "std_error": self.middle.std_error,
            },
            "upper": self.upper,
            "margin_lower": self.margin_lower,
            "margin_upper": self.margin_upper,
            "status": self.status.value,
            "guard": self.guard,
        }
        if self.terms:
            out["terms"] = dict(self.terms)
        if self.classical is not None:
            out["classical"] = {"lower": self.classical[0], "upper": self.classical[1]}
        return out


def _verdict(lower: float, middle: IntegralEstimate, upper: float):
    m = middle.value
    ml, mu = m - lower, upper - m
    floor = EXACT_RTOL * (1.0 + abs(m))
    if middle.kind == EXACT:
        guard = floor
        status = Status.HOLDS if min(ml, mu) >= -guard else Status.VIOLATED
    else:
        # rounding floor keeps zero-variance integrands from reading as violations
        guard = MC_SIGMAS * middle.std_error + floor
        worst = min(ml, mu)
        if worst < -guard:
            status = Status.VIOLATED
        elif worst < guard:
            status = Status.INCONCLUSIVE
        else:
            status = Status.HOLDS
    return ml, mu, status, guard


def _report(family, lower, middle, upper, terms, classical=None) -> BoundReport:
    ml, mu, status, guard = _verdict(lower, middle, upper)
    return BoundReport(family, float(lower), middle, float(upper), ml, mu, status, guard,
                       terms, classical)


def _value(f, x) -> float:
    return float(np.asarray(f(np.asarray(x, dtype=float)), dtype=float).reshape(-1)[0])


def _values(f, x) -> np.ndarray:
    return np.asarray(f(np.asarray(x, dtype=float)), dtype=float).reshape(-1)


def integral_mean(f, S: Simplex, config: IntegratorConfig = IntegratorConfig()) -> IntegralEstimate:
    """``(1/|S|) int_S f dx`` for a :class:`FunctionSpec` or :class:`SymmetrizedFunction`."""
    poly = None
    if isinstance(f, SymmetrizedFunction):
        poly = f.polynomial_form
    elif isinstance(f, FunctionSpec):
        cart = f.polynomial_on(S)
        poly = None if cart is None else cartesian_to_barycentric(S, cart)
    if config.method == "exact" and poly is None:
        raise ValueError("exact integration needs a polynomial form")
    if poly is not None and config.method != "mc":
        return mean_polynomial(S, poly)
    return mean_mc(S, f, config.mc_samples, config.seed)


def _require_modulus(f) -> float:
    c = getattr(f, "modulus", None)
    if c is None:
        raise WrongClass(f"{getattr(f, 'name', f)!r} carries no strong-convexity modulus")
    return float(c)


def strong_corrections(S: Simplex, c: float) -> tuple[float, float]:
    """``(c (m2 - |b|^2), c (m2 - avg |v_i|^2))`` with ``m2`` the exact mean of ``||x||^2``.

    The first is added to the lower bound (it is >= 0), the second to the
    upper bound (it is <= 0).
    """
    m2 = mean_norm_sq(S)
    b = S.barycenter
    vsq = float(np.mean(np.sum(S.vertices**2, axis=1)))
    return c * (m2 - float(b @ b)), c * (m2 - vsq)


def classical_hh(f, S: Simplex, config: IntegratorConfig = IntegratorConfig()) -> BoundReport:
    """``f(b) <= (1/|S|) int_S f <= (1/(n+1)) sum f(v_i)`` for convex ``f``."""
    lower = _value(f, S.barycenter)
    upper = float(np.mean(_values(f, S.vertices)))
    middle = integral_mean(f, S, config)
    return _report(Family.CLASSICAL, lower, middle, upper, {
        "lower": "f(barycenter)",
        "middle": "mean of f over S",
        "upper": "mean of f over the vertices",
    })


def wright_hh(f, S: Simplex, config: IntegratorConfig = IntegratorConfig()) -> BoundReport:
    """``(n+1) f(b) <= (1/|S|) int_S F <= sum f(v_i)``, ``F`` the symmetrization of ``f``."""
    F = symmetrize(f, S)
    lower = (S.n + 1) * _value(f, S.barycenter)
    upper = float(np.sum(_values(f, S.vertices)))
    middle = integral_mean(F, S, config)
    return _report(Family.WRIGHT, lower, middle, upper, {
        "lower": "(n+1) f(barycenter)",
        "middle": "mean of the symmetrization F over S",
        "upper": "sum of f over the vertices",
    })


def strongly_convex_hh(f, S: Simplex, config: IntegratorConfig = IntegratorConfig()) -> BoundReport:
    """Classical chain tightened by the exact ``||x||^2`` corrections for modulus ``c``."""
    c = _require_modulus(f)
    base = classical_hh(f, S, config)
    lo_corr, up_corr = strong_corrections(S, c)
    return _report(
        Family.STRONGLY_CONVEX, base.lower + lo_corr, base.middle, base.upper + up_corr,
        {
            "lower": "f(barycenter) + c*(mean|x|^2 - |barycenter|^2)",
            "middle": base.terms["middle"],
            "upper": "mean f(v_i) + c*(mean|x|^2 - mean|v_i|^2)",
            "lower_correction": lo_corr,
            "upper_correction": up_corr,
            "modulus": c,
        },
        classical=(base.lower, base.upper),
    )


def strongly_wright_hh(f, S: Simplex, config: IntegratorConfig = IntegratorConfig()) -> BoundReport:
    """Strong chain for strongly Wright-convex ``f`` with middle ``(1/((n+1)|S|)) int_S F``."""
    c = _require_modulus(f)
    F = symmetrize(f, S)
    middle = integral_mean(F, S, config).scaled(1.0 / (S.n + 1))
    lower = _value(f, S.barycenter)
    upper = float(np.mean(_values(f, S.vertices)))
    lo_corr, up_corr = strong_corrections(S, c)
    return _report(
        Family.STRONGLY_WRIGHT, lower + lo_corr, middle, upper + up_corr,
        {
            "lower": "f(barycenter) + c*(mean|x|^2 - |barycenter|^2)",
            "middle": "mean of F over S divided by n+1",
            "upper": "mean f(v_i) + c*(mean|x|^2 - mean|v_i|^2)",
            "lower_correction": lo_corr,
            "upper_correction": up_corr,
            "modulus": c,
        },
        classical=(lower, upper),
    )


@dataclass(frozen=True, eq=False)
class PositiveLinearFunctional:
    """``T[f] = sum_j w_j f(x_j)`` with positive weights summing to one.

    Construction checks that ``T`` reproduces the integral means of the
    coordinate projections on ``simplex``.
    """

    simplex: Simplex
    nodes: np.ndarray
    weights: np.ndarray
    name: str = "rule"

    def __post_init__(self):
        S = self.simplex
        nodes = np.atleast_2d(np.asarray(self.nodes, dtype=float))
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if nodes.shape != (w.size, S.n):
            raise ValueError(f"need one weight per node in R^{S.n}")
        if np.any(w <= 0):
            raise ValueError("weights of a positive functional must be > 0")
        if abs(w.sum() - 1.0) > MOMENT_TOL:
            raise MomentMismatch(f"T(1) = {w.sum()!r}, expected 1")
        if np.any(to_barycentric(S, nodes) < -1e-12):
            raise ValueError("nodes must lie in the simplex")
        # pi_i in barycentric form is the linear form sum_k t_k v_ki
        target = np.array([
            mean_polynomial(S, Polynomial.linear(S.vertices[:, i])).value for i in range(S.n)
        ])
        got = w @ nodes
        if np.max(np.abs(got - target)) > MOMENT_TOL * (1 + np.max(np.abs(target))):
            raise MomentMismatch(
                f"T(pi_i) = {got.tolist()} differs from the integral means {target.tolist()}")
        nodes.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", w)

    def __call__(self, f) -> float:
        return float(self.weights @ _values(f, self.nodes))

    def mix(self, other: "PositiveLinearFunctional", lam: float) -> "PositiveLinearFunctional":
        """The functional ``lam * self + (1 - lam) * other`` for ``0 < lam < 1``."""
        if not 0 < lam < 1:
            raise ValueError("mixing weight must lie in (0, 1)")
        return PositiveLinearFunctional(
            self.simplex,
            np.vstack([self.nodes, other.nodes]),
            np.concatenate([lam * self.weights, (1 - lam) * other.weights]),
            f"{lam:g}*{self.name}+{1 - lam:g}*{other.name}",
        )


def make_barycenter_functional(S: Simplex) -> PositiveLinearFunctional:
    return PositiveLinearFunctional(S, S.barycenter[None, :], np.ones(1), "barycenter")


def make_vertex_average_functional(S: Simplex) -> PositiveLinearFunctional:
    return PositiveLinearFunctional(S, S.vertices, np.full(S.n + 1, 1.0 / (S.n + 1)),
                                    "vertex_average")


def degree2_rule(n: int):
    """Positive ``n+1``-point rule on the simplex, exact for polynomials of degree 2.

    Returns ``(barycentric_nodes, weights)``. Node ``i`` has barycentric
    coordinate ``s`` at position ``i`` and ``r`` elsewhere.
    """
    root = np.sqrt(n + 2.0)
    r = (n + 2 - root) / ((n + 1) * (n + 2))
    s = 1.0 - n * r
    nodes = np.full((n + 1, n + 1), r)
    np.fill_diagonal(nodes, s)
    return nodes, np.full(n + 1, 1.0 / (n + 1))


def make_quadrature_functional(S: Simplex, rule="degree2") -> PositiveLinearFunctional:
    """Positive functional from a rule given in barycentric coordinates.

    ``rule`` is ``"degree2"`` or a pair ``(barycentric_nodes, weights)``.
    """
    if isinstance(rule, str):
        if rule != "degree2":
            raise ValueError(f"unknown rule {rule!r}")
        bary, weights = degree2_rule(S.n)
        name = rule
    else:
        bary, weights = rule
        name = "rule"
    bary = np.atleast_2d(np.asarray(bary, dtype=float))
    return PositiveLinearFunctional(S, bary @ S.vertices, weights, name)


def operator_hh(f, S: Simplex, T: Optional[PositiveLinearFunctional] = None,
                config: IntegratorConfig = IntegratorConfig()) -> BoundReport:
    """``F(b) <= T[F] <= (1/(n+1)) sum F(v_i)`` with ``F`` the symmetrization of ``f``.

    ``T=None`` takes the integral mean itself as the functional.
    """
    F = symmetrize(f, S)
    lower = _value(F, S.barycenter)
    upper = float(np.mean(F(S.vertices)))
    if T is None:
        middle = integral_mean(F, S, config)
        desc = "integral mean of F"
    else:
        if T.simplex is not S and not np.array_equal(T.simplex.vertices, S.vertices):
            raise ValueError("functional was built for a different simplex")
        middle = IntegralEstimate(T(F))
        desc = f"T[F] with T = {T.name}"
    return _report(Family.OPERATOR, lower, middle, upper, {
        "lower": "F(barycenter)",
        "middle": desc,
        "upper": "mean of F over the vertices",
    })
