"""Test functions for the convex, Wright-convex and strongly convex classes.

Every function is a :class:`FunctionSpec`: an evaluator that works on single
points or stacks of points, a class tag, the parameters it was built from
and, when it is a polynomial, its Cartesian polynomial form (which lets the
bounds code integrate it exactly).

The additive part of a Wright-convex function is always a linear map
``x -> <w, x>``. Discontinuous additive functions exist but cannot be
represented numerically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._rng import seed_sequence
from .polynomial import Polynomial
from .quadrature import sample_uniform
from .simplex import Simplex

__all__ = [
    "ClassTag",
    "FunctionSpec",
    "NotPSD",
    "InvalidModulus",
    "WrongClass",
    "DescriptorError",
    "make_affine",
    "make_zero",
    "make_quadratic_form",
    "make_max_affine",
    "make_exp_linear",
    "make_norm_power",
    "make_strongly_convex",
    "make_wright",
    "make_strongly_wright",
    "make_concave_control",
    "BUILDERS",
    "from_descriptor",
    "midpoint_convexity_deficit",
    "strong_wright_deficit",
    "convex_catalog",
    "strongly_convex_catalog",
    "wright_catalog",
    "strongly_wright_catalog",
    "control_catalog",
    "full_catalog",
]


class NotPSD(ValueError):
    pass


class InvalidModulus(ValueError):
    pass


class WrongClass(TypeError):
    pass


class DescriptorError(ValueError):
    pass


class ClassTag(str, enum.Enum):
    CONVEX = "convex"
    STRONGLY_CONVEX = "strongly_convex"
    WRIGHT_CONVEX = "wright_convex"
    STRONGLY_WRIGHT_CONVEX = "strongly_wright_convex"
    NONCONVEX_CONTROL = "nonconvex_control"

    @property
    def is_positive(self) -> bool:
        return self is not ClassTag.NONCONVEX_CONTROL

    @property
    def is_strong(self) -> bool:
        return self in (ClassTag.STRONGLY_CONVEX, ClassTag.STRONGLY_WRIGHT_CONVEX)


CONVEX_TAGS = (ClassTag.CONVEX, ClassTag.STRONGLY_CONVEX)


@dataclass(frozen=True, eq=False)
class FunctionSpec:
    """Evaluable, self-describing test function.

    ``evaluator`` maps an ``(m, n)`` array to ``m`` values. ``polynomial`` maps
    a dimension ``n`` to the Cartesian :class:`Polynomial` of the function, or
    is ``None`` for non-polynomial functions. ``local`` optionally maps a
    simplex to a polynomial that agrees with the function on that simplex
    only. ``dim`` is ``None`` when the function makes sense in every dimension.
    """

    name: str
    class_tag: ClassTag
    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    params: dict = field(default_factory=dict, repr=False)
    modulus: Optional[float] = None
    linear_part: Optional[np.ndarray] = field(default=None, repr=False)
    convex_part: Optional["FunctionSpec"] = field(default=None, repr=False)
    polynomial: Optional[Callable[[int], Polynomial]] = field(default=None, repr=False)
    dim: Optional[int] = None
    local: Optional[Callable[[Simplex], Optional[Polynomial]]] = field(default=None, repr=False)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            x = x.reshape(1)
        single = x.ndim == 1
        x2 = np.atleast_2d(x)
        if self.dim is not None and x2.shape[-1] != self.dim:
            raise ValueError(f"{self.name} is defined on R^{self.dim}, got R^{x2.shape[-1]}")
        out = np.asarray(self.evaluator(x2), dtype=float)
        return float(out[0]) if single else out

    @property
    def has_polynomial(self) -> bool:
        return self.polynomial is not None

    def polynomial_form(self, n: int) -> Optional[Polynomial]:
        if self.polynomial is None:
            return None
        if self.dim is not None and n != self.dim:
            raise ValueError(f"{self.name} is defined on R^{self.dim}, not R^{n}")
        return self.polynomial(n)

    def polynomial_on(self, S: Simplex) -> Optional[Polynomial]:
        """Cartesian polynomial equal to this function on ``S``, or ``None``."""
        if self.local is not None:
            return self.local(S)
        return self.polynomial_form(S.n)

    def supports_dim(self, n: int) -> bool:
        return self.dim is None or self.dim == n

    @property
    def descriptor(self) -> dict:
        return {"class": self.name, "params": _jsonable(self.params)}


def _jsonable(obj):
    if isinstance(obj, FunctionSpec):
        return obj.descriptor
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _vector(w):
    """Returns (array, dim) where a scalar means ``w * ones(n)`` in any dimension."""
    w = np.asarray(w, dtype=float)
    if w.ndim == 0:
        return w, None
    if w.ndim != 1:
        raise ValueError("expected a vector")
    return w, w.size


def _expand(w, n):
    return np.full(n, float(w)) if np.ndim(w) == 0 else w


def _merge_dim(*dims):
    known = {d for d in dims if d is not None}
    if len(known) > 1:
        raise ValueError(f"incompatible dimensions {sorted(known)}")
    return known.pop() if known else None


def _check_modulus(c):
    c = float(c)
    if not np.isfinite(c) or c <= 0:
        raise InvalidModulus(f"modulus must be > 0, got {c}")
    return c


def _norm_sq(x):
    return np.einsum("ij,ij->i", x, x)


def make_affine(w, b: float = 0.0) -> FunctionSpec:
    """``x -> <w, x> + b``; affine functions are convex and Wright-convex."""
    w, dim = _vector(w)
    b = float(b)

    def evaluator(x):
        return x @ _expand(w, x.shape[1]) + b

    return FunctionSpec(
        "affine", ClassTag.CONVEX, evaluator, {"w": w, "b": b},
        polynomial=lambda n: Polynomial.linear(_expand(w, n), b), dim=dim,
    )


def make_zero() -> FunctionSpec:
    return make_affine(0.0)


def make_quadratic_form(Q, b=None, const: float = 0.0) -> FunctionSpec:
    """``x -> x^T Q x + <b, x> + const`` for symmetric positive semidefinite ``Q``.

    A scalar ``Q`` means ``Q * I`` in every dimension.
    """
    Q = np.asarray(Q, dtype=float)
    if Q.ndim == 0:
        if Q < 0:
            raise NotPSD(f"scalar form {float(Q)} is negative")
        qdim = None
    else:
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValueError("Q must be square")
        if not np.allclose(Q, Q.T, rtol=0, atol=1e-12 * (1 + np.abs(Q).max())):
            raise NotPSD("Q is not symmetric")
        shift = 1e-12 * (1.0 + np.abs(Q).max())
        try:
            np.linalg.cholesky(Q + shift * np.eye(Q.shape[0]))
        except np.linalg.LinAlgError as exc:
            raise NotPSD("Q is not positive semidefinite") from exc
        qdim = Q.shape[0]
    if b is None:
        b, bdim = np.asarray(0.0), None
    else:
        b, bdim = _vector(b)
    dim = _merge_dim(qdim, bdim)
    const = float(const)

    def matrix(n):
        return Q * np.eye(n) if Q.ndim == 0 else Q

    def evaluator(x):
        n = x.shape[1]
        return np.einsum("ij,jk,ik->i", x, matrix(n), x) + x @ _expand(b, n) + const

    return FunctionSpec(
        "quadratic_form", ClassTag.CONVEX, evaluator, {"Q": Q, "b": b, "const": const},
        polynomial=lambda n: Polynomial.quadratic(matrix(n), _expand(b, n), const), dim=dim,
    )


def make_max_affine(pieces) -> FunctionSpec:
    """Pointwise maximum of affine pieces, given as ``[(w, b), ...]``."""
    pieces = [(np.atleast_1d(np.asarray(w, dtype=float)), float(b)) for w, b in pieces]
    if not pieces:
        raise ValueError("need at least one affine piece")
    W = np.vstack([w for w, _ in pieces])
    B = np.array([b for _, b in pieces])

    def evaluator(x):
        return np.max(x @ W.T + B, axis=1)

    def local(S):
        # a piece that is largest at every vertex is largest on the whole hull
        winners = np.argmax(S.vertices @ W.T + B, axis=1)
        if np.all(winners == winners[0]):
            return Polynomial.linear(W[winners[0]], B[winners[0]])
        return None

    return FunctionSpec(
        "max_affine", ClassTag.CONVEX, evaluator,
        {"pieces": [[w, b] for w, b in pieces]}, dim=W.shape[1], local=local,
    )


def make_exp_linear(w) -> FunctionSpec:
    w, dim = _vector(w)

    def evaluator(x):
        return np.exp(x @ _expand(w, x.shape[1]))

    return FunctionSpec("exp_linear", ClassTag.CONVEX, evaluator, {"w": w}, dim=dim)


def make_norm_power(p: float) -> FunctionSpec:
    """``x -> ||x||^p`` for ``p >= 1``; exact-integrable for even integer ``p``."""
    p = float(p)
    if not p >= 1:
        raise ValueError(f"norm power needs p >= 1, got {p}")

    def evaluator(x):
        return _norm_sq(x) ** (p / 2)

    poly = local = None
    if p.is_integer() and int(p) % 2 == 0:
        k = int(p) // 2
        poly = lambda n: Polynomial.quadratic(np.eye(n)) ** k  # noqa: E731
    elif p.is_integer():
        def local(S):
            # on an interval away from 0, |x|^p is (+-x)^p
            if S.n != 1:
                return None
            sign = np.sign(S.vertices[:, 0])
            if sign[0] * sign[1] < 0:
                return None
            return Polynomial.linear([sign.sum() / abs(sign.sum()) if sign.any() else 1.0]) ** int(p)
    return FunctionSpec("norm_power", ClassTag.CONVEX, evaluator, {"p": p},
                        polynomial=poly, local=local)


def _add_poly(*parts):
    if any(p is None for p in parts):
        return None

    def poly(n):
        out = Polynomial(n)
        for part in parts:
            out = out + part(n)
        return out

    return poly


def _local_from(base: FunctionSpec, extra=None, sign: float = 1.0):
    if base.local is None:
        return None

    def local(S):
        p = base.polynomial_on(S)
        if p is None:
            return None
        p = sign * p
        return p if extra is None else p + extra(S.n)

    return local


def _norm_sq_poly(c):
    return lambda n: c * Polynomial.quadratic(np.eye(n))


def _require_convex(base: FunctionSpec, who: str):
    if base.class_tag not in CONVEX_TAGS:
        raise WrongClass(f"{who} needs a convex base, got {base.class_tag.value}")


def make_strongly_convex(base: FunctionSpec, c: float) -> FunctionSpec:
    """``base + c ||x||^2``, strongly convex with modulus ``c`` when ``base`` is convex."""
    _require_convex(base, "make_strongly_convex")
    c = _check_modulus(c)

    def evaluator(x):
        return base.evaluator(x) + c * _norm_sq(x)

    return FunctionSpec(
        "strongly_convex", ClassTag.STRONGLY_CONVEX, evaluator, {"base": base, "c": c},
        modulus=c, convex_part=base,
        polynomial=_add_poly(base.polynomial, _norm_sq_poly(c)), dim=base.dim,
        local=_local_from(base, _norm_sq_poly(c)),
    )


def make_wright(w, base: FunctionSpec) -> FunctionSpec:
    """``<w, x> + base(x)``: a linear (additive) part plus a convex part.

    Convex functions are Wright-convex, so ``w = 0`` is allowed and still
    tagged Wright-convex.
    """
    _require_convex(base, "make_wright")
    w, wdim = _vector(w)
    dim = _merge_dim(wdim, base.dim)

    def evaluator(x):
        return x @ _expand(w, x.shape[1]) + base.evaluator(x)

    lin_poly = lambda n: Polynomial.linear(_expand(w, n))  # noqa: E731
    return FunctionSpec(
        "wright", ClassTag.WRIGHT_CONVEX, evaluator, {"w": w, "base": base},
        linear_part=w, convex_part=base,
        polynomial=_add_poly(lin_poly, base.polynomial), dim=dim,
        local=_local_from(base, lin_poly),
    )


def make_strongly_wright(w, base: FunctionSpec, c: float) -> FunctionSpec:
    """``<w, x> + base(x) + c ||x||^2``, strongly Wright-convex with modulus ``c``.

    ``convex_part`` holds the Wright-convex remainder ``<w, x> + base(x)``.
    """
    c = _check_modulus(c)
    wright = make_wright(w, base)

    def evaluator(x):
        return wright.evaluator(x) + c * _norm_sq(x)

    return FunctionSpec(
        "strongly_wright", ClassTag.STRONGLY_WRIGHT_CONVEX, evaluator,
        {"w": wright.params["w"], "base": base, "c": c},
        modulus=c, linear_part=wright.linear_part, convex_part=wright,
        polynomial=_add_poly(wright.polynomial, _norm_sq_poly(c)), dim=wright.dim,
        local=_local_from(wright, _norm_sq_poly(c)),
    )


def make_concave_control(base: FunctionSpec) -> FunctionSpec:
    """``-base``; a negative control for the convex inequalities."""

    def evaluator(x):
        return -base.evaluator(x)

    poly = None if base.polynomial is None else (lambda n: -base.polynomial(n))
    return FunctionSpec(
        "concave_control", ClassTag.NONCONVEX_CONTROL, evaluator, {"base": base},
        convex_part=base, polynomial=poly, dim=base.dim, local=_local_from(base, sign=-1.0),
    )


BUILDERS = {
    "affine": make_affine,
    "zero": make_zero,
    "quadratic_form": make_quadratic_form,
    "max_affine": make_max_affine,
    "exp_linear": make_exp_linear,
    "norm_power": make_norm_power,
    "strongly_convex": make_strongly_convex,
    "wright": make_wright,
    "strongly_wright": make_strongly_wright,
    "concave_control": make_concave_control,
}


def from_descriptor(desc: dict) -> FunctionSpec:
    """Build a function from ``{"class": <builder name>, "params": {...}}``.

    A nested ``"base"`` parameter is itself a descriptor.
    """
    if not isinstance(desc, dict) or "class" not in desc:
        raise DescriptorError(f"not a function descriptor: {desc!r}")
    name = desc["class"]
    if name not in BUILDERS:
        raise DescriptorError(f"unknown function class {name!r}; known: {sorted(BUILDERS)}")
    params = dict(desc.get("params") or {})
    if "base" in params:
        params["base"] = from_descriptor(params["base"])
    try:
        return BUILDERS[name](**params)
    except TypeError as exc:
        raise DescriptorError(f"bad parameters for {name!r}: {exc}") from exc


def _pairs(S: Simplex, trials: int, rng_seed):
    pts = sample_uniform(S, 2 * trials, rng_seed)
    return pts[:trials], pts[trials:]


def _eval(f, x):
    return np.asarray(f(x), dtype=float).reshape(-1)


def midpoint_convexity_deficit(f, S: Simplex, trials: int = 1000, rng_seed=None) -> float:
    """Largest sampled ``f((x+y)/2) - (f(x) + f(y))/2`` over pairs in ``S``.

    Non-positive (up to rounding) for convex ``f``. The vertex pairs are always
    included next to ``trials`` uniformly sampled pairs.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    x, y = _pairs(S, trials, rng_seed)
    i, j = np.triu_indices(S.n + 1, k=1)
    x = np.vstack([x, S.vertices[i]])
    y = np.vstack([y, S.vertices[j]])
    gap = _eval(f, 0.5 * (x + y)) - 0.5 * (_eval(f, x) + _eval(f, y))
    return float(gap.max())


def strong_wright_deficit(f: FunctionSpec, S: Simplex, trials: int = 1000, rng_seed=None) -> float:
    """Largest sampled violation of the strong Wright inequality.

    Returns the max over ``(x, y, t)`` of
    ``f(tx+(1-t)y) + f((1-t)x+ty) - f(x) - f(y) + 2 c t(1-t) ||x-y||^2``.
    """
    if f.modulus is None:
        raise WrongClass(f"{f.name} carries no modulus")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    pair_seed, t_seed = seed_sequence(rng_seed).spawn(2)
    x, y = _pairs(S, trials, pair_seed)
    t = np.random.default_rng(t_seed).uniform(0.0, 1.0, size=(trials, 1))
    lhs = _eval(f, t * x + (1 - t) * y) + _eval(f, (1 - t) * x + t * y)
    rhs = _eval(f, x) + _eval(f, y) - 2 * f.modulus * (t * (1 - t))[:, 0] * _norm_sq(x - y)
    return float((lhs - rhs).max())


# catalogs used by the sweeps; every entry is convex-by-construction in its class


def _random_psd(rng, n, rank=None):
    A = rng.normal(size=(n, rank or n))
    return A @ A.T / n


def convex_catalog(n: int, rng_seed=None) -> list[FunctionSpec]:
    rng = np.random.default_rng(rng_seed)
    w = rng.normal(size=n)
    return [
        make_affine(w, float(rng.normal())),
        make_quadratic_form(_random_psd(rng, n), rng.normal(size=n), float(rng.normal())),
        make_quadratic_form(_random_psd(rng, n, rank=1)),
        make_norm_power(2),
        make_norm_power(4),
        make_norm_power(1),
        make_norm_power(3),
        make_exp_linear(rng.normal(size=n)),
        make_max_affine([(rng.normal(size=n), float(rng.normal())) for _ in range(4)]),
    ]


def strongly_convex_catalog(n: int, rng_seed=None, moduli=(0.1, 1.0, 10.0)) -> list[FunctionSpec]:
    rng = np.random.default_rng(rng_seed)
    bases = convex_catalog(n, rng)
    return [make_strongly_convex(bases[k % len(bases)], c)
            for k, c in enumerate(c for c in moduli for _ in range(3))] + [
        make_strongly_convex(make_zero(), moduli[0]),
    ]


def wright_catalog(n: int, rng_seed=None, w_scale: float = 1e3) -> list[FunctionSpec]:
    """Convex bases plus linear parts with norms spread up to ``w_scale``."""
    rng = np.random.default_rng(rng_seed)
    bases = convex_catalog(n, rng)
    specs = []
    for k, base in enumerate(bases):
        u = rng.normal(size=n)
        u /= np.linalg.norm(u)
        scale = w_scale ** (k / (len(bases) - 1))
        specs.append(make_wright(scale * u, base))
    specs.append(make_wright(np.zeros(n), bases[1]))
    return specs


def strongly_wright_catalog(n: int, rng_seed=None, moduli=(0.1, 1.0, 10.0)) -> list[FunctionSpec]:
    rng = np.random.default_rng(rng_seed)
    bases = convex_catalog(n, rng)
    specs = [make_strongly_wright(np.zeros(n), make_zero(), moduli[1])]
    for k, c in enumerate(c for c in moduli for _ in range(3)):
        base = bases[(2 * k + 1) % len(bases)]
        specs.append(make_strongly_wright(rng.normal(scale=10.0, size=n), base, c))
    return specs


def control_catalog(n: int, rng_seed=None) -> list[FunctionSpec]:
    """Concave, non-affine functions."""
    rng = np.random.default_rng(rng_seed)
    return [
        make_concave_control(make_norm_power(2)),
        make_concave_control(make_quadratic_form(_random_psd(rng, n) + 0.1 * np.eye(n))),
        make_concave_control(make_norm_power(4)),
        make_concave_control(make_exp_linear(rng.normal(size=n))),
    ]


def full_catalog(n: int, rng_seed=None) -> list[FunctionSpec]:
    seeds = seed_sequence(rng_seed).spawn(5)
    return (convex_catalog(n, seeds[0]) + strongly_convex_catalog(n, seeds[1])
            + wright_catalog(n, seeds[2]) + strongly_wright_catalog(n, seeds[3])
            + control_catalog(n, seeds[4]))
