"""Sparse multivariate polynomials with real coefficients.

Used for two bases: Cartesian coordinates ``x_1..x_n`` and barycentric
coordinates ``t_0..t_n`` of a fixed simplex. The class itself does not know
which basis it lives in.
"""

from __future__ import annotations

from collections import defaultdict
from operator import add

import numpy as np

__all__ = ["Polynomial"]


class Polynomial:
    """``sum_alpha c_alpha * prod_i z_i ** alpha_i`` over ``nvars`` variables.

    >>> p = Polynomial.variable(2, 0) ** 2 + 3
    >>> p([2.0, 5.0])
    7.0
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = int(nvars)
        acc = defaultdict(float)
        for alpha, c in (terms.items() if isinstance(terms, dict) else terms or ()):
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.nvars or min(alpha, default=0) < 0:
                raise ValueError(f"bad multi-index {alpha} for {self.nvars} variables")
            acc[alpha] += float(c)
        self.terms = {a: c for a, c in acc.items() if c != 0.0}

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Polynomial":
        # trusted construction: terms already validated and merged
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = {a: c for a, c in terms.items() if c != 0.0}
        return p

    @classmethod
    def constant(cls, nvars: int, value: float) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        alpha = [0] * nvars
        alpha[i] = 1
        return cls(nvars, {tuple(alpha): 1.0})

    @classmethod
    def linear(cls, coeffs, const: float = 0.0) -> "Polynomial":
        coeffs = np.asarray(coeffs, dtype=float)
        nv = coeffs.size
        p = cls.constant(nv, const)
        for i, w in enumerate(coeffs):
            p = p + w * cls.variable(nv, i)
        return p

    @classmethod
    def quadratic(cls, Q, b=None, const: float = 0.0) -> "Polynomial":
        """``x^T Q x + b . x + const``."""
        Q = np.atleast_2d(np.asarray(Q, dtype=float))
        nv = Q.shape[0]
        b = np.zeros(nv) if b is None else np.asarray(b, dtype=float)
        terms = {(0,) * nv: const}
        for i in range(nv):
            for j in range(nv):
                alpha = [0] * nv
                alpha[i] += 1
                alpha[j] += 1
                terms.setdefault(tuple(alpha), 0.0)
                terms[tuple(alpha)] += Q[i, j]
            if b[i]:
                alpha = [0] * nv
                alpha[i] = 1
                terms[tuple(alpha)] = terms.get(tuple(alpha), 0.0) + b[i]
        return cls(nv, terms)

    @property
    def degree(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("polynomials over different numbers of variables")
            return other
        return Polynomial.constant(self.nvars, float(other))

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for a, c in other.terms.items():
            terms[a] = terms.get(a, 0.0) + c
        return Polynomial._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial._raw(self.nvars, {a: c * float(other) for a, c in self.terms.items()})
        other = self._coerce(other)
        acc = defaultdict(float)
        for a, c in self.terms.items():
            for b, d in other.terms.items():
                acc[tuple(map(add, a, b))] += c * d
        return Polynomial._raw(self.nvars, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = Polynomial.constant(self.nvars, 1.0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        single = z.ndim == 1
        z2 = np.atleast_2d(z)
        if z2.shape[-1] != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {z2.shape[-1]}")
        out = np.zeros(z2.shape[0])
        for alpha, c in self.terms.items():
            out += c * np.prod(z2 ** np.asarray(alpha), axis=1)
        return float(out[0]) if single else out

    def substitute(self, forms) -> "Polynomial":
        """Replace variable ``i`` by the polynomial ``forms[i]``."""
        forms = list(forms)
        if len(forms) != self.nvars:
            raise ValueError("need one substitution per variable")
        nv = forms[0].nvars
        acc = defaultdict(float)
        cache = {}
        for alpha, c in self.terms.items():
            term = {(0,) * nv: c}
            for i, a in enumerate(alpha):
                if a:
                    if (i, a) not in cache:
                        cache[i, a] = forms[i] ** a
                    factor = cache[i, a].terms
                    nxt = defaultdict(float)
                    for u, cu in term.items():
                        for v, cv in factor.items():
                            nxt[tuple(map(add, u, v))] += cu * cv
                    term = nxt
            for u, cu in term.items():
                acc[u] += cu
        return Polynomial._raw(nv, acc)

    def permute(self, perm) -> "Polynomial":
        """Polynomial ``q`` with ``q(z) = p(z[perm])``."""
        perm = list(perm)
        terms = {}
        for alpha, c in self.terms.items():
            beta = [0] * self.nvars
            for i, a in enumerate(alpha):
                beta[perm[i]] += a
            terms[tuple(beta)] = terms.get(tuple(beta), 0.0) + c
        return Polynomial(self.nvars, terms)

    def allclose(self, other, atol: float = 1e-12) -> bool:
        diff = self - other
        return all(abs(c) <= atol for c in diff.terms.values())

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.terms!r})"
