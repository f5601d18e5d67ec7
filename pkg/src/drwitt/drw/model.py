"""Coefficient models for the de Rham–Witt engine.

Every supported log ring is presented as a quotient of a p-torsion-free lift

    Ã = Z_(p)[π]/(π^e − p)        (Ã = Z_(p) when e = 1, π = p)

by an ideal (zero, or (p) for the residue field F_p).  For such a lift the
ghost map is injective and W_n(Ã) is a free Z_(p)-module with basis
V^s[π^j] (0 ≤ s < n, 0 ≤ j < e), indexed by ``s*e + j``.  Ring structure,
F and R on this basis are computed exactly through ghost components.

Elements of Ã are integer tuples (coefficients of 1, π, ..., π^{e-1});
denominators prime to p are never needed for the presets.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from ..exact.errors import NotDivisible, UnsupportedCoefficientRing
from ..exact.rings import IntegerModRing, LocalizedIntegers, QuotientRing
from ..logdr import LogRing


class LiftRing:
    """Arithmetic in Z[π]/(π^e − p) on integer tuples."""

    def __init__(self, p: int, e: int):
        self.p = p
        self.e = e

    def mul(self, a, b):
        e, p = self.e, self.p
        out = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        for k in range(2 * e - 2, e - 1, -1):
            out[k - e] += p * out[k]
            out[k] = 0
        return tuple(out[:e])

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def scale(self, c, a):
        return tuple(c * x for x in a)

    def pow(self, a, k):
        r = self.one
        while k:
            if k & 1:
                r = self.mul(r, a)
            k >>= 1
            if k:
                a = self.mul(a, a)
        return r

    @property
    def one(self):
        return (1,) + (0,) * (self.e - 1)

    @property
    def zero(self):
        return (0,) * self.e

    @property
    def pi(self):
        if self.e == 1:
            return (self.p,)
        return (0, 1) + (0,) * (self.e - 2)

    def pi_power(self, j):
        """π^j for 0 ≤ j < e as a basis vector (π^0 = 1 also when e = 1)."""
        return tuple(1 if i == j else 0 for i in range(self.e))

    def const(self, c):
        return (c,) + (0,) * (self.e - 1)


@dataclass(frozen=True)
class LiftModel:
    """Hashable description of (Ã, M, ideal) used as a cache key."""

    p: int
    e: int
    monoid: Tuple[Tuple[str, Tuple[int, ...]], ...]
    residue_field: bool = False  # quotient by the ideal (p)
    label: str = ""

    @property
    def lift(self) -> LiftRing:
        return LiftRing(self.p, self.e)

    @property
    def monoid_names(self):
        return tuple(n for n, _ in self.monoid)

    def key(self):
        return (self.p, self.e, self.monoid, self.residue_field)


def _integral(x, p) -> int:
    x = Fraction(x)
    if x.denominator != 1:
        raise UnsupportedCoefficientRing(f"monoid value {x} must have integer coordinates")
    return int(x)


def model_from_log_ring(L: LogRing) -> LiftModel:
    """Recognize the supported log rings: DVR presets and F_p with trivial log structure."""
    A = L.ring
    if isinstance(A, LocalizedIntegers):
        p, e = A.p, 1
        vals = [(g, (_integral(L.alpha[g], p),)) for g in L.monoid.gens]
        return LiftModel(p, e, tuple(vals), False, L.name)
    if isinstance(A, QuotientRing) and isinstance(A.base, LocalizedIntegers):
        p = A.base.p
        e = A.degree
        expect = [Fraction(-p)] + [Fraction(0)] * (e - 1) + [Fraction(1)]
        if list(A.modulus) != expect:
            raise UnsupportedCoefficientRing(f"{A.name} is not of the form Z_(p)[π]/(π^e − p)")
        vals = [(g, tuple(_integral(c, p) for c in L.alpha[g])) for g in L.monoid.gens]
        return LiftModel(p, e, tuple(vals), False, L.name)
    if isinstance(A, IntegerModRing) and A.is_field:
        if L.monoid.gens:
            raise UnsupportedCoefficientRing("F_p is supported with the trivial log structure only")
        return LiftModel(A.modulus, 1, (), True, L.name)
    raise UnsupportedCoefficientRing(f"no de Rham–Witt model for {A.name}")


class WittBasis:
    """W_n(Ã) in the basis V^s[π^j], with exact ghost conversions."""

    def __init__(self, model: LiftModel, mod: int):
        self.model = model
        self.A = model.lift
        self.p, self.e = model.p, model.e
        self.mod = mod
        self._mt = {}

    def basis_ghost(self, n, s, j):
        A, p = self.A, self.p
        a = A.pi_power(j)
        return [A.zero if i < s else A.scale(p ** s, A.pow(a, p ** (i - s))) for i in range(n)]

    def from_ghost(self, n, w) -> np.ndarray:
        """Coordinates (mod p^N) of the Witt vector with ghost components ``w``."""
        A, p, e = self.A, self.p, self.e
        w = [tuple(x) for x in w]
        out = np.zeros(n * e, dtype=object)
        for t in range(n):
            r = w[t]
            pt = p ** t
            coeffs = []
            for j in range(e):
                if r[j] % pt:
                    raise NotDivisible(f"ghost vector is not integral at level {t}")
                coeffs.append(r[j] // pt)
            for j, c in enumerate(coeffs):
                out[t * e + j] = c
                if c:
                    bg = self.basis_ghost(n, t, j)
                    for i in range(t, n):
                        w[i] = A.sub(w[i], A.scale(c, bg[i]))
        return np.array([int(x) % self.mod for x in out], dtype=np.int64)

    def teich_ghost(self, n, a):
        return [self.A.pow(a, self.p ** i) for i in range(n)]

    def teich(self, n, a) -> np.ndarray:
        return self.from_ghost(n, self.teich_ghost(n, a))

    def v_teich(self, n, s, a) -> np.ndarray:
        """V^s[a] at level n."""
        A, p = self.A, self.p
        g = [A.zero if i < s else A.scale(p ** s, A.pow(a, p ** (i - s))) for i in range(n)]
        return self.from_ghost(n, g)

    def mult_table(self, n) -> np.ndarray:
        T = self._mt.get(n)
        if T is None:
            e = self.e
            gh = [self.basis_ghost(n, t, j) for t in range(n) for j in range(e)]
            T = np.zeros((n * e, n * e, n * e), dtype=np.int64)
            for a in range(n * e):
                for b in range(a, n * e):
                    T[a, b] = T[b, a] = self.from_ghost(n, [self.A.mul(x, y) for x, y in zip(gh[a], gh[b])])
            self._mt[n] = T
        return T

    def frobenius_images(self, n) -> np.ndarray:
        gh = [self.basis_ghost(n, t, j) for t in range(n) for j in range(self.e)]
        return np.array([self.from_ghost(n - 1, g[1:]) for g in gh], dtype=np.int64)

    def restriction_images(self, n) -> np.ndarray:
        gh = [self.basis_ghost(n, t, j) for t in range(n) for j in range(self.e)]
        return np.array([self.from_ghost(n - 1, g[:-1]) for g in gh], dtype=np.int64)

    def multiply(self, n, x, y) -> np.ndarray:
        return _bilinear(x, y, self.mult_table(n), self.mod)

    def from_witt_coords(self, n, coords) -> np.ndarray:
        """Image of a Witt vector (a_0, ..., a_{n-1}) with a_s ∈ Ã, via ghost components."""
        A, p = self.A, self.p
        g = []
        for i in range(n):
            acc = A.zero
            for s in range(i + 1):
                acc = A.add(acc, A.scale(p ** s, A.pow(coords[s], p ** (i - s))))
            g.append(acc)
        return self.from_ghost(n, g)


def _bilinear(x, y, T, mod):
    out = np.zeros(T.shape[2], dtype=np.int64)
    for a in np.flatnonzero(x):
        xa = int(x[a])
        for b in np.flatnonzero(y):
            out = (out + (xa * int(y[b]) % mod) * T[a, b]) % mod
    return out
