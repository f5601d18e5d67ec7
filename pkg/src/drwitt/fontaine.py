"""Truncated Fontaine rings over the p-power cyclotomic tower.

* ``CyclotomicRing(p, l, mod)`` is Z/mod[z]/(Φ_{p^l}); the tower keeps every
  computation inside O_N = Z/p^c[z]/(Φ_{p^N}) with ζ_{p^j} = z^{p^{N−j}}.
* An :class:`RElement` of R = lim(O/p, x ↦ x^p) is a finite prefix
  (x̄_0, ..., x̄_D) of a p-power compatible sequence in O_N/p.
* An :class:`AinfElement` of W(R) is an expression over Teichmüller leaves
  [r]; its family member at level ℓ is evaluated in W_ℓ(O_N/p^c) with
  [r] ↦ [r^♯_ℓ], r^♯_ℓ = lim_j lift(x̄_{ℓ+j})^{p^j}.  Frobenius φ of W(R) and
  the Galois action act on the leaves.
* θ_n(x) is the level-n member of φ^n(x), so θ_n([ε_n]) = [ζ_{p^n}] and the
  geometric sum Σ_{j<p^n} [ε_n]^j lies in the kernel.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from .exact.errors import (InsufficientDepth, InsufficientFamily, NonInvertibleDivision,
                           NonUnitExponent, PrecisionExhausted, UnsupportedPrime)
from .exact.rings import Ring
from .witt import WittRing, WittVector


# ---------------------------------------------------------------------------
# cyclotomic quotients


def _fft_mul(a: np.ndarray, b: np.ndarray, mod: int) -> np.ndarray:
    n = len(a) + len(b) - 1
    if min(len(a), len(b)) < 64:
        if mod * mod * min(len(a), len(b)) < 2 ** 62:
            return np.convolve(a, b) % mod
    bound = mod * mod * min(len(a), len(b))
    if bound < 2 ** 50:
        size = 1 << (n - 1).bit_length()
        fa = np.fft.rfft(a.astype(np.float64), size)
        fb = np.fft.rfft(b.astype(np.float64), size)
        c = np.rint(np.fft.irfft(fa * fb, size)[:n]).astype(np.int64)
        return c % mod
    # split into 2^15 limbs
    lo_a, hi_a = a & 0x7FFF, a >> 15
    lo_b, hi_b = b & 0x7FFF, b >> 15
    m = mod
    ll = _fft_mul(lo_a, lo_b, m)
    lh = _fft_mul(lo_a, hi_b, m)
    hl = _fft_mul(hi_a, lo_b, m)
    hh = _fft_mul(hi_a, hi_b, m)
    s = pow(2, 15, m)
    return (ll + (lh + hl) % m * s + hh * (s * s % m)) % m


class CyclotomicRing(Ring):
    """Z/mod[z]/(Φ_{p^l}(z)); raw elements are coefficient tuples of length φ(p^l)."""

    def __init__(self, p: int, l: int, mod: int):
        self.p, self.l, self.mod = p, l, mod
        self.order = p ** l                       # z^order = 1
        self.dim = 1 if l == 0 else (p - 1) * p ** (l - 1)
        self.zero = (0,) * self.dim
        self.one = (1,) + (0,) * (self.dim - 1)
        self.name = f"Z/{mod}[z]/(Phi_{p}^{l})"
        self.gens = ("z",)

    # numpy helpers ---------------------------------------------------------
    def _arr(self, a) -> np.ndarray:
        return np.asarray(a, dtype=np.int64)

    def reduce_array(self, c: np.ndarray) -> Tuple[int, ...]:
        """Fold a coefficient array modulo z^{p^l} − 1, then modulo Φ_{p^l}."""
        P = self.order
        c = np.asarray(c, dtype=np.int64) % self.mod
        if len(c) > P:
            pad = (-len(c)) % P
            c = np.concatenate([c, np.zeros(pad, dtype=np.int64)]).reshape(-1, P).sum(axis=0) % self.mod
        elif len(c) < P:
            c = np.concatenate([c, np.zeros(P - len(c), dtype=np.int64)])
        if self.l == 0:
            return (int(c.sum() % self.mod),)
        q = P // self.p
        d = self.dim
        top = c[d:P].copy()
        out = c[:d].copy()
        for i in range(self.p - 1):
            out[i * q:(i + 1) * q] -= top
        return tuple(int(x) for x in out % self.mod)

    # ring interface ------------------------------------------------------------
    def add(self, a, b):
        return tuple((x + y) % self.mod for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.mod for x in a)

    def sub(self, a, b):
        return tuple((x - y) % self.mod for x, y in zip(a, b))

    def mul(self, a, b):
        if not any(a) or not any(b):
            return self.zero
        return self.reduce_array(_fft_mul(self._arr(a), self._arr(b), self.mod))

    def from_int(self, n: int):
        return ((n % self.mod),) + (0,) * (self.dim - 1)

    def scale(self, n: int, a):
        return tuple((n * x) % self.mod for x in a)

    def is_zero(self, a) -> bool:
        return not any(a)

    def normal_form(self, a):
        return self.reduce_array(np.asarray(a, dtype=np.int64))

    def characteristic(self) -> int:
        return self.mod

    def monomial(self, k: int):
        """z^k."""
        c = np.zeros(self.order, dtype=np.int64)
        c[k % self.order] = 1
        return self.reduce_array(c)

    def gen_raw(self):
        return self.monomial(1)

    def random_raw(self, rng: random.Random):
        return tuple(rng.randrange(self.mod) for _ in range(self.dim))

    def augmentation(self, a) -> int:
        """Image under z ↦ 1, i.e. in O/(1 − z) ⊗ Z/mod."""
        return sum(a) % self.mod

    def is_unit(self, a) -> bool:
        return self.augmentation(a) % self.p != 0

    def inverse(self, a):
        """Newton iteration y ← y(2 − ay); the ideal (1 − z, p) is nilpotent."""
        u = self.augmentation(a)
        if u % self.p == 0:
            raise NonInvertibleDivision("not a unit in the cyclotomic quotient")
        y = self.from_int(pow(u, -1, self.mod))
        two = self.from_int(2)
        for _ in range(4 * (self.dim * self.mod).bit_length() + 8):
            ay = self.mul(a, y)
            if ay == self.one:
                return y
            y = self.mul(y, self.sub(two, ay))
        raise PrecisionExhausted("inverse did not converge")  # pragma: no cover

    def galois(self, a, c: int):
        """z ↦ z^c (an automorphism for c prime to p)."""
        out = np.zeros(self.order, dtype=np.int64)
        for i, x in enumerate(a):
            if x:
                out[(i * c) % self.order] += x
        return self.reduce_array(out)

    def change_modulus(self, a, mod: int):
        """Coefficientwise reduction or lift (representatives in [0, mod_old))."""
        return tuple(int(x) % mod for x in a)

    def to_str(self, a) -> str:
        terms = [f"{x}" if i == 0 else f"{x}*z^{i}" for i, x in enumerate(a) if x]
        return " + ".join(terms) or "0"

    def to_json(self, a):
        return [str(x) for x in a]

    def from_json(self, data):
        return self.normal_form([int(x) for x in data])


def cyclotomic_poly(p: int, l: int) -> List[int]:
    """Coefficients (lowest first) of Φ_{p^l}."""
    if l == 0:
        return [-1, 1]
    q = p ** (l - 1)
    c = [0] * ((p - 1) * q + 1)
    for i in range(p):
        c[i * q] = 1
    return c


@dataclass
class CyclotomicTower:
    p: int
    N: int
    c: int
    rings: List[CyclotomicRing]        # O_l mod p^c, l = 0..N
    residue: CyclotomicRing            # O_N / p

    @property
    def top(self) -> CyclotomicRing:
        return self.rings[self.N]

    @property
    def mod(self) -> int:
        return self.p ** self.c

    def zeta(self, j: int):
        """ζ_{p^j} inside O_N."""
        if j > self.N:
            raise InsufficientDepth(f"ζ_{self.p}^{j} needs tower depth {j}")
        return self.top.monomial(self.p ** (self.N - j))

    def embed(self, l: int, a):
        """O_l → O_{l+1}, z ↦ z^p."""
        dst = self.rings[l + 1]
        if l == 0:
            return dst.from_int(a[0])
        out = np.zeros(dst.order, dtype=np.int64)
        for i, x in enumerate(a):
            out[i * self.p] += x
        return dst.reduce_array(out)

    def to_top(self, l: int, a):
        for k in range(l, self.N):
            a = self.embed(k, a)
        return a

    def verify(self, samples: int = 5, seed: int = 0) -> bool:
        """Embeddings are ring maps and z^{p^l} has order exactly p^l in O_l."""
        rng = random.Random(seed)
        for l in range(self.N):
            R, S = self.rings[l], self.rings[l + 1]
            for _ in range(samples):
                a, b = R.random_raw(rng), R.random_raw(rng)
                if self.embed(l, R.mul(a, b)) != S.mul(self.embed(l, a), self.embed(l, b)):
                    return False
                if self.embed(l, R.add(a, b)) != S.add(self.embed(l, a), self.embed(l, b)):
                    return False
        for l in range(1, self.N + 1):
            R = self.rings[l]
            if R.monomial(self.p ** (l - 1)) == R.one or R.monomial(self.p ** l) != R.one:
                return False
        return True


@lru_cache(maxsize=None)
def build_tower(p: int, N: int, c: int = 4) -> CyclotomicTower:
    if p == 2:
        raise UnsupportedPrime("the cyclotomic tower model needs an odd prime")
    if N < 1 or c < 1:
        raise ValueError("need N ≥ 1 and c ≥ 1")
    rings = [CyclotomicRing(p, l, p ** c) for l in range(N + 1)]
    return CyclotomicTower(p, N, c, rings, CyclotomicRing(p, N, p))


# ---------------------------------------------------------------------------
# Fontaine's ring R


class RElement:
    """Prefix (x̄_0, ..., x̄_D) of an element of R, components in O_N/p."""

    def __init__(self, tower: CyclotomicTower, comps: Sequence[tuple], check: bool = True):
        self.tower = tower
        self.comps = tuple(tuple(c) for c in comps)
        if check and not self.is_compatible():
            raise ValueError("components are not p-power compatible")

    @property
    def depth(self) -> int:
        return len(self.comps) - 1

    def is_compatible(self) -> bool:
        F = self.tower.residue
        return all(F.pow(self.comps[j + 1], self.tower.p) == self.comps[j] for j in range(self.depth))

    def _zip(self, other, op):
        d = min(self.depth, other.depth)
        return RElement(self.tower, [op(a, b) for a, b in zip(self.comps[:d + 1], other.comps[:d + 1])], False)

    def __mul__(self, other):
        return self._zip(other, self.tower.residue.mul)

    def __add__(self, other):  # Frobenius is additive in characteristic p
        return self._zip(other, self.tower.residue.add)

    def __sub__(self, other):
        return self._zip(other, self.tower.residue.sub)

    def __pow__(self, k: int):
        F = self.tower.residue
        return RElement(self.tower, [F.pow(c, k) for c in self.comps], False)

    def __eq__(self, other):
        d = min(self.depth, other.depth)
        return self.comps[:d + 1] == other.comps[:d + 1]

    def __hash__(self):
        return hash(self.comps)

    def frobenius(self) -> "RElement":
        """r ↦ r^p; the prefix gains one component (x̄_{j+1}(r^p) = x̄_j(r))."""
        F = self.tower.residue
        return RElement(self.tower, (F.pow(self.comps[0], self.tower.p),) + self.comps, False)

    def frobenius_power(self, k: int) -> "RElement":
        r = self
        for _ in range(k):
            r = r.frobenius()
        return r

    def galois(self, c: int) -> "RElement":
        F = self.tower.residue
        return RElement(self.tower, [F.galois(x, c) for x in self.comps], False)

    def sharp(self, l: int) -> tuple:
        """r^♯_l = lim_j lift(x̄_{l+j})^{p^j} in O_N/p^c, taken at j = c."""
        T = self.tower
        j = T.c
        if l + j > self.depth:
            raise PrecisionExhausted(f"sharp_{l} needs component {l + j}, prefix has depth {self.depth}")
        O = T.top
        x = O.normal_form(self.comps[l + j])
        for _ in range(j):
            x = O.pow(x, T.p)
        return x

    def to_json(self):
        return [[str(v) for v in c] for c in self.comps]


def epsilon(T: CyclotomicTower) -> RElement:
    """ε = (1, ζ̄_p, ζ̄_{p^2}, ..., ζ̄_{p^N})."""
    F = T.residue
    return RElement(T, [F.monomial(T.p ** (T.N - j)) for j in range(T.N + 1)])


def epsilon_root(eps: RElement, n: int) -> RElement:
    """ε_n, the p^n-th root of ε: the prefix shifted by n."""
    if n < 0 or n > eps.depth - 1:
        raise InsufficientDepth(f"ε_{n} needs tower depth above {n}")
    r = RElement(eps.tower, eps.comps[n:])
    if not (r ** (eps.tower.p ** n)) == eps:
        raise ValueError("shifted prefix is not a p^n-th root")  # pragma: no cover
    return r


# ---------------------------------------------------------------------------
# W(R) as expressions over Teichmüller leaves


class AinfElement:
    """Element of W(R) with a family (z^(1), ..., z^(m)), z^(l) ∈ W_l(O_N/p^c)."""

    def __init__(self, tower: CyclotomicTower, m: int, kind: str, args: tuple):
        self.tower, self.m, self.kind, self.args = tower, m, kind, args
        self._cache: Dict[int, WittVector] = {}

    # constructors --------------------------------------------------------
    @classmethod
    def teich(cls, r: RElement, m: int) -> "AinfElement":
        return cls(r.tower, m, "teich", (r,))

    @classmethod
    def const(cls, tower, k: int, m: int) -> "AinfElement":
        return cls(tower, m, "int", (int(k),))

    @classmethod
    def from_family(cls, tower, fam: Sequence[WittVector]) -> "AinfElement":
        return cls(tower, len(fam), "family", (tuple(fam),))

    def _lift(self, other):
        if isinstance(other, int):
            return AinfElement.const(self.tower, other, self.m)
        return other

    def _bin(self, kind, other):
        other = self._lift(other)
        return AinfElement(self.tower, min(self.m, other.m), kind, (self, other))

    def __add__(self, other):
        return self._bin("add", other)

    __radd__ = __add__

    def __mul__(self, other):
        return self._bin("mul", other)

    __rmul__ = __mul__

    def __sub__(self, other):
        return self._bin("sub", other)

    def __rsub__(self, other):
        return self._lift(other)._bin("sub", self)

    def __neg__(self):
        return AinfElement(self.tower, self.m, "neg", (self,))

    def inverse(self) -> "AinfElement":
        return AinfElement(self.tower, self.m, "inv", (self,))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = AinfElement.const(self.tower, 1, self.m)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def truncate(self, m: int) -> "AinfElement":
        return AinfElement(self.tower, min(m, self.m), "id", (self,))

    # leaf maps -------------------------------------------------------------
    def map_leaves(self, f: Callable[[RElement], RElement]) -> "AinfElement":
        memo: Dict[int, AinfElement] = {}

        def go(x: AinfElement) -> AinfElement:
            key = id(x)
            if key in memo:
                return memo[key]
            if x.kind == "teich":
                y = AinfElement.teich(f(x.args[0]), x.m)
            elif x.kind in ("int", "family"):
                if x.kind == "family":
                    raise ValueError("leaf maps are undefined on bare families")
                y = x
            else:
                y = AinfElement(x.tower, x.m, x.kind, tuple(go(a) for a in x.args))
            memo[key] = y
            return y

        return go(self)

    def phi(self, k: int = 1) -> "AinfElement":
        """Witt vector Frobenius of W(R): [r] ↦ [r^p] on leaves."""
        return self.map_leaves(lambda r: r.frobenius_power(k))

    def galois(self, c: int) -> "AinfElement":
        return self.map_leaves(lambda r: r.galois(c))

    # evaluation --------------------------------------------------------------
    def member(self, l: int) -> WittVector:
        """z^(l) ∈ W_l(O_N/p^c)."""
        if l < 1 or l > self.m:
            raise InsufficientFamily(f"family has length {self.m}, level {l} requested")
        v = self._cache.get(l)
        if v is None:
            v = self._eval(l)
            self._cache[l] = v
        return v

    def _eval(self, l: int) -> WittVector:
        W = witt_ring_over(self.tower, l)
        k, a = self.kind, self.args
        if k == "teich":
            return W.teichmuller(a[0].sharp(l))
        if k == "int":
            return W.from_int(a[0])
        if k == "family":
            return a[0][l - 1]
        if k == "id":
            return a[0].member(l)
        if k == "neg":
            return -a[0].member(l)
        if k == "add":
            return a[0].member(l) + a[1].member(l)
        if k == "sub":
            return a[0].member(l) - a[1].member(l)
        if k == "mul":
            return a[0].member(l) * a[1].member(l)
        if k == "inv":
            return witt_inverse(a[0].member(l))
        raise ValueError(k)  # pragma: no cover

    @property
    def family(self) -> List[WittVector]:
        return [self.member(l) for l in range(1, self.m + 1)]

    def is_compatible(self) -> bool:
        """F(z^(l+1)) = z^(l) for all l < m."""
        return all(self.member(l + 1).frobenius() == self.member(l) for l in range(1, self.m))

    def witt_frobenius(self) -> "AinfElement":
        """The family (F z^(2), ..., F z^(m)), one shorter."""
        return AinfElement.from_family(self.tower, [self.member(l + 1).frobenius() for l in range(1, self.m)])

    def equals(self, other: "AinfElement", m: int | None = None) -> bool:
        m = min(self.m, other.m) if m is None else m
        return all(self.member(l) == other.member(l) for l in range(1, m + 1))

    def to_json(self):
        return [[self.tower.top.to_json(c) for c in self.member(l).coords] for l in range(1, self.m + 1)]


_RINGS: Dict[tuple, WittRing] = {}


def witt_ring_over(T: CyclotomicTower, l: int) -> WittRing:
    key = (T.p, T.N, T.c, l)
    W = _RINGS.get(key)
    if W is None:
        W = _RINGS[key] = WittRing(T.p, l, T.top)
    return W


def witt_inverse(x: WittVector) -> WittVector:
    """Inverse of a unit of W_l(O), by Newton iteration from [x_0^{-1}]."""
    W = x.ring
    B = W.base
    y = W.teichmuller(B.inverse(x.coords[0]))
    one, two = W.one(), W.from_int(2)
    for _ in range(64):
        xy = x * y
        if xy == one:
            return y
        y = y * (two - xy)
    raise PrecisionExhausted("Witt inverse did not converge")  # pragma: no cover


def teichmuller_ainf(r: RElement, m: int) -> AinfElement:
    return AinfElement.teich(r, m)


def project(l: int, x: AinfElement) -> WittVector:
    """The plain projection θ̃_l: the level-l member of the family."""
    return x.member(l)


def theta(n: int, x: AinfElement) -> WittVector:
    """θ_n(x) = θ̃_n(φ^n x) ∈ W_n(O_N/p^c)."""
    if n > x.m:
        raise InsufficientFamily(f"θ_{n} needs a family of length ≥ {n}")
    return x.phi(n).member(n)


def required_depth(n: int, m: int, c: int) -> int:
    """Tower depth so that [ε_n] has family members up to level m at precision p^c."""
    return n + m + c


def geometric_sum(r: RElement, count: int, m: int) -> AinfElement:
    """Σ_{j<count} [r]^j, built from Teichmüller leaves [r^j]."""
    T = r.tower
    out = AinfElement.const(T, 0, m) if count == 0 else None
    for j in range(count):
        leaf = AinfElement.const(T, 1, m) if j == 0 else AinfElement.teich(r ** j, m)
        out = leaf if out is None else out + leaf
    return out


def kernel_generator(eps: RElement, n: int, m: int) -> AinfElement:
    """g_n = Σ_{j<p^n} [ε_n]^j = ([ε] − 1)/([ε_n] − 1)."""
    p = eps.tower.p
    if n == 0:
        return AinfElement.const(eps.tower, 1, m)
    return geometric_sum(epsilon_root(eps, n), p ** n, m)


def geometric_identity(eps: RElement, n: int, m: int) -> bool:
    """g_n · ([ε_n] − 1) = [ε] − 1 on every family member."""
    g = kernel_generator(eps, n, m)
    en = AinfElement.teich(epsilon_root(eps, n), m) if n else AinfElement.teich(eps, m)
    lhs = g * (en - 1)
    rhs = AinfElement.teich(eps, m) - 1
    return lhs.equals(rhs)


def galois_factor(eps: RElement, n: int, c_unit: int, m: int) -> AinfElement:
    """a_σ = c · ([ε_n] − 1)/([ε_n^c] − 1) = c · (Σ_{j<c} [ε_n]^j)^{-1} for σ: ζ ↦ ζ^c."""
    p = eps.tower.p
    if c_unit % p == 0 or c_unit <= 0:
        raise NonUnitExponent(f"{c_unit} is not a positive representative of a p-adic unit")
    en = epsilon_root(eps, n) if n else eps
    G = geometric_sum(en, c_unit, m)
    return c_unit * G.inverse()


def cocycle_check(eps: RElement, n: int, c1: int, c2: int, m: int) -> dict:
    """a_{στ} = a_σ · σ(a_τ) with σ ↦ c1, τ ↦ c2, στ ↦ c1·c2; also σ(ε_n) = ε_n^{c1}."""
    en = epsilon_root(eps, n) if n else eps
    a_s = galois_factor(eps, n, c1, m)
    a_t = galois_factor(eps, n, c2, m)
    a_st = galois_factor(eps, n, c1 * c2, m)
    lhs = a_st
    rhs = a_s * a_t.galois(c1)
    return {"n": n, "c": [c1, c2], "galois_on_eps": en.galois(c1) == en ** c1,
            "cocycle": lhs.equals(rhs), "compatible": rhs.is_compatible()}


# ---------------------------------------------------------------------------
# the rank-one Tate-module model


@dataclass
class AlphaElement:
    """scalar · α_{ε,n}."""

    n: int
    scalar: AinfElement


class AlphaModule:
    """Free rank-one modules with generators α_{ε,n} and the maps R, F, σ."""

    def __init__(self, eps: RElement, m: int):
        self.eps = eps
        self.m = m
        self.p = eps.tower.p

    def eps_root(self, n):
        return epsilon_root(self.eps, n) if n else self.eps

    def teich_root(self, n) -> AinfElement:
        return AinfElement.teich(self.eps_root(n), self.m)

    def alpha(self, n) -> AlphaElement:
        return AlphaElement(n, AinfElement.const(self.eps.tower, 1, self.m))

    def bott(self, n) -> AlphaElement:
        """b_{ε,n} = ([ε_n] − 1) · α_{ε,n}."""
        return AlphaElement(n, self.teich_root(n) - 1)

    def R(self, x: AlphaElement) -> AlphaElement:
        """α_n ↦ ([ε_{n−1}] − 1)/([ε_n] − 1) · α_{n−1}; the ratio is Σ_{j<p} [ε_n]^j."""
        if x.n < 1:
            raise ValueError("R needs n ≥ 1")
        ratio = geometric_sum(self.eps_root(x.n), self.p, self.m)
        return AlphaElement(x.n - 1, x.scalar * ratio)

    def F(self, x: AlphaElement) -> AlphaElement:
        """α_n ↦ α_{n−1}; scalars go through F on their families."""
        if x.n < 1:
            raise ValueError("F needs n ≥ 1")
        return AlphaElement(x.n - 1, x.scalar.witt_frobenius())

    def galois(self, x: AlphaElement, c: int) -> AlphaElement:
        return AlphaElement(x.n, x.scalar.galois(c) * galois_factor(self.eps, x.n, c, self.m))

    def equal(self, x: AlphaElement, y: AlphaElement) -> bool:
        return x.n == y.n and x.scalar.equals(y.scalar)

    @staticmethod
    def symmetric_power(q: int) -> dict:
        """Degree 2q of the symmetric algebra on the rank-one module: free on α^{⊗q}."""
        if q < 0:
            return {"degree": 2 * q, "rank": 0, "generator": None}
        return {"degree": 2 * q, "rank": 1, "generator": f"alpha^{q}"}


def tate_module_model(eps: RElement, n: int, m: int | None = None) -> dict:
    """Checks of the Bott relation under R and F at level n."""
    if n < 1:
        raise ValueError("n ≥ 1")
    m = m or eps.tower.N - n - eps.tower.c
    A = AlphaModule(eps, m)
    Rb = A.R(A.bott(n))
    Fb = A.F(A.bott(n))
    expected_F = (A.teich_root(n) - 1).truncate(m - 1)
    return {
        "n": n,
        "m": m,
        "R_bott": A.equal(Rb, A.bott(n - 1)),
        "F_bott": Fb.scalar.equals(expected_F, m - 1),
        "rank": 1,
        "symmetric": [A.symmetric_power(q) for q in range(3)],
    }


def random_relement(T: CyclotomicTower, depth: int, rng: random.Random) -> RElement:
    """(y^{p^depth}, ..., y^p, y) for a random y in O_N/p."""
    F = T.residue
    y = F.random_raw(rng)
    comps = [y]
    for _ in range(depth):
        comps.append(F.pow(comps[-1], T.p))
    return RElement(T, comps[::-1], False)
