"""Truncated p-typical Witt vectors over arbitrary coefficient rings.

The ring structure comes from the universal integer polynomials

* ``S_i(x_0, y_0, ..., x_i, y_i)``  (sum),
* ``P_i(x_0, y_0, ..., x_i, y_i)``  (product),
* ``N_i(x_0, ..., x_i)``            (negation),
* ``Fr_i(x_0, ..., x_{i+1})``       (Frobenius, ghost shift),

obtained from the ghost components ``w_i = sum_j p^j a_j^(p^(i-j))`` by
exact division.  Binary polynomials use the interleaved variable order
``x0, y0, x1, y1, ...`` so that lower levels are prefixes of higher ones.

The polynomials are computed once per ``(p, kind)`` and extended lazily;
the table is guarded by a lock and may be mirrored on disk by setting
``DRWITT_CACHE_DIR``.
"""
from __future__ import annotations

import json
import os
import threading
from fractions import Fraction
from typing import Dict, List, Sequence

import numpy as np
from sympy import isprime

from .exact.errors import (LengthUnderflow, MismatchedWittParameters, NotDivisible,
                           TooLargeForExhaustiveCheck)
from .exact.polyz import PolyZ
from .exact.rings import (IntegerRing, LocalizedIntegers, QuotientRing,
                          Ring)

KINDS = ("S", "P", "N", "F")

# ---------------------------------------------------------------------------
# universal polynomials


def _variables(kind: str, i: int):
    """Variable names of the level-i polynomial of the given kind."""
    if kind in ("S", "P"):
        return tuple(f"{c}{j}" for j in range(i + 1) for c in "xy")
    if kind == "N":
        return tuple(f"x{j}" for j in range(i + 1))
    return tuple(f"x{j}" for j in range(i + 2))


class _Packed:
    """Dict-of-packed-monomials arithmetic used while running the recursion."""

    def __init__(self, nvars: int, bits: int):
        self.nvars = nvars
        self.bits = bits

    def pack(self, poly: PolyZ) -> Dict[int, int]:
        b = self.bits
        out = {}
        for m, c in poly.terms.items():
            key = 0
            for i, e in enumerate(m):
                key |= e << (b * i)
            out[key] = c
        return out

    def unpack(self, d: Dict[int, int], variables) -> PolyZ:
        b, w = self.bits, len(variables)
        mask = (1 << b) - 1
        return PolyZ(variables, {tuple((k >> (b * i)) & mask for i in range(w)): c for k, c in d.items()})

    def var_power(self, i: int, e: int) -> Dict[int, int]:
        return {e << (self.bits * i): 1}

    @staticmethod
    def mul(a, b):
        if len(a) < len(b):
            a, b = b, a
        t: Dict[int, int] = {}
        get = t.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                m = m1 + m2
                t[m] = get(m, 0) + c1 * c2
        return {m: c for m, c in t.items() if c}

    def pow(self, a, k):
        r = {0: 1}
        while k:
            if k & 1:
                r = self.mul(r, a)
            k >>= 1
            if k:
                a = self.mul(a, a)
        return r

    @staticmethod
    def axpy(acc, a, s):
        for m, c in a.items():
            v = acc.get(m, 0) + s * c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return acc


class UniversalWittPolys:
    """Lazily extended table of the universal Witt polynomials for one prime."""

    def __init__(self, p: int):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self._polys: Dict[str, List[PolyZ]] = {k: [] for k in KINDS}
        self._lock = threading.RLock()

    # public API ---------------------------------------------------------
    def get(self, kind: str, i: int) -> PolyZ:
        if kind not in KINDS:
            raise ValueError(f"unknown polynomial family {kind!r}")
        with self._lock:
            while len(self._polys[kind]) <= i:
                self._extend(kind)
            return self._polys[kind][i]

    def family(self, kind: str, n: int) -> List[PolyZ]:
        return [self.get(kind, i) for i in range(n)]

    # construction ---------------------------------------------------------
    def _cache_path(self, kind: str, i: int):
        root = os.environ.get("DRWITT_CACHE_DIR")
        if not root:
            return None
        return os.path.join(root, f"witt_{kind}_p{self.p}_{i}.json")

    def _extend(self, kind: str):
        i = len(self._polys[kind])
        path = self._cache_path(kind, i)
        if path and os.path.exists(path):
            with open(path) as fh:
                poly = PolyZ.from_json(json.load(fh))
            if poly.vars == _variables(kind, i):
                self._polys[kind].append(poly)
                return
        poly = self._compute(kind, i)
        self._polys[kind].append(poly)
        if path:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            tmp = f"{path}.{os.getpid()}.{threading.get_ident()}.tmp"
            with open(tmp, "w") as fh:
                json.dump(poly.to_json(), fh, sort_keys=True)
            os.replace(tmp, path)

    def _compute(self, kind: str, i: int) -> PolyZ:
        p = self.p
        variables = _variables(kind, i)
        top = i + 1 if kind == "F" else i
        bits = (p ** top).bit_length() + 1
        pk = _Packed(len(variables), bits)
        slot = {"S": lambda j, c: 2 * j + (c == "y"), "P": lambda j, c: 2 * j + (c == "y"),
                "N": lambda j, c: j, "F": lambda j, c: j}[kind]

        def ghost(level, c):
            g: Dict[int, int] = {}
            for j in range(level + 1):
                pk.axpy(g, pk.var_power(slot(j, c), p ** (level - j)), p ** j)
            return g

        if kind == "S":
            g = pk.axpy(ghost(i, "x"), ghost(i, "y"), 1)
        elif kind == "P":
            g = pk.mul(ghost(i, "x"), ghost(i, "y"))
        elif kind == "N":
            g = pk.axpy({}, ghost(i, "x"), -1)
        else:
            g = ghost(i + 1, "x")
        for j in range(i):
            lower = self._polys[kind][j]
            lower = lower.substitute_vars(variables, list(range(len(lower.vars))))
            pk.axpy(g, pk.pow(pk.pack(lower), p ** (i - j)), -(p ** j))
        q = p ** i
        out = {}
        for m, c in g.items():
            quo, rem = divmod(c, q)
            if rem:
                raise NotDivisible(f"ghost recursion for {kind}_{i} (p={p}) is not integral")
            out[m] = quo
        return pk.unpack(out, variables)


_TABLES: Dict[int, UniversalWittPolys] = {}
_TABLES_LOCK = threading.Lock()


def universal_polys(p: int, n: int | None = None) -> UniversalWittPolys:
    """Shared table for the prime p; if ``n`` is given, levels < n are built."""
    with _TABLES_LOCK:
        table = _TABLES.get(p)
        if table is None:
            table = _TABLES[p] = UniversalWittPolys(p)
    if n is not None:
        for kind in ("S", "P", "N"):
            table.family(kind, n)
        if n > 1:
            table.family("F", n - 1)
    return table


# ---------------------------------------------------------------------------
# Witt vectors over a ring


def _divide_by_int(ring: Ring, a, q: int):
    """Exact division of a raw ring element by the integer q (torsion-free rings)."""
    if isinstance(ring, IntegerRing):
        quo, rem = divmod(a, q)
        if rem:
            raise NotDivisible(f"{a} is not divisible by {q}")
        return quo
    if isinstance(ring, LocalizedIntegers):
        x = Fraction(a) / q
        if x.denominator % ring.p == 0:
            raise NotDivisible(f"{a} is not divisible by {q} in {ring.name}")
        return x
    if isinstance(ring, QuotientRing):
        return tuple(_divide_by_int(ring.base, c, q) for c in a)
    raise NotDivisible(f"ghost inversion is not available over {ring!r}")


class WittRing:
    """W_n(A) for a prime p and a coefficient ring A."""

    def __init__(self, p: int, n: int, base: Ring):
        if n < 1:
            raise LengthUnderflow("Witt length must be at least 1")
        self.p = p
        self.n = n
        self.base = base
        self.table = universal_polys(p)
        self._compiled: Dict[tuple, object] = {}
        self._lock = threading.Lock()

    def __eq__(self, other):
        return (isinstance(other, WittRing) and (self.p, self.n) == (other.p, other.n)
                and self.base is other.base)

    def __hash__(self):
        return hash((self.p, self.n, id(self.base)))

    def __repr__(self):
        return f"W_{self.n}({self.base.name}) [p={self.p}]"

    def _poly(self, kind: str, i: int):
        key = (kind, i)
        fn = self._compiled.get(key)
        if fn is None:
            B = self.base
            fn = self.table.get(kind, i).compile(B.add, B.mul, B.from_int, B.zero)
            with self._lock:
                self._compiled[key] = fn
        return fn

    # constructors -----------------------------------------------------------
    def __call__(self, coords) -> "WittVector":
        B = self.base
        coords = [B.from_int(c) if isinstance(c, int) else B.normal_form(c) for c in coords]
        if len(coords) != self.n:
            raise MismatchedWittParameters(f"expected {self.n} coordinates, got {len(coords)}")
        return WittVector(self, tuple(coords))

    def zero(self) -> "WittVector":
        return WittVector(self, (self.base.zero,) * self.n)

    def one(self) -> "WittVector":
        return self.teichmuller(self.base.one)

    def teichmuller(self, a) -> "WittVector":
        B = self.base
        a = B.from_int(a) if isinstance(a, int) else a
        return WittVector(self, (a,) + (B.zero,) * (self.n - 1))

    def from_int(self, k: int) -> "WittVector":
        """k·1 by double-and-add with Witt addition."""
        neg = k < 0
        k = abs(k)
        acc = self.zero()
        base = self.one()
        while k:
            if k & 1:
                acc = acc + base
            k >>= 1
            if k:
                base = base + base
        return -acc if neg else acc

    def random(self, rng) -> "WittVector":
        return WittVector(self, tuple(self.base.random_raw(rng) for _ in range(self.n)))

    def from_ghost(self, ghost: Sequence) -> "WittVector":
        """Invert the ghost map over a p-torsion-free ring (exact division)."""
        B, p = self.base, self.p
        coords = []
        for i, w in enumerate(ghost[: self.n]):
            acc = w
            for j, a in enumerate(coords):
                acc = B.sub(acc, B.scale(p ** j, B.pow(a, p ** (i - j))))
            coords.append(_divide_by_int(B, acc, p ** i))
        return WittVector(self, tuple(coords))

    def with_length(self, n: int) -> "WittRing":
        return witt_ring(self.p, n, self.base)

    def elements(self):
        """All elements, for finite coefficient rings."""
        import itertools
        for coords in itertools.product(list(self.base.elements()), repeat=self.n):
            yield WittVector(self, tuple(coords))

    def to_json_ring(self) -> str:
        return self.base.name


_RINGS: Dict[tuple, WittRing] = {}
_RINGS_LOCK = threading.Lock()


def witt_ring(p: int, n: int, base: Ring) -> WittRing:
    """Memoized :class:`WittRing` constructor (compiled evaluators are shared)."""
    key = (p, n, id(base))
    with _RINGS_LOCK:
        R = _RINGS.get(key)
        if R is None or R.base is not base:
            R = _RINGS[key] = WittRing(p, n, base)
        return R


class WittVector:
    """An element (a_0, ..., a_{n-1}) of W_n(A)."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: WittRing, coords: tuple):
        self.ring = ring
        self.coords = coords

    @property
    def p(self):
        return self.ring.p

    @property
    def n(self):
        return self.ring.n

    def _same(self, other: "WittVector"):
        if not isinstance(other, WittVector):
            raise MismatchedWittParameters("not a Witt vector")
        a, b = self.ring, other.ring
        if (a.p, a.n) != (b.p, b.n) or a.base is not b.base:
            raise MismatchedWittParameters(f"{a!r} vs {b!r}")

    def _binary(self, other, kind):
        self._same(other)
        R = self.ring
        vals = []
        out = []
        for i in range(R.n):
            vals.extend((self.coords[i], other.coords[i]))
            out.append(R._poly(kind, i)(vals))
        return WittVector(R, tuple(out))

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        return self._binary(other, "S")

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        return self._binary(other, "P")

    __rmul__ = __mul__

    def __neg__(self):
        R = self.ring
        return WittVector(R, tuple(R._poly("N", i)(self.coords[: i + 1]) for i in range(R.n)))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __pow__(self, k: int):
        acc = self.ring.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            k >>= 1
            if k:
                base = base * base
        return acc

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, WittVector):
            return NotImplemented
        self._same(other)
        B = self.ring.base
        return all(B.is_zero(B.sub(a, b)) for a, b in zip(self.coords, other.coords))

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self) -> bool:
        B = self.ring.base
        return all(B.is_zero(a) for a in self.coords)

    def __repr__(self):
        B = self.ring.base
        return "(" + ", ".join(B.to_str(a) for a in self.coords) + ")"

    # structure maps -----------------------------------------------------
    def ghost(self) -> tuple:
        B, p = self.ring.base, self.p
        out = []
        for i in range(self.n):
            acc = B.zero
            for j in range(i + 1):
                acc = B.add(acc, B.scale(p ** j, B.pow(self.coords[j], p ** (i - j))))
            out.append(acc)
        return tuple(out)

    def frobenius(self) -> "WittVector":
        if self.n < 2:
            raise LengthUnderflow("F needs length at least 2")
        R = self.ring
        target = R.with_length(self.n - 1)
        return WittVector(target, tuple(R._poly("F", i)(self.coords[: i + 2]) for i in range(self.n - 1)))

    def verschiebung(self) -> "WittVector":
        target = self.ring.with_length(self.n + 1)
        return WittVector(target, (self.ring.base.zero,) + self.coords)

    def restriction(self) -> "WittVector":
        if self.n < 2:
            raise LengthUnderflow("R needs length at least 2")
        return WittVector(self.ring.with_length(self.n - 1), self.coords[:-1])

    F = frobenius
    V = verschiebung
    R = restriction

    def to_json(self):
        B = self.ring.base
        return {"p": self.p, "n": self.n, "ring": B.name, "coords": [B.to_json(a) for a in self.coords]}


def ghost(x: WittVector) -> tuple:
    return x.ghost()


def teichmuller(a, n: int, p: int, base: Ring) -> WittVector:
    return witt_ring(p, n, base).teichmuller(a)


def verschiebung(x: WittVector) -> WittVector:
    return x.verschiebung()


def frobenius(x: WittVector) -> WittVector:
    return x.frobenius()


def restriction(x: WittVector) -> WittVector:
    return x.restriction()


# ---------------------------------------------------------------------------
# W_n(F_p) = Z/p^n, checked exhaustively

EXHAUSTIVE_LIMIT = 10 ** 4


def _eval_vectorized(poly: PolyZ, columns: Sequence[np.ndarray], mod: int) -> np.ndarray:
    """Evaluate ``poly`` on columns of values modulo ``mod`` (numpy, exact)."""
    size = len(columns[0])
    maxexp = [0] * len(poly.vars)
    for m in poly.terms:
        for i, e in enumerate(m):
            maxexp[i] = max(maxexp[i], e)
    powers = []
    for i, col in enumerate(columns):
        row = [np.ones(size, dtype=np.int64), col % mod]
        for _ in range(maxexp[i] - 1):
            row.append(row[-1] * col % mod)
        powers.append(row)
    total = np.zeros(size, dtype=np.int64)
    for m, c in poly.terms.items():
        term = np.full(size, c % mod, dtype=np.int64)
        for i, e in enumerate(m):
            if e:
                term = term * powers[i][e] % mod
        total = (total + term) % mod
    return total


def witt_fp_iso(p: int, n: int) -> dict:
    """Verify (a_0, ..., a_{n-1}) ↦ Σ p^s τ(a_s) is a ring isomorphism W_n(F_p) → Z/p^n.

    τ(a) is the Teichmüller representative a^(p^(n-1)) mod p^n.  Every pair
    of elements is added and multiplied with the universal polynomials.
    """
    size = p ** n
    if size > EXHAUSTIVE_LIMIT:
        raise TooLargeForExhaustiveCheck(f"p^n = {size} exceeds {EXHAUSTIVE_LIMIT}")
    table = universal_polys(p, n)
    mod = size
    # all Witt vectors, coordinate s as a column
    idx = np.arange(size, dtype=np.int64)
    coords = [(idx // p ** s) % p for s in range(n)]
    tau = np.array([pow(a, p ** (n - 1), mod) for a in range(p)], dtype=np.int64)
    phi = np.zeros(size, dtype=np.int64)
    for s in range(n):
        phi = (phi + p ** s * tau[coords[s]]) % mod
    bijective = len(set(phi.tolist())) == size
    # all pairs
    xi = np.repeat(idx, size)
    yi = np.tile(idx, size)
    cols = []
    for s in range(n):
        cols.extend((coords[s][xi], coords[s][yi]))
    ok_add = ok_mul = True
    for kind in ("S", "P"):
        res = np.zeros(size * size, dtype=np.int64)
        for s in range(n):
            c = _eval_vectorized(table.get(kind, s), cols[: 2 * s + 2], p)
            res = res + c * p ** s
        expected = (phi[xi] + phi[yi]) % mod if kind == "S" else (phi[xi] * phi[yi]) % mod
        ok = bool(np.array_equal(phi[res], expected))
        if kind == "S":
            ok_add = ok
        else:
            ok_mul = ok
    return {"p": p, "n": n, "bijective": bijective, "additive": ok_add, "multiplicative": ok_mul,
            "verified": bijective and ok_add and ok_mul, "checked": size * size}
