"""Presented commutative rings with decidable equality.

Each ring object owns the arithmetic of its *raw* elements (plain ints,
``Fraction`` objects or tuples).  Raw values are always stored in normal
form, so equality of raw values is equality in the ring.  Hot loops
(Witt polynomial evaluation, the de Rham-Witt engine) call ``add``/``mul``
on raw values directly; :class:`RingElement` wraps a raw value with
operator overloading for interactive use and tests.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Sequence, Tuple

from sympy import isprime

from .errors import NonInvertibleDivision, NormalFormUnavailable


class Ring:
    """Interface shared by all presented rings."""

    name = "ring"
    gens: Tuple[str, ...] = ()

    # raw-element arithmetic --------------------------------------------
    zero = 0
    one = 1

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def inverse(self, a):
        raise NonInvertibleDivision(f"{self.to_str(a)} is not invertible in {self.name}")

    def pow(self, a, k: int):
        if k < 0:
            return self.pow(self.inverse(a), -k)
        result, base = self.one, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def scale(self, n: int, a):
        return self.mul(self.from_int(n), a)

    def normal_form(self, a):
        return a

    def random_raw(self, rng: random.Random):
        raise NotImplementedError

    def to_str(self, a) -> str:
        return str(a)

    def to_json(self, a):
        return str(a)

    def from_json(self, data):
        raise NotImplementedError

    def characteristic(self) -> int:
        """Additive order of 1 (0 for characteristic zero)."""
        raise NotImplementedError

    # element wrapper ----------------------------------------------------
    def __call__(self, value) -> "RingElement":
        if isinstance(value, RingElement):
            if value.ring is not self:
                raise ValueError("element of a different ring")
            return value
        if isinstance(value, int):
            return RingElement(self, self.from_int(value))
        return RingElement(self, self.normal_form(value))

    def gen(self, name: str) -> "RingElement":
        raise ValueError(f"{self.name} has no generator {name!r}")

    def elem(self, raw) -> "RingElement":
        return RingElement(self, raw)

    def __repr__(self):
        return self.name


class RingElement:
    __slots__ = ("ring", "raw")

    def __init__(self, ring: Ring, raw):
        self.ring = ring
        self.raw = raw

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring is not self.ring:
                raise ValueError("elements of different rings")
            return other.raw
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RingElement(self.ring, self.ring.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RingElement(self.ring, self.ring.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RingElement(self.ring, self.ring.sub(o, self.raw))

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.raw))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RingElement(self.ring, self.ring.mul(self.raw, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RingElement(self.ring, self.ring.mul(self.raw, self.ring.inverse(o)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RingElement(self.ring, self.ring.mul(o, self.ring.inverse(self.raw)))

    def __pow__(self, k: int):
        return RingElement(self.ring, self.ring.pow(self.raw, k))

    def inverse(self):
        return RingElement(self.ring, self.ring.inverse(self.raw))

    def is_zero(self):
        return self.ring.is_zero(self.raw)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.raw == o

    def __hash__(self):
        return hash(self.raw)

    def __repr__(self):
        return self.ring.to_str(self.raw)


# ---------------------------------------------------------------------------
# base rings


class IntegerRing(Ring):
    name = "ZZ"

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def from_int(self, n):
        return n

    def scale(self, n, a):
        return n * a

    def inverse(self, a):
        if a in (1, -1):
            return a
        return super().inverse(a)

    def random_raw(self, rng):
        return rng.randint(-20, 20)

    def from_json(self, data):
        return int(data)

    def characteristic(self):
        return 0


class IntegerModRing(Ring):
    """Z/m; raw elements are ints in ``range(m)``."""

    def __init__(self, modulus: int):
        if modulus < 1:
            raise ValueError("modulus must be positive")
        self.modulus = modulus
        self.name = f"Z/{modulus}"
        self.zero = 0
        self.one = 1 % modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def from_int(self, n):
        return n % self.modulus

    def scale(self, n, a):
        return (n * a) % self.modulus

    def inverse(self, a):
        if gcd(a, self.modulus) != 1:
            return super().inverse(a)
        return pow(a, -1, self.modulus)

    def random_raw(self, rng):
        return rng.randrange(self.modulus)

    def from_json(self, data):
        return int(data) % self.modulus

    def characteristic(self):
        return self.modulus

    def elements(self):
        return range(self.modulus)

    @property
    def is_field(self) -> bool:
        return isprime(self.modulus)


def PrimeField(p: int) -> IntegerModRing:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    ring = IntegerModRing(p)
    ring.name = f"F_{p}"
    return ring


class LocalizedIntegers(Ring):
    """Z_(p): fractions whose reduced denominator is prime to p."""

    def __init__(self, p: int):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"Z_({p})"
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def _check(self, x: Fraction) -> Fraction:
        if x.denominator % self.p == 0:
            raise NonInvertibleDivision(f"{x} does not lie in {self.name}")
        return x

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def from_int(self, n):
        return Fraction(n)

    def inverse(self, a):
        if a.numerator % self.p == 0:
            return super().inverse(a)
        return 1 / a

    def normal_form(self, a):
        return self._check(Fraction(a))

    def valuation(self, a) -> int:
        if a == 0:
            raise ValueError("valuation of zero")
        v, num = 0, a.numerator
        while num % self.p == 0:
            num //= self.p
            v += 1
        return v

    def reduce_mod(self, a, modulus: int) -> int:
        """Image of ``a`` in Z/modulus (modulus a power of p)."""
        return a.numerator * pow(a.denominator, -1, modulus) % modulus

    def random_raw(self, rng):
        den = rng.choice([d for d in range(1, 12) if d % self.p])
        return Fraction(rng.randint(-20, 20), den)

    def to_str(self, a):
        return str(a)

    def from_json(self, data):
        return self._check(Fraction(data))

    def characteristic(self):
        return 0


# ---------------------------------------------------------------------------
# univariate quotients B[x]/(f), f monic


class QuotientRing(Ring):
    """``base[var]/(modulus)`` for a monic modulus; raw elements are coefficient tuples.

    ``modulus`` lists coefficients from the constant term upward, leading 1
    included.  Every element is stored as its remainder of degree < deg(f).
    """

    def __init__(self, base: Ring, var: str, modulus: Sequence[int]):
        modulus = [base.from_int(c) if isinstance(c, int) else c for c in modulus]
        if modulus[-1] != base.one:
            raise NormalFormUnavailable("quotient normal forms need a monic modulus")
        self.base = base
        self.var = var
        self.gens = (var,)
        self.degree = len(modulus) - 1
        self.modulus = tuple(modulus)
        # x^d = -(f_0 + ... + f_{d-1} x^{d-1})
        self._tail = tuple(base.neg(c) for c in modulus[:-1])
        self.zero = (base.zero,) * self.degree
        self.one = (base.one,) + (base.zero,) * (self.degree - 1)
        self.name = f"{base.name}[{var}]/({_poly_str(modulus, var, base)})"

    def add(self, a, b):
        add = self.base.add
        return tuple(add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        neg = self.base.neg
        return tuple(neg(x) for x in a)

    def sub(self, a, b):
        sub = self.base.sub
        return tuple(sub(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        base = self.base
        d = self.degree
        if d == 1:
            return (base.mul(a[0], b[0]),)
        prod = [base.zero] * (2 * d - 1)
        bmul, badd = base.mul, base.add
        for i, x in enumerate(a):
            if base.is_zero(x):
                continue
            for j, y in enumerate(b):
                prod[i + j] = badd(prod[i + j], bmul(x, y))
        return self._reduce(prod)

    def _reduce(self, coeffs):
        base = self.base
        d = self.degree
        coeffs = list(coeffs)
        for k in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[k]
            if base.is_zero(c):
                continue
            coeffs[k] = base.zero
            for i, t in enumerate(self._tail):
                coeffs[k - d + i] = base.add(coeffs[k - d + i], base.mul(c, t))
        coeffs += [base.zero] * (d - len(coeffs))
        return tuple(coeffs[:d])

    def from_int(self, n):
        return (self.base.from_int(n),) + (self.base.zero,) * (self.degree - 1)

    def scale(self, n, a):
        return tuple(self.base.scale(n, x) for x in a)

    def from_base(self, c):
        return (c,) + (self.base.zero,) * (self.degree - 1)

    def from_coeffs(self, coeffs: Iterable) -> tuple:
        coeffs = [self.base.from_int(c) if isinstance(c, int) else c for c in coeffs]
        return self._reduce(coeffs)

    def gen_raw(self):
        return self._reduce([self.base.zero, self.base.one])

    def gen(self, name):
        if name != self.var:
            return super().gen(name)
        return RingElement(self, self.gen_raw())

    def normal_form(self, a):
        return self._reduce([self.base.normal_form(c) for c in a])

    def inverse(self, a):
        # solve a*x = 1 by linear algebra over the base when it is a field or local ring
        return _invert_by_linear_algebra(self, a)

    def random_raw(self, rng):
        return tuple(self.base.random_raw(rng) for _ in range(self.degree))

    def to_str(self, a):
        return _poly_str(a, self.var, self.base)

    def to_json(self, a):
        return [self.base.to_json(c) for c in a]

    def from_json(self, data):
        return self.normal_form([self.base.from_json(c) for c in data])

    def characteristic(self):
        return self.base.characteristic()

    def relation_polys(self):
        """Relations as ``{exponent tuple: base raw}`` maps over the generator."""
        return [{(i,): c for i, c in enumerate(self.modulus) if not self.base.is_zero(c)}]

    def elements(self):
        base_elems = list(self.base.elements())
        for coeffs in itertools.product(base_elems, repeat=self.degree):
            yield tuple(coeffs)


def _invert_by_linear_algebra(ring: QuotientRing, a):
    """Invert ``a`` in a finite free extension by iterating Newton on a residue inverse."""
    base = ring.base
    d = ring.degree
    # multiplication-by-a matrix columns: a * x^j
    cols = []
    xj = ring.one
    x = ring.gen_raw()
    for _ in range(d):
        cols.append(ring.mul(a, xj))
        xj = ring.mul(xj, x)
    # Gauss-Jordan over the base, requiring unit pivots
    mat = [[cols[j][i] for j in range(d)] + [ring.one[i]] for i in range(d)]
    for c in range(d):
        piv = None
        for r in range(c, d):
            try:
                inv = base.inverse(mat[r][c])
            except NonInvertibleDivision:
                continue
            piv = r
            break
        if piv is None:
            raise NonInvertibleDivision(f"{ring.to_str(a)} is not invertible in {ring.name}")
        mat[c], mat[piv] = mat[piv], mat[c]
        inv = base.inverse(mat[c][c])
        mat[c] = [base.mul(inv, v) for v in mat[c]]
        for r in range(d):
            if r != c and not base.is_zero(mat[r][c]):
                f = mat[r][c]
                mat[r] = [base.sub(v, base.mul(f, w)) for v, w in zip(mat[r], mat[c])]
    result = tuple(mat[i][d] for i in range(d))
    if ring.mul(a, result) != ring.one:
        raise NonInvertibleDivision(f"{ring.to_str(a)} is not invertible in {ring.name}")
    return result


def _poly_str(coeffs, var, base) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if base.is_zero(c):
            continue
        cs = base.to_str(c)
        if i == 0:
            parts.append(cs)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            parts.append(mono if cs == "1" else f"{cs}*{mono}")
    if not parts:
        return "0"
    out = parts[0]
    for t in parts[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


# ---------------------------------------------------------------------------
# multivariate polynomial rings with triangular relations or localization

BasePoly = Dict[Tuple[int, ...], object]


class PresentedRing(Ring):
    """``base[gens] / (relations)`` localized at ``inverted``.

    Supported presentations (others raise :class:`NormalFormUnavailable`):

    * relations that are monic in a pure power of distinct generators and
      involve only that generator and earlier ones ("triangular");
    * no relations, with a finite list of inverted polynomials.  Raw
      elements are then ``(numerator, exponents)`` pairs and factors of the
      numerator divisible by an inverted polynomial are cancelled.
    """

    def __init__(self, base: Ring, gens: Sequence[str], relations: Sequence[BasePoly] = (),
                 inverted: Sequence[BasePoly] = ()):
        self.base = base
        self.gens = tuple(gens)
        self.nvars = len(self.gens)
        self.relations = [self._clean(r) for r in relations]
        self.inverted = [self._clean(u) for u in inverted]
        if self.relations and self.inverted:
            raise NormalFormUnavailable("relations combined with localization are not supported")
        self._rules = {}
        for rel in self.relations:
            lead, rest = self._triangular_rule(rel)
            self._rules[lead[0]] = (lead[1], rest)
        zero_poly = ()
        self.zero = (zero_poly, (0,) * len(self.inverted))
        self.one = (self._freeze({(0,) * self.nvars: base.one}), (0,) * len(self.inverted))
        rels = ", ".join(self._pstr(r) for r in self.relations)
        inv = ", ".join(self._pstr(u) for u in self.inverted)
        self.name = f"{base.name}[{','.join(self.gens)}]"
        if rels:
            self.name += f"/({rels})"
        if inv:
            self.name += f"[1/({inv})]"

    # polynomial helpers over the base -----------------------------------
    def _clean(self, poly):
        base = self.base
        out = {}
        for m, c in dict(poly).items():
            c = base.from_int(c) if isinstance(c, int) else base.normal_form(c)
            if not base.is_zero(c):
                m = tuple(m)
                out[m] = base.add(out[m], c) if m in out else c
        return {m: c for m, c in out.items() if not base.is_zero(c)}

    @staticmethod
    def _freeze(poly):
        return tuple(sorted(poly.items()))

    def _padd(self, f, g, sign=1):
        base = self.base
        out = dict(f)
        for m, c in g.items():
            c = c if sign == 1 else base.neg(c)
            v = base.add(out[m], c) if m in out else c
            if base.is_zero(v):
                out.pop(m, None)
            else:
                out[m] = v
        return out

    def _pmul(self, f, g):
        base = self.base
        out = {}
        for m1, c1 in f.items():
            for m2, c2 in g.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = base.mul(c1, c2)
                out[m] = base.add(out[m], v) if m in out else v
        return {m: c for m, c in out.items() if not base.is_zero(c)}

    def _pstr(self, f):
        if not f:
            return "0"
        parts = []
        for m, c in sorted(f.items(), key=lambda mc: (sum(mc[0]), mc[0]), reverse=True):
            mono = "*".join(g if e == 1 else f"{g}^{e}" for g, e in zip(self.gens, m) if e)
            cs = self.base.to_str(c)
            parts.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
        return " + ".join(parts)

    def _triangular_rule(self, rel):
        base = self.base
        leads = [(m, c) for m, c in rel.items()
                 if sum(1 for e in m if e) == 1 and c == base.one]
        for m, c in sorted(leads, key=lambda mc: max(range(self.nvars), key=lambda i: mc[0][i]), reverse=True):
            i = max(range(self.nvars), key=lambda j: m[j])
            d = m[i]
            rest = {mm: base.neg(cc) for mm, cc in rel.items() if mm != m}
            if all(mm[i] < d and all(e == 0 for e in mm[i + 1:]) for mm in rest):
                if i in self._rules:
                    break
                return (i, d), rest
        raise NormalFormUnavailable(f"relation {self._pstr(rel)} is not triangular")

    def _reduce_poly(self, f):
        if not self._rules:
            return f
        f = dict(f)
        changed = True
        while changed:
            changed = False
            for m in sorted(f, key=lambda mm: mm[::-1], reverse=True):
                for i, (d, rest) in self._rules.items():
                    if m[i] >= d:
                        c = f.pop(m)
                        shift = tuple(e - d if j == i else e for j, e in enumerate(m))
                        g = self._pmul({shift: c}, rest)
                        f = self._padd(f, g)
                        changed = True
                        break
                if changed:
                    break
        return f

    def _divide_exact(self, f, g):
        """Return q with f = q*g, or None; lex division with unit leading coefficient."""
        base = self.base
        if not g:
            return None
        lead = max(g)
        try:
            lc_inv = base.inverse(g[lead])
        except NonInvertibleDivision:
            return None
        q = {}
        r = dict(f)
        while r:
            m = max(r)
            shift = tuple(a - b for a, b in zip(m, lead))
            if any(e < 0 for e in shift):
                return None
            c = base.mul(r[m], lc_inv)
            q[shift] = c
            r = self._padd(r, self._pmul({shift: c}, g), sign=-1)
        return q

    # ring interface ------------------------------------------------------
    def _make(self, num, exps):
        num = self._reduce_poly(num)
        exps = list(exps)
        if not num:
            return self.zero
        for k, u in enumerate(self.inverted):
            while exps[k] > 0:
                q = self._divide_exact(num, u)
                if q is None:
                    break
                num = q
                exps[k] -= 1
        return (self._freeze(num), tuple(exps))

    def normal_form(self, a):
        num, exps = a
        return self._make(self._clean(dict(num)), exps)

    def add(self, a, b):
        (fa, ea), (fb, eb) = a, b
        fa, fb = dict(fa), dict(fb)
        common = tuple(max(x, y) for x, y in zip(ea, eb))
        fa = self._pmul(fa, self._denominator_power([c - x for c, x in zip(common, ea)]))
        fb = self._pmul(fb, self._denominator_power([c - x for c, x in zip(common, eb)]))
        return self._make(self._padd(fa, fb), common)

    def _denominator_power(self, exps):
        out = {(0,) * self.nvars: self.base.one}
        for u, k in zip(self.inverted, exps):
            for _ in range(k):
                out = self._pmul(out, u)
        return out

    def neg(self, a):
        num, exps = a
        return (tuple((m, self.base.neg(c)) for m, c in num), exps)

    def mul(self, a, b):
        (fa, ea), (fb, eb) = a, b
        return self._make(self._pmul(dict(fa), dict(fb)), [x + y for x, y in zip(ea, eb)])

    def from_int(self, n):
        c = self.base.from_int(n)
        if self.base.is_zero(c):
            return self.zero
        return (((((0,) * self.nvars), c),), (0,) * len(self.inverted))

    def from_poly(self, poly):
        return self._make(self._clean(poly), (0,) * len(self.inverted))

    def gen_raw(self, name):
        i = self.gens.index(name)
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return self.from_poly({mono: 1})

    def gen(self, name):
        if name not in self.gens:
            return super().gen(name)
        return RingElement(self, self.gen_raw(name))

    def is_zero(self, a):
        return not a[0]

    def inverse(self, a):
        num, exps = a
        num = dict(num)
        # monomial multiple of a product of inverted elements (times a base unit)
        for k, u in enumerate(self.inverted):
            q = self._divide_exact(num, u)
            if q is not None:
                rest = self.inverse(self._make(q, [0] * len(self.inverted)))
                e = [0] * len(self.inverted)
                e[k] = 1
                return self.mul(rest, self._make(self._clean(dict(self._denominator_power(exps))), e))
        if len(num) == 1:
            (m, c), = num.items()
            if not any(m):
                inv = self.base.inverse(c)
                return self.mul(self._make({m: inv}, [0] * len(exps)),
                                self._make(self._denominator_power(exps), [0] * len(exps)))
        return super().inverse(a)

    def to_str(self, a):
        num, exps = a
        s = self._pstr(dict(num))
        den = [f"({self._pstr(u)})^{k}" if k > 1 else f"({self._pstr(u)})"
               for u, k in zip(self.inverted, exps) if k]
        return s if not den else f"({s})/{'*'.join(den)}"

    def to_json(self, a):
        num, exps = a
        return {"num": [[list(m), self.base.to_json(c)] for m, c in num], "den": list(exps)}

    def from_json(self, data):
        num = {tuple(m): self.base.from_json(c) for m, c in data["num"]}
        return self._make(num, data["den"])

    def random_raw(self, rng):
        poly = {}
        for _ in range(rng.randint(0, 3)):
            m = tuple(rng.randint(0, 2) for _ in range(self.nvars))
            poly[m] = self.base.random_raw(rng)
        exps = [rng.randint(0, 1) for _ in self.inverted]
        return self._make(self._clean(poly), exps)

    def characteristic(self):
        return self.base.characteristic()

    def relation_polys(self):
        return [dict(r) for r in self.relations]

    def inverted_polys(self):
        return [dict(u) for u in self.inverted]


# ---------------------------------------------------------------------------
# helpers


def normal_form(expr, ring: Ring | None = None):
    """Canonical form of an expression: a :class:`RingElement` or a raw value."""
    if isinstance(expr, RingElement):
        return RingElement(expr.ring, expr.ring.normal_form(expr.raw))
    if ring is None:
        raise ValueError("a ring is required for raw values")
    return RingElement(ring, ring.normal_form(expr))


def truncated_dvr(p: int, e: int, precision: int) -> Ring:
    """(Z/p^precision)[pi]/(pi^e - p), or Z/p^precision when e == 1."""
    base = IntegerModRing(p ** precision)
    if e == 1:
        return base
    modulus = [-p] + [0] * (e - 1) + [1]
    return QuotientRing(base, "pi", modulus)
