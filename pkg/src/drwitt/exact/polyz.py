"""Sparse multivariate polynomials with integer coefficients.

A :class:`PolyZ` is a map from exponent tuples to nonzero Python ints over a
fixed, ordered tuple of variable names.  Monomials are compared in graded
lexicographic order everywhere output order matters.
"""
from __future__ import annotations

from typing import Callable, Dict, Iterable, Sequence, Tuple

from .errors import NotDivisible, ZeroDivisor

Monomial = Tuple[int, ...]


def grlex_key(mono: Monomial):
    return (sum(mono), mono)


class PolyZ:
    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Dict[Monomial, int] | None = None):
        self.vars = tuple(variables)
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, variables, c: int) -> "PolyZ":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name: str) -> "PolyZ":
        i = tuple(variables).index(name)
        mono = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, {mono: 1})

    def _like(self, terms) -> "PolyZ":
        out = PolyZ.__new__(PolyZ)
        out.vars = self.vars
        out.terms = terms
        return out

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = PolyZ.const(self.vars, other)
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return self._like(t)

    __radd__ = __add__

    def __neg__(self):
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = PolyZ.const(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self._like({})
            return self._like({m: c * other for m, c in self.terms.items()})
        self._check(other)
        if not self.terms or not other.terms:
            return self._like({})
        # pack exponent tuples into ints so monomial products are int additions
        bits = (self._maxexp() + other._maxexp()).bit_length() + 1
        a = _pack(self.terms, bits)
        b = _pack(other.terms, bits)
        t: Dict[int, int] = {}
        get = t.get
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = m1 + m2
                t[m] = get(m, 0) + c1 * c2
        return self._like(_unpack({m: c for m, c in t.items() if c}, bits, len(self.vars)))

    def _maxexp(self) -> int:
        return max((max(m) if m else 0 for m in self.terms), default=0)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = PolyZ.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = PolyZ.const(self.vars, other)
        return isinstance(other, PolyZ) and self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError("polynomials over different variable tuples")

    # -- inspection ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: grlex_key(mc[0]), reverse=True)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, m) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def substitute_vars(self, variables: Sequence[str], mapping: Sequence[int]) -> "PolyZ":
        """Re-index into a new variable tuple; ``mapping[i]`` is the new slot of old var i."""
        width = len(variables)
        t = {}
        for m, c in self.terms.items():
            nm = [0] * width
            for i, e in enumerate(m):
                if e:
                    nm[mapping[i]] += e
            t[tuple(nm)] = c
        return PolyZ(variables, t)

    # -- evaluation ---------------------------------------------------
    def compile(self, ring_add: Callable, ring_mul: Callable, ring_from_int: Callable,
                zero) -> Callable[[Sequence], object]:
        """Return ``f(values)`` evaluating the polynomial with shared sub-monomials.

        Each monomial is split into a left half (first half of the variables)
        and a right half; distinct halves are evaluated once per call and the
        polynomial becomes a sum of products of two cached values.
        """
        nv = len(self.vars)
        half = nv // 2
        items = self.sorted_terms()
        maxexp = [0] * nv
        for m, _ in items:
            for i, e in enumerate(m):
                if e > maxexp[i]:
                    maxexp[i] = e
        lefts: Dict[Monomial, int] = {}
        rights: Dict[Monomial, int] = {}
        plan = []
        for m, c in items:
            lm, rm = m[:half], m[half:]
            li = lefts.setdefault(lm, len(lefts))
            ri = rights.setdefault(rm, len(rights))
            plan.append((li, ri, c))
        left_list = list(lefts)
        right_list = list(rights)

        def monomial_values(monos, offset, powers):
            out = []
            for mono in monos:
                acc = None
                for i, e in enumerate(mono):
                    if e:
                        v = powers[offset + i][e]
                        acc = v if acc is None else ring_mul(acc, v)
                out.append(acc)
            return out

        def evaluate(values):
            powers = []
            for i in range(nv):
                row = [None, values[i]]
                for _ in range(maxexp[i] - 1):
                    row.append(ring_mul(row[-1], values[i]))
                powers.append(row)
            lv = monomial_values(left_list, 0, powers)
            rv = monomial_values(right_list, half, powers)
            total = zero
            for li, ri, c in plan:
                a, b = lv[li], rv[ri]
                if a is None:
                    term = b
                elif b is None:
                    term = a
                else:
                    term = ring_mul(a, b)
                if term is None:
                    term = ring_from_int(c)
                elif c != 1:
                    term = ring_mul(ring_from_int(c), term)
                total = ring_add(total, term)
            return total

        return evaluate

    def __call__(self, *values: int) -> int:
        total = 0
        for m, c in self.terms.items():
            term = c
            for v, e in zip(values, m):
                if e:
                    term *= v ** e
            total += term
        return total

    # -- serialization --------------------------------------------------
    def to_json(self):
        return {"vars": list(self.vars),
                "terms": [[list(m), str(c)] for m, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, data) -> "PolyZ":
        return cls(data["vars"], {tuple(m): int(c) for m, c in data["terms"]})


def _pack(terms, bits):
    out = {}
    for m, c in terms.items():
        key = 0
        for i, e in enumerate(m):
            key |= e << (bits * i)
        out[key] = c
    return out


def _unpack(terms, bits, width):
    mask = (1 << bits) - 1
    out = {}
    for key, c in terms.items():
        out[tuple((key >> (bits * i)) & mask for i in range(width))] = c
    return out


def exact_div(f: PolyZ, c: int) -> PolyZ:
    """Divide every coefficient of ``f`` by ``c``; raise if any is not divisible."""
    if c == 0:
        raise ZeroDivisor("division of a polynomial by 0")
    out = {}
    for m, a in f.terms.items():
        q, r = divmod(a, c)
        if r:
            raise NotDivisible(f"coefficient {a} of monomial {m} is not divisible by {c}")
        out[m] = q
    return PolyZ(f.vars, out)


def poly_sum(polys: Iterable[PolyZ], variables) -> PolyZ:
    acc: Dict[Monomial, int] = {}
    for f in polys:
        for m, c in f.terms.items():
            acc[m] = acc.get(m, 0) + c
    return PolyZ(variables, acc)
