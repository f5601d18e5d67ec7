"""Finitely generated abelian groups and presented modules."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, prod
from typing import List, Sequence, Tuple

from .errors import UnsupportedCoefficientRing
from .linalg import abelian_invariants, rank_mod_p, smith_normal_form
from .rings import (IntegerModRing, IntegerRing, LocalizedIntegers, PresentedRing,
                    QuotientRing, Ring)


def _p_part(d: int, p: int) -> int:
    out = 1
    while d % p == 0:
        d //= p
        out *= p
    return out


def _chain(factors: Sequence[int]) -> Tuple[int, ...]:
    """Normalize a list of cyclic orders into an invariant-factor chain."""
    fs = [abs(int(f)) for f in factors if abs(int(f)) != 1]
    if any(f == 0 for f in fs):
        raise ValueError("use free_rank for Z summands")
    if not fs:
        return ()
    inv = smith_normal_form([[f if i == j else 0 for j in range(len(fs))] for i, f in enumerate(fs)]).invariant_factors
    return tuple(d for d in inv if d != 1)


@dataclass(frozen=True)
class FinAbGroup:
    """Z^free_rank ⊕ ⊕ Z/d_i with d_1 | d_2 | ... (all d_i > 1)."""

    torsion: Tuple[int, ...] = ()
    free_rank: int = 0

    @classmethod
    def from_orders(cls, orders: Sequence[int], free_rank: int = 0) -> "FinAbGroup":
        orders = list(orders)
        free = free_rank + sum(1 for o in orders if o == 0)
        return cls(_chain([o for o in orders if o != 0]), free)

    @classmethod
    def zero(cls) -> "FinAbGroup":
        return cls()

    @classmethod
    def Z(cls) -> "FinAbGroup":
        return cls((), 1)

    @property
    def is_zero(self) -> bool:
        return not self.torsion and self.free_rank == 0

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int:
        if self.free_rank:
            raise ValueError("infinite group")
        return prod(self.torsion)

    def direct_sum(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup(_chain(self.torsion + other.torsion), self.free_rank + other.free_rank)

    def mod(self, m: int) -> "FinAbGroup":
        """G / mG."""
        from math import gcd
        parts = [gcd(d, m) for d in self.torsion] + [m] * self.free_rank
        return FinAbGroup(_chain([x for x in parts if x != 1]))

    def torsion_of(self, m: int) -> "FinAbGroup":
        """G[m], the m-torsion subgroup."""
        from math import gcd
        parts = [gcd(d, m) for d in self.torsion]
        return FinAbGroup(_chain([x for x in parts if x != 1]))

    def localize(self, p: int) -> "FinAbGroup":
        return FinAbGroup(_chain([_p_part(d, p) for d in self.torsion if _p_part(d, p) != 1]), self.free_rank)

    def invariants(self) -> List[int]:
        """Invariant factors followed by a 0 for each Z summand."""
        return list(self.torsion) + [0] * self.free_rank

    def to_json(self) -> List[str]:
        return [str(d) for d in self.invariants()]

    @classmethod
    def from_json(cls, data) -> "FinAbGroup":
        return cls.from_orders([int(x) for x in data])

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


@dataclass
class PresentedModule:
    """A^ngens / (row space of ``relations``) over a coefficient ring A.

    Relation entries are raw elements of ``ring`` (ints are coerced).
    """

    ring: Ring
    ngens: int
    relations: List[list] = field(default_factory=list)
    names: List[str] | None = None

    def __post_init__(self):
        R = self.ring
        rows = []
        for r in self.relations:
            if len(r) != self.ngens:
                raise ValueError("relation length does not match generator count")
            rows.append([R.from_int(x) if isinstance(x, int) else x for x in r])
        self.relations = rows
        if self.names is None:
            self.names = [f"g{i}" for i in range(self.ngens)]

    # restriction of scalars to a "base" (Z, Z_(p), Z/m or F_p) ---------------
    def base_presentation(self):
        """Return ``(base_kind, base_param, ngens_base, rows)`` with integer rows.

        ``base_kind`` is one of ``"Z"``, ``"Z_(p)"``, ``"Z/m"``.  Modules over a
        univariate quotient ring are expanded over the power basis of the
        generator; over Z_(p) denominators (units) are cleared.
        """
        R = self.ring
        if isinstance(R, QuotientRing):
            base = R.base
            deg = R.degree
            gens = self.ngens * deg
            rows = []
            for rel in self.relations:
                for j in range(deg):
                    shifted = [R.mul(R.from_coeffs([0] * j + [1]), x) for x in rel]
                    rows.append([c for x in shifted for c in x])
            kind, param = _base_kind(base)
            return kind, param, gens, [_clear(r, kind) for r in rows]
        kind, param = _base_kind(R)
        rows = [_clear(list(r), kind) for r in self.relations]
        return kind, param, self.ngens, rows

    def integer_relations(self):
        """Integer relation matrix presenting the same group (after localization)."""
        kind, param, g, rows = self.base_presentation()
        if kind == "Z/m":
            rows = rows + [[param if i == j else 0 for i in range(g)] for j in range(g)]
        return kind, param, g, rows

    def restricted_scalars(self) -> bool:
        try:
            self.base_presentation()
        except UnsupportedCoefficientRing:
            return False
        return True


def _base_kind(R: Ring):
    if isinstance(R, LocalizedIntegers):
        return "Z_(p)", R.p
    if isinstance(R, IntegerModRing):
        return "Z/m", R.modulus
    if isinstance(R, IntegerRing):
        return "Z", None
    raise UnsupportedCoefficientRing(f"cannot restrict scalars from {R!r} to Z")


def _clear(row, kind):
    if kind != "Z_(p)":
        return [int(x) for x in row]
    fr = [Fraction(x) for x in row]
    den = lcm(*[x.denominator for x in fr]) if fr else 1
    return [int(x * den) for x in fr]


@dataclass
class ModuleDecomposition:
    """Isomorphism type of a presented module.

    ``kind`` is ``"abelian"`` (``group`` holds invariants, over Z or
    localized at p), ``"vector_space"`` (``dimension`` over F_p) or
    ``"free"`` (``rank`` over a ring that is not finite over its base).
    """

    kind: str
    group: FinAbGroup | None = None
    dimension: int | None = None
    rank: int | None = None

    def to_json(self):
        if self.kind == "abelian":
            return {"kind": "abelian", "invariants": self.group.to_json()}
        if self.kind == "vector_space":
            return {"kind": "vector_space", "dimension": self.dimension}
        return {"kind": "free", "rank": self.rank}


def module_decompose(m: PresentedModule) -> ModuleDecomposition:
    """Invariant factors and free rank (Z, Z_(p), Z/m and finite extensions),
    dimension (F_p), or rank of a free module over a polynomial-type ring."""
    R = m.ring
    if isinstance(R, IntegerModRing) and R.is_field:
        rows = [[int(x) for x in r] for r in m.relations]
        return ModuleDecomposition("vector_space", dimension=m.ngens - rank_mod_p(rows, R.modulus) if rows else m.ngens)
    if isinstance(R, QuotientRing) and isinstance(R.base, IntegerModRing) and R.base.is_field:
        _, _, g, rows = m.base_presentation()
        p = R.base.modulus
        return ModuleDecomposition("vector_space", dimension=g - (rank_mod_p(rows, p) if rows else 0))
    if isinstance(R, PresentedRing):
        if not any(any(not R.is_zero(x) for x in r) for r in m.relations):
            return ModuleDecomposition("free", rank=m.ngens)
        raise UnsupportedCoefficientRing(f"relations over {R.name} are not supported")
    kind, param, g, rows = m.integer_relations()
    tors, free = abelian_invariants(rows, g)
    grp = FinAbGroup.from_orders(tors, free)
    if kind == "Z_(p)":
        grp = grp.localize(param)
    return ModuleDecomposition("abelian", group=grp)
