"""Log rings and the de Rham complex with log poles.

A :class:`LogRing` is a coefficient ring ``A`` together with a finitely
generated free commutative monoid ``M`` (some generators may be declared
invertible) and a monoid map ``alpha: M -> (A, *)``.  Degree-q forms are
presented as the q-th exterior power of the degree-one presentation

    Omega^1 = (A dx_i  +  A dlog m_j) / (d(relations), d alpha(m) - alpha(m) dlog m).

Forms are dicts ``{sorted index tuple: raw coefficient}`` over the 1-form
generators ``dx_0, ..., dlog m_0, ...``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, List, Sequence, Tuple

from .exact.errors import (NonInvertibleDivision, NormalFormUnavailable, NotDVRModel,
                           UnsupportedCoefficientRing)
from .exact.linalg import smith_normal_form
from .exact.modules import FinAbGroup, PresentedModule, module_decompose
from .exact.rings import (IntegerModRing, IntegerRing, LocalizedIntegers, PresentedRing,
                          QuotientRing, Ring)

Form = Dict[Tuple[int, ...], object]


# ---------------------------------------------------------------------------
# monoids and log rings


@dataclass(frozen=True)
class FgMonoid:
    """Free commutative monoid on ``gens``; generators in ``invertible`` are group-like.

    Elements are exponent tuples; negative exponents are allowed only on
    invertible generators.
    """

    gens: Tuple[str, ...]
    invertible: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        object.__setattr__(self, "invertible", frozenset(self.invertible))
        unknown = self.invertible - set(self.gens)
        if unknown:
            raise ValueError(f"unknown monoid generators {sorted(unknown)}")

    def element(self, exps: Sequence[int]) -> Tuple[int, ...]:
        exps = tuple(int(e) for e in exps)
        if len(exps) != len(self.gens):
            raise ValueError("wrong number of exponents")
        for g, e in zip(self.gens, exps):
            if e < 0 and g not in self.invertible:
                raise ValueError(f"{g} is not invertible in the monoid")
        return exps

    def gen(self, name: str) -> Tuple[int, ...]:
        return tuple(1 if g == name else 0 for g in self.gens)

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def identity(self):
        return (0,) * len(self.gens)

    def group_completion_rank(self) -> int:
        return len(self.gens)


@dataclass(frozen=True)
class DVRInfo:
    """Describes a DVR model: prime p, ramification e, uniformizer monoid generator."""

    p: int
    e: int
    uniformizer: str


class LogRing:
    """A coefficient ring with a monoid map ``alpha``."""

    def __init__(self, ring: Ring, monoid: FgMonoid, alpha: Dict[str, object],
                 dvr: DVRInfo | None = None, name: str | None = None):
        self.ring = ring
        self.monoid = monoid
        self.alpha = {}
        for g in monoid.gens:
            if g not in alpha:
                raise ValueError(f"alpha is missing generator {g}")
            a = alpha[g]
            self.alpha[g] = ring.from_int(a) if isinstance(a, int) else ring.normal_form(a)
            if g in monoid.invertible:
                ring.inverse(self.alpha[g])  # raises if alpha(g) is not a unit
        self.dvr = dvr
        self.name = name or f"({ring.name}, <{','.join(monoid.gens)}>)"

    def alpha_of(self, m: Sequence[int]):
        R = self.ring
        out = R.one
        for g, e in zip(self.monoid.gens, m):
            a = self.alpha[g]
            if e < 0:
                a, e = R.inverse(a), -e
            out = R.mul(out, R.pow(a, e))
        return out

    def __repr__(self):
        return f"LogRing{self.name}"


def trivial_log(ring: Ring, name: str | None = None) -> LogRing:
    return LogRing(ring, FgMonoid(()), {}, name=name)


def dvr_model(p: int, e: int, units: Sequence[object] = ()) -> LogRing:
    """Z_(p)[pi]/(pi^e - p) (Z_(p) when e = 1) with M = <pi> x <declared units>.

    Units are given as raw ring elements (ints or coefficient tuples).
    """
    if p == 2:
        raise NotDVRModel("p must be odd")
    base = LocalizedIntegers(p)
    if e == 1:
        ring = base
        pi = base.from_int(p)
        uname = "p"
    else:
        ring = QuotientRing(base, "pi", [-p] + [0] * (e - 1) + [1])
        pi = ring.gen_raw()
        uname = "pi"
    gens = [uname]
    alpha = {uname: pi}
    for i, u in enumerate(units):
        gname = f"u{i}"
        gens.append(gname)
        alpha[gname] = ring.from_int(u) if isinstance(u, int) else ring.normal_form(tuple(u))
    M = FgMonoid(tuple(gens), frozenset(gens[1:]))
    return LogRing(ring, M, alpha, DVRInfo(p, e, uname), name=f"({ring.name}, <{','.join(gens)}>)")


# ---------------------------------------------------------------------------
# derivatives of ring elements


def ring_generators(A: Ring) -> Tuple[str, ...]:
    if isinstance(A, (IntegerRing, IntegerModRing, LocalizedIntegers)):
        return ()
    if isinstance(A, QuotientRing):
        return (A.var,)
    if isinstance(A, PresentedRing):
        return A.gens
    raise NormalFormUnavailable(f"no Kähler presentation for {A!r}")


def _poly_partials(A: PresentedRing, poly: dict) -> List[dict]:
    base = A.base
    out = []
    for i in range(A.nvars):
        d = {}
        for m, c in poly.items():
            if m[i]:
                mm = tuple(e - 1 if j == i else e for j, e in enumerate(m))
                d[mm] = base.add(d.get(mm, base.zero), base.scale(m[i], c))
        out.append({m: c for m, c in d.items() if not base.is_zero(c)})
    return out


def differential(A: Ring, a) -> List[object]:
    """Coefficients of da on the generators dx_i (raw elements of A)."""
    gens = ring_generators(A)
    if not gens:
        return []
    if isinstance(A, QuotientRing):
        base = A.base
        coeffs = [base.scale(k, c) for k, c in enumerate(a)][1:]
        return [A.from_coeffs(coeffs)]
    # PresentedRing: a = f / prod u_k^{e_k};  da = u^-e df - a * sum e_k u_k^-1 du_k
    num, exps = a
    f = dict(num)
    zero_den = (0,) * len(A.inverted)
    den_inv = A._make({(0,) * A.nvars: A.base.one}, exps)
    out = []
    df = _poly_partials(A, f)
    for i in range(A.nvars):
        term = A.mul(A._make(df[i], zero_den), den_inv)
        out.append(term)
    for k, (u, e) in enumerate(zip(A.inverted, exps)):
        if not e:
            continue
        du = _poly_partials(A, u)
        ek = [0] * len(A.inverted)
        ek[k] = 1
        u_inv = A._make({(0,) * A.nvars: A.base.one}, ek)
        factor = A.mul(A.mul(a, u_inv), A.from_int(e))
        for i in range(A.nvars):
            out[i] = A.sub(out[i], A.mul(factor, A._make(du[i], zero_den)))
    return out


# ---------------------------------------------------------------------------
# wedge words


def wedge_words(ngens: int, q: int) -> List[Tuple[int, ...]]:
    return list(itertools.combinations(range(ngens), q))


def merge_sign(a: Tuple[int, ...], b: Tuple[int, ...]):
    """Return (sign, sorted word) for e_a ∧ e_b, or (0, None) if they overlap."""
    if set(a) & set(b):
        return 0, None
    seq = list(a) + list(b)
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


def form_add(A: Ring, x: Form, y: Form, sign: int = 1) -> Form:
    out = dict(x)
    for w, c in y.items():
        c = c if sign == 1 else A.neg(c)
        v = A.add(out[w], c) if w in out else c
        if A.is_zero(v):
            out.pop(w, None)
        else:
            out[w] = v
    return out


def form_scale(A: Ring, a, x: Form) -> Form:
    out = {}
    for w, c in x.items():
        v = A.mul(a, c)
        if not A.is_zero(v):
            out[w] = v
    return out


def form_wedge(A: Ring, x: Form, y: Form) -> Form:
    out: Form = {}
    for wa, ca in x.items():
        for wb, cb in y.items():
            s, w = merge_sign(wa, wb)
            if not s:
                continue
            v = A.mul(ca, cb)
            if s < 0:
                v = A.neg(v)
            out = form_add(A, out, {w: v})
    return out


# ---------------------------------------------------------------------------
# membership and decomposition over the supported coefficient rings


def _lattice_contains(rows: List[List[int]], vec: List[int], p: int | None) -> bool:
    """Is ``vec`` in the Z-row space of ``rows`` (Z_(p) row space when p is given)?"""
    if not any(vec):
        return True
    if not rows:
        return False
    snf = smith_normal_form(rows)
    W, D = snf.W, snf.D
    n = len(vec)
    y = [sum(vec[i] * W[i][j] for i in range(n)) for j in range(n)]
    r = len(snf.invariant_factors)
    for j in range(n):
        d = D[j][j] if j < min(len(D), n) and j < r else 0
        if d == 0:
            if y[j]:
                return False
            continue
        if p is None:
            if y[j] % d:
                return False
        else:
            pd = 1
            while d % p == 0:
                d //= p
                pd *= p
            if y[j] % pd:
                return False
    return True


class _UnitEliminator:
    """Gaussian elimination over A using only unit pivots."""

    def __init__(self, A: Ring, ngens: int, relations: List[list]):
        self.A = A
        self.ngens = ngens
        self.pivots: Dict[int, list] = {}  # generator -> normalized relation (pivot coeff 1)
        self.residual: List[list] = []
        for r in relations:
            r = self.reduce(list(r))
            piv = None
            for j, c in enumerate(r):
                if A.is_zero(c):
                    continue
                try:
                    inv = A.inverse(c)
                except (NonInvertibleDivision, NormalFormUnavailable):
                    continue
                piv = (j, inv)
                break
            if piv is None:
                if any(not A.is_zero(c) for c in r):
                    self.residual.append(r)
                continue
            j, inv = piv
            r = [A.mul(inv, c) for c in r]
            for k, row in self.pivots.items():
                if not A.is_zero(row[j]):
                    f = row[j]
                    self.pivots[k] = [A.sub(a, A.mul(f, b)) for a, b in zip(row, r)]
            self.pivots[j] = r
        if self.residual:
            self.residual = [self.reduce(r) for r in self.residual]
            self.residual = [r for r in self.residual if any(not A.is_zero(c) for c in r)]

    def reduce(self, v: list) -> list:
        A = self.A
        v = list(v)
        for j, row in self.pivots.items():
            if not A.is_zero(v[j]):
                f = v[j]
                v = [A.sub(a, A.mul(f, b)) for a, b in zip(v, row)]
        return v

    @property
    def free_generators(self) -> List[int]:
        return [j for j in range(self.ngens) if j not in self.pivots]


def _restrictable(A: Ring) -> bool:
    return isinstance(A, (IntegerRing, IntegerModRing, LocalizedIntegers)) or (
        isinstance(A, QuotientRing) and isinstance(A.base, (IntegerRing, IntegerModRing, LocalizedIntegers)))


def _base_vector(A: Ring, v: list) -> Tuple[List[int], int | None]:
    """Restriction of scalars of a vector over A; returns integer entries and the prime for Z_(p)."""
    if isinstance(A, QuotientRing):
        entries = [c for x in v for c in x]
        base = A.base
    else:
        entries = list(v)
        base = A
    if isinstance(base, LocalizedIntegers):
        fr = [Fraction(x) for x in entries]
        den = lcm(*[x.denominator for x in fr]) if fr else 1
        return [int(x * den) for x in fr], base.p
    return [int(x) for x in entries], None


@dataclass
class FormModule:
    """Omega^q as a presented A-module on wedge words."""

    ring: Ring
    q: int
    words: List[Tuple[int, ...]]
    relations: List[list]
    _eliminator: object = field(default=None, repr=False)
    _int_rows: object = field(default=None, repr=False)

    def __post_init__(self):
        self.index = {w: i for i, w in enumerate(self.words)}

    @property
    def presented(self) -> PresentedModule:
        return PresentedModule(self.ring, len(self.words), self.relations,
                               names=["^".join(map(str, w)) for w in self.words])

    def vector(self, form: Form) -> list:
        A = self.ring
        v = [A.zero] * len(self.words)
        for w, c in form.items():
            v[self.index[w]] = c
        return v

    def _int_presentation(self):
        if self._int_rows is None:
            kind, param, g, rows = self.presented.integer_relations()
            self._int_rows = (kind, param, g, rows)
        return self._int_rows

    def contains_zero(self, form: Form) -> bool:
        """Is ``form`` zero in the presented module?"""
        A = self.ring
        if not form:
            return True
        v = self.vector(form)
        if _restrictable(A):
            kind, param, g, rows = self._int_presentation()
            iv, p = _base_vector(A, v)
            if kind == "Z/m":
                iv = [x % param for x in iv]
            return _lattice_contains(rows, iv, p)
        if self._eliminator is None:
            self._eliminator = _UnitEliminator(A, len(self.words), self.relations)
        el = self._eliminator
        red = el.reduce(v)
        if all(A.is_zero(c) for c in red):
            return True
        if el.residual:
            raise UnsupportedCoefficientRing(f"membership over {A.name} needs non-unit pivots")
        return False

    def decompose(self):
        A = self.ring
        if _restrictable(A) or isinstance(A, IntegerModRing):
            return module_decompose(self.presented)
        if self._eliminator is None:
            self._eliminator = _UnitEliminator(A, len(self.words), self.relations)
        if self._eliminator.residual:
            raise UnsupportedCoefficientRing(f"cannot decompose a module over {A.name}")
        from .exact.modules import ModuleDecomposition
        return ModuleDecomposition("free", rank=len(self._eliminator.free_generators))


# ---------------------------------------------------------------------------
# Kähler and log differentials


def kaehler(A: Ring) -> PresentedModule:
    """Omega^1_A on generators dx_i modulo d of every relation."""
    gens = ring_generators(A)
    rels = []
    if isinstance(A, QuotientRing):
        base = A.base
        f = list(A.modulus)
        df = [base.scale(k, c) for k, c in enumerate(f)][1:]
        rels.append([A.from_coeffs(df)])
    elif isinstance(A, PresentedRing):
        for rel in A.relation_polys():
            parts = _poly_partials(A, rel)
            rels.append([A.from_poly(d) for d in parts])
    return PresentedModule(A, len(gens), rels, names=[f"d{g}" for g in gens])


class LogDGAData:
    """The log de Rham complex of a :class:`LogRing` up to degree ``qmax``."""

    def __init__(self, L: LogRing, qmax: int):
        self.log_ring = L
        A = self.ring = L.ring
        self.qmax = qmax
        k = kaehler(A)
        self.kgens = len(ring_generators(A))
        self.mgens = len(L.monoid.gens)
        self.ngens = self.kgens + self.mgens
        self.names = list(k.names) + [f"dlog {g}" for g in L.monoid.gens]
        rels1 = [list(r) + [A.zero] * self.mgens for r in k.relations]
        for j, g in enumerate(L.monoid.gens):
            a = L.alpha[g]
            row = list(differential(A, a)) + [A.zero] * self.mgens
            row[self.kgens + j] = A.sub(row[self.kgens + j], a)
            rels1.append(row)
        self.relations1 = rels1
        self.modules: List[FormModule] = []
        for q in range(qmax + 2):
            self.modules.append(self._degree(q))

    def _degree(self, q: int) -> FormModule:
        A = self.ring
        words = wedge_words(self.ngens, q)
        rels = []
        if q >= 1:
            index = {w: i for i, w in enumerate(words)}
            for r in self.relations1:
                rform = {(i,): c for i, c in enumerate(r) if not A.is_zero(c)}
                for tail in wedge_words(self.ngens, q - 1):
                    prod = form_wedge(A, rform, {tail: A.one})
                    if prod:
                        row = [A.zero] * len(words)
                        for w, c in prod.items():
                            row[index[w]] = c
                        rels.append(row)
        return FormModule(A, q, words, rels)

    # elements -------------------------------------------------------------
    def scalar(self, a) -> Form:
        A = self.ring
        a = A.from_int(a) if isinstance(a, int) else a
        return {} if A.is_zero(a) else {(): a}

    def d_scalar(self, a) -> Form:
        A = self.ring
        return {(i,): c for i, c in enumerate(differential(A, a)) if not A.is_zero(c)}

    def dlog(self, m: Sequence[int] | str) -> Form:
        """dlog of a monoid element (exponent tuple) or generator name; additive in m."""
        A = self.ring
        if isinstance(m, str):
            m = self.log_ring.monoid.gen(m)
        out = {}
        for j, e in enumerate(m):
            if e:
                out = form_add(A, out, {(self.kgens + j,): A.from_int(e)})
        return out

    def d(self, form: Form) -> Form:
        """Exterior derivative; generators are closed, so d(a e_S) = da ∧ e_S."""
        A = self.ring
        out: Form = {}
        for w, c in form.items():
            out = form_add(A, out, form_wedge(A, self.d_scalar(c), {w: A.one}))
        return out

    def wedge(self, x: Form, y: Form) -> Form:
        return form_wedge(self.ring, x, y)

    def degree_of(self, form: Form) -> int:
        degs = {len(w) for w in form}
        if len(degs) > 1:
            raise ValueError("inhomogeneous form")
        return degs.pop() if degs else 0

    def is_zero(self, form: Form) -> bool:
        if not form:
            return True
        q = self.degree_of(form)
        if q > self.qmax + 1:
            return True
        return self.modules[q].contains_zero(form)

    def equal(self, x: Form, y: Form) -> bool:
        return self.is_zero(form_add(self.ring, x, y, -1))

    # structure ------------------------------------------------------------
    def module(self, q: int) -> FormModule:
        if q < 0 or q > self.ngens:
            return FormModule(self.ring, q, [], [])
        if q >= len(self.modules):
            return self._degree(q)
        return self.modules[q]

    def decompose(self, q: int):
        return self.module(q).decompose()

    def group(self, q: int) -> FinAbGroup:
        dec = self.decompose(q)
        if dec.kind != "abelian":
            raise UnsupportedCoefficientRing("group structure needs restriction of scalars to Z")
        return dec.group

    def z_basis(self, q: int) -> List[Tuple[Tuple[int, ...], int]]:
        """Restriction-of-scalars generators: (word, power of the ring generator)."""
        A = self.ring
        deg = A.degree if isinstance(A, QuotientRing) else 1
        return [(w, k) for w in self.module(q).words for k in range(deg)]

    def d_matrix(self, q: int) -> List[List[int]]:
        """Integer matrix of d on the Z-generators of degree q (rows = sources)."""
        A = self.ring
        if not _restrictable(A):
            raise UnsupportedCoefficientRing("d matrices need restriction of scalars")
        src = self.z_basis(q)
        tgt_mod = self.module(q + 1)
        rows = []
        for w, k in src:
            if isinstance(A, QuotientRing):
                a = A.from_coeffs([0] * k + [1])
            else:
                a = A.one
            img = self.d({w: a})
            vec = [A.zero] * len(tgt_mod.words)
            for ww, c in img.items():
                vec[tgt_mod.index[ww]] = c
            iv, _ = _base_vector(A, vec) if vec else ([], None)
            rows.append(iv)
        return rows

    def to_json(self):
        out = {"ring": self.ring.name, "generators": self.names, "degrees": []}
        for q in range(self.qmax + 1):
            dec = self.decompose(q)
            entry = {"q": q, "module": dec.to_json()}
            if _restrictable(self.ring) and q < self.qmax:
                entry["d"] = self.d_matrix(q)
            out["degrees"].append(entry)
        return out


def log_differentials(L: LogRing) -> FormModule:
    return LogDGAData(L, 1).module(1)


def exterior_powers(L: LogRing, qmax: int) -> LogDGAData:
    if qmax < 0:
        raise ValueError("qmax must be non-negative")
    return LogDGAData(L, qmax)


# ---------------------------------------------------------------------------
# residue sequence  0 -> Omega^q_V -> Omega^q_(V,M) -> Omega^{q-1}_k -> 0


def _p_order(rows, ngens, p) -> Tuple[int, int]:
    """(p-part of the torsion order, free rank) of Z^ngens / rows."""
    from .exact.linalg import abelian_invariants
    tors, free = abelian_invariants(rows, ngens)
    grp = FinAbGroup.from_orders(tors, free).localize(p)
    return (grp.order() if grp.is_finite else 0), grp.free_rank


def residue_sequence_check(L: LogRing, q: int) -> dict:
    """Verify exactness of the residue sequence by order accounting.

    The residue sends ω ∧ dlog π to the reduction of ω; the residue field
    is F_p, so Omega^j_k vanishes for j > 0.
    """
    if L.dvr is None:
        raise NotDVRModel(f"{L.name} is not a supported DVR model")
    p = L.dvr.p
    A = L.ring
    plain = LogRing(A, FgMonoid(()), {})
    full = LogDGAData(L, max(q, 1))
    bare = LogDGAData(plain, max(q, 1))
    kdim = 1 if q == 1 else 0  # Omega^{q-1}_k for k = F_p
    if q == 0:
        return {"q": 0, "left": "V", "middle": "V", "right": "0", "injective": True,
                "surjective": True, "exact": True}
    if q < 0:
        return {"q": q, "exact": True, "left": "0", "middle": "0", "right": "0",
                "injective": True, "surjective": True}
    left, mid = bare.module(q), full.module(q)
    uni = full.kgens + L.monoid.gens.index(L.dvr.uniformizer)
    # inclusion on Z-generators: word over dx only, same word in the larger complex
    _, _, gl, lrows = left.presented.integer_relations()
    _, _, gm, mrows = mid.presented.integer_relations()
    deg = A.degree if isinstance(A, QuotientRing) else 1
    incl = []
    for w in left.words:
        for k in range(deg):
            vec = [0] * gm
            vec[mid.index[w] * deg + k] = 1
            incl.append(vec)
    left_order, left_free = _p_order(lrows, gl, p)
    mid_order, mid_free = _p_order(mrows, gm, p)
    img_quot_order, img_quot_free = _p_order(mrows + incl, gm, p)
    if mid_free or left_free or img_quot_free:
        raise NotDVRModel("unexpected free summand in a positive-degree form module")
    image_order = mid_order // img_quot_order
    injective = image_order == left_order
    # residue: coefficient of dlog π reduced mod π, nonzero only in degree 1
    def residue(vec):
        if q != 1:
            return 0
        c = vec[mid.index[(uni,)] * deg]  # constant coefficient of dlog π
        return c % p
    relations_ok = all(residue(r) == 0 for r in mrows)
    images = [residue(v) for v in incl]
    composite_zero = all(x == 0 for x in images)
    if kdim:
        gen_dlog = [0] * gm
        gen_dlog[mid.index[(uni,)] * deg] = 1
        surjective = residue(gen_dlog) != 0
    else:
        surjective = True
    exact = injective and surjective and composite_zero and relations_ok and \
        mid_order == image_order * (p ** kdim)
    return {"q": q, "left": FinAbGroup.from_orders(_torsion(lrows, gl, p)).to_json(),
            "middle": FinAbGroup.from_orders(_torsion(mrows, gm, p)).to_json(),
            "right": ["%d" % p] if kdim else [],
            "injective": injective, "surjective": surjective,
            "composite_zero": composite_zero, "residue_well_defined": relations_ok,
            "order_balance": mid_order == image_order * (p ** kdim), "exact": exact}


def _torsion(rows, g, p):
    from .exact.linalg import abelian_invariants
    tors, free = abelian_invariants(rows, g)
    return list(FinAbGroup.from_orders(tors, free).localize(p).torsion)
