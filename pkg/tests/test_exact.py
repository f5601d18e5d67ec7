import itertools
import random
from fractions import Fraction
from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from drwitt.exact.errors import NotDivisible, NonInvertibleDivision, NormalFormUnavailable, ZeroDivisor
from drwitt.exact.linalg import (Submodule, hom_kernel_cokernel, matmul_mod,
                                 smith_mod_pn, smith_normal_form)
from drwitt.exact.modules import FinAbGroup, PresentedModule, module_decompose
from drwitt.exact.polyz import PolyZ, exact_div
from drwitt.exact.rings import (IntegerModRing, IntegerRing, LocalizedIntegers, PresentedRing,
                                PrimeField, QuotientRing, normal_form)

XY = ("x", "y")


def test_exact_div_examples():
    f = PolyZ(XY, {(1, 0): 2, (0, 1): 4})
    assert exact_div(f, 2) == PolyZ(XY, {(1, 0): 1, (0, 1): 2})
    assert exact_div(PolyZ(XY), 5).is_zero()
    g = PolyZ(("x",), {(3,): 3, (1,): -3})
    assert exact_div(g, 3) == PolyZ(("x",), {(3,): 1, (1,): -1})
    with pytest.raises(NotDivisible):
        exact_div(PolyZ(XY, {(1, 0): 3}), 2)
    with pytest.raises(ZeroDivisor):
        exact_div(f, 0)


polys = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-50, 50), max_size=6)


@given(polys, st.integers(-9, 9).filter(bool))
def test_exact_div_roundtrip(terms, c):
    f = PolyZ(XY, terms) * PolyZ.const(XY, c)
    assert exact_div(f, c) * PolyZ.const(XY, c) == f


# -- Smith normal form -------------------------------------------------------

def test_snf_examples():
    assert smith_normal_form([[2, 0], [0, 3]]).invariant_factors == [1, 6]
    assert smith_normal_form([[1, 0], [0, 1]]).invariant_factors == [1, 1]
    assert smith_normal_form([[3, 0], [0, 3]]).invariant_factors == [3, 3]
    assert smith_normal_form([[0, 0], [0, 0]]).invariant_factors == []


def _minor_gcds(M):
    """d_k = gcd of all k×k minors; invariant factors are d_k / d_{k-1}."""
    rows, cols = len(M), len(M[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in itertools.combinations(range(rows), k):
            for c in itertools.combinations(range(cols), k):
                sub = np.array([[M[i][j] for j in c] for i in r], dtype=object)
                g = gcd(g, _det(sub))
        if g == 0:
            break
        out.append(g)
    return out


def _det(A):
    A = [list(map(Fraction, row)) for row in A]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return int(det)


@given(st.integers(1, 6).flatmap(lambda r: st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r))))
def test_snf_against_minor_gcds(M):
    snf = smith_normal_form(M)
    assert snf.check(M)
    inv = snf.invariant_factors
    for a, b in zip(inv, inv[1:]):
        assert b % a == 0
    d = _minor_gcds(M)
    assert len(d) == len(inv)
    prev = 1
    for dk, fk in zip(d, inv):
        assert dk // prev == fk
        prev = dk


def test_smith_mod_pn_and_quotient():
    M = np.array([[3, 0, 0], [0, 1, 2]], dtype=np.int64)
    exps, U, W = smith_mod_pn(M, 3, 3)
    assert sorted(e for e in exps if e < 3) == [0, 1]
    sub = Submodule(3, 3, 3)
    sub.add_many(M)
    Q = sub.quotient()
    assert Q.invariant_factors() == [3, 27]


def test_hom_kernel_cokernel():
    (kt, kf), (ct, cf) = hom_kernel_cokernel([[3]], [9], [9])
    assert FinAbGroup.from_orders(kt, kf) == FinAbGroup((3,))
    assert FinAbGroup.from_orders(ct, cf) == FinAbGroup((3,))


@given(st.lists(st.lists(st.integers(0, 10 ** 6), min_size=5, max_size=5), min_size=4, max_size=4),
       st.lists(st.lists(st.integers(0, 10 ** 6), min_size=3, max_size=3), min_size=5, max_size=5))
def test_matmul_mod_exact(a, b):
    mod = 3 ** 12
    A, B = np.array(a, dtype=np.int64) % mod, np.array(b, dtype=np.int64) % mod
    expect = (np.array(a, dtype=object) @ np.array(b, dtype=object)) % mod
    assert (matmul_mod(A, B, mod).astype(object) == expect).all()


# -- modules -------------------------------------------------------------

def test_module_decompose_examples():
    Z = IntegerRing()
    assert module_decompose(PresentedModule(Z, 1, [[3]])).group.to_json() == ["3"]
    assert module_decompose(PresentedModule(PrimeField(5), 2, [])).dimension == 2
    Zp = LocalizedIntegers(3)
    # generators dx, dlog p; dx ≡ 0 and p·dlog p = 0
    m = PresentedModule(Zp, 2, [[1, 0], [0, 3]])
    assert module_decompose(m).group.to_json() == ["3"]


def test_finabgroup_ops():
    G = FinAbGroup.from_orders([2, 3, 0])
    assert G == FinAbGroup((6,), 1)
    assert G.mod(3) == FinAbGroup((3, 3))
    assert G.torsion_of(3) == FinAbGroup((3,))
    assert G.localize(3) == FinAbGroup((3,), 1)
    assert FinAbGroup.from_json(G.to_json()) == G


# -- rings ---------------------------------------------------------------

def test_normal_form_examples():
    p = 3
    V = QuotientRing(LocalizedIntegers(p), "pi", [-p, 0, 1])
    pi = V.gen("pi")
    assert normal_form(pi * pi) == V(3)
    Zp = LocalizedIntegers(3)
    assert normal_form(Zp(Fraction(1, 2)) * Zp(2)) == Zp(1)
    T = QuotientRing(PrimeField(3), "t", [0, 0, 0, 1])
    t = T.gen("t")
    assert normal_form((1 + t) * (1 - t)) == 1 - t * t
    with pytest.raises(NonInvertibleDivision):
        Zp(3).inverse()
    with pytest.raises(NormalFormUnavailable):
        PresentedRing(IntegerRing(), ["x", "y"], [{(1, 1): 1, (0, 0): -1}])


def _rings():
    F3 = PrimeField(3)
    return [
        IntegerRing(),
        IntegerModRing(27),
        LocalizedIntegers(3),
        QuotientRing(LocalizedIntegers(3), "pi", [-3, 0, 1]),
        QuotientRing(F3, "t", [0, 0, 0, 1]),
        PresentedRing(F3, ["t"], inverted=[{(1,): 1}, {(0,): 1, (1,): -1}]),
        PresentedRing(IntegerRing(), ["a", "b"], [{(2, 0): 1, (0, 0): 1}, {(0, 2): 1, (1, 0): -1}]),
    ]


@pytest.mark.parametrize("ring", _rings(), ids=lambda r: r.name)
def test_ring_axioms_random(ring):
    rng = random.Random(20261016)
    nf = ring.normal_form
    for _ in range(200):
        a, b, c = (ring.random_raw(rng) for _ in range(3))
        assert nf(nf(a)) == nf(a)
        assert nf(ring.mul(ring.mul(a, b), c)) == nf(ring.mul(a, ring.mul(b, c)))
        assert nf(ring.add(ring.add(a, b), c)) == nf(ring.add(a, ring.add(b, c)))
        assert nf(ring.mul(a, ring.add(b, c))) == nf(ring.add(ring.mul(a, b), ring.mul(a, c)))
        assert nf(ring.mul(a, b)) == nf(ring.mul(b, a))
        assert ring.is_zero(ring.add(a, ring.neg(a)))
        assert nf(ring.mul(a, ring.one)) == nf(a)
