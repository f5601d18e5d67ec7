import json
import random

import pytest
from hypothesis import given, strategies as st

from drwitt.exact.errors import LengthUnderflow, MismatchedWittParameters, TooLargeForExhaustiveCheck
from drwitt.exact.polyz import PolyZ
from drwitt.exact.rings import IntegerModRing, IntegerRing, LocalizedIntegers, PrimeField, QuotientRing
from drwitt.witt import UniversalWittPolys, universal_polys, witt_fp_iso, witt_ring

ZZ = IntegerRing()


def test_universal_polys_examples():
    T = universal_polys(2)
    v = ("x0", "y0")
    assert T.get("S", 0) == PolyZ(v, {(1, 0): 1, (0, 1): 1})
    v1 = ("x0", "y0", "x1", "y1")
    assert T.get("S", 1) == PolyZ(v1, {(0, 0, 1, 0): 1, (0, 0, 0, 1): 1, (1, 1, 0, 0): -1})
    for p in (2, 3, 5):
        assert universal_polys(p).get("P", 0) == PolyZ(v, {(1, 1): 1})
    for p in (3, 5):
        for i in range(3):
            N = universal_polys(p).get("N", i)
            assert N.terms == {tuple(1 if j == i else 0 for j in range(i + 1)): -1}


def test_universal_polys_deterministic():
    for p in (2, 3):
        fresh = UniversalWittPolys(p)
        for kind in ("S", "P", "N", "F"):
            for i in range(3):
                a, b = fresh.get(kind, i), universal_polys(p).get(kind, i)
                assert a == b
                assert json.dumps(a.to_json()) == json.dumps(b.to_json())


def test_disk_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("DRWITT_CACHE_DIR", str(tmp_path))
    first = UniversalWittPolys(3).get("P", 2)
    assert any(tmp_path.iterdir())
    second = UniversalWittPolys(3).get("P", 2)
    assert first == second == universal_polys(3).get("P", 2)


def test_ghost_examples():
    W = witt_ring(2, 2, ZZ)
    assert W([1, 1]).ghost() == (1, 3)
    W3 = witt_ring(3, 3, ZZ)
    assert W3.teichmuller(2).ghost() == (2, 8, 512)
    assert W3([5, 1, 2]).verschiebung().ghost()[0] == 0


def test_ring_op_examples():
    W = witt_ring(2, 2, ZZ)
    assert (W.one() + W.one()).coords == (2, -1)
    x = W([4, -3])
    assert x + W.zero() == x
    a, b = W.teichmuller(3), W.teichmuller(-5)
    assert a * b == W.teichmuller(-15)
    assert W.teichmuller(0).is_zero()
    assert W.teichmuller(1) == W.one()


def test_teichmuller_projection():
    W = witt_ring(3, 3, ZZ)
    assert W.teichmuller(7).coords[0] == 7


def test_frobenius_examples():
    W1 = witt_ring(3, 1, ZZ)
    W2 = witt_ring(3, 2, ZZ)
    assert W1.teichmuller(2).verschiebung().frobenius() == W1.from_int(6)
    assert W1.from_int(6).coords == (6,)
    assert witt_ring(2, 2, ZZ)([0, 1]).frobenius().coords == (2,)
    assert W2.teichmuller(4).frobenius() == W1.teichmuller(64)
    assert W1.teichmuller(1).verschiebung() == witt_ring(3, 2, ZZ)([0, 1])
    with pytest.raises(LengthUnderflow):
        W1.one().frobenius()
    with pytest.raises(LengthUnderflow):
        W1.one().restriction()


def test_mismatch():
    with pytest.raises(MismatchedWittParameters):
        witt_ring(3, 2, ZZ).one() + witt_ring(3, 3, ZZ).one()
    with pytest.raises(MismatchedWittParameters):
        witt_ring(3, 2, ZZ).one() + witt_ring(5, 2, ZZ).one()


coords = st.integers(-6, 6)


@pytest.mark.parametrize("p", [2, 3, 5])
@given(st.data())
def test_ghost_is_ring_homomorphism(p, data):
    n = data.draw(st.integers(1, 3))
    W = witt_ring(p, n, ZZ)
    x = W(data.draw(st.lists(coords, min_size=n, max_size=n)))
    y = W(data.draw(st.lists(coords, min_size=n, max_size=n)))
    gx, gy = x.ghost(), y.ghost()
    assert (x + y).ghost() == tuple(a + b for a, b in zip(gx, gy))
    assert (x * y).ghost() == tuple(a * b for a, b in zip(gx, gy))
    assert (-x).ghost() == tuple(-a for a in gx)
    assert W.from_ghost(gx) == x


def _rand(W, rng):
    return W([rng.randint(-6, 6) for _ in range(W.n)])


@pytest.mark.parametrize("base", [ZZ, IntegerModRing(9), QuotientRing(PrimeField(3), "t", [0, 0, 1])],
                         ids=lambda r: r.name)
def test_structure_identities(base):
    p, n = 3, 3
    rng = random.Random(7)
    W, Wm = witt_ring(p, n, base), witt_ring(p, n - 1, base)
    for _ in range(50):
        x, y = W.random(rng), W.random(rng)
        u, w = Wm.random(rng), Wm.random(rng)
        # FV = p on W_{n-1}
        assert u.V().F() == Wm.from_int(p) * u
        # projection formula
        assert (u * x.F()).V() == u.V() * x
        assert (u + w).V() == u.V() + w.V()
        assert (x + y).F() == x.F() + y.F()
        assert (x * y).F() == x.F() * y.F()
        assert (x + y).R() == x.R() + y.R()
        assert (x * y).R() == x.R() * y.R()
        assert x.F().R() == x.R().F()
        assert u.R().V() == u.V().R()


def test_fp_iso_examples():
    for p, n in [(2, 3), (3, 2), (3, 3), (5, 2), (5, 3)]:
        rep = witt_fp_iso(p, n)
        assert rep["verified"], rep
        assert rep["checked"] == p ** (2 * n)
    with pytest.raises(TooLargeForExhaustiveCheck):
        witt_fp_iso(11, 4)


def test_fp_three_ones_is_three():
    F3 = PrimeField(3)
    W = witt_ring(3, 2, F3)
    three = W.one() + W.one() + W.one()
    # the iso sends (a0, a1) to tau(a0) + 3*tau(a1); 3 ∈ Z/9 corresponds to (0, 1)
    assert three.coords == (0, 1)
    assert W.from_int(3) == three
    sq = W.teichmuller(2) * W.teichmuller(2)
    assert sq == W.teichmuller(1)


def test_json_shape():
    W = witt_ring(3, 2, LocalizedIntegers(3))
    data = W([1, 2]).to_json()
    assert set(data) == {"p", "n", "ring", "coords"}
    assert data["p"] == 3 and data["n"] == 2
