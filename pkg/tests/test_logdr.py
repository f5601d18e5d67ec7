import random

import pytest

from drwitt.exact.errors import NotDVRModel
from drwitt.exact.rings import LocalizedIntegers, PresentedRing, PrimeField, QuotientRing
from drwitt.logdr import (FgMonoid, LogRing, dvr_model, exterior_powers, form_add, form_scale,
                          kaehler, log_differentials, residue_sequence_check, trivial_log, wedge_words)
from drwitt.exact.modules import module_decompose

P = 3


def _laurent():
    F = PrimeField(P)
    R = PresentedRing(F, ["t"], inverted=[{(1,): 1}, {(0,): 1, (1,): -1}])
    t = R.gen_raw("t")
    return LogRing(R, FgMonoid(("t", "s"), {"t", "s"}), {"t": t, "s": R.sub(R.one, t)})


def test_kaehler_examples():
    assert kaehler(LocalizedIntegers(P)).ngens == 0
    Ft = PresentedRing(PrimeField(P), ["t"])
    k = kaehler(Ft)
    assert k.ngens == 1 and module_decompose(k).rank == 1
    V = QuotientRing(LocalizedIntegers(P), "pi", [-P, 0, 1])
    k = kaehler(V)
    assert k.relations == [[V.from_coeffs([0, 2])]]
    assert module_decompose(k).group.to_json() == ["3"]


def test_log_differentials_examples():
    L = dvr_model(P, 1)
    assert log_differentials(L).decompose().group.to_json() == ["3"]
    D = exterior_powers(L, 2)
    x = form_add(L.ring, D.dlog((2,)), D.dlog((1,)), -1)
    assert D.equal(x, D.dlog((1,)))
    L2 = dvr_model(P, 2)
    assert log_differentials(L2).decompose().group.to_json() == ["3", "3"]


def test_exterior_power_examples():
    L = dvr_model(P, 1)
    D = exterior_powers(L, 3)
    assert D.decompose(0).group.free_rank == 1
    assert D.decompose(2).group.is_zero
    D = exterior_powers(_laurent(), 2)
    assert D.is_zero(D.wedge(D.dlog("t"), D.dlog("s")))
    assert not D.is_zero(D.dlog("t"))


@pytest.mark.parametrize("L", [dvr_model(P, 1), dvr_model(P, 2), dvr_model(P, 2, [2, (1, 1)]), _laurent(),
                               trivial_log(PresentedRing(PrimeField(P), ["t"]))], ids=lambda L: L.name)
def test_dga_identities(L):
    A = L.ring
    D = exterior_powers(L, 3)
    rng = random.Random(3)
    # d∘d = 0 and Leibniz on random scalars
    for _ in range(30):
        a, b = A.random_raw(rng), A.random_raw(rng)
        assert D.d(D.d_scalar(a)) == {}
        lhs = D.d_scalar(A.mul(a, b))
        rhs = form_add(A, form_scale(A, b, D.d_scalar(a)), form_scale(A, a, D.d_scalar(b)))
        assert D.equal(lhs, rhs)
    for g in L.monoid.gens:
        assert D.d(D.dlog(g)) == {}
        # d alpha(a) = alpha(a) dlog a in Omega^1
        assert D.equal(D.d_scalar(L.alpha[g]), form_scale(A, L.alpha[g], D.dlog(g)))
    # graded commutativity on basis words
    for qa in range(3):
        for qb in range(3):
            for wa in wedge_words(D.ngens, qa):
                for wb in wedge_words(D.ngens, qb):
                    x, y = {wa: A.one}, {wb: A.one}
                    s = (-1) ** (qa * qb)
                    assert D.wedge(x, y) == form_scale(A, A.from_int(s), D.wedge(y, x))
    # vanishing beyond the number of 1-form generators
    assert D.module(D.ngens + 1).words == []


@pytest.mark.parametrize("L", [dvr_model(P, 1), dvr_model(P, 2)], ids=lambda L: L.name)
def test_d_matrices_square_to_zero(L):
    D = exterior_powers(L, 3)
    for q in range(2):
        a, b = D.d_matrix(q), D.d_matrix(q + 1)
        if a and b and b[0]:
            prod = [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]
            assert all(v == 0 for row in prod for v in row)


@pytest.mark.parametrize("e", [1, 2])
@pytest.mark.parametrize("q", [0, 1, 2])
def test_residue_sequence(e, q):
    rep = residue_sequence_check(dvr_model(P, e), q)
    assert rep["exact"], rep


def test_residue_examples():
    rep = residue_sequence_check(dvr_model(P, 1), 1)
    assert rep["left"] == [] and rep["middle"] == ["3"] and rep["right"] == ["3"]
    with pytest.raises(NotDVRModel):
        residue_sequence_check(_laurent(), 1)
    with pytest.raises(NotDVRModel):
        dvr_model(2, 1)


@pytest.mark.parametrize("e", [1, 2])
def test_unit_generators_do_not_change_groups(e):
    base = exterior_powers(dvr_model(P, e), 2)
    units = [2, 5] if e == 1 else [2, (1, 1), (4, 3)]
    more = exterior_powers(dvr_model(P, e, units), 2)
    for q in range(3):
        assert base.group(q) == more.group(q)
