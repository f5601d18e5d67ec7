import pytest
from hypothesis import given, strategies as st

from drwitt.drw import family
from drwitt.exact.errors import (InvalidSteinbergPair, MissingDRWData, ShapeMismatch,
                                 SymbolOutsideMonoid)
from drwitt.presets import fp_t, fp_tu, get_preset, steinberg_units
from drwitt.symbols import (ProGroupWithF, UnitPresentation, finite_field_presentation,
                            frobenius_fixed, milnor_k, pro_system_from_drw, ses_outer_terms,
                            steinberg_check, tr_model, trace_to_drw)

P = 3
FAM = {e: family(get_preset(name, P), 3, 3, precision=5)
       for e, name in ((1, "Zp-unramified"), (2, "Zp-ramified-e2"))}


def test_finite_field_presentation():
    U = finite_field_presentation(3, 2)
    assert U.orders == (8,)
    # x ranges over F_9 minus {0, 1}
    assert len(U.steinberg) == 7
    assert U.validate()
    assert milnor_k(U, 1).group.to_json() == ["8"]
    assert milnor_k(U, 0).group.to_json() == ["0"]


@pytest.mark.parametrize("p,k", [(3, 2), (5, 1), (2, 3), (7, 1)])
def test_k2_of_finite_fields_vanishes(p, k):
    U = finite_field_presentation(p, k)
    assert milnor_k(U, 2).group.is_zero


def test_milnor_k_without_steinberg():
    U = UnitPresentation(("a", "b"), (0, 0))
    K = milnor_k(U, 2)
    # aa and bb are 2-torsion by anticommutativity; ab = -ba is free
    assert K.group.to_json() == ["2", "2", "0"]
    assert milnor_k(U, 2, v=1, p=3).group.to_json() == ["3"]
    assert not K.is_zero([(1, 0), (0, 1)])
    assert K.is_zero([(2, 0), (1, 0)])
    assert K.vector([(1, 1), (0, 1)]) == [0, 1, 0, 1]


def test_milnor_k_steinberg_kills_symbol():
    U = UnitPresentation(("a", "b"), (0, 0), [((1, 0), (0, 1))])
    K = milnor_k(U, 2)
    assert K.is_zero([(1, 0), (0, 1)])
    assert K.is_zero([(0, 1), (1, 0)])
    assert not K.is_zero([(1, 0), (1, 0)])


def test_invalid_steinberg_pair():
    U = finite_field_presentation(3, 2)
    F, values = U.field_model
    with pytest.raises(InvalidSteinbergPair):
        UnitPresentation(("g",), (8,), [((1,), (1,))], (F, values))
    with pytest.raises(InvalidSteinbergPair):
        UnitPresentation(("g",), (8,), [((1, 0), (1,))])


def test_reduce_mod():
    U = UnitPresentation(("a", "b"), (0, 6)).reduce_mod(3)
    assert U.orders == (3, 3)


def test_trace_examples():
    L = get_preset("Zp-unramified", P)
    img = trace_to_drw(L, ["p"], 2, precision=5)
    assert img.to_json() == {"n": 2, "q": 1, "coords": ["0", "1"], "moduli": ["3", "9"], "zero": False}
    # Ω^2 vanishes for the DVR models
    assert trace_to_drw(L, ["p", "p"], 2, precision=5).is_zero
    with pytest.raises(SymbolOutsideMonoid):
        trace_to_drw(L, ["t"], 1)
    with pytest.raises(SymbolOutsideMonoid):
        trace_to_drw(L, [(1, 0, 0)], 1)


def test_trace_level_one_for_fp_t():
    L = fp_t(P)
    assert trace_to_drw(L, ["t", "s"], 1).is_zero
    assert not trace_to_drw(L, ["t"], 1).is_zero
    with pytest.raises(SymbolOutsideMonoid):
        trace_to_drw(L, ["t", "s"], 2)


@pytest.mark.parametrize("name", ["Zp-unramified", "Zp-ramified-e2"])
def test_steinberg_pairs_trace_to_zero(name):
    L = get_preset(name, P, steinberg_units(name, P))
    gens = L.monoid.gens
    U = UnitPresentation(gens, (0,) * len(gens), [((1, 0), (0, 1))])
    for n in (1, 2):
        rep = steinberg_check(U, L, n, precision=4)
        assert rep["pairs"] == 1 and rep["all_zero"]


def test_steinberg_fp_t():
    L = fp_t(P)
    U = UnitPresentation(("t", "s"), (0, 0), [((1, 0), (0, 1))])
    assert steinberg_check(U, L, 1)["all_zero"]


def test_steinberg_two_variables():
    # here Ω^2 ≠ 0, so the vanishing of {t, 1 − t} is not forced by degree
    L = fp_tu(P)
    assert not trace_to_drw(L, ["t", "u"], 1).is_zero
    assert not trace_to_drw(L, ["s", "u"], 1).is_zero
    U = UnitPresentation(("t", "s", "u"), (0, 0, 0), [((1, 0, 0), (0, 1, 0))])
    assert steinberg_check(U, L, 1)["all_zero"]


def _wfp(levels, F):
    """W_n(F_p) = Z/p^n with R the reduction and F given per level as a scalar."""
    mods = {n: [P ** n] for n in levels}
    R = {n: [[1]] for n in levels if n > 1}
    Fm = {n: [[F]] for n in levels if n > 1}
    return ProGroupWithF(mods, R, Fm)


def test_frobenius_fixed_witt_of_fp():
    # F = R on W(F_p): R − F = 0
    fx = frobenius_fixed(_wfp([1, 2, 3], 1))
    assert fx.kernel[3].to_json() == ["27"]
    assert fx.cokernel[3].to_json() == ["9"]
    assert all(fx.balanced.values())
    # F = 0: R − F = R is onto
    fx = frobenius_fixed(_wfp([1, 2, 3], 0))
    assert fx.kernel[3].to_json() == ["3"]
    assert fx.cokernel[3].is_zero
    fx = frobenius_fixed(_wfp([1, 2, 3], 1), v=1, p=P)
    assert fx.kernel[2].to_json() == ["3"]


def test_pro_group_shapes():
    G = ProGroupWithF({1: [3], 2: [9]}, {2: [[1, 0]]}, {2: [[1]]})
    with pytest.raises(ShapeMismatch):
        G.check_shapes()
    with pytest.raises(ShapeMismatch):
        ProGroupWithF({1: [3], 2: [9]}, {}, {}).check_shapes()


def test_pro_system_from_drw():
    G = pro_system_from_drw(FAM[1], 1)
    assert G.moduli == {1: [3], 2: [3, 9], 3: [3, 9, 27]}
    assert G.commute()
    with pytest.raises(MissingDRWData):
        pro_system_from_drw(FAM[1], 7)


@pytest.mark.parametrize("e", [1, 2])
def test_tr_model_degree_pattern(e):
    for q in range(4):
        A = tr_model(FAM[e], q, 3, 1, P)
        assert [(s, d) for s, d, _ in A.summands] == [(s, q - 2 * s) for s in range(q // 2 + 1)]
    # degree 2: Ω^2 = 0, so only the twisted W_3Ω^0/p survives
    A = tr_model(FAM[e], 2, 3, 1, P)
    assert A.group.to_json() == ["3"] * (3 * e)
    with pytest.raises(MissingDRWData):
        tr_model(FAM[e], 6, 3, 1, P)


@pytest.mark.parametrize("e", [1, 2])
@pytest.mark.parametrize("q", [0, 1, 2])
def test_ses_outer_terms_consistent(e, q):
    T = ses_outer_terms(FAM[e], q, 1, P)
    assert T.consistent()
    assert set(T.left) == set(T.right) == {2, 3}


@given(st.integers(0, 1), st.integers(1, 2), st.integers(1, 3))
def test_tr_model_two_periodic(q, e, n):
    # degree q + 2 is degree q shifted by one twist, plus the new s = 0 summand
    a = tr_model(FAM[e], q, n, 1, P).summands
    b = tr_model(FAM[e], q + 2, n, 1, P).summands
    assert [(s + 1, d, g.to_json()) for s, d, g in a] == [(s, d, g.to_json()) for s, d, g in b[1:]]

