import random

import pytest

from drwitt.exact.errors import (InsufficientDepth, InsufficientFamily, NonUnitExponent,
                                 PrecisionExhausted, UnsupportedPrime)
from drwitt.fontaine import (AinfElement, AlphaModule, CyclotomicRing, build_tower, cocycle_check,
                             cyclotomic_poly, epsilon, epsilon_root, galois_factor,
                             geometric_identity, kernel_generator, project, random_relement,
                             required_depth, tate_module_model, theta)

P, C, M = 3, 4, 2
T = build_tower(P, required_depth(2, M, C), C)
EPS = epsilon(T)


def test_cyclotomic_polynomials():
    assert cyclotomic_poly(3, 1) == [1, 1, 1]
    assert cyclotomic_poly(3, 2) == [1, 0, 0, 1, 0, 0, 1]   # z^6 + z^3 + 1
    R = CyclotomicRing(3, 2, 81)
    assert R.dim == 6
    z = R.gen_raw()
    assert R.pow(z, 9) == R.one
    assert R.is_zero(R.add(R.add(R.one, R.pow(z, 3)), R.pow(z, 6)))
    # Galois z ↦ z^2 is a ring map
    a, b = R.random_raw(random.Random(1)), R.random_raw(random.Random(2))
    assert R.galois(R.mul(a, b), 2) == R.mul(R.galois(a, 2), R.galois(b, 2))


def test_cyclotomic_inverse():
    R = CyclotomicRing(3, 2, 81)
    z = R.gen_raw()
    u = R.add(R.one, R.scale(3, z))
    assert R.mul(u, R.inverse(u)) == R.one
    assert R.mul(z, R.inverse(z)) == R.one


def test_tower():
    assert T.N == 8 and T.top.dim == 4374 and T.mod == 81
    assert T.verify()
    assert T.top.pow(T.zeta(1), 3) == T.top.one
    assert T.zeta(0) == T.top.one
    assert build_tower(P, 8, C) is T
    with pytest.raises(UnsupportedPrime):
        build_tower(2, 3)


def test_epsilon():
    assert EPS.depth == T.N and EPS.is_compatible()
    e1 = epsilon_root(EPS, 1)
    assert e1 ** 3 == EPS
    assert e1.frobenius() == EPS
    assert EPS.galois(2) == EPS ** 2
    with pytest.raises(InsufficientDepth):
        epsilon_root(EPS, T.N)


def test_sharp():
    # ε^♯ at level l is ζ_{p^l}
    for l in range(3):
        assert EPS.sharp(l) == T.zeta(l)
    short = epsilon_root(EPS, T.N - 2)
    with pytest.raises(PrecisionExhausted):
        short.sharp(0)


@pytest.mark.parametrize("n", [1, 2])
def test_geometric_identity(n):
    assert geometric_identity(EPS, n, M)


@pytest.mark.parametrize("n", [1, 2])
def test_theta_kills_kernel_generator(n):
    g = kernel_generator(EPS, n, M)
    assert g.is_compatible()
    assert theta(n, g).is_zero()
    # the plain projection does not
    assert not project(n, g).is_zero()


def test_theta_of_eps_minus_one():
    x = AinfElement.teich(EPS, M) - 1
    assert theta(1, x).is_zero()
    assert not project(1, x).is_zero()
    assert theta(1, AinfElement.teich(epsilon_root(EPS, 1), M)).coords[0] == T.zeta(1)


@pytest.mark.parametrize("n", [1, 2])
def test_theta_ring_homomorphism(n):
    rng = random.Random(n)
    for _ in range(50):
        a = random_relement(T, T.N, rng)
        b = random_relement(T, T.N, rng)
        x = AinfElement.teich(a, M) + AinfElement.const(T, rng.randrange(9), M)
        y = AinfElement.teich(b, M) - AinfElement.const(T, rng.randrange(9), M)
        assert theta(n, x + y) == theta(n, x) + theta(n, y)
        assert theta(n, x * y) == theta(n, x) * theta(n, y)


def test_families_stay_compatible():
    rng = random.Random(7)
    a = AinfElement.teich(random_relement(T, T.N, rng), M)
    b = AinfElement.teich(EPS, M)
    for x in (a + b, a * b, a - b, (b + 1) * a, a.phi(1), b.galois(2), (1 + 3 * a).inverse()):
        assert x.is_compatible()


def test_inverse():
    x = AinfElement.teich(epsilon_root(EPS, 1), M) + 1
    assert (x * x.inverse()).equals(AinfElement.const(T, 1, M))


@pytest.mark.parametrize("c1,c2", [(2, 2), (2, 5), (5, 2), (5, 5), (4, 7)])
def test_cocycle(c1, c2):
    rep = cocycle_check(EPS, 1, c1, c2, M)
    assert rep["cocycle"] and rep["galois_on_eps"] and rep["compatible"]


def test_cocycle_level_two():
    rep = cocycle_check(EPS, 2, 2, 5, M)
    assert rep["cocycle"] and rep["galois_on_eps"]


def test_galois_factor_errors():
    with pytest.raises(NonUnitExponent):
        galois_factor(EPS, 1, 3, M)
    with pytest.raises(NonUnitExponent):
        galois_factor(EPS, 1, -2, M)


def test_insufficient_family():
    with pytest.raises(InsufficientFamily):
        theta(3, AinfElement.teich(EPS, M))


@pytest.mark.parametrize("n", [1, 2])
def test_bott_compatibility(n):
    rep = tate_module_model(EPS, n, M)
    assert rep["R_bott"] and rep["F_bott"] and rep["rank"] == 1
    assert [s["generator"] for s in rep["symmetric"]] == ["alpha^0", "alpha^1", "alpha^2"]


def test_alpha_module():
    A = AlphaModule(EPS, M)
    x = A.alpha(2)
    assert A.equal(A.F(x), A.alpha(1))
    with pytest.raises(ValueError):
        A.R(A.alpha(0))
    assert A.symmetric_power(-1)["rank"] == 0
