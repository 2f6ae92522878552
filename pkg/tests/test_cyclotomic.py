import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pmk import poly as P
from pmk.cyclotomic import (CyclotomicNumber as Cyc, RootOfUnity, compare, embed_complex, gauss_sqrt,
                            inverse_totient, roots_of_unity_satisfying, sign)


def _elem(draw, n):
    terms = draw(st.lists(st.tuples(st.integers(0, n - 1),
                                    st.fractions(min_value=-5, max_value=5, max_denominator=6)),
                          max_size=4))
    return Cyc.from_exponents(n, [(k, c) for k, c in terms])


@st.composite
def cyc(draw, max_conductor=40):
    return _elem(draw, draw(st.integers(1, max_conductor)))


@st.composite
def triple(draw, max_conductor=40):
    """Three elements of one field Q(zeta_n), n <= max_conductor."""
    n = draw(st.integers(1, max_conductor))
    return _elem(draw, n), _elem(draw, n), _elem(draw, n)


def close(x, z, tol=1e-9):
    return abs(complex(x) - z) < tol * (1 + abs(z))


@settings(max_examples=1000, deadline=None)
@given(triple())
def test_field_axioms(abc):
    a, b, c = abc
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Cyc.rational(0)
    if a:
        assert a * a.inverse() == Cyc.rational(1)
    # the embedding is a ring homomorphism
    assert close(a * b + c, complex(a) * complex(b) + complex(c))


@settings(max_examples=200, deadline=None)
@given(cyc(24), st.integers(1, 200))
def test_galois_is_automorphism(a, k):
    n = a.conductor
    if math.gcd(k, n) != 1:
        k = 1
    b = a * a + 3
    assert (a * b).galois(k) == a.galois(k) * b.galois(k)
    assert (a + b).galois(k) == a.galois(k) + b.galois(k)


@settings(max_examples=200, deadline=None)
@given(cyc())
def test_conj_and_json_roundtrip(a):
    assert close(a.conj(), complex(a).conjugate())
    assert Cyc.from_json(a.to_json()) == a
    assert (a * a.conj()).is_real()


def test_canonical_conductor():
    # 1 + z3 + z3^2 = 0, z4^2 = -1, sqrt5 drops from conductor 20 to 5
    assert Cyc.from_exponents(3, [(0, 1), (1, 1), (2, 1)]) == Cyc.rational(0)
    assert Cyc.zeta(4) ** 2 == Cyc.rational(-1)
    s5 = gauss_sqrt(5) * Cyc.zeta(20, 5) * Cyc.zeta(20, 15)
    assert s5.conductor == 5
    assert hash(Cyc.zeta(6, 2)) == hash(Cyc.zeta(3))


@pytest.mark.parametrize("m", [2, 3, 5, 6, 7, 8, 12, 13, -1, -3, -7, 18])
def test_gauss_sqrt(m):
    r = gauss_sqrt(m)
    assert r * r == Cyc.rational(m)
    assert close(r, cmath.sqrt(m))


def test_inverse_totient_against_brute_force():
    for d in range(1, 25):
        brute = sorted(n for n in range(1, 6 * d * d + 10) if P.euler_phi(n) <= d)
        assert inverse_totient(d) == brute


def test_roots_of_unity_satisfying():
    # x^4 + x^3 + x^2 + x + 1 -> primitive 5th roots; (x^2+1)(x-1) -> 1, +-i
    assert set(roots_of_unity_satisfying([1, 1, 1, 1, 1])) == {RootOfUnity(5, k) for k in (1, 2, 3, 4)}
    got = roots_of_unity_satisfying([-1, 1, -1, 1])
    assert set(got) == {RootOfUnity(1, 0), RootOfUnity(4, 1), RootOfUnity(4, 3)}
    assert roots_of_unity_satisfying([2, 1]) == []
    with pytest.raises(ValueError):
        roots_of_unity_satisfying([0])


def test_root_of_unity_normalization():
    assert RootOfUnity(8, 2) == RootOfUnity(4, 1)
    assert RootOfUnity(6, 3) == RootOfUnity(2, 1)
    assert (RootOfUnity(5, 2) ** 5) == RootOfUnity(1, 0)
    assert RootOfUnity(12, 5).inverse() == RootOfUnity(12, 7)


def test_sign_and_compare():
    tau = (1 + gauss_sqrt(5)) / 2
    assert sign(tau - Fraction(1618033988, 10 ** 9)) == 1
    assert sign(tau - Fraction(1618033989, 10 ** 9)) == -1
    assert sign(Cyc.rational(0)) == 0
    assert compare(gauss_sqrt(2), Fraction(99, 70)) == -1
    assert compare(gauss_sqrt(2), Fraction(140, 99)) == 1
    iv = embed_complex(gauss_sqrt(3), digits=30)
    assert abs(iv.mid() - math.sqrt(3)) < 1e-15 and float(iv.width) < 1e-25
    with pytest.raises(ValueError):
        sign(Cyc.zeta(4))


def test_integrality_predicates():
    tau = (1 + gauss_sqrt(5)) / 2
    assert tau.is_algebraic_integer()
    assert not (gauss_sqrt(5) / 2).is_algebraic_integer()
    assert Cyc.rational(3).is_rational_integer()
    assert not Cyc.rational(Fraction(3, 2)).is_rational_integer()
    assert (Cyc.zeta(8) + Cyc.zeta(8, 7)).is_real()
