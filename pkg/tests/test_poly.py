from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from pmk import poly as P


def test_euler_phi_and_cyclotomic_polynomials():
    assert [P.euler_phi(n) for n in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]
    assert P.cyclotomic_polynomial(1) == (-1, 1)
    assert P.cyclotomic_polynomial(5) == (1, 1, 1, 1, 1)
    assert P.cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    # x^n - 1 is the product of Phi_d over d | n
    for n in (6, 10, 12):
        prod = (1,)
        for d in range(1, n + 1):
            if n % d == 0:
                prod = P.mul(prod, P.poly(P.cyclotomic_polynomial(d)))
        assert prod == P.poly([-1] + [0] * (n - 1) + [1])


def test_golden_ratio_isolation():
    # x^2 - x - 1
    roots = P.isolate_real_roots(P.poly([-1, -1, 1]), mpq(1, 10 ** 12))
    assert len(roots) == 2
    lo, hi = roots[1]
    assert lo < mpq(1618033988749895, 10 ** 15) <= hi or lo < mpq(1618033988749894, 10 ** 15) < hi


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4, unique=True))
def test_isolation_of_integer_roots(rs):
    p = (1,)
    for r in rs:
        p = P.mul(p, P.poly([-r, 1]))
    ivs = P.isolate_real_roots(p, mpq(1, 8))
    assert len(ivs) == len(rs)
    for (lo, hi), r in zip(ivs, sorted(rs)):
        assert lo < r <= hi


def test_refine_and_largest_root():
    p = P.poly([-1, -5, -8, -5, 1])
    lo, hi = P.largest_real_root(p, mpq(1, 10 ** 9))
    assert mpq(6380, 1000) < lo and hi < mpq(6381, 1000)
    assert hi - lo <= mpq(1, 10 ** 9)


def test_charpoly_and_gcd():
    assert P.charpoly([[0, 1], [1, 1]]) == P.poly([-1, -1, 1])
    g = P.pgcd(P.poly([-1, 0, 1]), P.poly([1, 1]))
    assert P.monic(g) == P.poly([1, 1])
