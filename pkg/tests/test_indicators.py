import pytest
from hypothesis import given, settings, strategies as st

from pmk.catalog import catalog_get, catalog_list
from pmk.cyclotomic import RootOfUnity as R, gauss_sqrt
from pmk.datum import deligne_product, s_from_balancing, verify_datum
from pmk.fusionring import FusionRing
from pmk.indicators import cyclotomic_dim_check, fs_integrality_filter, fs_second_sum, twist_order
from pmk.io import read_datum

import numpy as np
import pathlib

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def cyclic_ring(n):
    N = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            N[a, b, (a + b) % n] = 1
    return FusionRing(N)


@st.composite
def pointed_cyclic(draw):
    n = draw(st.integers(1, 8))
    k = draw(st.integers(0, 4 * n - 1))
    if n % 2:
        k -= k % 2                 # theta_a = zeta_2n^{k a^2} needs k n even
    return s_from_balancing(cyclic_ring(n), [R(2 * n, k * a * a) for a in range(n)], [1] * n)


@pytest.mark.parametrize("name", catalog_list())
def test_first_sum_real_on_catalog(name):
    d = catalog_get(name).datum
    for a in range(d.rank):
        x = fs_second_sum(d, a)
        assert x == x.conj()


@settings(max_examples=100, deadline=None)
@given(pointed_cyclic(), st.booleans())
def test_first_sum_real_on_pointed(d, square):
    if square:
        d = deligne_product(d, catalog_get("semion").datum)
    assert verify_datum(d).passed
    reports, ok = fs_integrality_filter(d)
    assert ok
    for r in reports:
        assert r.real and r.first_sum == r.first_sum.conj()


def test_filter_passes_catalog():
    for name in catalog_list():
        assert fs_integrality_filter(catalog_get(name).datum)[1], name


def test_ty_like_fixture_fails_at_object_3():
    d = read_datum(FIXTURES / "ty_like.json")
    reports, ok = fs_integrality_filter(d)
    assert not ok
    assert [r.label for r in reports if not r.ok] == [3]
    assert reports[3].first_sum == -gauss_sqrt(3)


def test_rep_z3_branch_first_sum():
    from pmk.catalog import _rep_z3_ring
    d = s_from_balancing(_rep_z3_ring(0), [R(1, 0), R(1, 0), R(1, 0), R(4, 3)], [1, 1, 1, gauss_sqrt(3)])
    assert fs_second_sum(d, 3) == -gauss_sqrt(3)


def test_cyclotomic_dim_predicate():
    assert cyclotomic_dim_check(catalog_get("fib").datum)          # tau in Z[zeta_10]
    assert cyclotomic_dim_check(catalog_get("c-sl2-8-ad").datum)   # sqrt2 in Z[zeta_8]
    assert twist_order(catalog_get("a1-7-half").datum) == 9
