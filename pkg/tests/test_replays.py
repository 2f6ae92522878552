import pytest
from gmpy2 import mpq

from pmk.catalog import catalog_get
from pmk.classify import replays as R
from pmk.classify.rank4 import smatrix_class_key
from pmk.cyclotomic import CyclotomicNumber as Cyc, RootOfUnity as Rt, gauss_sqrt

TAU = (1 + gauss_sqrt(5)) / 2
TAU_BAR = (1 - gauss_sqrt(5)) / 2
ONE = Cyc.rational(1)


@pytest.fixture(scope="module")
def case12():
    return R.replay_modular_case12()


@pytest.fixture(scope="module")
def case21_neg():
    return R.replay_modular_case21(negative=True)


@pytest.fixture(scope="module")
def case21_pos():
    return R.replay_modular_case21(negative=False)


def test_case12_item_table(case12):
    table = {d: set(ts) for d, ts in case12.thetas.items()}
    assert table == {ONE: {Rt(4, 1), Rt(4, 3)}, -ONE: {Rt(4, 1), Rt(4, 3)},
                     TAU: {Rt(5, 2), Rt(5, 3)}, TAU_BAR: {Rt(5, 1), Rt(5, 4)}}


def test_case12_counts(case12):
    assert case12.counts == (48, 12, 6, 4)


def test_case12_survivors(case12):
    matched = {c["matched"] for c in case12.survivors}
    assert matched == {"fib-x-fib", "fib-x-semion", "fib-x-fib-bar", None}
    fb = smatrix_class_key(catalog_get("fib-x-fib-bar").datum)
    assert any(c["accepted"] and smatrix_class_key(c["accepted"][0]) == fb for c in case12.survivors)
    # the class with a d = -1 pointed block [[1,-1],[-1,-1]]
    neg = [c for c in case12.survivors if -ONE in (c["d2"], c["d3"])]
    assert len(neg) == 1
    c = neg[0]
    assert c["rule"] and c["rule"][0] == "rule_d"
    assert c["verlinde"]          # the fusion rules themselves are consistent


def test_verlinde_on_catalog():
    for name in ("fib-x-fib", "a1-7-half", "fib-x-semion"):
        d = catalog_get(name).datum
        N = R.verlinde_fusion([list(r) for r in d.smatrix])
        assert R.fusion_is_valid(N)[0]
        n = d.rank
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    assert N[a][b][c] == Cyc.rational(int(d.ring.N[a, b, c]))


def test_psi_interval():
    lo, hi = R.psi_interval()
    assert mpq(6380, 1000) < lo < hi < mpq(6381, 1000)
    assert hi - lo <= mpq(1, 10 ** 6)


def test_case21_negative(case21_neg):
    r = case21_neg
    assert r.n_values == [-6, -5, -4, -3, -2, -1]
    assert r.per_n == {-6: 97, -5: 89, -4: 69, -3: 69, -2: 61, -1: 61}
    assert r.counts == (446, 24, 0)
    assert len(r.algebraic_integer) == 28
    extra = sorted(set(r.algebraic_integer) - set(r.integrality))
    assert extra == [(-4, -3, 1), (-4, -1, -3), (-4, 1, 3), (-4, 3, -1)]


def test_case21_positive(case21_pos):
    r = case21_pos
    assert r.counts[0] == 446
    assert sorted(r.twists) == [(1, -2, -1), (1, 2, 1)]
    assert R._d1(1, negative=False) == TAU


def test_case21_bound_exact():
    # floor of the bound at n = -1 (d1 = -1/tau): r^2 + s^2 <= B
    d1 = R._d1(-1, negative=True)
    B = R._bound(-1, d1)
    x = -d1
    val = 5 * (4 * x ** 3 + 5 * x ** 2 + 4 * x + 1) / (x ** 2 * (1 + x ** 2))
    assert B <= float(val) < B + 1


def test_repz3_replay():
    res = R.replay_repz3(mmax=6)
    surv = res["survivors"]
    assert len(surv) == 1
    d = surv[0]["datum"]
    assert surv[0]["M"] == 2
    assert list(d.twists) == [Rt(1, 0), Rt(1, 0), Rt(1, 0), Rt(2, 1)]
    assert d.dims == catalog_get("c-sl2-6-ad").datum.dims
    assert d.smatrix == catalog_get("c-sl2-6-ad").datum.smatrix
    zero = [c for c in res["candidates"] if c["M"] == 0]
    assert zero and all(not c["fs_ok"] for c in zero)
    assert {c["twists"][3] for c in zero} == {"z4", "z4^3"}
    pos = [c for c in zero if float(c["datum"].dims[3]) > 0]
    assert pos and all(c["first_sum_3"] == -gauss_sqrt(3) for c in pos)


def test_final_z2_replay():
    res = R.replay_final_z2()
    assert res["allowed_N"] == [-1, 0, 1]
    assert res["divisor_N"] == [-1, 0, 1]
    assert all(row["matches_formula"] for row in res["fs"])
    assert {row["N"] for row in res["fs"] if not row["integral"]} == {2, 3, 4, 5, 6}
    assert {a["N"] for a in res["accepted"]} == {1}
    for a in res["accepted"]:
        t = a["datum"].twists
        assert (t[0], t[1]) == (Rt(1, 0), Rt(2, 1)) and {t[2], t[3]} == {Rt(4, 1), Rt(4, 3)}
