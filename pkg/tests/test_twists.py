import pytest

from pmk.catalog import _fib_ring, _rep_z3_ring, catalog_get
from pmk.classify.twists import solve_twists
from pmk.cyclotomic import RootOfUnity as R, gauss_sqrt
from pmk.datum import verify_datum
from pmk.fusionring import known_rings


def twist_sets(search, symmetric=False):
    """Accepted twist vectors; the all-trivial vector (S~ = d d^T, always consistent)
    is dropped unless asked for."""
    out = {tuple(d.twists) for d in search.accepted}
    if not symmetric:
        out = {t for t in out if any(x != R(1, 0) for x in t)}
    return out


def test_rep_z3_ring_dims_1113():
    s = solve_twists(_rep_z3_ring(2), [1, 1, 1, 3])
    assert twist_sets(s) == {(R(1, 0), R(1, 0), R(1, 0), R(2, 1))}
    assert (R(1, 0),) * 4 in twist_sets(s, symmetric=True)


def test_fib_ring_golden_dims():
    tau = (1 + gauss_sqrt(5)) / 2
    s = solve_twists(_fib_ring(), [1, tau])
    got = {t[1] for t in twist_sets(s)}
    # oracle: primitive 5th roots theta with the balancing identities satisfied
    oracle = set()
    for k in range(0, 5):
        from pmk.datum import s_from_balancing
        d = s_from_balancing(_fib_ring(), [R(1, 0), R(5, k)], [1, tau])
        if verify_datum(d).passed and k % 5:
            oracle.add(R(5, k))
    assert got == oracle == {R(5, 2), R(5, 3)}


def test_pointed_z2():
    s = solve_twists(known_rings()["Z2"], [1, 1])
    assert {t[1] for t in twist_sets(s, symmetric=True)} == {R(1, 0), R(2, 1), R(4, 1), R(4, 3)}


def test_every_accepted_datum_verifies():
    for ring, dims in ((_rep_z3_ring(2), [1, 1, 1, 3]),
                       (catalog_get("c-sl2-8-ad").datum.ring, catalog_get("c-sl2-8-ad").datum.dims)):
        for d in solve_twists(ring, dims).accepted:
            assert verify_datum(d).passed


def test_zero_dim_rejected():
    with pytest.raises(ValueError):
        solve_twists(known_rings()["Z2"], [1, 0])


def test_catalog_twists_found():
    for name in ("c-so5-10-ad-1", "fib-x-svec", "a1-7-half", "fib-x-fib-bar"):
        d = catalog_get(name).datum
        assert tuple(d.twists) in twist_sets(solve_twists(d.ring, d.dims)), name
