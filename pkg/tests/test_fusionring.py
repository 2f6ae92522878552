import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pmk.catalog import _rep_z3_ring, _sl2_8_ring, catalog_get
from pmk.fusionring import (FusionRing, admissible_relabelings, canonical_form, characters, enumerate_rings,
                            fpdim, is_character, iso_key, known_rings, structure_probes, verify_fusion_axioms)

FIB = FusionRing.from_matrices([[[0, 1], [1, 1]]])


def test_rank1_and_rank2_enumeration():
    r1 = list(enumerate_rings(1, 1))
    assert len(r1) == 1 and r1[0].rank == 1
    r2 = list(enumerate_rings(2, 1, (0, 1)))
    keys = {iso_key(r) for r in r2}
    assert keys == {iso_key(known_rings()["Z2"]), iso_key(FIB)}


def test_non_self_dual_z2_case_ring_present():
    # duality (2 3): N_32^1 = 0, N_33^1 = 1, N_33^2 = N_33^3 = M
    rings = list(enumerate_rings(4, 2, (0, 1, 3, 2)))
    found = False
    for r in rings:
        for p in admissible_relabelings(4, (0, 1, 3, 2)):
            q = r.relabel(p)
            N = q.N
            if N[3, 2, 1] == 0 and N[3, 3, 1] == 1 and N[3, 3, 2] == N[3, 3, 3] and \
                    N[1, 1, 0] == 1 and N[1, 2, 3] == 1:
                found = True
    assert found


def test_enumeration_is_canonical_and_orbit_free():
    for du in ((0, 1, 2, 3), (0, 1, 3, 2)):
        rings = list(enumerate_rings(4, 2, du))
        for r in rings:
            assert not verify_fusion_axioms(r)
            assert canonical_form(r) == r
        for a, b in itertools.combinations(rings, 2):
            orbit = {a.relabel(p).key() for p in admissible_relabelings(4, du)}
            assert b.key() not in orbit


@settings(max_examples=30, deadline=None)
@given(st.permutations([1, 2, 3]))
def test_canonical_form_orbit_collapse(rest):
    ring = catalog_get("fib-x-fib").datum.ring
    p = (0,) + tuple(rest)
    assert canonical_form(ring.relabel(p)) == canonical_form(ring)
    assert canonical_form(canonical_form(ring)) == canonical_form(ring)


def test_rep_z3_ring_is_minimal_and_sl2_8_swap():
    r = _rep_z3_ring(2)
    assert iso_key(r) == iso_key(r.relabel((0, 2, 1, 3)))
    s = _sl2_8_ring()
    assert canonical_form(s.relabel((0, 1, 3, 2))) == canonical_form(s)


def test_characters_are_homomorphisms():
    for name in ("fib-x-fib", "c-sl2-6-ad", "rep-a4", "c-sl2-8-ad", "a1-7-half"):
        ring = catalog_get(name).datum.ring
        chars = characters(ring)
        assert len(chars) == ring.rank
        for ch in chars:
            if ch.exact is not None:
                assert is_character(ring, ch.exact)
        fp = [ch for ch in chars if all(z.real >= 1 - 1e-9 and abs(z.imag) < 1e-9 for z in ch.approx)]
        assert len(fp) == 1


def test_fpdim_contains_power_iteration():
    for r in enumerate_rings(4, 2, (0, 1, 2, 3)):
        data = fpdim(r)
        M = sum(r.N[a].astype(float) for a in range(r.rank))
        v = np.ones(r.rank)
        for _ in range(300):
            v = M @ v
            v /= v.max()
        v = v / v[0]
        for (lo, hi), x in zip(data.intervals, v):
            assert float(lo) - 1e-6 <= x <= float(hi) + 1e-6


def test_structure_probes():
    pr = structure_probes(_rep_z3_ring(2))
    assert {"labels": (0, 1, 2), "group": "Z3"} in pr["symmetric_subcategory_candidates"]
    pr = structure_probes(catalog_get("fib-x-rep-z2").datum.ring)
    assert pr["z2_graded"]
    pr = structure_probes(_sl2_8_ring())
    assert not pr["z2_graded"] and pr["adjoint_sublabels"] == (0, 1, 2, 3)
    assert structure_probes(known_rings()["Z4"])["pointed"]


def test_axiom_violations_reported():
    N = np.zeros((2, 2, 2), dtype=np.int64)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = 1
    N[1, 1, 1] = 1           # no unit in X1 X1
    bad = verify_fusion_axioms(FusionRing(N))
    assert bad


def test_json_roundtrip():
    r = _sl2_8_ring()
    assert FusionRing.from_json(r.to_json()) == r
