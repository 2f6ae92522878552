import itertools

import pytest

from pmk.catalog import catalog_get, catalog_list
from pmk.classify.rank4 import RULES, THEOREM_CLASSES, classify_rank4, smatrix_class_key
from pmk.datum import mueger_center, verify_datum
from pmk.fusionring import FusionRing, iso_key
from pmk.indicators import cyclotomic_dim_check, fs_integrality_filter
from pmk.io import datum_from_json


def class_key(c):
    d = datum_from_json(c["representative"]) if isinstance(c["representative"], dict) else c["representative"]
    if c["tag"] == "symmetric":
        return ("symmetric", iso_key(d.ring))
    if c["tag"] == "proper":
        return ("proper", c["pointed"], iso_key(d.ring), tuple(c["center_types"]))
    return ("modular", c["pointed"], smatrix_class_key(d))


def test_theorem_list(rank4_report):
    chk = rank4_report.theorem_check()
    assert chk["ok"], chk
    assert chk["unidentified"] == 0
    for tag, names in THEOREM_CLASSES.items():
        assert rank4_report.names(tag) == set(names)


def test_accepted_data_pass_every_check(rank4_report):
    for c in rank4_report.classes:
        d = c["representative"]
        assert verify_datum(d).passed
        deg = mueger_center(d)          # raises on inconsistency
        assert sorted(deg.transparent) == c["center"]
        assert fs_integrality_filter(d)[1]
        assert cyclotomic_dim_check(d)


def test_every_rejection_has_one_reason(rank4_report):
    for v in rank4_report.verdicts:
        if v.verdict == "rejected":
            assert v.stage and v.reason
        else:
            assert v.reason is None
    cited = {v.citation for v in rank4_report.verdicts if v.citation}
    assert cited <= set(RULES.values())


def _accepted_on(report, ring_id):
    return {(v.dims, v.twists) for v in report.verdicts
            if v.ring_id == ring_id and v.verdict == "accepted"}


def test_filters_sound_on_catalog(rank4_report):
    rings = {rid: FusionRing.from_json(r) for rid, r in rank4_report.rings}
    for name in catalog_list():
        d = catalog_get(name).datum
        if d.rank != 4:
            assert verify_datum(d).passed and fs_integrality_filter(d)[1]
            continue
        hits = [rid for rid, r in rings.items() if iso_key(r) == iso_key(d.ring)]
        assert len(hits) == 1, name
        target = rings[hits[0]]
        acc = _accepted_on(rank4_report, hits[0])
        ok = False
        for rest in itertools.permutations((1, 2, 3)):
            q = d.relabel((0,) + rest)
            if q.ring == target and (tuple(q.dims), tuple(q.twists)) in acc:
                ok = True
                break
        assert ok, f"{name} not accepted"


def test_no_s3_case_survivors(rank4_report):
    assert not [c for c in rank4_report.classes if c["case"].startswith("S3")]


def test_no_nonpointed_z2_dual_pair_proper(rank4_report):
    assert not [c for c in rank4_report.classes
                if c["tag"] == "proper" and c["case"] == "Z2:dual-pair" and not c["pointed"]]


def test_rules_fired_are_recorded(rank4_report):
    stages = {v.stage for v in rank4_report.verdicts if v.verdict == "rejected"}
    assert "rule_d" in stages and "fs_indicator" in stages


def test_monotone_in_nmax(rank4_report):
    small = classify_rank4(nmax=2, workers=1)
    big = {class_key(c) for c in rank4_report.classes}
    for c in small.classes:
        assert class_key(c) in big


def test_nmax_guard():
    with pytest.raises(ValueError):
        classify_rank4(nmax=1)
