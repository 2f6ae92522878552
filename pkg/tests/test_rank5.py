import pytest
import sympy as sp

from pmk.classify.rank5 import (TABLE, abelian_subgroup_classes, element_verdict, perm_from_cycles,
                                rank5_galois_filter)


@pytest.fixture(scope="module")
def report():
    return rank5_galois_filter()


def test_all_rows_eliminated(report):
    assert len(report.subgroups) == 8
    assert all(s.eliminated for s in report.subgroups)
    assert report.conclusion == "pointed"


def test_table_is_every_abelian_class(report):
    classes = abelian_subgroup_classes()
    assert len(classes) == 8
    assert sorted(len(c) for c in classes) == [2, 2, 3, 4, 4, 4, 5, 6]
    assert report.table_matches_s5


def test_transposition_reduces_to_half_integers():
    ev = element_verdict(perm_from_cycles([(0, 1)]))
    assert ev.eliminated
    text = " ".join(ev.reasons)
    # d3^2 in {+-1/2, +-3/2}: sqrt(2)/2 and sqrt(6)/2 appear and are rejected
    assert "sqrt(6)/2) not an algebraic integer" in text
    assert "sqrt(2)/2) not an algebraic integer" in text


def test_order_two_reasons_follow_closed_form():
    # sigma = (0,1) forces x = eps0 eps2, then eps0 eps2 + 2 eps2 + (eps3 + eps4) y^2 = 0
    ev = element_verdict(perm_from_cycles([(0, 1)]))
    for line in ev.reasons:
        signs = [1 if ch == "+" else -1 for ch in line[4:9]]
        e0, e2, e3, e4 = signs[0], signs[2], signs[3], signs[4]
        if e3 + e4 == 0:
            assert "no solution" in line
        else:
            y2 = sp.Rational(-(e0 * e2 + 2 * e2), e3 + e4)
            assert f"({e0 * e2}, " in line
            assert abs(y2) in (sp.Rational(1, 2), sp.Rational(3, 2))


def test_five_cycle_eliminated():
    ev = element_verdict(perm_from_cycles([(0, 1, 2, 3, 4)]))
    assert ev.eliminated and not ev.survivors


def test_every_element_moving_zero(report):
    assert len(report.elements) == 52
    assert all(e.eliminated for e in report.elements.values())


def test_json_shape(report):
    obj = report.to_json()
    assert obj["conclusion"] == "pointed" and len(obj["subgroups"]) == len(TABLE)
