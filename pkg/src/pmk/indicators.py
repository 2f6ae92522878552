"""Datum-computable part of the second Frobenius-Schur indicator.

nu_2(X_a) splits into an integer-valued sum over fusion data and a braiding
trace over the transparent objects; only the first piece is computable from
(N, S, T) and it is what the integrality filter uses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .cyclotomic import CyclotomicNumber
from .datum import PremodularDatum

__all__ = ["IndicatorReport", "fs_second_sum", "fs_integrality_filter", "cyclotomic_dim_check"]

ZERO = CyclotomicNumber.rational(0)


@dataclass(frozen=True)
class IndicatorReport:
    label: int
    self_dual: bool
    first_sum: CyclotomicNumber
    real: bool
    integral: bool

    @property
    def ok(self) -> bool:
        return self.real and (self.integral or not self.self_dual)

    def to_json(self):
        return {"label": self.label, "self_dual": self.self_dual,
                "first_sum": self.first_sum.to_json(), "real": self.real,
                "integral": self.integral, "ok": self.ok}


def fs_second_sum(d: PremodularDatum, a: int) -> CyclotomicNumber:
    """(1/D^2) sum_{b,c} N_bc^a d_b d_c (theta_b/theta_c)^2."""
    N = d.ring.N
    n = d.rank
    th2 = [(t ** 2).cyc for t in d.twists]
    acc = ZERO
    for b in range(n):
        for c in range(n):
            m = int(N[b, c, a])
            if m:
                acc = acc + m * d.dims[b] * d.dims[c] * th2[b] / th2[c]
    return acc / d.D2


def fs_integrality_filter(d: PremodularDatum):
    """Per-label reports and an overall verdict: fails iff some first sum is
    non-real or a self-dual label has a non-integer first sum."""
    reports = []
    for a in range(d.rank):
        x = fs_second_sum(d, a)
        reports.append(IndicatorReport(a, d.ring.duality[a] == a, x, x.is_real(),
                                       x.is_rational_integer()))
    return reports, all(r.ok for r in reports)


def twist_order(d: PremodularDatum) -> int:
    return math.lcm(*(t.order for t in d.twists))


def cyclotomic_dim_check(d: PremodularDatum) -> bool:
    """Every d_a lies in Z[zeta_2N] with N = ord(T)."""
    m = 2 * twist_order(d)
    for x in d.dims:
        if m % x.conductor:
            return False
        if not x.is_algebraic_integer():
            return False
    return True
