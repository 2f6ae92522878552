"""Exact replays of the case analyses behind the rank-4 classification.

Each replay rebuilds the candidate space from the stated constraints and
reports counts per stage, so that every number can be audited.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from .. import poly as P
from ..cyclotomic import CyclotomicNumber, RootOfUnity, gauss_sqrt, inverse_totient, sign
from ..datum import PremodularDatum, mueger_center, s_from_balancing, verify_datum
from ..fusionring import FusionRing, characters, verify_fusion_axioms
from ..indicators import fs_integrality_filter, fs_second_sum
from .twists import solve_twists

__all__ = ["verlinde_fusion", "psi_interval", "replay_repz3", "replay_final_z2",
           "replay_modular_case12", "replay_modular_case21", "Case12Report", "Case21Report"]

Cyc = CyclotomicNumber
ZERO = Cyc.rational(0)
ONE = Cyc.rational(1)

PSI_POLY = (-1, -5, -8, -5, 1)        # x^4 - 5x^3 - 8x^2 - 5x - 1, low degree first


def _tau():
    return (1 + gauss_sqrt(5)) / 2


def _tau_bar():
    return (1 - gauss_sqrt(5)) / 2


# -- shared helpers ------------------------------------------------------------------

def verlinde_fusion(S):
    """N_ab^c = (1/D^2) sum_x s_ax s_bx conj(s_cx) / s_0x, exact.  Returns None if
    some s_0x vanishes."""
    n = len(S)
    if any(not S[0][x] for x in range(n)):
        return None
    D2 = sum((S[0][x] * S[0][x].conj() for x in range(n)), ZERO)
    inv0 = [S[0][x].inverse() for x in range(n)]
    conjS = [[S[c][x].conj() for x in range(n)] for c in range(n)]
    N = [[[None] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            ab = [S[a][x] * S[b][x] * inv0[x] for x in range(n)]
            for c in range(n):
                v = sum((ab[x] * conjS[c][x] for x in range(n)), ZERO) / D2
                N[a][b][c] = N[b][a][c] = v
    return N


def fusion_is_valid(N) -> tuple[bool, str]:
    n = len(N)
    for a, b, c in itertools.product(range(n), repeat=3):
        v = N[a][b][c]
        if not v.is_rational_integer():
            return False, f"N_{a}{b}^{c} = {v} not an integer"
        if v.to_rational() < 0:
            return False, f"N_{a}{b}^{c} = {v} negative"
    return True, ""


def _ring_from_verlinde(N) -> FusionRing:
    n = len(N)
    arr = np.array([[[int(N[a][b][c].to_rational()) for c in range(n)] for b in range(n)]
                    for a in range(n)], dtype=np.int64)
    return FusionRing(arr)


def _mat_key(S) -> tuple:
    return tuple(tuple((x.conductor, tuple((e, int(c.numerator), int(c.denominator))
                                         for e, c in x.coeffs)) for x in row) for row in S)


def _canonical_matrix(S, galois=True) -> tuple:
    """Minimal key of S over relabelings fixing 0 and (optionally) Galois conjugation."""
    n = len(S)
    m = 1
    for row in S:
        for x in row:
            m = math.lcm(m, x.conductor)
    ks = [k for k in range(1, max(m, 2)) if math.gcd(k, m) == 1] if galois else [1]
    best = None
    for k in ks:
        G = [[x.galois(k) for x in row] for row in S]
        for rest in itertools.permutations(range(1, n)):
            p = (0,) + rest
            key = _mat_key([[G[p[a]][p[b]] for b in range(n)] for a in range(n)])
            if best is None or key < best:
                best = key
    return best


def psi_interval(width=mpq(1, 10 ** 6)) -> tuple:
    """Isolating interval of the largest real root of x^4-5x^3-8x^2-5x-1."""
    roots = P.isolate_real_roots(P.poly(PSI_POLY), mpq(1, 16))
    lo, hi = roots[-1]
    return P.refine_root(P.poly(PSI_POLY), lo, hi, width)


def _below_psi(x: Cyc) -> bool:
    """x <= psi for x >= 1: equivalent to x^4 <= 1 + 5x + 8x^2 + 5x^3."""
    val = ZERO
    for c in reversed(PSI_POLY):
        val = val * x + c
    return sign(val) <= 0


# -- Rep(Z3) center --------------------------------------------------------------------

def rep_z3_ring(m: int) -> FusionRing:
    return FusionRing.from_matrices([
        [[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0], [0, 0, 0, 1]],
        [[0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
        [[0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 1], [1, 1, 1, m]],
    ])


def replay_repz3(mmax: int = 6) -> dict:
    """Solve for twists on the Rep(Z3)-center ring for N_33^3 = 0..mmax.

    Keeps data whose Mueger center is exactly {0,1,2}; records the FS first
    sum of label 3 for each and whether the integrality filter passes."""
    rows, survivors = [], []
    for m in range(mmax + 1):
        ring = rep_z3_ring(m)
        chars = characters(ring)
        for ch in chars:
            if not ch.is_real or ch.exact is None or ch.exact[1] != ONE or not ch.exact[3]:
                continue
            search = solve_twists(ring, ch.exact, chars)
            for d in search.accepted:
                deg = mueger_center(d, check=False)
                if deg.transparent != frozenset({0, 1, 2}):
                    continue
                reports, ok = fs_integrality_filter(d)
                row = {"M": m, "dims": [str(x) for x in d.dims], "twists": [str(t) for t in d.twists],
                       "first_sum_3": reports[3].first_sum, "fs_ok": ok, "datum": d}
                rows.append(row)
                if ok:
                    survivors.append(row)
    return {"candidates": rows, "survivors": survivors}


# -- final Z2 case ----------------------------------------------------------------------

def z2_final_ring(n: int, m: int | None = None) -> FusionRing:
    m = n if m is None else m
    return FusionRing.from_matrices([
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
        [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, n, m], [0, 1, m, n]],
        [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, m, n], [1, 0, n, m]],
    ])


def diophantine_solutions(bound: int = 50) -> list[tuple[int, int]]:
    """Integer (N, L) with 4 = (N^2+1)(3+L^2-2LN), |N|, |L| <= bound."""
    out = []
    for n in range(-bound, bound + 1):
        for L in range(-bound, bound + 1):
            if (n * n + 1) * (3 + L * L - 2 * L * n) == 4:
                out.append((n, L))
    return out


def replay_final_z2(nmax: int = 6, bound: int = 50) -> dict:
    """The N_22^2 = N_22^3 = N family with X1 X2 = X3, T = diag(1,-1,i,-i).

    Reports the diophantine solutions, the FS first sum of X2 per N against
    N +- (N^2-1)/sqrt(N^2+1), and the data the twist solver accepts."""
    sols = diophantine_solutions(bound)
    allowed = sorted({n for n, _ in sols})
    # divisibility argument: N^2+1 | 4
    divisors = [n for n in range(-bound, bound + 1) if 4 % (n * n + 1) == 0]
    fs_rows = []
    T = [RootOfUnity(1, 0), RootOfUnity(2, 1), RootOfUnity(4, 1), RootOfUnity(4, 3)]
    for n in range(0, nmax + 1):
        ring = z2_final_ring(n)
        r = gauss_sqrt(n * n + 1)
        for eps in (1, -1):
            d = n + eps * r
            datum = s_from_balancing(ring, T, [1, 1, d, d])
            fs = fs_second_sum(datum, 2)
            closed = [n + s * (n * n - 1) / r for s in (1, -1)]
            fs_rows.append({"N": n, "eps": eps, "first_sum_2": fs, "matches_formula": fs in closed,
                            "integral": fs.is_rational_integer()})
    accepted = []
    for n in range(1, nmax + 1):
        ring = z2_final_ring(n)
        chars = characters(ring)
        for ch in chars:
            if not ch.is_real or ch.exact is None or ch.exact[1] != ONE or not ch.exact[2]:
                continue
            search = solve_twists(ring, ch.exact, chars)
            for d in search.accepted:
                deg = mueger_center(d, check=False)
                if deg.transparent != frozenset({0, 1}):
                    continue
                _, ok = fs_integrality_filter(d)
                if ok:
                    accepted.append({"N": n, "datum": d})
    return {"solutions": sols, "allowed_N": allowed, "divisor_N": divisors,
            "fs": fs_rows, "accepted": accepted}


# -- modular, two pointed-like labels -----------------------------------------------------

@dataclass
class Case12Report:
    thetas: dict = field(default_factory=dict)      # d -> list of twists
    combinations: list = field(default_factory=list)
    distinct: list = field(default_factory=list)
    galois_classes: list = field(default_factory=list)
    relabel_classes: list = field(default_factory=list)
    survivors: list = field(default_factory=list)   # dicts with verdicts

    @property
    def counts(self):
        return (len(self.combinations), len(self.distinct), len(self.galois_classes),
                len(self.relabel_classes))

    def to_json(self):
        from ..io import datum_to_json
        return {
            "format": "replay-case12/1",
            "items": [{"d": d.to_json(), "twists": [t.to_json() for t in ths]}
                      for d, ths in sorted(self.thetas.items(), key=lambda kv: float(kv[0]))],
            "counts": {"combinations": self.counts[0], "distinct": self.counts[1],
                       "galois": self.counts[2], "relabel": self.counts[3]},
            "classes": [{"d2": c["d2"].to_json(), "d3": c["d3"].to_json(),
                         "smatrix": [[x.to_json() for x in row] for row in c["smatrix"]],
                         "verlinde": c["verlinde"], "verlinde_detail": c["verlinde_detail"],
                         "accepted": [datum_to_json(d) for d in c["accepted"]],
                         "rule": None if c["rule"] is None else {"id": c["rule"][0], "citation": c["rule"][1]},
                         "matched": c["matched"]} for c in self.survivors],
        }


def _case12_dims():
    """Twists theta with phi(ord) <= 4 and dims d with d^2 = (-1+theta-theta^2)/theta,
    d - 1/d = n a nonnegative integer."""
    out = {}
    for order in inverse_totient(4):
        if P.euler_phi(order) > 4:
            continue
        for k in range(order):
            if math.gcd(k, order) != 1:
                continue
            th = RootOfUnity(order, k)
            x = (-1 + th.cyc - th.cyc * th.cyc) / th.cyc
            if not x.is_rational() and not x.is_real():
                continue
            if not x or sign(x) <= 0:
                continue
            q = x + x.inverse() - 2
            if not q.is_rational():
                continue
            q = q.to_rational()
            if q.denominator != 1 or q < 0 or math.isqrt(int(q)) ** 2 != int(q):
                continue
            n = math.isqrt(int(q))
            root = gauss_sqrt(n * n + 4)
            for d in ((n + root) / 2, (n - root) / 2):
                if d * d == x:
                    out.setdefault(d, []).append(th)
    return out


def case12_smatrix(d2, d3):
    d1 = d2 * d3
    return [[ONE, d1, d2, d3],
            [d1, ONE, -d3, -d2],
            [d2, -d3, -ONE, d1],
            [d3, -d2, d1, -ONE]]


def replay_modular_case12() -> Case12Report:
    rep = Case12Report()
    table = _case12_dims()
    rep.thetas = table
    items = [(d, th) for d in sorted(table, key=lambda z: float(z)) for th in table[d]]
    for (d2, t2), (d3, t3) in itertools.product(items, repeat=2):
        if d2 * d2 == ONE and d3 * d3 == ONE:
            continue            # all dims +-1: pointed
        rep.combinations.append((d2, d3, t2, t3))
    seen = {}
    for d2, d3, t2, t3 in rep.combinations:
        key = _mat_key(case12_smatrix(d2, d3))
        seen.setdefault(key, (d2, d3))
    rep.distinct = list(seen.values())
    gal = {}
    for d2, d3 in rep.distinct:
        S = case12_smatrix(d2, d3)
        key = min(_mat_key([[x.galois(k) for x in row] for row in S]) for k in (1, 2))
        gal.setdefault(key, (d2, d3))
    rep.galois_classes = list(gal.values())
    rel = {}
    for d2, d3 in rep.galois_classes:
        rel.setdefault(_canonical_matrix(case12_smatrix(d2, d3)), (d2, d3))
    rep.relabel_classes = list(rel.values())
    for d2, d3 in rep.relabel_classes:
        rep.survivors.append(_case12_verdict(d2, d3, table))
    return rep


def _case12_verdict(d2, d3, table) -> dict:
    from ..catalog import catalog_get
    from .rank4 import smatrix_class_key, RULES
    S = case12_smatrix(d2, d3)
    N = verlinde_fusion(S)
    ok, why = fusion_is_valid(N)
    out = {"d2": d2, "d3": d3, "smatrix": S, "verlinde": ok, "verlinde_detail": why,
           "accepted": [], "matched": None, "rule": None}
    if not ok:
        return out
    ring = _ring_from_verlinde(N)
    for t2, t3 in itertools.product(table[d2], table[d3]):
        tw = [RootOfUnity(1, 0), t2 * t3, t2, t3]
        d = PremodularDatum(ring, tw, [ONE, d2 * d3, d2, d3], S)
        v = verify_datum(d)
        if v.passed:
            out["accepted"].append(d)
    if not out["accepted"]:
        return out
    d = out["accepted"][0]
    for a in range(1, 4):
        if int(ring.N[a].sum()) == 4 and d.dims[a] == -ONE and d.twists[a].order == 4:
            out["rule"] = ("rule_d", RULES["rule_d"])
            return out
    key = smatrix_class_key(d)
    for name in ("fib-x-semion", "fib-x-fib", "fib-x-fib-bar", "a1-7-half"):
        if smatrix_class_key(catalog_get(name).datum) == key:
            out["matched"] = name
            break
    return out


# -- modular, d1 a unit of Z[(n+sqrt(n^2+4))/2] -------------------------------------------

@dataclass
class Case21Report:
    psi: tuple = ()
    n_values: list = field(default_factory=list)
    triples: list = field(default_factory=list)           # (n, r, s)
    per_n: dict = field(default_factory=dict)
    algebraic_integer: list = field(default_factory=list)  # a, b rational, d2, d3 integral
    integrality: list = field(default_factory=list)       # a, b integers (d2, d3 in Z[d1])
    fusion: list = field(default_factory=list)
    twists: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)             # triple -> rejection reason

    @property
    def counts(self):
        return (len(self.triples), len(self.integrality), len(self.fusion))

    def to_json(self):
        def trip(ts):
            return [list(t) for t in ts]
        return {
            "format": "replay-case21/1",
            "psi": [str(self.psi[0]), str(self.psi[1])],
            "n_values": self.n_values,
            "triples_per_n": {str(k): v for k, v in self.per_n.items()},
            "counts": {"triples": len(self.triples), "algebraic_integer": len(self.algebraic_integer),
                       "integrality": len(self.integrality), "fusion": len(self.fusion),
                       "twists": len(self.twists)},
            "integrality": trip(self.integrality),
            "fusion": trip(self.fusion),
            "twists": trip(self.twists),
            "rejected": [{"triple": list(k), "reason": v} for k, v in sorted(self.detail.items())],
        }


def _d1(n: int, negative: bool) -> Cyc:
    root = gauss_sqrt(n * n + 4)
    return (n - root) / 2 if negative else (n + root) / 2


def _bound(n: int, d1: Cyc) -> int:
    """floor of (n^2+4)(4|d|^3+5|d|^2+4|d|+1)/(|d|^2(1+|d|^2)), decided exactly."""
    x = d1 if sign(d1) > 0 else -d1
    B = (n * n + 4) * (4 * x ** 3 + 5 * x ** 2 + 4 * x + 1) / (x ** 2 * (1 + x ** 2))
    k = math.floor(float(B))
    while sign(B - k) < 0:
        k -= 1
    while sign(B - (k + 1)) >= 0:
        k += 1
    return k


def case21_smatrix(d1, d2, d3):
    den = d2 * d2 + d3 * d3
    s22 = (d3 * d3 - d2 * d2 - 2 * d1 * d2 * d3) / den
    s23 = (d1 * d2 * d2 - d1 * d3 * d3 - 2 * d2 * d3) / den
    return [[ONE, d1, d2, d3],
            [d1, -ONE, d3, -d2],
            [d2, d3, s22, s23],
            [d3, -d2, s23, -s22]]


def replay_modular_case21(negative: bool = True, twist_stage: bool = True) -> Case21Report:
    """n < 0 (negative=True) uses d1 = (n - sqrt(n^2+4))/2; n > 0 uses the + root."""
    rep = Case21Report(psi=psi_interval())
    rng = range(-12, 0) if negative else range(1, 13)
    for n in rng:
        d1 = _d1(n, negative)
        ad = d1 if sign(d1) > 0 else -d1
        if sign(ad - 1) < 0 or not _below_psi(ad):
            continue
        rep.n_values.append(n)
        k = _bound(n, d1)
        r_max = math.isqrt(k)
        cnt = 0
        for r in range(-r_max, r_max + 1):
            for s in range(-r_max, r_max + 1):
                if r * r + s * s <= k:
                    rep.triples.append((n, r, s))
                    cnt += 1
        rep.per_n[n] = cnt
    for n, r, s in rep.triples:
        d1 = _d1(n, negative)
        q = n * n + 4
        a, b = mpq(r * n - 2 * s, q), mpq(2 * r + s * n, q)
        if a == 0 and b == 0:
            rep.detail[(n, r, s)] = "zero dimension"
            continue
        d2, d3 = a * d1 + b, b * d1 - a
        if not (d2.is_algebraic_integer() and d3.is_algebraic_integer()):
            rep.detail[(n, r, s)] = "d2, d3 not algebraic integers"
            continue
        rep.algebraic_integer.append((n, r, s))
        if a.denominator != 1 or b.denominator != 1:
            rep.detail[(n, r, s)] = "d2, d3 not in Z[d1]"
            continue
        if not d2 or not d3:
            rep.detail[(n, r, s)] = "zero dimension"
            continue
        rep.integrality.append((n, r, s))
    for n, r, s in rep.integrality:
        d1 = _d1(n, negative)
        q = n * n + 4
        a, b = mpq(r * n - 2 * s, q), mpq(2 * r + s * n, q)
        d2, d3 = a * d1 + b, b * d1 - a
        S = case21_smatrix(d1, d2, d3)
        D2 = 1 + d1 * d1 + d2 * d2 + d3 * d3
        orth = all(sum((S[i][x] * S[j][x] for x in range(4)), ZERO) == (D2 if i == j else ZERO)
                   for i in range(4) for j in range(4))
        if not orth:
            rep.detail[(n, r, s)] = "S S^T != D^2 I"
            continue
        ok, why = fusion_is_valid(verlinde_fusion(S))
        if not ok:
            rep.detail[(n, r, s)] = "Verlinde: " + why
            continue
        rep.fusion.append((n, r, s))
    if twist_stage:
        for n, r, s in rep.fusion:
            d1 = _d1(n, negative)
            q = n * n + 4
            a, b = mpq(r * n - 2 * s, q), mpq(2 * r + s * n, q)
            d2, d3 = a * d1 + b, b * d1 - a
            S = case21_smatrix(d1, d2, d3)
            ring = _ring_from_verlinde(verlinde_fusion(S))
            if verify_fusion_axioms(ring):
                rep.detail[(n, r, s)] = "fusion axioms"
                continue
            search = solve_twists(ring, [ONE, d1, d2, d3])
            hits = [d for d in search.accepted if d.smatrix == tuple(tuple(row) for row in S)]
            if hits:
                rep.twists.append((n, r, s))
            else:
                rep.detail[(n, r, s)] = "no twists realize this S-matrix"
    return rep
