"""Premodular datum (fusion ring, twists, dimensions, S-matrix) and the
exact identities relating them."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import poly as P
from .cyclotomic import CyclotomicNumber, RootOfUnity, sign, UndecidedError
from .fusionring import FusionRing, iso_key, known_rings, subring

__all__ = [
    "PremodularDatum", "BalancingError", "CenterInconsistency", "Verdict", "DegeneracyClass",
    "GaloisAction", "s_from_balancing", "verify_datum", "gauss_sums", "mueger_center",
    "galois_action", "deligne_product", "is_pseudo_unitary", "global_dim",
]

Cyc = CyclotomicNumber
ZERO = Cyc.rational(0)
ONE = Cyc.rational(1)


class BalancingError(ValueError):
    def __init__(self, label, msg):
        super().__init__(msg)
        self.label = label


class CenterInconsistency(ValueError):
    pass


def _mat_mul(A, B):
    n, m, k = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = ZERO
            for t in range(m):
                a, b = A[i][t], B[t][j]
                if a and b:
                    acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def _scale(A, c):
    return [[x * c for x in row] for row in A]


class PremodularDatum:
    """Ring + twists + dims + S-matrix (s~), all exact."""

    def __init__(self, ring: FusionRing, twists, dims, smatrix):
        self.ring = ring
        self.twists = tuple(t if isinstance(t, RootOfUnity) else RootOfUnity(*t) for t in twists)
        self.dims = tuple(Cyc.coerce(d) for d in dims)
        self.smatrix = tuple(tuple(Cyc.coerce(x) for x in row) for row in smatrix)
        n = ring.rank
        if len(self.twists) != n or len(self.dims) != n or len(self.smatrix) != n or \
                any(len(r) != n for r in self.smatrix):
            raise ValueError("datum components do not match the ring rank")

    @property
    def rank(self) -> int:
        return self.ring.rank

    def __eq__(self, other):
        return isinstance(other, PremodularDatum) and self.ring == other.ring and \
            self.twists == other.twists and self.dims == other.dims and self.smatrix == other.smatrix

    def __hash__(self):
        return hash((self.ring, self.twists, self.dims, self.smatrix))

    def __repr__(self):
        return f"PremodularDatum(dims={list(self.dims)}, twists={list(self.twists)})"

    @cached_property
    def D2(self) -> CyclotomicNumber:
        return sum((d * d for d in self.dims), ZERO)

    @cached_property
    def theta(self) -> tuple:
        return tuple(t.cyc for t in self.twists)

    def tmatrix(self, inverse: bool = False):
        n = self.rank
        th = [t.inverse().cyc if inverse else t.cyc for t in self.twists]
        return [[th[a] if a == b else ZERO for b in range(n)] for a in range(n)]

    def cmatrix(self):
        n = self.rank
        return [[ONE if b == self.ring.duality[a] else ZERO for b in range(n)] for a in range(n)]

    def relabel(self, perm) -> "PremodularDatum":
        n = self.rank
        inv = [0] * n
        for a, p in enumerate(perm):
            inv[p] = a
        return PremodularDatum(
            self.ring.relabel(perm),
            [self.twists[inv[a]] for a in range(n)],
            [self.dims[inv[a]] for a in range(n)],
            [[self.smatrix[inv[a]][inv[b]] for b in range(n)] for a in range(n)])

    def conductor(self) -> int:
        m = 1
        for x in itertools.chain(self.dims, *self.smatrix):
            m = math.lcm(m, x.conductor)
        for t in self.twists:
            m = math.lcm(m, t.order if t.order % 4 != 2 else t.order // 2)
        return m

    def galois_conjugate(self, k: int) -> "PremodularDatum":
        n = self.conductor()
        if math.gcd(k, n) != 1:
            raise ValueError(f"k={k} not coprime to conductor {n}")
        # twists of order 2 mod 4 need an odd representative of k
        full = math.lcm(n, *(t.order for t in self.twists))
        while math.gcd(k, full) != 1:
            k += n
        return PremodularDatum(
            self.ring, [t.galois(k) for t in self.twists], [d.galois(k) for d in self.dims],
            [[x.galois(k) for x in row] for row in self.smatrix])

    def approx(self):
        S = np.array([[complex(x) for x in row] for row in self.smatrix])
        d = np.array([complex(x) for x in self.dims])
        th = np.array([complex(t) for t in self.twists])
        return S, d, th

    def is_pointed(self) -> bool:
        return all(int(self.ring.N[a].sum()) == self.rank for a in range(self.rank))

    def to_json(self) -> dict:
        from .io import datum_to_json
        return datum_to_json(self)


# -- construction ----------------------------------------------------------------------

def balancing_entry(ring: FusionRing, theta, dims, a: int, b: int) -> CyclotomicNumber:
    acc = ZERO
    astar = ring.duality[a]
    for c in range(ring.rank):
        m = int(ring.N[astar, b, c])
        if m:
            acc = acc + m * theta[c] * dims[c]
    return acc / (theta[a] * theta[b])


def s_from_balancing(ring: FusionRing, twists, dims) -> PremodularDatum:
    """S-matrix from the balancing relation; checks s~_0a = d_a."""
    n = ring.rank
    twists = [t if isinstance(t, RootOfUnity) else RootOfUnity(*t) for t in twists]
    dims = [Cyc.coerce(d) for d in dims]
    if twists[0] != RootOfUnity(1, 0):
        raise BalancingError(0, "theta_0 must be 1")
    if dims[0] != ONE:
        raise BalancingError(0, "d_0 must be 1")
    for a in range(n):
        if twists[ring.duality[a]] != twists[a] or dims[ring.duality[a]] != dims[a]:
            raise BalancingError(a, f"label {a}: twist/dim differs from its dual")
    theta = [t.cyc for t in twists]
    S = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            S[a][b] = S[b][a] = balancing_entry(ring, theta, dims, a, b)
    for a in range(n):
        if S[0][a] != dims[a]:
            raise BalancingError(a, f"balancing gives s_0{a} = {S[0][a]} != d_{a} = {dims[a]}")
    return PremodularDatum(ring, twists, dims, S)


# -- verification ----------------------------------------------------------------------

@dataclass
class Verdict:
    results: dict = field(default_factory=dict)   # identity name -> list of violations

    @property
    def passed(self) -> bool:
        return all(not v for v in self.results.values())

    def failures(self) -> list[str]:
        return [f"{k}: {m}" for k, v in self.results.items() for m in v]

    def first_failure(self) -> str | None:
        f = self.failures()
        return f[0] if f else None

    def to_json(self) -> dict:
        return {"passed": self.passed, "identities": {k: list(v) for k, v in self.results.items()}}


def gauss_sums(d: PremodularDatum):
    pp = sum((t * x * x for t, x in zip(d.theta, d.dims)), ZERO)
    pm = sum((t.inverse().cyc * x * x for t, x in zip(d.twists, d.dims)), ZERO)
    return pp, pm


def global_dim(d: PremodularDatum) -> CyclotomicNumber:
    return d.D2


def det(M) -> CyclotomicNumber:
    """Exact determinant by fraction-free-ish Gaussian elimination over the field."""
    A = [list(r) for r in M]
    n = len(A)
    res = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return ZERO
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            res = -res
        p = A[col][col]
        res = res * p
        inv = p.inverse()
        for r in range(col + 1, n):
            if A[r][col]:
                f = A[r][col] * inv
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return res


def verify_datum(d: PremodularDatum, stop_early: bool = False) -> Verdict:
    """Check every identity exactly.  With stop_early the first failing
    identity group ends the run (used by the search)."""
    ring, n, S, dims = d.ring, d.rank, d.smatrix, d.dims
    dual = ring.duality
    v = Verdict()

    def done():
        return stop_early and not v.passed

    inv = []
    if d.twists[0] != RootOfUnity(1, 0):
        inv.append("theta_0 != 1")
    if dims[0] != ONE:
        inv.append("d_0 != 1")
    for a in range(n):
        if S[0][a] != dims[a]:
            inv.append(f"s_0{a} != d_{a}")
        if d.twists[dual[a]] != d.twists[a]:
            inv.append(f"theta_{a}* != theta_{a}")
        if dims[dual[a]] != dims[a]:
            inv.append(f"d_{a}* != d_{a}")
        for b in range(n):
            if S[a][b] != S[b][a]:
                inv.append(f"s_{a}{b} != s_{b}{a}")
            if S[a][b].conj() != S[dual[a]][b]:
                inv.append(f"conj(s_{a}{b}) != s_{a}*{b}")
            if S[a][b] != S[dual[a]][dual[b]]:
                inv.append(f"s_{a}{b} != s_{a}*{b}*")
    v.results["invariants"] = inv
    if done():
        return v

    theta = d.theta
    bal = []
    for a in range(n):
        for b in range(a, n):
            if balancing_entry(ring, theta, dims, a, b) != S[a][b]:
                bal.append(f"balancing fails at ({a},{b})")
    v.results["balancing"] = bal
    if done():
        return v

    pv = []
    for a in range(n):
        for b in range(n):
            for c in range(b, n):
                rhs = ZERO
                for l in range(n):
                    m = int(ring.N[b, c, l])
                    if m:
                        rhs = rhs + m * S[a][l]
                if S[a][b] * S[a][c] != dims[a] * rhs:
                    pv.append(f"pre-Verlinde fails at (a,b,c)=({a},{b},{c})")
    v.results["pre_verlinde"] = pv
    if done():
        return v

    pp, pm = gauss_sums(d)
    Sm = [list(r) for r in S]
    S2 = _mat_mul(Sm, Sm)
    ST = _mat_mul(Sm, d.tmatrix())
    lhs = _mat_mul(_mat_mul(ST, ST), ST)
    rhs = _scale(S2, pp)
    v.results["st_cubed"] = [f"(ST)^3 != p+ S^2 at ({i},{j})" for i in range(n) for j in range(n)
                             if lhs[i][j] != rhs[i][j]]
    if done():
        return v
    STi = _mat_mul(Sm, d.tmatrix(inverse=True))
    lhs = _mat_mul(_mat_mul(STi, STi), STi)
    rhs = _scale(_mat_mul(S2, d.cmatrix()), pm)
    v.results["st_inv_cubed"] = [f"(ST^-1)^3 != p- S^2 C at ({i},{j})" for i in range(n)
                                 for j in range(n) if lhs[i][j] != rhs[i][j]]
    if done():
        return v

    if det(Sm):
        D2 = d.D2
        Sd = [[S[j][i].conj() for j in range(n)] for i in range(n)]
        SSd = _mat_mul(Sm, Sd)
        mod = [f"(S S^dagger)_{i}{j} != D^2 delta" for i in range(n) for j in range(n)
               if SSd[i][j] != (D2 if i == j else ZERO)]
        if pp * pm != D2:
            mod.append("p+ p- != D^2")
        v.results["modular"] = mod
    return v


# -- Mueger center ------------------------------------------------------------------

@dataclass(frozen=True)
class DegeneracyClass:
    tag: str                       # symmetric | properly premodular | modular
    transparent: frozenset

    def to_json(self):
        return {"tag": self.tag, "transparent": sorted(self.transparent)}


def transparent_labels(d: PremodularDatum) -> frozenset:
    n = d.rank
    return frozenset(b for b in range(n)
                     if all(d.smatrix[a][b] == d.dims[a] * d.dims[b] for a in range(n)))


def mueger_center(d: PremodularDatum, check: bool = True) -> DegeneracyClass:
    tr = transparent_labels(d)
    n = d.rank
    if len(tr) == n:
        tag = "symmetric"
    elif tr == frozenset({0}):
        tag = "modular"
    else:
        tag = "properly premodular"
    if check:
        for g in sorted(tr):
            if d.twists[g].order > 2:
                raise CenterInconsistency(f"transparent label {g} has twist {d.twists[g]} != +-1")
            if not d.dims[g].is_rational_integer():
                raise CenterInconsistency(f"transparent label {g} has non-integer dim {d.dims[g]}")
    return DegeneracyClass(tag, tr)


def center_group(d: PremodularDatum, labels) -> str | None:
    """Name of the group whose representation ring matches the center."""
    sub = subring(d.ring, labels)
    if sub is None:
        return None
    key = iso_key(sub)
    for name, ring in known_rings().items():
        if ring.rank == sub.rank and iso_key(ring) == key:
            return name
    return None


# -- Galois action -------------------------------------------------------------------

@dataclass(frozen=True)
class GaloisAction:
    k: int
    perm: tuple            # sigma(c) for each column c
    signs: tuple           # epsilon indexed by target label sigma(c)

    def to_json(self):
        return {"k": self.k, "perm": list(self.perm), "signs": list(self.signs)}


class GaloisAmbiguity(ValueError):
    pass


def galois_action(d: PremodularDatum, strict: bool = True):
    """Signed permutations induced on S-columns by each Galois automorphism.

    Returns (actions, group_info).  Columns matching several targets raise
    GaloisAmbiguity when ``strict``; otherwise the ambiguity is recorded."""
    n = d.rank
    S = d.smatrix
    L = 1
    for row in S:
        for x in row:
            L = math.lcm(L, x.conductor)
    actions, ambiguous = [], []
    for k in range(1, max(L, 2)):
        if math.gcd(k, L) != 1:
            continue
        gS = [[x.galois(k) for x in row] for row in S]
        # sigma(0) from the first column
        j0s = [j for j in range(n) if all(gS[b][0] * d.dims[j] == S[b][j] for b in range(n))]
        if not j0s:
            raise ValueError(f"k={k}: no column matches the image of the dimension column")
        if len(j0s) > 1:
            ambiguous.append((k, 0, tuple(j0s)))
            if strict:
                raise GaloisAmbiguity(f"k={k}: column 0 matches {j0s}")
        j0 = j0s[0]
        dj0 = d.dims[j0]
        perm, signs = [None] * n, [None] * n
        for c in range(n):
            hits = []
            for j in range(n):
                for eps in (1, -1):
                    if all(gS[b][c] * dj0 == eps * S[b][j] for b in range(n)):
                        hits.append((j, eps))
            if not hits:
                raise ValueError(f"k={k}: column {c} has no signed match")
            if len(hits) > 1:
                ambiguous.append((k, c, tuple(hits)))
                if strict:
                    raise GaloisAmbiguity(f"k={k}: column {c} matches {hits}")
            j, eps = hits[0]
            perm[c] = j
            signs[j] = eps
        if sorted(perm) != list(range(n)):
            raise ValueError(f"k={k}: induced map {perm} is not a permutation")
        actions.append(GaloisAction(k, tuple(perm), tuple(signs)))
    group = permutation_group({a.perm for a in actions})
    info = {"order": len(group), "structure": group_structure(group),
            "generators": _generators(group), "ambiguities": ambiguous}
    return actions, info


def _compose(p, q):
    return tuple(p[q[i]] for i in range(len(q)))


def permutation_group(gens) -> set:
    gens = list(gens)
    if not gens:
        return set()
    n = len(gens[0])
    ident = tuple(range(n))
    G = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                x = _compose(h, g)
                if x not in G:
                    G.add(x)
                    nxt.append(x)
        frontier = nxt
    return G


def _order(p) -> int:
    ident = tuple(range(len(p)))
    k, q = 1, p
    while q != ident:
        q = _compose(p, q)
        k += 1
    return k


def group_structure(G) -> str:
    size = len(G)
    if size == 1:
        return "trivial"
    orders = [_order(g) for g in G]
    abelian = all(_compose(a, b) == _compose(b, a) for a in G for b in G)
    if max(orders) == size:
        return f"Z{size}"
    if abelian and max(orders) == 2:
        return "x".join(["Z2"] * (size.bit_length() - 1))
    return f"{'abelian' if abelian else 'nonabelian'} of order {size}"


def cycle_notation(p) -> str:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def _generators(G) -> list[str]:
    gens, H = [], {tuple(range(len(next(iter(G)))))} if G else set()
    for g in sorted(G, key=lambda p: (_order(p), p)):
        if g not in H:
            gens.append(g)
            H = permutation_group(gens)
    return [cycle_notation(g) for g in gens]


# -- products and unitarity ---------------------------------------------------------

def deligne_product(d1: PremodularDatum, d2: PremodularDatum) -> PremodularDatum:
    ring = d1.ring.product(d2.ring)
    n2 = d2.rank
    labels = [(i, j) for i in range(d1.rank) for j in range(n2)]
    twists = [d1.twists[i] * d2.twists[j] for i, j in labels]
    dims = [d1.dims[i] * d2.dims[j] for i, j in labels]
    S = [[d1.smatrix[i][k] * d2.smatrix[j][l] for (k, l) in labels] for (i, j) in labels]
    return PremodularDatum(ring, twists, dims, S)


def is_pseudo_unitary(d: PremodularDatum) -> bool:
    """d_a == FPdim(X_a) for all a (exact: d_a is the largest real root)."""
    for a in range(d.rank):
        x = d.dims[a]
        if not x.is_real():
            return False
        cp = d.ring.charpolys[a]
        val = ZERO
        for c in reversed(cp):
            val = val * x + int(c)
        if val:
            return False
        lo, hi = P.largest_real_root(P.poly(cp))
        # x is a root; it is the largest one iff it exceeds lo
        if sign(x - Cyc.rational(lo)) <= 0:
            return False
    return True
