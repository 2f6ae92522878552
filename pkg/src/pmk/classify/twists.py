"""Twist candidates from the character constraint on balanced S-columns.

For every label a the normalized column b -> s_ab / d_a is a ring character
chi.  Writing w_c = theta_c d_c, balancing turns this into
    (N_{a*} - theta_a d_a diag(chi(b)/d_b)) w = 0,
so theta_a is a root of P_{a,chi}(x) = det(N_{a*} - x d_a diag(chi(b)/d_b)).
Its norm down to Q is an integer polynomial whose root-of-unity roots are
found exactly; the full datum is then checked identity by identity.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .. import poly as P
from ..cyclotomic import CyclotomicNumber, RootOfUnity, roots_of_unity_satisfying, inverse_totient
from ..datum import PremodularDatum, s_from_balancing, verify_datum, BalancingError
from ..fusionring import FusionRing, Character, characters

Cyc = CyclotomicNumber
ZERO = Cyc.rational(0)
ONE = Cyc.rational(1)

FALLBACK_CAP = 24      # phi(order) bound used when a constraint polynomial vanishes


@dataclass
class TwistSearch:
    """Everything solve_twists learned for one (ring, dims) branch."""
    candidates: dict = field(default_factory=dict)      # label -> sorted list of RootOfUnity
    polynomials: dict = field(default_factory=dict)     # (label, char index) -> integer poly or None
    fallback: list = field(default_factory=list)        # labels that used the capped fallback
    accepted: list = field(default_factory=list)        # verified PremodularDatum
    rejected: list = field(default_factory=list)        # (twists, reason)

    @property
    def combinations(self) -> int:
        return len(self.accepted) + len(self.rejected)


def _principal_minors(A: np.ndarray) -> dict:
    n = A.shape[0]
    out = {}
    for k in range(n + 1):
        for S in itertools.combinations(range(n), k):
            if not S:
                out[S] = 1
            else:
                sub = A[np.ix_(S, S)]
                out[S] = int(round(np.linalg.det(sub))) if k > 3 else _idet(sub.tolist())
    return out


def _idet(M) -> int:
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    return sum((-1) ** j * M[0][j] * _idet([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(n))


def constraint_polynomial(ring: FusionRing, dims, chi, a: int) -> list:
    """Coefficients (low degree first, cyclotomic) of det(N_{a*} - x diag(D))."""
    n = ring.rank
    A = ring.N[ring.duality[a]].astype(np.int64)
    Dg = [dims[a] * chi[b] / dims[b] for b in range(n)]
    minors = _principal_minors_cached(A.tobytes(), n)
    coeffs = [ZERO] * (n + 1)
    full = tuple(range(n))
    for k in range(n + 1):
        acc = ZERO
        for S in itertools.combinations(full, k):
            comp = tuple(i for i in full if i not in S)
            m = minors[comp]
            if not m:
                continue
            prod = ONE
            for i in S:
                prod = prod * Dg[i]
            acc = acc + m * prod
        coeffs[k] = acc if k % 2 == 0 else -acc
    return coeffs


_MINORS = {}


def _principal_minors_cached(key: bytes, n: int):
    got = _MINORS.get((key, n))
    if got is None:
        A = np.frombuffer(key, dtype=np.int64).reshape(n, n)
        got = _MINORS[(key, n)] = _principal_minors(A)
    return got


def _cyc_poly_mul(p, q):
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return out


def norm_polynomial(coeffs) -> tuple | None:
    """Product of the distinct Galois conjugates of a cyclotomic-coefficient polynomial,
    as a primitive integer polynomial (None if the polynomial is zero)."""
    while coeffs and not coeffs[-1]:
        coeffs = coeffs[:-1]
    if not coeffs:
        return None
    m = 1
    for c in coeffs:
        m = math.lcm(m, c.conductor)
    # distinct conjugates only: their product is already Galois-stable
    conjs = {}
    for k in range(1, max(m, 2)):
        if math.gcd(k, m) == 1:
            conj = tuple(c.galois(k) for c in coeffs)
            conjs.setdefault(conj, None)
    prod = [ONE]
    for conj in conjs:
        prod = _cyc_poly_mul(prod, list(conj))
    rat = [c.to_rational() for c in prod]
    return P.primitive_integer(rat)


def _eval(coeffs, x: CyclotomicNumber) -> CyclotomicNumber:
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def twist_candidates(ring: FusionRing, dims, chars, a: int, search: TwistSearch | None = None,
                     cap: int = FALLBACK_CAP) -> list[RootOfUnity]:
    """Roots of unity theta with P_{a,chi}(theta) = 0 for some cyclotomic chi."""
    found = set()
    for ci, ch in enumerate(chars):
        if ch.exact is None:
            continue
        coeffs = constraint_polynomial(ring, dims, ch.exact, a)
        integer = norm_polynomial(list(coeffs))
        if search is not None:
            search.polynomials[(a, ci)] = integer
        if integer is None:
            # vanishing constraint: every order with phi <= cap
            if search is not None and a not in search.fallback:
                search.fallback.append(a)
            for L in inverse_totient(cap):
                if P.euler_phi(L) <= cap:
                    found.update(RootOfUnity(L, k) for k in range(L) if math.gcd(k, L) == 1)
            continue
        for z in roots_of_unity_satisfying(integer):
            if z not in found and not _eval(coeffs, z.cyc):
                found.add(z)
    return sorted(found)


# -- numeric screen ------------------------------------------------------------------

def _numeric_balancing(ring, th, d):
    n = ring.rank
    w = th * d
    dual = ring.duality
    S = np.empty((n, n), dtype=complex)
    for a in range(n):
        S[a] = (ring.N[dual[a]].astype(float) @ w) / (th[a] * th)
    return S


def numeric_screen(ring, th, d, tol=1e-7):
    """Largest pre-Verlinde residual and its index, plus (ST)^3 residual."""
    S = _numeric_balancing(ring, th, d)
    N = ring.N.astype(float)
    # lhs[a,b,c] = s_ab s_ac ; rhs = d_a sum_l N_bc^l s_al
    lhs = S[:, :, None] * S[:, None, :]
    rhs = d[:, None, None] * np.einsum("bcl,al->abc", N, S)
    res = np.abs(lhs - rhs)
    idx = np.unravel_index(np.argmax(res), res.shape)
    worst = float(res[idx])
    scale = 1.0 + float(np.abs(lhs).max())
    T = np.diag(th)
    pp = np.sum(th * d * d)
    ST = S @ T
    r2 = float(np.abs(ST @ ST @ ST - pp * (S @ S)).max()) / (1.0 + float(np.abs(S @ S).max()) * abs(pp) + 1)
    return worst / scale, tuple(int(i) for i in idx), r2


def _exact_preverlinde_entry(ring, twists, dims, a, b, c) -> bool:
    from ..datum import balancing_entry
    theta = [t.cyc for t in twists]
    row = [balancing_entry(ring, theta, dims, a, l) for l in range(ring.rank)]
    rhs = ZERO
    for l in range(ring.rank):
        m = int(ring.N[b, c, l])
        if m:
            rhs = rhs + m * row[l]
    return row[b] * row[c] == dims[a] * rhs


def solve_twists(ring: FusionRing, dims, chars=None, cap: int = FALLBACK_CAP,
                 screen: bool = True) -> TwistSearch:
    """All twist vectors making (ring, twists, dims) a datum passing verify_datum."""
    dims = [Cyc.coerce(x) for x in dims]
    if any(not x for x in dims):
        raise ValueError("dimensions must be nonzero")
    if chars is None:
        chars = characters(ring)
    n = ring.rank
    search = TwistSearch()
    dual = ring.duality
    reps = [a for a in range(1, n) if dual[a] >= a]
    for a in reps:
        cands = twist_candidates(ring, dims, chars, a, search, cap)
        if dual[a] != a:
            other = set(twist_candidates(ring, dims, chars, dual[a], search, cap))
            cands = [z for z in cands if z in other]
        search.candidates[a] = cands
    d_num = np.array([complex(x) for x in dims])
    for combo in itertools.product(*(search.candidates[a] for a in reps)):
        tw = [RootOfUnity(1, 0)] * n
        for a, z in zip(reps, combo):
            tw[a] = z
            tw[dual[a]] = z
        tw = tuple(tw)
        if screen:
            th = np.array([complex(t) for t in tw])
            r1, idx, r2 = numeric_screen(ring, th, d_num)
            if r1 > 1e-7 and not _exact_preverlinde_entry(ring, tw, dims, *idx):
                search.rejected.append((tw, f"pre_verlinde: fails at (a,b,c)={idx}"))
                continue
        try:
            datum = s_from_balancing(ring, tw, dims)
        except BalancingError as e:
            search.rejected.append((tw, f"balancing: {e}"))
            continue
        v = verify_datum(datum, stop_early=True)
        if v.passed:
            search.accepted.append(datum)
        else:
            search.rejected.append((tw, v.first_failure()))
    return search
