"""Dense univariate polynomials over Q.

A polynomial is a tuple of ``mpq`` coefficients, lowest degree first, with no
trailing zeros (the zero polynomial is ``()``).  Only what the rest of the
package needs is here: ring operations, division, gcd, cyclotomic
polynomials, characteristic polynomials and Sturm-sequence root isolation.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd as igcd
from typing import Iterable, Sequence

from gmpy2 import mpq

ZERO = mpq(0)
ONE = mpq(1)


def poly(coeffs: Iterable) -> tuple:
    out = [mpq(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def degree(p: Sequence) -> int:
    return len(p) - 1


def add(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return poly(out)


def neg(p):
    return tuple(-c for c in p)


def sub(p, q):
    return add(p, neg(q))


def scale(p, c):
    c = mpq(c)
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def mul(p, q):
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly(out)


def divmod_(p, q):
    """Euclidean division ``p = quot*q + rem`` over Q."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = len(q) - 1
    lead = q[-1]
    if len(rem) <= dq:
        return (), poly(rem)
    quot = [ZERO] * (len(rem) - dq)
    for k in range(len(rem) - 1, dq - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        f = c / lead
        quot[k - dq] = f
        for j in range(dq + 1):
            rem[k - dq + j] -= f * q[j]
    return poly(quot), poly(rem[:dq])


def rem(p, q):
    return divmod_(p, q)[1]


def monic(p):
    if not p:
        return ()
    return scale(p, ONE / p[-1])


def pgcd(p, q):
    p, q = poly(p), poly(q)
    while q:
        p, q = q, rem(p, q)
    return monic(p)


def xgcd(p, q):
    """Return ``(g, s, t)`` with ``s*p + t*q = g`` and ``g`` monic."""
    r0, r1 = poly(p), poly(q)
    s0, s1 = (ONE,), ()
    t0, t1 = (), (ONE,)
    while r1:
        qt, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(qt, s1))
        t0, t1 = t1, sub(t0, mul(qt, t1))
    if not r0:
        return (), (), ()
    inv = ONE / r0[-1]
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


def derivative(p):
    return poly(i * c for i, c in enumerate(p))[1:] if len(p) > 1 else ()


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def squarefree(p):
    """Squarefree part of ``p`` (monic)."""
    p = poly(p)
    if len(p) <= 1:
        return monic(p)
    g = pgcd(p, derivative(p))
    return monic(divmod_(p, g)[0])


def primitive_integer(p) -> tuple[int, ...]:
    """Scale a rational polynomial to a primitive integer one with positive lead."""
    p = poly(p)
    if not p:
        return ()
    den = 1
    for c in p:
        den = den * c.denominator // igcd(den, int(c.denominator))
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = igcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


# -- number theory ----------------------------------------------------------

def factorint(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result = n
    for p in factorint(n):
        result -= result // p
    return result


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, low degree first."""
    # x^n - 1 = prod_{d | n} Phi_d
    num = poly([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            num, r = divmod_(num, poly(cyclotomic_polynomial(d)))
            assert not r
    return tuple(int(c) for c in num)


# -- matrices ---------------------------------------------------------------

def charpoly(mat) -> tuple:
    """Characteristic polynomial det(x*I - A) via Faddeev-LeVerrier."""
    n = len(mat)
    A = [[mpq(v) for v in row] for row in mat]
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    M = [[ZERO] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        if k == 1:
            M = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        else:
            AM = [[sum((A[i][t] * M[t][j] for t in range(n)), ZERO) for j in range(n)]
                  for i in range(n)]
            c = coeffs[n - k + 1]
            M = [[AM[i][j] + (c if i == j else ZERO) for j in range(n)] for i in range(n)]
        AM = [[sum((A[i][t] * M[t][j] for t in range(n)), ZERO) for j in range(n)]
              for i in range(n)]
        coeffs[n - k] = -sum((AM[i][i] for i in range(n)), ZERO) / k
    return poly(coeffs)


# -- Sturm sequences ----------------------------------------------------------

def sturm_sequence(p) -> list[tuple]:
    p = squarefree(p)
    seq = [p, derivative(p)]
    while seq[-1] and len(seq[-1]) > 1:
        seq.append(neg(rem(seq[-2], seq[-1])))
    return [s for s in seq if s]


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq, lo, hi) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    return (_sign_changes([evaluate(s, lo) for s in seq])
            - _sign_changes([evaluate(s, hi) for s in seq]))


def root_bound(p) -> mpq:
    """Cauchy bound: every root has absolute value below this."""
    p = poly(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=ZERO)


def isolate_real_roots(p, width=mpq(1, 2 ** 20)) -> list[tuple[mpq, mpq]]:
    """Disjoint rational intervals (lo, hi], one per distinct real root, each
    narrower than ``width``, sorted increasingly."""
    p = poly(p)
    if len(p) <= 1:
        return []
    seq = sturm_sequence(p)
    B = root_bound(p)
    out = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1 and hi - lo < width:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(out)


def refine_root(p, lo, hi, width) -> tuple[mpq, mpq]:
    """Shrink an isolating interval (lo, hi] of ``p`` below ``width``."""
    seq = sturm_sequence(p)
    while hi - lo >= width:
        mid = (lo + hi) / 2
        if count_roots(seq, lo, mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def largest_real_root(p, width=mpq(1, 2 ** 40)) -> tuple[mpq, mpq] | None:
    roots = isolate_real_roots(p, width)
    return roots[-1] if roots else None
