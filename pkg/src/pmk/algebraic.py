"""Recognising roots of integer polynomials as cyclotomic numbers.

Degree 1 and 2 are exact (rational / Gauss-sum square roots).  For higher
degree the splitting field must be abelian (checked with sympy), then the
root is found by an integer relation search over the power basis of
candidate cyclotomic fields and confirmed by exact substitution.
"""
from __future__ import annotations

import math
from functools import lru_cache

import mpmath
import sympy
from gmpy2 import mpq

from . import poly as P
from .cyclotomic import CyclotomicNumber, gauss_sqrt

_X = sympy.Symbol("x")


@lru_cache(maxsize=None)
def factor_integer_poly(coeffs: tuple) -> tuple:
    """Irreducible factors over Q (primitive integer tuples, low degree first)."""
    expr = sum(int(c) * _X ** i for i, c in enumerate(coeffs))
    _, facs = sympy.factor_list(expr, _X)
    out = []
    for f, mult in facs:
        pc = sympy.Poly(f, _X).all_coeffs()[::-1]
        out.append((P.primitive_integer([int(c) for c in pc]), mult))
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def is_abelian(coeffs: tuple) -> bool:
    """Whether an irreducible integer polynomial has abelian Galois group."""
    deg = len(coeffs) - 1
    if deg <= 2:
        return True
    expr = sum(int(c) * _X ** i for i, c in enumerate(coeffs))
    from sympy.polys.numberfields.galoisgroups import galois_group
    G, _ = galois_group(sympy.Poly(expr, _X), by_name=False)
    return bool(G.is_abelian)


def _poly_eval_cyc(coeffs, x: CyclotomicNumber) -> CyclotomicNumber:
    acc = CyclotomicNumber.rational(0)
    for c in reversed(coeffs):
        acc = acc * x + int(c)
    return acc


def _conductor_candidates(coeffs: tuple) -> list[int]:
    deg = len(coeffs) - 1
    expr = sum(int(c) * _X ** i for i, c in enumerate(coeffs))
    disc = abs(int(sympy.discriminant(expr, _X)))
    primes = sorted(P.factorint(disc)) if disc > 1 else []
    bounds = []
    for p in primes:
        v = 0
        k = deg
        while k % p == 0:
            k //= p
            v += 1
        bounds.append((p, v + (2 if p == 2 else 1)))
    cands = [1]
    for p, emax in bounds:
        cands = [c * p ** e for c in cands for e in range(emax + 1)]
    cands = [n for n in cands if n % 4 != 2 and P.euler_phi(n) % deg == 0]
    return sorted(set(cands), key=lambda n: (P.euler_phi(n), n))


def _pslq_in_field(n: int, root, real: bool, alpha) -> CyclotomicNumber | None:
    phi = P.euler_phi(n)
    two_pi = 2 * mpmath.pi
    if real:
        half = max(phi // 2, 1)
        basis = [mpmath.mpf(1)] + [2 * mpmath.cos(two_pi * j / n) for j in range(1, half)]
        vec = [mpmath.re(root)] + basis
    else:
        basis = [mpmath.cos(two_pi * j / n) + alpha * mpmath.sin(two_pi * j / n)
                 for j in range(phi)]
        vec = [mpmath.re(root) + alpha * mpmath.im(root)] + basis
    rel = mpmath.pslq(vec, maxcoeff=10 ** 5, maxsteps=4000)
    if rel is None or rel[0] == 0:
        return None
    c0 = rel[0]
    terms = []
    if real:
        terms.append((0, mpq(-rel[1], c0)))
        for j in range(1, len(basis)):
            if rel[j + 1]:
                q = mpq(-rel[j + 1], c0)
                terms += [(j, q), (-j, q)]
    else:
        terms = [(j, mpq(-rel[j + 1], c0)) for j in range(phi) if rel[j + 1]]
    return CyclotomicNumber.from_exponents(n, terms)


def cyclotomic_root(coeffs, approx: complex, dps: int = 80) -> CyclotomicNumber | None:
    """The root of the irreducible integer polynomial ``coeffs`` closest to
    ``approx``, as an exact cyclotomic number, or None when the root is not
    cyclotomic (non-abelian splitting field)."""
    coeffs = P.primitive_integer(coeffs)
    deg = len(coeffs) - 1
    if deg < 1:
        raise ValueError("constant polynomial")
    if deg == 1:
        return CyclotomicNumber.rational(mpq(-coeffs[0], coeffs[1]))
    if deg == 2:
        c, b, a = coeffs
        s = gauss_sqrt(b * b - 4 * a * c)
        best = None
        for sgn in (1, -1):
            x = (CyclotomicNumber.rational(-b) + sgn * s) / (2 * a)
            dist = abs(complex(x) - complex(approx))
            if best is None or dist < best[0]:
                best = (dist, x)
        return best[1]
    roots = all_cyclotomic_roots(tuple(coeffs), dps)
    if roots is None:
        return None
    return min(roots, key=lambda x: abs(complex(x) - complex(approx)))


@lru_cache(maxsize=None)
def all_cyclotomic_roots(coeffs: tuple, dps: int = 80) -> tuple | None:
    """Every root of an irreducible abelian polynomial, or None if the
    splitting field is not abelian (or recognition failed)."""
    if not is_abelian(coeffs):
        return None
    x = _abelian_root(coeffs, dps)
    if x is None:
        return None
    n = x.conductor
    conj = {x.galois(k) for k in range(1, max(n, 2)) if math.gcd(k, n) == 1}
    out = tuple(sorted(conj, key=lambda z: (complex(z).real, complex(z).imag)))
    assert len(out) == len(coeffs) - 1
    return out


def _abelian_root(coeffs: tuple, dps: int) -> CyclotomicNumber | None:
    with mpmath.workdps(dps + 20):
        roots = mpmath.polyroots([int(c) for c in reversed(coeffs)], maxsteps=400, extraprec=4 * dps)
        # prefer a real root: smaller search space
        root = min(roots, key=lambda r: abs(mpmath.im(r)))
        real = abs(mpmath.im(root)) < mpmath.mpf(10) ** (-dps // 2)
        if real:
            root = mpmath.re(root)
        for n in _conductor_candidates(coeffs):
            for alpha in (mpmath.sqrt(2) + mpmath.pi / 7, mpmath.e / 3 + mpmath.sqrt(3)):
                x = _pslq_in_field(n, root, real, alpha)
                if x is not None and not _poly_eval_cyc(coeffs, x):
                    return x
                if real:
                    break
    return None
