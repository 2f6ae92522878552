"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis ``zeta_N^0 .. zeta_N^(phi(N)-1)`` of
their *minimal* cyclotomic field, so equality is coefficient equality.  The
conductor is never 2 mod 4 (Q(zeta_2m) = Q(zeta_m) for odd m).
"""
from __future__ import annotations

import cmath
import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational as _RationalABC

import mpmath
from gmpy2 import mpq

from . import poly as P

Rational = mpq

__all__ = [
    "CyclotomicNumber", "Cyc", "RootOfUnity", "ComplexInterval", "UndecidedError",
    "galois_apply", "embed_complex", "inverse_totient", "roots_of_unity_satisfying",
    "gauss_sqrt", "is_rational_integer", "sign", "compare", "default_digits",
]

MAX_DIGITS = 4096


class UndecidedError(ArithmeticError):
    """Raised when an interval sign test hits the precision cap."""


def default_digits() -> int:
    return int(os.environ.get("PMK_DIGITS", "64"))


def _canonical_order(n: int) -> int:
    return n // 2 if n % 4 == 2 else n


# -- per-conductor tables ----------------------------------------------------

class _Field:
    __slots__ = ("n", "phi", "powers", "primes", "descents", "phi_poly", "floats")

    def __init__(self, n: int):
        self.n = n
        self.phi = P.euler_phi(n)
        self.phi_poly = P.cyclotomic_polynomial(n)
        self.primes = sorted(P.factorint(n))
        phi = self.phi
        # powers[k] = zeta^k reduced, as a dense tuple of ints
        tail = [-c for c in self.phi_poly[:phi]]  # zeta^phi = -sum Phi_i zeta^i
        vec = [0] * phi
        vec[0] = 1
        powers = []
        for _ in range(n):
            powers.append(tuple(vec))
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for i in range(phi):
                    vec[i] += top * tail[i]
        self.powers = powers
        self.descents: dict[int, tuple] = {}
        self.floats = [cmath.exp(2j * math.pi * k / n) for k in range(phi)]

    def targets(self):
        for p in self.primes:
            m = self.n // p
            if m % 4 == 2:
                m //= 2
            yield p, m

    def descent(self, m: int):
        """Data for testing membership in Q(zeta_m) (m | n)."""
        d = self.descents.get(m)
        if d is not None:
            return d
        f = self.n // m
        phim = P.euler_phi(m)
        cols = [self.powers[(j * f) % self.n] for j in range(phim)]  # E[:, j]
        # choose pivot rows by Gaussian elimination on E
        rows = [[mpq(cols[j][i]) for j in range(phim)] for i in range(self.phi)]
        pivots = []
        basis = []  # reduced rows kept for independence test
        for i, row in enumerate(rows):
            r = list(row)
            for (pc, br) in basis:
                if r[pc] != 0:
                    fac = r[pc] / br[pc]
                    r = [a - fac * b for a, b in zip(r, br)]
            nz = next((k for k, v in enumerate(r) if v != 0), None)
            if nz is not None:
                basis.append((nz, r))
                pivots.append(i)
                if len(pivots) == phim:
                    break
        # inverse of E restricted to pivot rows
        A = [list(rows[i]) + [mpq(1) if k == t else mpq(0) for k in range(phim)]
             for t, i in enumerate(pivots)]
        for col in range(phim):
            piv = next(r for r in range(col, phim) if A[r][col] != 0)
            A[col], A[piv] = A[piv], A[col]
            inv = 1 / A[col][col]
            A[col] = [v * inv for v in A[col]]
            for r in range(phim):
                if r != col and A[r][col] != 0:
                    fac = A[r][col]
                    A[r] = [a - fac * b for a, b in zip(A[r], A[col])]
        L = [row[phim:] for row in A]  # c = L @ x[pivots]
        rng = random.Random(self.n * 1000003 + m)
        w = [mpq(rng.randint(-97, 97)) for _ in range(self.phi)]
        wE = [sum((w[i] * cols[j][i] for i in range(self.phi)), mpq(0)) for j in range(phim)]
        v = [sum((wE[j] * L[j][t] for j in range(phim)), mpq(0)) for t in range(phim)]
        g = list(w)
        for t, i in enumerate(pivots):
            g[i] -= v[t]
        d = (f, phim, cols, pivots, L, tuple(g))
        self.descents[m] = d
        return d


@lru_cache(maxsize=None)
def _field(n: int) -> _Field:
    return _Field(n)


def _reduce_poly(n: int, acc) -> list:
    """Reduce a coefficient list in zeta_n (any length) to the power basis."""
    F = _field(n)
    phi = F.phi
    out = [mpq(0)] * phi
    powers = F.powers
    for k, c in enumerate(acc):
        if not c:
            continue
        if k < phi:
            out[k] += c
        else:
            vec = powers[k % n]
            for i in range(phi):
                if vec[i]:
                    out[i] += c * vec[i]
    return out


def _try_descend(n: int, coeffs, p: int, m: int):
    if (n // m) == p and m % p == 0:
        # p^2 | n: subfield elements are supported on multiples of p
        for e, c in enumerate(coeffs):
            if c and e % p:
                return None
        return coeffs[::p][:P.euler_phi(m)]
    F = _field(n)
    f, phim, cols, pivots, L, g = F.descent(m)
    if sum((gi * ci for gi, ci in zip(g, coeffs) if ci), mpq(0)) != 0:
        return None
    xr = [coeffs[i] for i in pivots]
    c = [sum((L[j][t] * xr[t] for t in range(phim) if xr[t]), mpq(0)) for j in range(phim)]
    for i in range(F.phi):
        s = mpq(0)
        for j in range(phim):
            if c[j] and cols[j][i]:
                s += c[j] * cols[j][i]
        if s != coeffs[i]:
            return None
    return c


def _canonicalize(n: int, coeffs):
    coeffs = list(coeffs)
    while True:
        if n == 1 or not any(coeffs[1:]):
            return 1, (coeffs[0] if coeffs else mpq(0),)
        for p, m in _field(n).targets():
            sub = _try_descend(n, coeffs, p, m)
            if sub is not None:
                n, coeffs = m, list(sub)
                break
        else:
            return n, tuple(coeffs)


def _to_mpq(v) -> mpq:
    if isinstance(v, str):
        return mpq(Fraction(v))
    return mpq(v)


class CyclotomicNumber:
    """An exact element of Q(zeta_N), immutable and hashable."""

    __slots__ = ("conductor", "_c", "_hash")

    def __init__(self, conductor: int, coeffs, _canonical: bool = False):
        if not _canonical:
            conductor = int(conductor)
            if conductor < 1:
                raise ValueError("conductor must be positive")
            if conductor % 4 == 2:
                raise ValueError("use CyclotomicNumber.from_exponents for conductors 2 mod 4")
            phi = P.euler_phi(conductor)
            dense = [mpq(0)] * phi
            if isinstance(coeffs, dict):
                items = coeffs.items()
            else:
                items = enumerate(coeffs)
            for e, v in items:
                e = int(e)
                if not 0 <= e < phi:
                    raise ValueError(f"exponent {e} outside [0, {phi})")
                dense[e] += _to_mpq(v)
            conductor, dense = _canonicalize(conductor, dense)
            coeffs = tuple(dense)
        self.conductor = conductor
        self._c = coeffs
        self._hash = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def rational(cls, q) -> "CyclotomicNumber":
        return cls(1, (_to_mpq(q),), _canonical=True)

    @classmethod
    def from_exponents(cls, n: int, terms) -> "CyclotomicNumber":
        """Build ``sum c * zeta_n^e`` from (e, c) pairs with arbitrary integer e."""
        n = int(n)
        if n % 4 == 2:
            # zeta_n = -zeta_m^((m+1)/2) with m = n/2 odd
            m = n // 2
            h = (m + 1) // 2
            terms = [((e * h) % m, (-c if e % 2 else c)) for e, c in terms]
            n = m
        acc = [mpq(0)] * n
        for e, c in terms:
            acc[int(e) % n] += _to_mpq(c)
        dense = _reduce_poly(n, acc)
        cond, dense = _canonicalize(n, dense)
        return cls(cond, tuple(dense), _canonical=True)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "CyclotomicNumber":
        return cls.from_exponents(n, [(k, 1)])

    @classmethod
    def coerce(cls, v) -> "CyclotomicNumber":
        if isinstance(v, CyclotomicNumber):
            return v
        if isinstance(v, RootOfUnity):
            return v.cyc
        if isinstance(v, (int, Fraction, _RationalABC)) or type(v).__name__ == "mpq":
            return cls.rational(v)
        if isinstance(v, str):
            return cls.rational(Fraction(v))
        raise TypeError(f"cannot coerce {type(v).__name__} to CyclotomicNumber")

    # -- basic properties ----------------------------------------------------

    @property
    def coeffs(self) -> list[tuple[int, mpq]]:
        """Sparse exponent-sorted (exponent, value) pairs."""
        return [(e, c) for e, c in enumerate(self._c) if c]

    @property
    def dense(self) -> tuple:
        return self._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.conductor, self._c))
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, CyclotomicNumber):
            try:
                other = CyclotomicNumber.coerce(other)
            except TypeError:
                return NotImplemented
        return self.conductor == other.conductor and self._c == other._c

    def __bool__(self):
        return self.conductor != 1 or self._c[0] != 0

    def is_rational(self) -> bool:
        return self.conductor == 1

    def to_rational(self) -> mpq:
        if self.conductor != 1:
            raise ValueError(f"{self} is not rational")
        return self._c[0]

    def is_rational_integer(self) -> bool:
        return self.conductor == 1 and self._c[0].denominator == 1

    def is_algebraic_integer(self) -> bool:
        # the power basis of Q(zeta_N) is an integral basis of its ring of integers
        return all(c.denominator == 1 for c in self._c)

    def is_real(self) -> bool:
        return self == self.conj()

    # -- arithmetic ----------------------------------------------------------

    def _lift(self, n: int) -> list:
        """Coefficients as a polynomial in zeta_n (n a multiple of the conductor)."""
        if n == self.conductor:
            return list(self._c)
        f = n // self.conductor
        acc = [mpq(0)] * n
        for e, c in enumerate(self._c):
            if c:
                acc[e * f] += c
        return _reduce_poly(n, acc)

    def __add__(self, other):
        try:
            other = CyclotomicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        if other.conductor == 1 and self.conductor == 1:
            return CyclotomicNumber(1, (self._c[0] + other._c[0],), _canonical=True)
        if other.conductor == 1:
            c = list(self._c)
            c[0] += other._c[0]
            return CyclotomicNumber(self.conductor, tuple(c), _canonical=True)
        if self.conductor == 1:
            return other + self
        n = math.lcm(self.conductor, other.conductor)
        a, b = self._lift(n), other._lift(n)
        cond, dense = _canonicalize(n, [x + y for x, y in zip(a, b)])
        return CyclotomicNumber(cond, dense, _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.conductor, tuple(-c for c in self._c), _canonical=True)

    def __sub__(self, other):
        try:
            other = CyclotomicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return CyclotomicNumber.coerce(other) - self

    def __mul__(self, other):
        try:
            other = CyclotomicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        if other.conductor == 1 or self.conductor == 1:
            if self.conductor == 1:
                self, other = other, self
            q = other._c[0]
            if q == 0:
                return ZERO
            return CyclotomicNumber(self.conductor, tuple(c * q for c in self._c),
                                    _canonical=True)
        n = math.lcm(self.conductor, other.conductor)
        a, b = self._lift(n), other._lift(n)
        acc = [mpq(0)] * (2 * len(a) - 1)
        bnz = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if x:
                for j, y in bnz:
                    acc[i + j] += x * y
        cond, dense = _canonicalize(n, _reduce_poly(n, acc))
        return CyclotomicNumber(cond, dense, _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if not self:
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.conductor == 1:
            return CyclotomicNumber(1, (1 / self._c[0],), _canonical=True)
        n = self.conductor
        g, s, _ = P.xgcd(self._c, P.poly(_field(n).phi_poly))
        assert g == (mpq(1),)
        dense = list(s) + [mpq(0)] * (_field(n).phi - len(s))
        return CyclotomicNumber(n, tuple(dense), _canonical=True)

    def __truediv__(self, other):
        try:
            other = CyclotomicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CyclotomicNumber.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- Galois action -------------------------------------------------------

    def galois(self, k: int) -> "CyclotomicNumber":
        n = self.conductor
        if n == 1:
            return self
        if gcd(k, n) != 1:
            raise ValueError(f"k={k} is not coprime to conductor {n}")
        k %= n
        if k == 1:
            return self
        acc = [mpq(0)] * n
        for e, c in enumerate(self._c):
            if c:
                acc[(e * k) % n] += c
        dense = _reduce_poly(n, acc)
        return CyclotomicNumber(n, tuple(dense), _canonical=True)

    def conj(self) -> "CyclotomicNumber":
        return self.galois(-1)

    # -- numerics ------------------------------------------------------------

    def __complex__(self):
        fl = _field(self.conductor).floats
        return sum((float(c) * fl[e] for e, c in enumerate(self._c) if c), 0j)

    def __float__(self):
        z = complex(self)
        return z.real

    # -- text ----------------------------------------------------------------

    def to_json(self) -> dict:
        if not self:
            return {"conductor": 1, "coeffs": []}
        return {"conductor": self.conductor,
                "coeffs": [[e, f"{c.numerator}/{c.denominator}"] for e, c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "CyclotomicNumber":
        if isinstance(obj, (int, str)):
            return cls.rational(Fraction(obj))
        n = int(obj["conductor"])
        pairs = obj["coeffs"]
        last = -1
        for e, _ in pairs:
            if int(e) <= last:
                raise ValueError("exponents must be strictly increasing")
            last = int(e)
        if n % 4 == 2:
            return cls.from_exponents(n, [(int(e), _to_mpq(v)) for e, v in pairs])
        return cls(n, {int(e): _to_mpq(v) for e, v in pairs})

    def __repr__(self):
        if self.conductor == 1:
            return _qstr(self._c[0])
        parts = []
        n = self.conductor
        for e, c in self.coeffs:
            term = "1" if e == 0 else (f"z{n}" if e == 1 else f"z{n}^{e}")
            if e == 0:
                parts.append(_qstr(c))
            elif c == 1:
                parts.append(term)
            elif c == -1:
                parts.append("-" + term)
            else:
                parts.append(f"{_qstr(c)}*{term}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def approx(self, digits: int = 12) -> str:
        z = complex(self)
        if abs(z.imag) < 10 ** (-digits):
            return f"{z.real:.{digits}g}"
        return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


def _qstr(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


Cyc = CyclotomicNumber
ZERO = CyclotomicNumber(1, (mpq(0),), _canonical=True)
ONE = CyclotomicNumber(1, (mpq(1),), _canonical=True)


# -- roots of unity ------------------------------------------------------------

@dataclass(frozen=True, order=True)
class RootOfUnity:
    """zeta_order^exponent, normalized so that ``order`` is the exact
    multiplicative order and 0 <= exponent < order."""

    order: int
    exponent: int = 1

    def __post_init__(self):
        n, k = int(self.order), int(self.exponent)
        if n < 1:
            raise ValueError("order must be positive")
        k %= n
        g = gcd(k, n)
        object.__setattr__(self, "order", n // g)
        object.__setattr__(self, "exponent", k // g)

    @property
    def cyc(self) -> CyclotomicNumber:
        return _root_cyc(self.order, self.exponent)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        n = math.lcm(self.order, other.order)
        return RootOfUnity(n, self.exponent * (n // self.order) + other.exponent * (n // other.order))

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.order, self.exponent * k)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(self.order, -self.exponent)

    def conj(self) -> "RootOfUnity":
        return self.inverse()

    def galois(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.order, self.exponent * k)

    def __complex__(self):
        return cmath.exp(2j * math.pi * self.exponent / self.order)

    def to_json(self) -> dict:
        return {"order": self.order, "exp": self.exponent}

    @classmethod
    def from_json(cls, obj) -> "RootOfUnity":
        return cls(int(obj["order"]), int(obj["exp"]))

    def __repr__(self):
        if self.order == 1:
            return "1"
        if self.order == 2:
            return "-1"
        return f"z{self.order}^{self.exponent}" if self.exponent != 1 else f"z{self.order}"


@lru_cache(maxsize=4096)
def _root_cyc(n: int, k: int) -> CyclotomicNumber:
    return CyclotomicNumber.zeta(n, k)


# -- operations ----------------------------------------------------------------

def galois_apply(x, k: int) -> CyclotomicNumber:
    """Apply the automorphism zeta_N -> zeta_N^k."""
    return CyclotomicNumber.coerce(x).galois(k)


@dataclass(frozen=True)
class ComplexInterval:
    re: object  # mpmath.iv.mpf
    im: object

    @property
    def width(self):
        return max(self.re.delta, self.im.delta)

    def contains(self, z: complex) -> bool:
        return (self.re.a <= z.real <= self.re.b) and (self.im.a <= z.imag <= self.im.b)

    def __add__(self, other):
        return ComplexInterval(self.re + other.re, self.im + other.im)

    def __mul__(self, other):
        return ComplexInterval(self.re * other.re - self.im * other.im,
                               self.re * other.im + self.im * other.re)

    def mid(self) -> complex:
        return complex(float(self.re.mid), float(self.im.mid))


def embed_complex(x, digits: int | None = None) -> ComplexInterval:
    """Rigorous enclosure of the principal embedding zeta_N -> exp(2 pi i/N)."""
    x = CyclotomicNumber.coerce(x)
    digits = default_digits() if digits is None else int(digits)
    iv = mpmath.iv
    if not x:
        z = iv.mpf(0)
        return ComplexInterval(z, z)
    n = x.conductor
    bits_extra = 4 * len(x.coeffs) + 20
    prec = int(digits * 3.33) + bits_extra
    while True:
        saved = iv.prec
        iv.prec = prec
        try:
            re = iv.mpf(0)
            im = iv.mpf(0)
            for e, c in x.coeffs:
                q = iv.mpf(int(c.numerator)) / int(c.denominator)
                if e == 0:
                    re += q
                    continue
                ang = iv.pi * (iv.mpf(2 * e) / n)
                re += q * iv.cos(ang)
                im += q * iv.sin(ang)
        finally:
            iv.prec = saved
        out = ComplexInterval(re, im)
        if out.width <= mpmath.mpf(10) ** (-digits):
            return out
        prec *= 2


def sign(x, digits: int | None = None) -> int:
    """Exact sign of a real cyclotomic number (-1, 0 or 1)."""
    x = CyclotomicNumber.coerce(x)
    if not x:
        return 0
    if x.conductor == 1:
        return 1 if x.to_rational() > 0 else -1
    if not x.is_real():
        raise ValueError(f"{x} is not real")
    d = max(8, default_digits() if digits is None else digits)
    while d <= MAX_DIGITS:
        box = embed_complex(x, d).re
        if box.a > 0:
            return 1
        if box.b < 0:
            return -1
        d *= 2
    raise UndecidedError(f"sign of {x} undecided at {MAX_DIGITS} digits")


def compare(x, y) -> int:
    return sign(CyclotomicNumber.coerce(x) - CyclotomicNumber.coerce(y))


def abs_real(x) -> CyclotomicNumber:
    x = CyclotomicNumber.coerce(x)
    return -x if sign(x) < 0 else x


def inverse_totient(d: int) -> list[int]:
    """All N with phi(N) <= d, built from prime-power factors."""
    if d < 1:
        raise ValueError("d must be positive")
    # candidate primes: p - 1 = phi(p) <= d
    primes = [p for p in range(2, d + 2) if all(p % q for q in range(2, math.isqrt(p) + 1))]
    found = set()

    def extend(i: int, n: int, ph: int):
        found.add(n)
        for j in range(i, len(primes)):
            p = primes[j]
            pp, phpp = p, p - 1
            if ph * phpp > d:
                continue
            while ph * phpp <= d:
                extend(j + 1, n * pp, ph * phpp)
                pp *= p
                phpp *= p

    extend(0, 1, 1)
    return sorted(found)


def roots_of_unity_satisfying(coeffs) -> list[RootOfUnity]:
    """All roots of unity that are roots of an integer polynomial (low degree first)."""
    p = P.poly(coeffs)
    if not p:
        raise ValueError("zero polynomial has infinitely many root-of-unity roots")
    deg = len(p) - 1
    if deg == 0:
        return []
    out = []
    for n in inverse_totient(deg):
        if P.euler_phi(n) > deg:
            continue
        if not P.rem(p, P.poly(P.cyclotomic_polynomial(n))):
            out.extend(RootOfUnity(n, k) for k in range(n) if gcd(k, n) == 1)
    return sorted(out)


def _squarefree_split(m: int) -> tuple[int, int]:
    """m = s^2 * f with f squarefree; returns (s, f)."""
    s, f = 1, 1
    for p, e in P.factorint(m).items():
        s *= p ** (e // 2)
        if e % 2:
            f *= p
    return s, f


@lru_cache(maxsize=None)
def _sqrt_prime(p: int) -> CyclotomicNumber:
    if p == 2:
        return CyclotomicNumber.from_exponents(8, [(1, 1), (7, 1)])
    # quadratic Gauss sum g = sum (a|p) zeta_p^a; g = sqrt(p) or i*sqrt(p)
    terms = [(a, 1 if pow(a, (p - 1) // 2, p) == 1 else -1) for a in range(1, p)]
    g = CyclotomicNumber.from_exponents(p, terms)
    if p % 4 == 3:
        g = g * CyclotomicNumber.zeta(4, 3)
    return g


def gauss_sqrt(m: int) -> CyclotomicNumber:
    """sqrt(m) inside a cyclotomic field; positive (or positive-imaginary)."""
    m = int(m)
    if m == 0:
        raise ValueError("gauss_sqrt needs a nonzero integer")
    s, f = _squarefree_split(abs(m))
    root = CyclotomicNumber.rational(s)
    for p in P.factorint(f):
        root = root * _sqrt_prime(p)
    if m < 0:
        root = root * CyclotomicNumber.zeta(4)
    z = complex(root)
    if (m > 0 and z.real < 0) or (m < 0 and z.imag < 0):
        root = -root
    return root


def is_rational_integer(x) -> bool:
    return CyclotomicNumber.coerce(x).is_rational_integer()
