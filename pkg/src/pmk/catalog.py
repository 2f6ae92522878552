"""Small premodular categories with known data, used as fixtures, regression
targets and the identification table of the rank-4 run."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cyclotomic import CyclotomicNumber, RootOfUnity, gauss_sqrt
from .datum import (PremodularDatum, deligne_product, is_pseudo_unitary, mueger_center,
                    s_from_balancing, verify_datum)
from .fusionring import FusionRing, characters, known_rings

__all__ = ["CatalogEntry", "catalog_get", "catalog_list", "UnknownEntry", "center_type"]

Cyc = CyclotomicNumber
R = RootOfUnity


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    datum: PremodularDatum
    provenance: str
    tags: tuple

    def to_json(self):
        from .io import datum_to_json
        return {"name": self.name, "provenance": self.provenance, "tags": list(self.tags),
                "datum": datum_to_json(self.datum)}


class UnknownEntry(KeyError):
    def __str__(self):
        return f"unknown catalog entry {self.args[0]!r}; available: {', '.join(catalog_list())}"


def _tau():
    return (1 + gauss_sqrt(5)) / 2


def _tau_bar():
    return (1 - gauss_sqrt(5)) / 2


def _ring(*mats) -> FusionRing:
    return FusionRing.from_matrices(mats)


def _fp_dims(ring):
    for ch in characters(ring):
        if ch.exact is not None and all(z.real >= 1 - 1e-9 and abs(z.imag) < 1e-9 for z in ch.approx):
            return list(ch.exact)
    raise ValueError("no cyclotomic FP character")


def _symmetric(ring):
    return s_from_balancing(ring, [R(1, 0)] * ring.rank, _fp_dims(ring))


def _z2():
    return known_rings()["Z2"]


def _fib_ring():
    return _ring([[0, 1], [1, 1]])


def _rep_z3_ring(m):
    return _ring([[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0], [0, 0, 0, 1]],
                 [[0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
                 [[0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 1], [1, 1, 1, m]])


def _sl2_8_ring(n=1, m=1):
    return _ring([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                 [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, n, m], [0, 1, m, n]],
                 [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, m, n], [1, 0, n, m]])


def _a1_7_half_ring():
    # integer spins 0..3 of su(2) at level 7; labels are 2j = 0,2,4,6
    import numpy as np
    lam = [0, 2, 4, 6]
    N = np.zeros((4, 4, 4), dtype=np.int64)
    for i, a in enumerate(lam):
        for j, b in enumerate(lam):
            for k, c in enumerate(lam):
                if abs(a - b) <= c <= min(a + b, 14 - a - b) and (a + b + c) % 2 == 0:
                    N[i, j, k] = 1
    return FusionRing(N)


_BUILDERS = {}


def _entry(name, provenance):
    def deco(fn):
        _BUILDERS[name] = (fn, provenance)
        return fn
    return deco


@_entry("trivial", "unit category Vec")
def _():
    return s_from_balancing(known_rings()["Z1"], [R(1, 0)], [1])


@_entry("rep-z2", "Rep(Z2), Tannakian")
def _():
    return s_from_balancing(_z2(), [R(1, 0), R(1, 0)], [1, 1])


@_entry("svec", "super vector spaces, theta = -1")
def _():
    return s_from_balancing(_z2(), [R(1, 0), R(2, 1)], [1, 1])


@_entry("semion", "pointed Z2, theta = i")
def _():
    return s_from_balancing(_z2(), [R(1, 0), R(4, 1)], [1, 1])


@_entry("semion-rev", "pointed Z2, theta = -i (reverse braiding)")
def _():
    return s_from_balancing(_z2(), [R(1, 0), R(4, 3)], [1, 1])


@_entry("fib", "Fibonacci, d = golden mean, theta = exp(4 pi i/5)")
def _():
    return s_from_balancing(_fib_ring(), [R(1, 0), R(5, 2)], [1, _tau()])


@_entry("fib-rev", "Fibonacci with reversed braiding, theta = exp(-4 pi i/5)")
def _():
    return s_from_balancing(_fib_ring(), [R(1, 0), R(5, 3)], [1, _tau()])


@_entry("fib-bar", "Galois conjugate of Fibonacci (Yang-Lee), d = (1-sqrt5)/2, theta = exp(2 pi i/5)")
def _():
    return s_from_balancing(_fib_ring(), [R(1, 0), R(5, 1)], [1, _tau_bar()])


@_entry("fib-bar-rev", "Yang-Lee with reversed braiding, theta = exp(-2 pi i/5)")
def _():
    return s_from_balancing(_fib_ring(), [R(1, 0), R(5, 4)], [1, _tau_bar()])


@_entry("rep-z3", "Rep(Z3), Tannakian")
def _():
    return _symmetric(known_rings()["Z3"])


@_entry("rep-s3", "Rep(S3), Tannakian")
def _():
    return _symmetric(known_rings()["S3"])


@_entry("pointed-z4", "pointed Z4 with quadratic form theta_a = i^(a^2) (representative braiding)")
def _():
    return s_from_balancing(known_rings()["Z4"], [R(4, a * a) for a in range(4)], [1] * 4)


@_entry("pointed-z2xz2", "pointed Z2xZ2, toric code twists (1,1,1,-1) (representative braiding)")
def _():
    return s_from_balancing(known_rings()["Z2xZ2"], [R(1, 0), R(1, 0), R(1, 0), R(2, 1)], [1] * 4)


@_entry("rep-z4", "Rep(Z4), Tannakian; standard representation theory")
def _():
    return _symmetric(known_rings()["Z4"])


@_entry("rep-z2xz2", "Rep(Z2xZ2), Tannakian; standard representation theory")
def _():
    return _symmetric(known_rings()["Z2xZ2"])


@_entry("rep-d10", "Rep(D10), Tannakian; standard representation theory")
def _():
    return _symmetric(known_rings()["D10"])


@_entry("rep-a4", "Rep(A4), Tannakian; standard representation theory")
def _():
    return _symmetric(known_rings()["A4"])


@_entry("c-sl2-6-ad", "adjoint subcategory of C(sl2,6); center Rep(Z3)")
def _():
    return s_from_balancing(_rep_z3_ring(2), [R(1, 0), R(1, 0), R(1, 0), R(2, 1)], [1, 1, 1, 3])


@_entry("c-sl2-8-ad", "adjoint subcategory of C(sl2,8); d = 1+sqrt2, T = diag(1,-1,i,-i)")
def _():
    d = 1 + gauss_sqrt(2)
    return s_from_balancing(_sl2_8_ring(), [R(1, 0), R(2, 1), R(4, 1), R(4, 3)], [1, 1, d, d])


@_entry("c-sl2-8-ad-conj", "Galois conjugate of C(sl2,8)_ad; d = 1-sqrt2, T = diag(1,-1,i,-i)")
def _():
    d = 1 - gauss_sqrt(2)
    return s_from_balancing(_sl2_8_ring(), [R(1, 0), R(2, 1), R(4, 1), R(4, 3)], [1, 1, d, d])


def _so5(k):
    return s_from_balancing(known_rings()["D10"], [R(1, 0), R(1, 0), R(5, k), R(5, -k)], [1, 1, 2, 2])


for _k in range(1, 5):
    _entry(f"c-so5-10-ad-{_k}",
           f"adjoint subcategory of C(so5,10) family; theta_2 = zeta5^{_k}, theta_3 = theta_2^-1")(
        (lambda k: (lambda: _so5(k)))(_k))


# unsuffixed name: the zeta5 member of the family
_entry("c-so5-10-ad", "adjoint subcategory of C(so5,10); theta_2 = zeta5, theta_3 = zeta5^-1")(lambda: _so5(1))


@_entry("fib-x-rep-z2", "Deligne product Fib x Rep(Z2)")
def _():
    return deligne_product(catalog_get("fib").datum, catalog_get("rep-z2").datum)


@_entry("fib-x-svec", "Deligne product Fib x sVec")
def _():
    return deligne_product(catalog_get("fib").datum, catalog_get("svec").datum)


@_entry("fib-x-fib-bar", "Deligne product of Fib with its Galois conjugate (not pseudo-unitary)")
def _():
    return deligne_product(catalog_get("fib").datum, catalog_get("fib-bar").datum)


@_entry("fib-x-semion", "Deligne product Fib x semion (rank-4 modular, pseudo-unitary)")
def _():
    return deligne_product(catalog_get("fib").datum, catalog_get("semion").datum)


@_entry("fib-x-fib", "Deligne product Fib x Fib (rank-4 modular, pseudo-unitary)")
def _():
    return deligne_product(catalog_get("fib").datum, catalog_get("fib").datum)


@_entry("a1-7-half", "integer-spin part of su(2) level 7; d_j = sin((2j+1)pi/9)/sin(pi/9), "
                     "theta_j = exp(2 pi i j(j+1)/9)")
def _():
    ring = _a1_7_half_ring()
    return s_from_balancing(ring, [R(9, j * (j + 1)) for j in range(4)], _fp_dims(ring))


def center_type(d: PremodularDatum, transparent=None) -> str:
    """tannakian / super-tannakian / none, from d_g theta_g on the center."""
    if transparent is None:
        transparent = mueger_center(d, check=False).transparent
    if len(transparent) == 1:
        return "none"
    for g in transparent:
        if (d.dims[g] * d.twists[g].cyc).to_rational() < 0:
            return "super-tannakian"
    return "tannakian"


@lru_cache(maxsize=None)
def catalog_get(name: str) -> CatalogEntry:
    if name not in _BUILDERS:
        raise UnknownEntry(name)
    fn, prov = _BUILDERS[name]
    d = fn()
    deg = mueger_center(d)
    pointed = d.is_pointed()
    tags = [deg.tag.replace("properly premodular", "proper")]
    if pointed:
        tags.append("pointed")
    if is_pseudo_unitary(d):
        tags.append("pseudo-unitary")
    if deg.tag != "modular":
        tags.append(center_type(d, deg.transparent))
    return CatalogEntry(name, d, prov, tuple(tags))


def catalog_list() -> list[str]:
    return list(_BUILDERS)


def self_test() -> dict:
    """Verify every entry; returns name -> list of failures."""
    out = {}
    for name in catalog_list():
        e = catalog_get(name)
        out[name] = verify_datum(e.datum).failures()
    return out
