"""Commutative fusion rings with duality.

``N[a, b, c]`` is the multiplicity of X_c in X_a (x) X_b.  Rings are
immutable; the tensor is a read-only int64 array.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from gmpy2 import mpq

from . import poly as P
from .algebraic import cyclotomic_root, factor_integer_poly
from .cyclotomic import CyclotomicNumber

__all__ = [
    "FusionRing", "FPDimData", "Character", "verify_fusion_axioms", "fpdim", "characters",
    "enumerate_rings", "canonical_form", "iso_key", "structure_probes", "free_orbits",
    "admissible_relabelings", "group_ring", "known_rings",
]


class FusionRing:
    __slots__ = ("rank", "duality", "N", "_key", "__dict__")

    def __init__(self, N, duality=None):
        arr = np.array(N, dtype=np.int64)
        if arr.ndim != 3 or len(set(arr.shape)) != 1:
            raise ValueError(f"fusion tensor must be n x n x n, got shape {arr.shape}")
        n = arr.shape[0]
        if duality is None:
            duality = tuple(int(np.nonzero(arr[a, :, 0])[0][0]) if arr[a, :, 0].any() else a
                            for a in range(n))
        duality = tuple(int(x) for x in duality)
        if len(duality) != n:
            raise ValueError("duality has wrong length")
        arr.flags.writeable = False
        self.rank = n
        self.duality = duality
        self.N = arr
        self._key = None

    @classmethod
    def from_free(cls, rank: int, duality, values: dict) -> "FusionRing":
        """Fill a tensor from values on orbit representatives (a, b, c >= 1);
        unspecified orbits are 0."""
        duality = tuple(duality)
        orbits, index = free_orbits(rank, duality)
        vec = [0] * len(orbits)
        for trip, v in values.items():
            vec[index[tuple(trip)]] = int(v)
        return cls(_tensor_from_vector(rank, duality, orbits, vec), duality)

    @classmethod
    def from_matrices(cls, mats) -> "FusionRing":
        """Build from fusion matrices N_1..N_{n-1} ((N_a)_{bc} = N_ab^c)."""
        n = len(mats) + 1
        N = np.zeros((n, n, n), dtype=np.int64)
        N[0] = np.eye(n, dtype=np.int64)
        for a, m in enumerate(mats, start=1):
            N[a] = np.array(m)
        return cls(N)

    def dual(self, a: int) -> int:
        return self.duality[a]

    def matrix(self, a: int) -> np.ndarray:
        return self.N[a]

    def is_self_dual(self) -> bool:
        return all(self.duality[a] == a for a in range(self.rank))

    def relabel(self, perm) -> "FusionRing":
        """New ring with old label a renamed perm[a]."""
        perm = list(perm)
        inv = [0] * self.rank
        for a, p in enumerate(perm):
            inv[p] = a
        M = self.N[np.ix_(inv, inv, inv)]
        dual = [0] * self.rank
        for a in range(self.rank):
            dual[perm[a]] = perm[self.duality[a]]
        return FusionRing(M, dual)

    def key(self) -> bytes:
        if self._key is None:
            self._key = self.N.tobytes()
        return self._key

    def __eq__(self, other):
        return isinstance(other, FusionRing) and self.rank == other.rank and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FusionRing(rank={self.rank}, duality={self.duality}, N={self.N.tolist()})"

    def to_json(self) -> dict:
        return {"rank": self.rank, "duality": list(self.duality), "N": self.N.tolist()}

    @classmethod
    def from_json(cls, obj) -> "FusionRing":
        ring = cls(obj["N"], obj.get("duality"))
        if int(obj.get("rank", ring.rank)) != ring.rank:
            raise ValueError("rank does not match tensor shape")
        return ring

    def product(self, other: "FusionRing") -> "FusionRing":
        """Tensor product ring, label (i, j) -> i * other.rank + j."""
        N = np.einsum("abc,xyz->axbycz", self.N, other.N).reshape(
            self.rank * other.rank, self.rank * other.rank, self.rank * other.rank)
        dual = [self.duality[i] * other.rank + other.duality[j]
                for i in range(self.rank) for j in range(other.rank)]
        return FusionRing(N, dual)

    @cached_property
    def charpolys(self) -> list[tuple[int, ...]]:
        return [tuple(int(c) for c in P.primitive_integer(P.charpoly(self.N[a].tolist())))
                for a in range(self.rank)]


# -- axioms ------------------------------------------------------------------------

def verify_fusion_axioms(ring: FusionRing) -> list[str]:
    """Violated identities (empty list == valid ring)."""
    N, n, dual = ring.N, ring.rank, ring.duality
    bad = []
    if sorted(dual) != list(range(n)) or dual[0] != 0 or any(dual[dual[a]] != a for a in range(n)):
        bad.append(f"duality {dual} is not an involution fixing 0")
        return bad
    if (N < 0).any():
        bad.append("negative coefficient")
    for a, b, c in itertools.product(range(n), repeat=3):
        v = N[a, b, c]
        if a == 0 and v != (b == c):
            bad.append(f"unit: N_0{b}^{c} = {v}")
        if c == 0 and v != (b == dual[a]):
            bad.append(f"duality: N_{a}{b}^0 = {v}")
        if v != N[b, a, c]:
            bad.append(f"N_{a}{b}^{c} != N_{b}{a}^{c}")
        if v != N[a, dual[c], dual[b]]:
            bad.append(f"N_{a}{b}^{c} != N_{a}{dual[c]}*^{dual[b]}*")
        if v != N[dual[a], dual[b], dual[c]]:
            bad.append(f"N_{a}{b}^{c} != N_{a}*{b}*^{c}*")
    for a in range(n):
        if not np.array_equal(N[dual[a]], N[a].T):
            bad.append(f"N_{a}* != N_{a}^T")
    for a in range(n):
        for b in range(a + 1, n):
            if not np.array_equal(N[a] @ N[b], N[b] @ N[a]):
                bad.append(f"N_{a} N_{b} != N_{b} N_{a}")
    return bad


# -- relabelings and canonical forms ---------------------------------------------------

def admissible_relabelings(rank: int, duality) -> list[tuple[int, ...]]:
    """Permutations fixing 0 that commute with the duality involution."""
    out = []
    for rest in itertools.permutations(range(1, rank)):
        p = (0,) + rest
        if all(p[duality[a]] == duality[p[a]] for a in range(rank)):
            out.append(p)
    return out


def _relabeled_flat(N: np.ndarray, perm) -> np.ndarray:
    inv = np.argsort(perm)
    return N[np.ix_(inv, inv, inv)].ravel()


def canonical_form(ring: FusionRing) -> FusionRing:
    """Lexicographically least tensor over duality-compatible relabelings."""
    best, bestp = None, None
    for p in admissible_relabelings(ring.rank, ring.duality):
        flat = tuple(_relabeled_flat(ring.N, p).tolist())
        if best is None or flat < best:
            best, bestp = flat, p
    return ring.relabel(bestp)


def iso_key(ring: FusionRing) -> bytes:
    """Isomorphism invariant: least tensor over every relabeling fixing 0."""
    best = None
    for rest in itertools.permutations(range(1, ring.rank)):
        flat = tuple(_relabeled_flat(ring.N, (0,) + rest).tolist())
        if best is None or flat < best:
            best = flat
    return np.array(best, dtype=np.int64).tobytes()


def iso_relabeling(src: FusionRing, dst: FusionRing):
    """A permutation p with src.relabel(p) == dst, or None."""
    if src.rank != dst.rank:
        return None
    for rest in itertools.permutations(range(1, src.rank)):
        p = (0,) + rest
        if np.array_equal(src.relabel(p).N, dst.N):
            return p
    return None


# -- enumeration -----------------------------------------------------------------

def free_orbits(rank: int, duality):
    """Orbits of triples (a, b, c), all nonzero, under the fusion symmetries.
    Returns (list of orbits as sorted tuples of triples, triple -> orbit index)."""
    dual = duality
    seen = {}
    orbits = []
    for t in itertools.product(range(1, rank), repeat=3):
        if t in seen:
            continue
        orb = {t}
        stack = [t]
        while stack:
            a, b, c = stack.pop()
            for u in ((b, a, c), (a, dual[c], dual[b]), (dual[a], dual[b], dual[c])):
                if u not in orb:
                    orb.add(u)
                    stack.append(u)
        idx = len(orbits)
        orbits.append(tuple(sorted(orb)))
        for u in orb:
            seen[u] = idx
    return orbits, seen


def _base_tensor(rank: int, duality) -> np.ndarray:
    N = np.zeros((rank, rank, rank), dtype=np.int64)
    for b in range(rank):
        N[0, b, b] = 1
        N[b, 0, b] = 1
    for a in range(rank):
        N[a, duality[a], 0] = 1
    return N


def _tensor_from_vector(rank, duality, orbits, vec) -> np.ndarray:
    N = _base_tensor(rank, duality)
    for v, orb in zip(vec, orbits):
        for (a, b, c) in orb:
            N[a, b, c] = v
    return N


def enumerate_rings(rank: int, nmax: int, duality=None, chunk: int = 1 << 16):
    """Yield every valid ring with coefficients <= nmax, one canonical
    representative per class, in lexicographic order of the free values."""
    if rank < 1:
        raise ValueError("rank must be positive")
    duality = tuple(range(rank)) if duality is None else tuple(duality)
    if sorted(duality) != list(range(rank)) or duality[0] != 0 or \
            any(duality[duality[a]] != a for a in range(rank)):
        raise ValueError(f"bad duality {duality}")
    if rank == 1:
        yield FusionRing(np.ones((1, 1, 1), dtype=np.int64), (0,))
        return
    orbits, _ = free_orbits(rank, duality)
    k = len(orbits)
    base = _base_tensor(rank, duality)
    # scatter matrix: flat tensor = base + vec @ S
    S = np.zeros((k, rank ** 3), dtype=np.int64)
    for i, orb in enumerate(orbits):
        for (a, b, c) in orb:
            S[i, (a * rank + b) * rank + c] = 1
    perms = [p for p in admissible_relabelings(rank, duality) if p != tuple(range(rank))]
    perm_idx = []
    for p in perms:
        inv = np.argsort(p)
        idx = np.arange(rank ** 3).reshape(rank, rank, rank)[np.ix_(inv, inv, inv)].ravel()
        perm_idx.append(idx)
    total = (nmax + 1) ** k
    base_flat = base.ravel()
    radix = (nmax + 1) ** np.arange(k - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        ids = np.arange(start, min(total, start + chunk), dtype=np.int64)
        vec = (ids[:, None] // radix[None, :]) % (nmax + 1)
        flat = base_flat[None, :] + vec @ S
        T = flat.reshape(-1, rank, rank, rank)
        ok = np.ones(len(ids), dtype=bool)
        for a in range(1, rank):
            for b in range(a + 1, rank):
                AB = np.einsum("nij,njk->nik", T[:, a], T[:, b])
                BA = np.einsum("nij,njk->nik", T[:, b], T[:, a])
                ok &= (AB == BA).all(axis=(1, 2))
        flat = flat[ok]
        if not len(flat):
            continue
        keep = np.ones(len(flat), dtype=bool)
        for idx in perm_idx:
            other = flat[:, idx]
            diff = other != flat
            has = diff.any(axis=1)
            first = diff.argmax(axis=1)
            rows = np.arange(len(flat))
            smaller = has & (other[rows, first] < flat[rows, first])
            keep &= ~smaller
        for row in flat[keep]:
            yield FusionRing(row.reshape(rank, rank, rank), duality)


# -- characters and FP dimensions ---------------------------------------------------

@dataclass(frozen=True)
class Character:
    approx: tuple            # complex values
    exact: tuple | None      # CyclotomicNumber values, or None if not cyclotomic
    minpolys: tuple          # irreducible integer polynomial of each value

    @property
    def is_real(self) -> bool:
        return all(abs(z.imag) < 1e-9 for z in self.approx)

    @property
    def is_cyclotomic(self) -> bool:
        return self.exact is not None

    def __getitem__(self, a):
        return self.exact[a] if self.exact is not None else self.approx[a]


def numeric_characters(ring: FusionRing, seed: int = 7) -> list[np.ndarray]:
    """Characters as complex vectors from a generic combination of the N_a."""
    n = ring.rank
    rng = np.random.default_rng(seed)
    coef = rng.normal(size=n) + 1j * rng.normal(size=n)
    # characters are eigenvectors: N_a chi = chi(a) chi
    A = np.tensordot(coef, ring.N.astype(float), axes=(0, 0))
    _, vecs = np.linalg.eig(A)
    out = []
    for j in range(n):
        v = vecs[:, j]
        v = v / v[0]
        out.append(v)
    out.sort(key=lambda v: tuple((round(z.real, 9), round(z.imag, 9)) for z in v[1:])[::-1])
    return out


def _match_factor(charpoly: tuple, value: complex):
    best = None
    for f, _ in factor_integer_poly(charpoly):
        roots = np.roots(list(reversed(f))) if len(f) > 1 else []
        for r in roots:
            d = abs(r - value)
            if best is None or d < best[0]:
                best = (d, f)
    return best[1]


def characters(ring: FusionRing) -> list[Character]:
    """All characters chi (chi(0) = 1), exact when cyclotomic."""
    out = []
    for v in numeric_characters(ring):
        approx = tuple(complex(z) for z in v)
        polys, exact = [], []
        for a in range(ring.rank):
            f = _match_factor(ring.charpolys[a], approx[a])
            polys.append(f)
            if exact is not None:
                x = cyclotomic_root(f, approx[a])
                if x is None:
                    exact = None
                else:
                    exact.append(x)
        if exact is not None:
            exact = tuple(exact)
            if not is_character(ring, exact):
                raise ArithmeticError(f"recognised character fails homomorphism check: {exact}")
        out.append(Character(approx, exact, tuple(polys)))
    return out


def is_character(ring: FusionRing, chi) -> bool:
    n = ring.rank
    for a in range(n):
        for b in range(a, n):
            rhs = CyclotomicNumber.rational(0)
            for c in range(n):
                m = int(ring.N[a, b, c])
                if m:
                    rhs = rhs + m * chi[c]
            if chi[a] * chi[b] != rhs:
                return False
    return True


@dataclass(frozen=True)
class FPDimData:
    intervals: tuple          # (lo, hi] rational intervals per object
    exact: tuple              # CyclotomicNumber or None per object
    total: tuple              # interval for sum of squares
    total_exact: CyclotomicNumber | None = None

    def approx(self) -> list[float]:
        return [float((lo + hi) / 2) for lo, hi in self.intervals]


def fpdim(ring: FusionRing, width=mpq(1, 2 ** 60)) -> FPDimData:
    ivs, ex = [], []
    fp_char = None
    for ch in characters(ring):
        if all(z.real >= 1 - 1e-9 and abs(z.imag) < 1e-9 for z in ch.approx):
            fp_char = ch
            break
    for a in range(ring.rank):
        lo, hi = P.largest_real_root(P.poly(ring.charpolys[a]), width)
        ivs.append((lo, hi))
        x = None
        if fp_char is not None and fp_char.exact is not None:
            x = fp_char.exact[a]
        ex.append(x)
    tlo = sum((lo * lo for lo, _ in ivs), mpq(0))
    thi = sum((hi * hi for _, hi in ivs), mpq(0))
    tex = None
    if all(x is not None for x in ex):
        tex = sum((x * x for x in ex), CyclotomicNumber.rational(0))
    return FPDimData(tuple(ivs), tuple(ex), (tlo, thi), tex)


# -- structure -------------------------------------------------------------------------

def _closure(ring: FusionRing, gens) -> frozenset:
    S = {0} | set(gens)
    changed = True
    while changed:
        changed = False
        for a in list(S):
            for b in list(S):
                for c in np.nonzero(ring.N[a, b])[0]:
                    if int(c) not in S:
                        S.add(int(c))
                        changed = True
    return frozenset(S)


def adjoint_labels(ring: FusionRing) -> frozenset:
    gens = set()
    for a in range(ring.rank):
        gens |= {int(c) for c in np.nonzero(ring.N[a, ring.duality[a]])[0]}
    return _closure(ring, gens)


def universal_grading(ring: FusionRing) -> list[frozenset]:
    """Components of the universal grading (cosets of the adjoint subring)."""
    ad = adjoint_labels(ring)
    comps, seen = [], set()
    for a in range(ring.rank):
        if a in seen:
            continue
        comp = set()
        for g in ad:
            comp |= {int(c) for c in np.nonzero(ring.N[a, g])[0]}
        comp = frozenset(comp)
        comps.append(comp)
        seen |= comp
    return comps


def subring(ring: FusionRing, labels) -> FusionRing | None:
    labels = sorted(labels)
    if labels[0] != 0:
        return None
    idx = np.array(labels)
    sub = ring.N[np.ix_(idx, idx, idx)]
    # closed iff no fusion of labels escapes the subset
    full = ring.N[np.ix_(idx, idx, np.arange(ring.rank))].sum(axis=2)
    if not np.array_equal(full, sub.sum(axis=2)):
        return None
    return FusionRing(sub)


def group_ring(name: str) -> FusionRing:
    return known_rings()[name]


_KNOWN = {}


def known_rings() -> dict:
    """Representation rings of small groups (Grothendieck rings of Rep(G))."""
    if _KNOWN:
        return _KNOWN

    def cyclic(m):
        N = np.zeros((m, m, m), dtype=np.int64)
        for a in range(m):
            for b in range(m):
                N[a, b, (a + b) % m] = 1
        return FusionRing(N)

    _KNOWN["Z1"] = cyclic(1)
    _KNOWN["Z2"] = cyclic(2)
    _KNOWN["Z3"] = cyclic(3)
    _KNOWN["Z4"] = cyclic(4)
    _KNOWN["Z2xZ2"] = cyclic(2).product(cyclic(2))
    # S3: 1, sign, 2-dim
    _KNOWN["S3"] = FusionRing.from_matrices([
        [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
        [[0, 0, 1], [0, 0, 1], [1, 1, 1]],
    ])
    # D10 (dihedral of order 10): 1, sign, rho1, rho2
    _KNOWN["D10"] = FusionRing.from_matrices([
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        [[0, 0, 1, 0], [0, 0, 1, 0], [1, 1, 0, 1], [0, 0, 1, 1]],
        [[0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 1, 1], [1, 1, 1, 0]],
    ])
    # A4: three 1-dim (Z3 characters) and the 3-dim
    _KNOWN["A4"] = FusionRing.from_matrices([
        [[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0], [0, 0, 0, 1]],
        [[0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
        [[0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 1], [1, 1, 1, 2]],
    ])
    return _KNOWN


def structure_probes(ring: FusionRing) -> dict:
    pointed = all(int(ring.N[a].sum()) == ring.rank for a in range(ring.rank))
    comps = universal_grading(ring)
    ad = adjoint_labels(ring)
    keys = {iso_key(known_rings()[g]): g for g in ("Z2", "Z3", "S3")}
    cands = []
    for size in range(2, ring.rank):
        for rest in itertools.combinations(range(1, ring.rank), size - 1):
            sub = subring(ring, (0,) + rest)
            if sub is None:
                continue
            g = keys.get(iso_key(sub))
            if g is not None:
                cands.append({"labels": (0,) + rest, "group": g})
    return {
        "pointed": pointed,
        "adjoint_sublabels": tuple(sorted(ad)),
        "grading_components": [tuple(sorted(c)) for c in comps],
        "z2_graded": len(comps) % 2 == 0,
        "symmetric_subcategory_candidates": cands,
    }
