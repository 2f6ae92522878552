"""Galois-group filter for rank-5 modular data with d1 = d2, d3 = d4.

For a Galois element sigma acting on labels with u = sigma(0) != 0, the
normalized S-matrix satisfies

    sigma(d_c)   = eps_{sigma c} d_{sigma c} / d_u,     eps_u = 1,
    s~_{u,x}     = eps_{sigma x} d_{sigma x},

and the (0,u) entry of S~ S~^dagger vanishes.  With x = d1 = d2 and
y = d3 = d4 these give a small polynomial system for each sign choice; the
element is eliminated when no solution is a non-integral pair of real
algebraic integers compatible with sigma.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import sympy as sp

__all__ = ["ElementVerdict", "SubgroupVerdict", "Rank5Report", "rank5_galois_filter",
           "abelian_subgroup_classes", "TABLE", "element_verdict"]

RANK = 5
DIM_CLASS = (0, 1, 1, 2, 2)          # label -> index into (1, x, y)

# representative abelian subgroups moving 0, as generator cycle lists
TABLE = (
    ("Z2", [[(0, 1)]]),
    ("Z2", [[(0, 1), (2, 3)]]),
    ("Z2xZ2", [[(0, 1)], [(2, 3)]]),
    ("Z2xZ2", [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]]),
    ("Z4", [[(0, 1, 2, 3)]]),
    ("Z3", [[(0, 1, 2)]]),
    ("Z6", [[(0, 1, 2)], [(3, 4)]]),
    ("Z5", [[(0, 1, 2, 3, 4)]]),
)

_x, _y = sp.symbols("x y")


def perm_from_cycles(cycles) -> tuple:
    p = list(range(RANK))
    for cyc in cycles:
        for i, a in enumerate(cyc):
            p[a] = cyc[(i + 1) % len(cyc)]
    return tuple(p)


def cycles_of(p) -> str:
    seen, out = set(), []
    for a in range(RANK):
        if a in seen or p[a] == a:
            continue
        cyc, b = [], a
        while b not in seen:
            seen.add(b)
            cyc.append(b)
            b = p[b]
        out.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def _compose(p, q):
    """p after q."""
    return tuple(p[q[a]] for a in range(RANK))


def _order(p) -> int:
    k, q = 1, p
    ident = tuple(range(RANK))
    while q != ident:
        q = _compose(p, q)
        k += 1
    return k


def _closure(gens) -> frozenset:
    ident = tuple(range(RANK))
    group = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for g in frontier:
            for h in gens:
                gh = _compose(h, g)
                if gh not in group:
                    group.add(gh)
                    new.append(gh)
        frontier = new
    return frozenset(group)


def _conjugate(group, g):
    ginv = tuple(sorted(range(RANK), key=lambda a: g[a]))
    return frozenset(_compose(g, _compose(h, ginv)) for h in group)


def abelian_subgroup_classes() -> list[frozenset]:
    """Nontrivial abelian subgroups of S5 up to conjugacy (each is generated
    by at most two elements)."""
    perms = list(itertools.permutations(range(RANK)))
    subs = set()
    for a in perms:
        for b in perms:
            if _compose(a, b) == _compose(b, a):
                G = _closure([a, b])
                if len(G) > 1:
                    subs.add(G)
    classes = {}
    for G in subs:
        key = min(tuple(sorted(_conjugate(G, g))) for g in perms)
        classes.setdefault(key, G)
    return [frozenset(k) for k in sorted(classes, key=lambda k: (len(k), k))]


# -- per element elimination -------------------------------------------------------------

def _dim(a):
    return (sp.Integer(1), _x, _y)[DIM_CLASS[a]]


@dataclass
class ElementVerdict:
    sigma: tuple
    order: int
    eliminated: bool
    reasons: list = field(default_factory=list)       # one line per sign choice
    survivors: list = field(default_factory=list)     # (eps, x, y) left over

    def to_json(self):
        return {"sigma": cycles_of(self.sigma), "order": self.order, "eliminated": self.eliminated,
                "reasons": self.reasons,
                "survivors": [{"eps": list(e), "x": str(a), "y": str(b)} for e, a, b in self.survivors]}


def _is_alg_int(v) -> bool:
    mp = sp.Poly(sp.minimal_polynomial(v, _x), _x)
    return mp.LC() == 1 and all(c.is_integer for c in mp.all_coeffs())


def _conjugate_values(v, w) -> bool:
    """w is a Galois conjugate of v (same minimal polynomial)."""
    return sp.minimal_polynomial(v, _x) == sp.minimal_polynomial(w, _x)


def _classify_point(sigma, imgs, xv, yv, order):
    """None if (x, y) is admissible, otherwise the reason it is not."""
    for v in (xv, yv):
        if not v.is_real:
            return "not real"
    if not (_is_alg_int(xv) and _is_alg_int(yv)):
        return "not an algebraic integer"
    if xv.is_rational and yv.is_rational:
        return f"integral: x = {xv}, y = {yv}"
    pt = {_x: xv, _y: yv}
    sx, sy = (sp.nsimplify(sp.simplify(e.subs(pt))) for e in imgs)
    if not (_conjugate_values(xv, sx) and _conjugate_values(yv, sy)):
        return "sigma(d) not a Galois conjugate of d"
    # period: sigma^order acts trivially
    cur = (xv, yv)
    for _ in range(order):
        cur = tuple(sp.simplify(e.subs({_x: cur[0], _y: cur[1]})) for e in imgs)
    if sp.simplify(cur[0] - xv) != 0 or sp.simplify(cur[1] - yv) != 0:
        return "sigma^k != id on dims"
    return None


_SOLVE_CACHE: dict = {}


def _solve(eqs: tuple) -> list:
    """Solutions of a polynomial system in (x, y) with x, y != 0, each checked
    by exact substitution."""
    if eqs in _SOLVE_CACHE:
        return _SOLVE_CACHE[eqs]
    raw = sp.solve(list(eqs), [_x, _y], dict=True, check=False, simplify=False)
    out = []
    for sol in raw:
        xv, yv = sol.get(_x, _x), sol.get(_y, _y)
        if xv == 0 or yv == 0:
            continue
        if all(sp.simplify(e.subs({_x: xv, _y: yv})) == 0 for e in eqs):
            out.append(sol)
    _SOLVE_CACHE[eqs] = out
    return out


def element_verdict(sigma) -> ElementVerdict:
    u = sigma[0]
    assert u != 0, "sigma must move 0"
    order = _order(sigma)
    ev = ElementVerdict(sigma, order, True)
    free = [a for a in range(RANK) if a != u]
    for signs in itertools.product((1, -1), repeat=RANK - 1):
        eps = [1] * RANK
        for a, s in zip(free, signs):
            eps[a] = s
        du = _dim(u)
        # image of the dim of each label
        img = [eps[sigma[c]] * _dim(sigma[c]) / du for c in range(RANK)]
        eqs = [sp.numer(sp.together(img[0] - 1))]            # sign fixing, automatic
        eqs += [sp.numer(sp.together(img[1] - img[2])), sp.numer(sp.together(img[3] - img[4]))]
        orth = sum(_dim(c) * eps[sigma[c]] * _dim(sigma[c]) for c in range(RANK))
        eqs.append(sp.expand(orth))
        eqs = [e for e in (sp.expand(e) for e in eqs) if e != 0]
        tag = "eps=" + "".join("+" if e > 0 else "-" for e in eps)
        if any(e.is_number for e in eqs):
            ev.reasons.append(f"{tag}: inconsistent constant relation")
            continue
        sols = _solve(tuple(eqs))
        if not sols:
            ev.reasons.append(f"{tag}: no solution with nonzero dims")
            continue
        why = []
        for s in sols:
            xv, yv = s.get(_x, _x), s.get(_y, _y)
            if xv.free_symbols or yv.free_symbols:
                ev.eliminated = False
                ev.survivors.append((tuple(eps), xv, yv))
                why.append(f"free parameter ({xv}, {yv})")
                continue
            r = _classify_point(sigma, (img[1], img[3]), sp.nsimplify(xv), sp.nsimplify(yv), order)
            if r is None:
                ev.eliminated = False
                ev.survivors.append((tuple(eps), xv, yv))
                why.append(f"admissible ({xv}, {yv})")
            else:
                why.append(f"({xv}, {yv}) {r}")
        ev.reasons.append(f"{tag}: " + "; ".join(why))
    return ev


# -- table ---------------------------------------------------------------------------------

@dataclass
class SubgroupVerdict:
    name: str
    generators: list
    order: int
    eliminated: bool
    witness: dict          # conjugate (as generator string) -> eliminating element

    def to_json(self):
        return {"group": self.name, "generators": self.generators, "order": self.order,
                "eliminated": self.eliminated, "witness": self.witness}


@dataclass
class Rank5Report:
    elements: dict
    subgroups: list
    table_matches_s5: bool
    conclusion: str
    seconds: float = 0.0

    def to_json(self):
        return {"format": "rank5-filter/1", "pattern": "d1=d2, d3=d4", "conclusion": self.conclusion,
                "table_matches_s5": self.table_matches_s5,
                "subgroups": [s.to_json() for s in self.subgroups],
                "elements": [self.elements[k].to_json() for k in sorted(self.elements)]}


def rank5_galois_filter() -> Rank5Report:
    t0 = time.perf_counter()
    perms = list(itertools.permutations(range(RANK)))
    elements = {}
    for p in perms:
        if p[0] != 0 and _order(p) in (2, 3, 5):
            elements[p] = element_verdict(p)
    subgroups = []
    reps = []
    for name, gens in TABLE:
        G = _closure([perm_from_cycles(g) for g in gens])
        reps.append(G)
        witness, ok = {}, True
        for g in perms:
            H = _conjugate(G, g)
            if all(h[0] == 0 for h in H):
                continue        # relabeling that fixes 0 is not a candidate Galois group
            key = "{" + ",".join(sorted(cycles_of(h) for h in H)) + "}"
            if key in witness:
                continue
            hits = [h for h in sorted(H) if h in elements and elements[h].eliminated]
            if hits:
                witness[key] = cycles_of(hits[0])
            else:
                witness[key] = None
                ok = False
        subgroups.append(SubgroupVerdict(name, ["".join(f"({','.join(map(str, c))})" for c in g)
                                                for g in gens], len(G), ok, witness))
    # the table lists every abelian subgroup class of S5 exactly once
    classes = abelian_subgroup_classes()
    rep_keys = {min(tuple(sorted(_conjugate(G, g))) for g in perms) for G in reps}
    matches = rep_keys == {tuple(sorted(C)) for C in classes} and len(rep_keys) == len(TABLE)
    all_ok = all(s.eliminated for s in subgroups) and matches
    concl = "pointed" if all_ok else "undecided"
    return Rank5Report(elements, subgroups, matches, concl, time.perf_counter() - t0)
