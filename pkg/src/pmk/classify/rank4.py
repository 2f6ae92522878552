"""Rank-4 premodular classification pipeline.

Rings are enumerated per duality type, every real character is tried as a
dimension function, twists come from solve_twists, and the survivors go
through the FS filter, Mueger-center consistency and the recorded rules
before being grouped and matched against the catalog.
"""
from __future__ import annotations

import itertools
import math
import multiprocessing as mp
from dataclasses import dataclass, field

from ..cyclotomic import CyclotomicNumber
from ..datum import (CenterInconsistency, PremodularDatum, center_group, mueger_center,
                     verify_datum)
from ..fusionring import (FusionRing, admissible_relabelings, characters, enumerate_rings,
                          iso_key, known_rings, universal_grading)
from ..indicators import cyclotomic_dim_check, fs_integrality_filter
from .twists import solve_twists

__all__ = ["CandidateVerdict", "ClassificationReport", "classify_rank4", "DUALITY_CASES",
           "THEOREM_CLASSES", "RULES", "process_ring", "smatrix_class_key"]

Cyc = CyclotomicNumber
REPORT_FORMAT = "classification-report/1"

# rank 4: every label self-dual, or one dual pair
DUALITY_CASES = ((0, 1, 2, 3), (0, 1, 3, 2))

THEOREM_CLASSES = {
    "symmetric": ("rep-z4", "rep-z2xz2", "rep-d10", "rep-a4"),
    "proper": ("c-sl2-8-ad", "c-sl2-6-ad", "c-so5-10-ad", "fib-x-rep-z2", "fib-x-svec"),
    "modular": ("fib-x-semion", "fib-x-fib", "a1-7-half", "fib-x-fib-bar"),
}

RANK4_GROUPS = ("Z4", "Z2xZ2", "D10", "A4")

# rule id -> citation emitted with every rejection it causes
RULES = {
    "noncyclotomic": "dimensions and FP-dimensions in a fusion category are cyclotomic integers "
                     "(Etingof-Nikshych-Ostrik)",
    "zero_dim": "categorical dimensions of simple objects are nonzero",
    "nonreal_dim": "dimensions in a spherical category are real (d_a = d_a*)",
    "dim_ratio": "dim(C)/FPdim(C) is an algebraic integer (Etingof-Nikshych-Ostrik)",
    "deligne": "symmetric fusion categories are Rep(G, z) (Deligne); rank-4 groups are "
               "Z4, Z2xZ2, D10, A4 and |d_a| = FPdim",
    "rule_a": "Rep(S3) Mueger center: de-equivariantization is pointed, so C is group-theoretical "
              "and integral (Etingof-Nikshych-Ostrik, Drinfeld-Gelaki-Nikshych-Ostrik)",
    "rule_b": "Rep(Z2) center, no grading, X1 fixes X2: minimal modularization (Bruguieres) is a "
              "rank-5 modular category, pointed by the rank-5 Galois filter, so C is "
              "Grothendieck equivalent to Rep(D_n) and group-theoretical (Natale-Rowell): d2 = d3 = 2",
    "rule_c": "Rep(Z2) center, no grading, X1 X2 = X3 with theta_1 = +1: the minimal "
              "modularization is rank-2 modular (semion or Fibonacci), forcing a pointed ring",
    "rule_d": "an invertible object with d = -1 and theta = +-i would give a rank-2 modular "
              "datum with S = [[1,-1],[-1,-1]], recorded as excluded",
}


@dataclass
class CandidateVerdict:
    ring_id: str
    dims: tuple | None = None
    twists: tuple | None = None
    verdict: str = "accepted"
    stage: str = ""
    reason: str | None = None
    citation: str | None = None
    matched: str | None = None

    def to_json(self):
        return {
            "ring": self.ring_id,
            "dims": None if self.dims is None else [x.to_json() for x in self.dims],
            "twists": None if self.twists is None else [t.to_json() for t in self.twists],
            "verdict": self.verdict,
            "stage": self.stage,
            "reason": self.reason,
            "citation": self.citation,
            "matched": self.matched,
        }


@dataclass
class Survivor:
    ring_id: str
    datum: PremodularDatum
    tag: str                  # symmetric | proper | modular
    pointed: bool
    center: tuple
    center_type: str
    case: str
    cyclotomic_dims: bool


@dataclass
class ClassificationReport:
    parameters: dict
    rings: list = field(default_factory=list)          # (ring_id, ring json)
    verdicts: list = field(default_factory=list)
    classes: list = field(default_factory=list)        # dicts, see _group
    pointed: list = field(default_factory=list)

    def survivors(self, tag=None, pointed=False):
        return [c for c in self.classes if (tag is None or c["tag"] == tag)
                and c["pointed"] == pointed]

    def names(self, tag) -> set:
        """Matched catalog names of the theorem-level classes with this tag."""
        return {c["matched"] for c in self.classes if c["tag"] == tag and
                (tag == "symmetric" or not c["pointed"])}

    @property
    def unidentified(self) -> list:
        return [c for c in self.classes if c["matched"] is None]

    def theorem_check(self) -> dict:
        out = {}
        for tag, want in THEOREM_CLASSES.items():
            got = {n for n in self.names(tag) if n is not None}
            out[tag] = {"expected": sorted(want), "found": sorted(got), "ok": got == set(want)}
        out["unidentified"] = len(self.unidentified)
        out["ok"] = all(v["ok"] for k, v in out.items() if isinstance(v, dict)) and \
            not self.unidentified
        return out

    def to_json(self):
        from ..io import datum_to_json
        return {
            "format": REPORT_FORMAT,
            "parameters": self.parameters,
            "rings": [{"id": rid, "ring": r} for rid, r in self.rings],
            "verdicts": [v.to_json() for v in self.verdicts],
            "classes": [{k: (datum_to_json(v) if k == "representative" else v)
                         for k, v in c.items()} for c in self.classes],
            "theorem_check": self.theorem_check(),
        }


# -- per-ring work --------------------------------------------------------------------

def _fp_character(chars):
    for ch in chars:
        if all(z.real >= 1 - 1e-9 and abs(z.imag) < 1e-9 for z in ch.approx):
            return ch
    return None


def _is_pointed(ring: FusionRing) -> bool:
    return all(int(ring.N[a].sum()) == ring.rank for a in range(ring.rank))


def center_type(d: PremodularDatum, transparent) -> str:
    if len(transparent) == 1:
        return "none"
    for g in transparent:
        if (d.dims[g] * d.twists[g].cyc).to_rational() < 0:
            return "super-tannakian"
    return "tannakian"


def _case_label(d: PremodularDatum, center) -> str:
    """Which symmetric-subcategory case a proper datum falls into."""
    grp = center_group(d, center) or f"rank{len(center)}"
    self_dual = d.ring.is_self_dual()
    return f"{grp}:{'self-dual' if self_dual else 'dual-pair'}"


def _rules(d: PremodularDatum, tag: str, center, ctype: str, fp) -> tuple | None:
    """First recorded rule that rejects the datum, as (rule id, detail)."""
    ring = d.ring
    n = d.rank
    if tag == "symmetric":
        key = iso_key(ring)
        if not any(iso_key(known_rings()[g]) == key for g in RANK4_GROUPS):
            return "deligne", "ring is not a rank-4 group representation ring"
        for a in range(n):
            if d.dims[a] != fp[a] and d.dims[a] != -fp[a]:
                return "deligne", f"|d_{a}| != FPdim"
        return None
    for g in range(1, n):
        if ring.N[g].sum() == n and d.dims[g] == Cyc.rational(-1) and d.twists[g].order == 4:
            return "rule_d", f"label {g}: d = -1, theta = {d.twists[g]}"
    if tag != "proper" or _is_pointed(ring):
        return None
    grp = center_group(d, center)
    if grp == "S3" and not all(x.is_rational_integer() for x in d.dims):
        return "rule_a", "Rep(S3) center with non-integral dimensions"
    if grp == "Z2" and ring.is_self_dual() and len(universal_grading(ring)) == 1:
        g = max(center)
        others = [a for a in range(1, n) if a != g]
        x = others[0]
        if ring.N[g, x, x]:
            if not all(d.dims[a] == Cyc.rational(2) for a in others):
                return "rule_b", f"dims {[str(d.dims[a]) for a in others]} != (2, 2)"
        elif ctype == "tannakian" and d.twists[g].order == 1:
            return "rule_c", "theta_g = +1"
    return None


def process_ring(item):
    """All verdicts and survivors for one ring; pure function of its input."""
    rid, ring = item
    verdicts, survivors = [], []
    chars = characters(ring)
    fp = _fp_character(chars)
    if fp is None or fp.exact is None:
        verdicts.append(CandidateVerdict(rid, verdict="rejected", stage="ring",
                                         reason="FP dimensions not cyclotomic",
                                         citation=RULES["noncyclotomic"]))
        return verdicts, survivors
    fpx = fp.exact
    fp_total = sum((x * x for x in fpx), Cyc.rational(0))
    for ch in chars:
        if not ch.is_real:
            continue    # a complex character is never a dimension function
        if ch.exact is None:
            verdicts.append(CandidateVerdict(rid, verdict="rejected", stage="dims",
                                             reason="non-cyclotomic dimension character",
                                             citation=RULES["noncyclotomic"]))
            continue
        dims = ch.exact
        if any(not x for x in dims):
            verdicts.append(CandidateVerdict(rid, dims, verdict="rejected", stage="dims",
                                             reason="zero dimension", citation=RULES["zero_dim"]))
            continue
        total = sum((x * x for x in dims), Cyc.rational(0))
        ratio = total / fp_total
        if not ratio.is_algebraic_integer():
            verdicts.append(CandidateVerdict(rid, dims, verdict="rejected", stage="dims",
                                             reason=f"dim/FPdim = {ratio} not an algebraic integer",
                                             citation=RULES["dim_ratio"]))
            continue
        search = solve_twists(ring, dims, chars)
        for tw, why in search.rejected:
            verdicts.append(CandidateVerdict(rid, dims, tw, "rejected", "identities", why))
        for d in search.accepted:
            v = CandidateVerdict(rid, d.dims, d.twists)
            reports, ok = fs_integrality_filter(d)
            if not ok:
                bad = next(r for r in reports if not r.ok)
                v.verdict, v.stage = "rejected", "fs_indicator"
                v.reason = f"label {bad.label}: first sum {bad.first_sum} " + \
                    ("not real" if not bad.real else "not a rational integer")
                verdicts.append(v)
                continue
            try:
                deg = mueger_center(d, check=True)
            except CenterInconsistency as e:
                v.verdict, v.stage, v.reason = "rejected", "center", str(e)
                verdicts.append(v)
                continue
            tag = {"symmetric": "symmetric", "modular": "modular"}.get(deg.tag, "proper")
            center = tuple(sorted(deg.transparent))
            ctype = center_type(d, deg.transparent)
            hit = _rules(d, tag, center, ctype, fpx)
            if hit is not None:
                v.verdict, v.stage, v.reason, v.citation = "rejected", hit[0], hit[1], RULES[hit[0]]
                verdicts.append(v)
                continue
            v.stage = "accepted"
            verdicts.append(v)
            case = _case_label(d, center) if tag == "proper" else tag
            survivors.append(Survivor(rid, d, tag, _is_pointed(ring), center, ctype, case,
                                      cyclotomic_dim_check(d)))
    return verdicts, survivors


# -- grouping ---------------------------------------------------------------------------

def _cyc_key(x: Cyc) -> tuple:
    return (x.conductor, tuple((e, c.numerator, c.denominator) for e, c in x.coeffs))


def smatrix_class_key(d: PremodularDatum) -> tuple:
    """Canonical S~ up to Galois conjugation of entries and relabeling."""
    m = 1
    for row in d.smatrix:
        for x in row:
            m = math.lcm(m, x.conductor)
    perms = admissible_relabelings(d.rank, d.ring.duality)
    best = None
    for k in range(1, max(m, 2)):
        if math.gcd(k, m) != 1:
            continue
        S = [[x.galois(k) for x in row] for row in d.smatrix]
        for p in perms:
            inv = [0] * d.rank
            for a, q in enumerate(p):
                inv[q] = a
            key = tuple(tuple(_cyc_key(S[inv[a]][inv[b]]) for b in range(d.rank))
                        for a in range(d.rank))
            if best is None or key < best:
                best = key
    return best


def _class_key(s: Survivor):
    if s.tag == "symmetric":
        return ("symmetric", iso_key(s.datum.ring))
    if s.tag == "proper":
        return ("proper", s.pointed, iso_key(s.datum.ring), s.center_type)
    return ("modular", s.pointed, smatrix_class_key(s.datum))


def _catalog_keys():
    from ..catalog import catalog_get
    out = {}
    for tag, names in THEOREM_CLASSES.items():
        for name in names:
            e = catalog_get(name)
            d = e.datum
            deg = mueger_center(d)
            tr = tuple(sorted(deg.transparent))
            s = Survivor("", d, tag, _is_pointed(d.ring), tr, center_type(d, deg.transparent), "", True)
            out.setdefault(_class_key(s), name)
    return out


def _group(survivors) -> list:
    keys = _catalog_keys()
    classes = {}
    for s in survivors:
        k = _class_key(s)
        c = classes.get(k)
        if c is None:
            c = classes[k] = {
                "tag": s.tag,
                "pointed": s.pointed,
                "case": s.case,
                "center": list(s.center),
                "center_types": [],
                "matched": keys.get(k),
                "members": 0,
                "rings": [],
                "cyclotomic_dims": True,
                "representative": s.datum,
            }
        c["members"] += 1
        if s.center_type not in c["center_types"]:
            c["center_types"] = sorted(c["center_types"] + [s.center_type])
        if s.ring_id not in c["rings"]:
            c["rings"].append(s.ring_id)
        c["cyclotomic_dims"] = c["cyclotomic_dims"] and s.cyclotomic_dims
        if s.pointed and s.tag != "symmetric" and c["matched"] is None:
            c["matched"] = "pointed"
    order = {"symmetric": 0, "proper": 1, "modular": 2}
    return sorted(classes.values(), key=lambda c: (order[c["tag"]], c["pointed"], c["rings"][0],
                                                   c["matched"] or ""))


def _ring_items(nmax: int, duality_cases):
    for ci, du in enumerate(duality_cases):
        for i, ring in enumerate(enumerate_rings(4, nmax, du)):
            yield f"d{ci}-{i:03d}", ring


def classify_rank4(nmax: int = 3, workers: int = 1, duality_cases=DUALITY_CASES) -> ClassificationReport:
    if nmax < 2:
        raise ValueError("nmax must be at least 2")
    items = list(_ring_items(nmax, duality_cases))
    if workers > 1:
        ctx = mp.get_context("fork")
        with ctx.Pool(workers) as pool:
            results = list(pool.imap(process_ring, items, chunksize=1))
    else:
        results = [process_ring(it) for it in items]
    rep = ClassificationReport({"rank": 4, "nmax": nmax,
                                "duality_cases": [list(d) for d in duality_cases]})
    rep.rings = [(rid, ring.to_json()) for rid, ring in items]
    survivors = []
    for verdicts, surv in results:
        rep.verdicts.extend(verdicts)
        survivors.extend(surv)
    classes = _group(survivors)
    # match verdicts to their class name
    by_datum = {}
    for s in survivors:
        by_datum[(s.ring_id, s.datum.dims, s.datum.twists)] = _class_key(s)
    name_of = {}
    keys = _catalog_keys()
    for s in survivors:
        k = _class_key(s)
        name_of[k] = keys.get(k) or ("pointed" if s.pointed and s.tag != "symmetric" else None)
    for v in rep.verdicts:
        if v.verdict == "accepted":
            k = by_datum.get((v.ring_id, v.dims, v.twists))
            v.matched = name_of.get(k)
    rep.classes = classes
    return rep
