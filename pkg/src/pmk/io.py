"""premodular-datum/1 files: canonical writer and a checking reader."""
from __future__ import annotations

import json
import os
import tempfile

from .cyclotomic import CyclotomicNumber, RootOfUnity
from .datum import BalancingError, PremodularDatum, s_from_balancing
from .fusionring import FusionRing, verify_fusion_axioms

__all__ = ["FORMAT", "DatumParseError", "DatumIntegrityError", "datum_to_json", "datum_from_json",
           "dumps", "loads", "read_datum", "write_datum", "dump_json", "atomic_write"]

FORMAT = "premodular-datum/1"


class DatumParseError(ValueError):
    """Malformed input; carries line/col for syntax errors or a JSON path otherwise."""

    def __init__(self, msg, line=None, col=None, path=None):
        self.line, self.col, self.path = line, col, path
        where = []
        if line is not None:
            where.append(f"line {line} col {col}")
        if path is not None:
            where.append(f"at {path}")
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)


class DatumIntegrityError(ValueError):
    """Stored S-matrix disagrees with the balancing reconstruction."""

    def __init__(self, label, msg):
        self.label = label
        super().__init__(f"label {label}: {msg}")


def datum_to_json(d: PremodularDatum) -> dict:
    return {
        "format": FORMAT,
        "ring": d.ring.to_json(),
        "dims": [x.to_json() for x in d.dims],
        "twists": [t.to_json() for t in d.twists],
        "smatrix": [[x.to_json() for x in row] for row in d.smatrix],
    }


def dump_json(obj) -> str:
    """Canonical text: fixed key order as built, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def dumps(d: PremodularDatum) -> str:
    return dump_json(datum_to_json(d))


def _cyc(obj, path):
    try:
        if not isinstance(obj, dict) or set(obj) != {"conductor", "coeffs"}:
            raise ValueError("expected {\"conductor\": N, \"coeffs\": [...]}")
        if not isinstance(obj["coeffs"], list) or \
                any(not isinstance(p, list) or len(p) != 2 for p in obj["coeffs"]):
            raise ValueError("coeffs must be a list of [exponent, \"p/q\"] pairs")
        return CyclotomicNumber.from_json(obj)
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as e:
        raise DatumParseError(str(e), path=path) from None


def _need(obj, key, typ, path):
    if not isinstance(obj, dict) or key not in obj:
        raise DatumParseError(f"missing key {key!r}", path=path)
    v = obj[key]
    if not isinstance(v, typ):
        raise DatumParseError(f"expected {typ.__name__}", path=f"{path}.{key}")
    return v


def datum_from_json(obj) -> PremodularDatum:
    if not isinstance(obj, dict):
        raise DatumParseError("top level must be an object", path="$")
    fmt = obj.get("format")
    if fmt != FORMAT:
        raise DatumParseError(f"unsupported format {fmt!r}", path="$.format")
    robj = _need(obj, "ring", dict, "$")
    try:
        ring = FusionRing.from_json(robj)
    except (ValueError, TypeError, KeyError, IndexError) as e:
        raise DatumParseError(str(e), path="$.ring") from None
    bad = verify_fusion_axioms(ring)
    if bad:
        raise DatumParseError(f"fusion axioms fail: {bad[0]}", path="$.ring")
    n = ring.rank
    dims_raw = _need(obj, "dims", list, "$")
    tw_raw = _need(obj, "twists", list, "$")
    for key, lst in (("dims", dims_raw), ("twists", tw_raw)):
        if len(lst) != n:
            raise DatumParseError(f"expected {n} entries, got {len(lst)}", path=f"$.{key}")
    dims = [_cyc(x, f"$.dims[{i}]") for i, x in enumerate(dims_raw)]
    twists = []
    for i, t in enumerate(tw_raw):
        p = f"$.twists[{i}]"
        if not isinstance(t, dict) or not isinstance(t.get("order"), int) or \
                not isinstance(t.get("exp"), int) or t["order"] < 1:
            raise DatumParseError("expected {\"order\": N>0, \"exp\": k}", path=p)
        twists.append(RootOfUnity.from_json(t))
    try:
        rebuilt = s_from_balancing(ring, twists, dims)
    except BalancingError as e:
        raise DatumIntegrityError(e.label, str(e)) from None
    if "smatrix" in obj and obj["smatrix"] is not None:
        S_raw = obj["smatrix"]
        if not isinstance(S_raw, list) or len(S_raw) != n or \
                any(not isinstance(r, list) or len(r) != n for r in S_raw):
            raise DatumParseError(f"expected {n}x{n} matrix", path="$.smatrix")
        S = [[_cyc(x, f"$.smatrix[{a}][{b}]") for b, x in enumerate(r)] for a, r in enumerate(S_raw)]
        for a in range(n):
            for b in range(n):
                if S[a][b] != rebuilt.smatrix[a][b]:
                    lab = b if a == 0 else a
                    raise DatumIntegrityError(
                        lab, f"stored s~_{a}{b} = {S[a][b]} but balancing gives {rebuilt.smatrix[a][b]}")
    return rebuilt


def loads(text: str) -> PremodularDatum:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise DatumParseError(e.msg, line=e.lineno, col=e.colno) from None
    return datum_from_json(obj)


def read_datum(path) -> PremodularDatum:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def atomic_write(path, text: str):
    path = os.fspath(path)
    dirn = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=dirn, prefix=".pmk-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_datum(d: PremodularDatum, path):
    atomic_write(path, dumps(d))
