"""pmk command line: verify, indicator, galois, catalog, classify, replays.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import io as pio
from .catalog import UnknownEntry, catalog_get, catalog_list, self_test
from .datum import CenterInconsistency, galois_action, gauss_sums, mueger_center, verify_datum
from .indicators import cyclotomic_dim_check, fs_integrality_filter

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    """Exact value followed by a 12-digit float."""
    c = getattr(x, "cyc", x)
    return f"{x}  (~{c.approx(12)})"


def _emit(args, obj, human):
    if args.json:
        sys.stdout.write(pio.dump_json(obj))
    else:
        human()


def _load(path):
    try:
        return pio.read_datum(path)
    except FileNotFoundError:
        raise UsageError(f"{path}: no such file") from None
    except pio.DatumParseError as e:
        raise UsageError(f"{path}: {e}") from None


# -- subcommands -------------------------------------------------------------------------

def cmd_verify(args):
    d = _load(args.file)
    v = verify_datum(d)
    try:
        deg = mueger_center(d)
        center_err = None
    except CenterInconsistency as e:
        deg, center_err = mueger_center(d, check=False), str(e)
    cyc_ok = cyclotomic_dim_check(d)
    ok = v.passed and center_err is None
    obj = {"file": args.file, "passed": ok, "verify": v.to_json(), "degeneracy": deg.to_json(),
           "center_error": center_err, "cyclotomic_dims": cyc_ok}

    def human():
        print(f"{args.file}: rank {d.rank}, {deg.tag}, transparent {sorted(deg.transparent)}")
        for name, bad in v.results.items():
            print(f"  {'ok  ' if not bad else 'FAIL'} {name}")
            for m in bad:
                print(f"       {m}")
        if center_err:
            print(f"  FAIL center: {center_err}")
        pp, pm = gauss_sums(d)
        print(f"  D^2 = {_fmt(d.D2)}")
        print(f"  p+  = {_fmt(pp)}")
        print(f"  p-  = {_fmt(pm)}")
        print(f"  dims in Z[zeta_2N]: {'yes' if cyc_ok else 'no'} (recorded, not a pass criterion)")
        print("PASS" if ok else "FAIL")
    _emit(args, obj, human)
    return OK if ok else FAIL


def cmd_indicator(args):
    d = _load(args.file)
    reports, _ = fs_integrality_filter(d)
    if args.object is not None:
        if not 0 <= args.object < d.rank:
            raise UsageError(f"--object {args.object} out of range 0..{d.rank - 1}")
        reports = [reports[args.object]]
    ok = all(r.ok for r in reports)
    bad = [r.label for r in reports if not r.ok]
    obj = {"file": args.file, "ok": ok, "failing": bad, "objects": [r.to_json() for r in reports]}

    def human():
        print(f"{'obj':>3}  {'self-dual':9}  {'real':4}  {'integer':7}  first sum")
        for r in reports:
            print(f"{r.label:>3}  {str(r.self_dual):9}  {str(r.real):4}  {str(r.integral):7}  "
                  f"{_fmt(r.first_sum)}")
        if ok:
            print("PASS")
        else:
            print(f"FAIL: non-integer first sum at object {', '.join(map(str, bad))}")
    _emit(args, obj, human)
    return OK if ok else FAIL


def cmd_galois(args):
    d = _load(args.file)
    deg = mueger_center(d, check=False)
    if deg.tag != "modular":
        raise UsageError(f"{args.file}: Galois action on columns needs a modular datum "
                         f"(transparent labels {sorted(deg.transparent)})")
    try:
        actions, info = galois_action(d, strict=False)
    except ValueError as e:
        print(f"galois: {e}", file=sys.stderr)
        return FAIL
    obj = {"file": args.file, "actions": [a.to_json() for a in actions],
           "group": {k: (v if k != "ambiguities" else [list(map(str, t)) for t in v])
                     for k, v in info.items()}}

    def human():
        print(f"Galois group on labels: order {info['order']}, {info['structure']}, "
              f"generators {', '.join(info['generators']) or '()'}")
        for a in actions:
            sg = "".join("+" if s > 0 else "-" for s in a.signs)
            print(f"  k={a.k:<4} sigma={list(a.perm)}  eps={sg}")
        for amb in info["ambiguities"]:
            print(f"  ambiguous: k={amb[0]} column {amb[1]} -> {amb[2]}")
    _emit(args, obj, human)
    return OK


def cmd_catalog(args):
    if args.action == "list":
        names = catalog_list()
        obj = {"entries": [{"name": n, "tags": list(catalog_get(n).tags)} for n in names]}

        def human():
            for n in names:
                print(f"{n:22} {', '.join(catalog_get(n).tags)}")
        _emit(args, obj, human)
        return OK
    if not args.name:
        raise UsageError(f"catalog {args.action} needs a NAME")
    try:
        e = catalog_get(args.name)
    except UnknownEntry as err:
        raise UsageError(str(err)) from None
    if args.action == "show":
        d = e.datum

        def human():
            print(f"{e.name}: {e.provenance}")
            print(f"tags: {', '.join(e.tags)}")
            for a in range(d.rank):
                print(f"  d_{a} = {_fmt(d.dims[a])}   theta_{a} = {_fmt(d.twists[a])}")
            print("S~:")
            for row in d.smatrix:
                print("  [" + ", ".join(str(x) for x in row) + "]")
        _emit(args, e.to_json(), human)
        return OK
    # export
    if not args.file:
        raise UsageError("catalog export needs NAME FILE")
    pio.write_datum(e.datum, args.file)
    if not args.json:
        print(f"wrote {args.file}")
    else:
        sys.stdout.write(pio.dump_json({"name": e.name, "file": args.file}))
    return OK


def cmd_self_test(args):
    res = self_test()
    bad = {k: v for k, v in res.items() if v}
    obj = {"entries": len(res), "failures": bad, "ok": not bad}

    def human():
        for k, v in res.items():
            print(f"{'ok  ' if not v else 'FAIL'} {k}")
            for m in v:
                print(f"       {m}")
        print(f"{len(res) - len(bad)}/{len(res)} entries pass")
    _emit(args, obj, human)
    return OK if not bad else FAIL


def cmd_classify(args):
    from .classify.rank4 import classify_rank4
    if args.rank != 4:
        raise UsageError("only --rank 4 is supported")
    if args.nmax < 2:
        raise UsageError("--nmax must be at least 2")
    if args.workers < 1:
        raise UsageError("--workers must be positive")
    rep = classify_rank4(nmax=args.nmax, workers=args.workers)
    obj = rep.to_json()
    text = pio.dump_json(obj)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        pio.atomic_write(os.path.join(args.out, "report.json"), text)
    chk = obj["theorem_check"]

    def human():
        stages = {}
        for v in rep.verdicts:
            key = "accepted" if v.verdict == "accepted" else v.stage
            stages[key] = stages.get(key, 0) + 1
        print(f"rank 4, nmax {args.nmax}: {len(rep.rings)} rings, {len(rep.verdicts)} verdicts")
        for k in sorted(stages):
            print(f"  {k:12} {stages[k]}")
        for tag in ("symmetric", "proper", "modular"):
            cl = [c for c in rep.classes if c["tag"] == tag]
            print(f"{tag}:")
            for c in cl:
                extra = " (pointed)" if c["pointed"] else ""
                print(f"  {c['matched'] or 'UNIDENTIFIED'}{extra}  [{c['members']} data]")
        print(f"theorem list reproduced: {'yes' if chk['ok'] else 'no'}; "
              f"unidentified: {chk['unidentified']}")
        if args.out:
            print(f"report written to {os.path.join(args.out, 'report.json')}")
    if args.json:
        sys.stdout.write(text)
    else:
        human()
    return OK if chk["unidentified"] == 0 else FAIL


def cmd_rank5(args):
    from .classify.rank5 import rank5_galois_filter
    rep = rank5_galois_filter()

    def human():
        for s in rep.subgroups:
            print(f"{s.name:6} <{', '.join(s.generators)}>  "
                  f"{'eliminated' if s.eliminated else 'UNELIMINATED'}")
        n_el = sum(e.eliminated for e in rep.elements.values())
        print(f"elements of order 2, 3, 5 moving 0: {n_el}/{len(rep.elements)} eliminated")
        print(f"table covers all abelian subgroup classes of S5: {rep.table_matches_s5}")
        print(f"conclusion: {rep.conclusion}")
    _emit(args, rep.to_json(), human)
    return OK if rep.conclusion == "pointed" else FAIL


def cmd_replay(args):
    from .classify import replays as R
    if args.case == "case12":
        rep = R.replay_modular_case12()
        c = rep.counts

        def human():
            print(f"{c[0]} / {c[1]} / {c[2]} / {c[3]}")
            print("  combinations / distinct S~ / up to Galois / up to Galois and relabeling")
            for s in rep.survivors:
                verdict = (f"rejected by {s['rule'][0]}" if s["rule"] else
                           f"matched {s['matched']}" if s["matched"] else
                           "Verlinde fails" if not s["verlinde"] else "unmatched")
                print(f"  d2 = {_fmt(s['d2'])}, d3 = {_fmt(s['d3'])}: {verdict}")
        _emit(args, rep.to_json(), human)
        ok = all(s["rule"] or s["matched"] or not s["verlinde"] for s in rep.survivors)
        return OK if ok else FAIL
    if args.case == "case21":
        neg = R.replay_modular_case21(negative=True)
        pos = R.replay_modular_case21(negative=False)
        obj = {"format": "replay-case21/1", "negative": neg.to_json(), "positive": pos.to_json()}

        def human():
            c = neg.counts
            print(f"{c[0]} / {c[1]} / {c[2]}")
            print(f"  n < 0: triples / integrality / fusion  (psi in ({float(neg.psi[0]):.8f}, "
                  f"{float(neg.psi[1]):.8f}))")
            print(f"  algebraic-integer reading of the integrality test: {len(neg.algebraic_integer)}")
            print(f"  n > 0: {pos.counts[0]} / {pos.counts[1]} / {pos.counts[2]}, "
                  f"realized by twists: {pos.twists}")
        _emit(args, obj, human)
        return OK if neg.counts[2] == 0 else FAIL
    if args.case == "repz3":
        res = R.replay_repz3()
        obj = {"format": "replay-repz3/1",
               "candidates": [{"M": r["M"], "dims": r["dims"], "twists": r["twists"],
                               "first_sum_3": r["first_sum_3"].to_json(), "fs_ok": r["fs_ok"]}
                              for r in res["candidates"]],
               "survivors": [pio.datum_to_json(r["datum"]) for r in res["survivors"]]}

        def human():
            for r in res["candidates"]:
                print(f"  N33^3={r['M']} dims={r['dims']} twists={r['twists']} "
                      f"first sum(3)={_fmt(r['first_sum_3'])} {'ok' if r['fs_ok'] else 'rejected'}")
            print(f"survivors: {len(res['survivors'])}")
        _emit(args, obj, human)
        return OK
    res = R.replay_final_z2()
    obj = {"format": "replay-final-z2/1", "solutions": [list(s) for s in res["solutions"]],
           "allowed_N": res["allowed_N"],
           "accepted": [{"N": a["N"], "datum": pio.datum_to_json(a["datum"])} for a in res["accepted"]]}

    def human():
        print(f"(N, L) with 4 = (N^2+1)(3+L^2-2LN): {res['solutions']}")
        for a in res["accepted"]:
            print(f"  N={a['N']} T={list(a['datum'].twists)} dims={[str(x) for x in a['datum'].dims]}")
    _emit(args, obj, human)
    return OK


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print the canonical JSON report")
    p = argparse.ArgumentParser(prog="pmk", parents=[common],
                                description="Exact premodular data: verification and rank-4 classification.")
    sub = p.add_subparsers(dest="cmd", metavar="COMMAND")
    sub.required = True

    s = sub.add_parser("verify", parents=[common], help="check every identity of a datum file")
    s.add_argument("file")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("indicator", parents=[common], help="FS first sums and the integrality test")
    s.add_argument("file")
    s.add_argument("--object", type=int)
    s.set_defaults(fn=cmd_indicator)

    s = sub.add_parser("galois", parents=[common], help="Galois action on S-matrix columns")
    s.add_argument("file")
    s.set_defaults(fn=cmd_galois)

    s = sub.add_parser("catalog", parents=[common], help="list, show or export catalog entries")
    s.add_argument("action", choices=["list", "show", "export"])
    s.add_argument("name", nargs="?")
    s.add_argument("file", nargs="?")
    s.set_defaults(fn=cmd_catalog)

    s = sub.add_parser("classify", parents=[common], help="run the rank-4 classification")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--nmax", type=int, default=3)
    s.add_argument("--out")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("rank5-filter", parents=[common], help="rank-5 Galois elimination")
    s.set_defaults(fn=cmd_rank5)

    s = sub.add_parser("replay", parents=[common], help="replay a case enumeration")
    s.add_argument("case", choices=["case12", "case21", "repz3", "final-z2"])
    s.set_defaults(fn=cmd_replay)

    s = sub.add_parser("self-test", parents=[common], help="verify every catalog entry")
    s.set_defaults(fn=cmd_self_test)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else OK
    if not hasattr(args, "json"):
        args.json = False
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"pmk: {e}", file=sys.stderr)
        return USAGE
    except pio.DatumIntegrityError as e:
        print(f"pmk: integrity error: {e}", file=sys.stderr)
        return FAIL
    except BrokenPipeError:
        return OK


if __name__ == "__main__":
    sys.exit(main())
