"""Command-line surface: `slice <command> [p q | --max-n N] ...`.

Commands: meander, construct, verify, sigmap, diagram.  All output is
byte-deterministic for a fixed configuration.  Exit codes: 0 success,
1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import diagram as diagram_mod
from .meander import (
    CoprimePair,
    MeanderError,
    coprime_pairs,
    signature,
    signature_atlas,
    traversal,
    turning_data,
)
from .slicebuild import ConstructionFailed, construct, triangularity_order
from .verify import eta_and_h, full_report

SCHEMA_VERSION = "1"
CSV_COLUMNS = ["p", "q", "n", "signature", "used_fix", "mode", "m"]


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    return str(x)


def _dump_json(payload):
    return json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"


def _dump_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _emit(text, out):
    data = text.encode("utf-8")
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


def _root_str(r):
    a = r.index(1) + 1
    b = r.index(-1) + 1
    return "e%d-e%d" % (a, b)


def _meander_payload(pair):
    tr = traversal(pair)
    td = turning_data(tr)
    sig = signature(td)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "meander",
        "p": pair.p,
        "q": pair.q,
        "n": pair.n,
        "phi": list(tr.phi),
        "a": tr.a,
        "b": tr.b,
        "turning_positions": list(td.positions),
        "turning_tags": list(td.tags),
        "turning_labels": list(td.labels),
        "eps": list(td.eps),
        "nil": [i + 1 for i, v in enumerate(td.nil) if v],
        "boundary": [i + 1 for i, v in enumerate(td.boundary) if v],
        "isolated": [i + 1 for i, v in enumerate(td.isolated) if v],
        "e": td.e,
        "m_even": td.m,
        "signature": sig.as_string(),
        "signature_full": list(sig.full),
        "signature_runs": list(sig.changes),
    }


def _construct_payload(pair):
    sc = construct(pair)
    ap = eta_and_h(pair)
    ledger = sc.ledger
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "construct",
        "p": pair.p,
        "q": pair.q,
        "n": pair.n,
        "signature": sc.sig.as_string(),
        "pi_star": [list(r) for r in sc.pi_star],
        "pi_final": [list(r) for r in sc.pi_final],
        "order": list(sc.order),
        "weyl_perm": list(sc.order),
        "used_exceptional_fix": sc.used_exceptional_fix,
        "construction_mode": sc.construction_mode,
        "m": ap.m,
        "conditions": {k: sc.checks[k] for k in ("a", "b", "c", "d", "ok")},
        "triangularity_order": list(triangularity_order(sc)),
        "ledger": {
            "entries": [
                {
                    "index": e.index,
                    "span": list(e.span),
                    "case": e.case,
                    "added": list(e.added),
                }
                for _, e in sorted(ledger.entries.items())
            ],
            "chi": {str(k): v for k, v in sorted(ledger.chi.items())},
            "undecided": {
                "position": ledger.undecided[0],
                "disposition": ledger.undecided[1],
            },
            "fix": [
                {"index": i, "value": list(v)} for i, v in sorted(ledger.fix_entries.items())
            ],
        },
    }


def _verify_payload(pair):
    rep = full_report(pair, with_stabiliser=pair.n <= 20)
    out = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "p": pair.p,
        "q": pair.q,
        "n": pair.n,
        "signature": rep["signature"],
        "construction_mode": rep["construction_mode"],
        "used_exceptional_fix": rep["used_exceptional_fix"],
        "m": rep["m"],
        "h": [str(v) for v in rep["h"]],
        "order": list(rep["order"]),
        "weyl_perm": list(rep["weyl_perm"]),
        "conditions": rep["conditions"],
        "regular_nilpotent": rep["regular_nilpotent"],
        "restriction_ok": rep["restriction"]["matches_eta"]
        and rep["restriction"]["rest_in_nilradical"],
        "eta_eigenvalues_ok": rep["eta_eigenvalues_ok"],
        "added_roots": [list(r) for r in rep["added_roots"]],
        "all_ok": rep["all_ok"],
    }
    if "eta_regular" in rep:
        out["eta_regular"] = rep["eta_regular"]
        out["stabiliser_dim"] = rep["stabiliser_dim"]
        out["complement_ok"] = rep["complement_ok"]
    return out


def _verify_row_worker(pq):
    return _verify_payload(CoprimePair(*pq))


def _csv_row(payload):
    return [
        payload["p"],
        payload["q"],
        payload["n"],
        payload["signature"],
        str(payload.get("used_exceptional_fix", "")).lower(),
        payload.get("construction_mode", ""),
        payload.get("m", ""),
    ]


def _text_kv(payload, keys):
    lines = []
    for k in keys:
        lines.append("%s: %s" % (k, _jsonable(payload[k])))
    return "\n".join(lines) + "\n"


def cmd_meander(args):
    pair = CoprimePair(args.p, args.q)
    payload = _meander_payload(pair)
    if args.format == "json":
        return _dump_json(payload), 0
    if args.format == "csv":
        row = _csv_row(
            {
                "p": pair.p,
                "q": pair.q,
                "n": pair.n,
                "signature": payload["signature"],
            }
        )
        return _dump_csv([CSV_COLUMNS, row]), 0
    keys = [
        "p", "q", "n", "phi", "a", "b", "turning_positions", "turning_tags",
        "eps", "nil", "isolated", "e", "m_even", "signature",
    ]
    return _text_kv(payload, keys), 0


def cmd_construct(args):
    pair = CoprimePair(args.p, args.q)
    payload = _construct_payload(pair)
    if args.format == "json":
        return _dump_json(payload), 0
    if args.format == "csv":
        return _dump_csv([CSV_COLUMNS, _csv_row(payload)]), 0
    sc_lines = [
        "pair: (%d,%d)  n=%d  sg=%s" % (pair.p, pair.q, pair.n, payload["signature"]),
        "mode: %s  fix: %s" % (payload["construction_mode"], payload["used_exceptional_fix"]),
        "order c: %s" % (payload["order"],),
        "conditions: %s" % (payload["conditions"],),
        "pi_final:",
    ]
    for r in payload["pi_final"]:
        sc_lines.append("  " + _root_str(tuple(r)))
    sc_lines.append("changes:")
    for e in payload["ledger"]["entries"]:
        sc_lines.append(
            "  beta_%d += %s  span=%s case=%s"
            % (e["index"], _root_str(tuple(e["added"])), tuple(e["span"]), e["case"])
        )
    for f in payload["ledger"]["fix"]:
        sc_lines.append("  fix beta_%d -> %s" % (f["index"], _root_str(tuple(f["value"]))))
    sc_lines.append(
        "undecided d: %s (%s)"
        % (payload["ledger"]["undecided"]["position"], payload["ledger"]["undecided"]["disposition"])
    )
    return "\n".join(sc_lines) + "\n", 0


def cmd_verify(args):
    if args.max_n is not None:
        pairs = [(pp.p, pp.q) for pp in coprime_pairs(args.max_n)]
        jobs = args.jobs
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_verify_row_worker, pairs))
        else:
            rows = [_verify_row_worker(pq) for pq in pairs]
        ok = all(r["all_ok"] for r in rows)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": "verify",
            "max_n": args.max_n,
            "rows": rows,
            "all_ok": ok,
        }
        code = 0 if ok else 1
        if args.format == "json":
            return _dump_json(payload), code
        if args.format == "csv":
            return _dump_csv([CSV_COLUMNS] + [_csv_row(r) for r in rows]), code
        lines = ["p q n sig mode fix m ok"]
        for r in rows:
            lines.append(
                "%d %d %d %s %s %s %d %s"
                % (
                    r["p"], r["q"], r["n"], r["signature"] or "()",
                    r["construction_mode"], r["used_exceptional_fix"], r["m"], r["all_ok"],
                )
            )
        lines.append("all_ok: %s" % ok)
        return "\n".join(lines) + "\n", code
    pair = CoprimePair(args.p, args.q)
    payload = _verify_payload(pair)
    code = 0 if payload["all_ok"] else 1
    if args.format == "json":
        return _dump_json(payload), code
    if args.format == "csv":
        return _dump_csv([CSV_COLUMNS, _csv_row(payload)]), code
    keys = [
        "p", "q", "n", "signature", "construction_mode", "used_exceptional_fix",
        "m", "h", "order", "conditions", "regular_nilpotent", "restriction_ok",
        "eta_eigenvalues_ok", "all_ok",
    ]
    if "eta_regular" in payload:
        keys[-1:-1] = ["eta_regular", "stabiliser_dim", "complement_ok"]
    return _text_kv(payload, keys), code


def cmd_sigmap(args):
    atlas = signature_atlas(args.max_n)
    rows = []
    for pair, sig in atlas["rows"]:
        sc = construct(pair)
        ap = eta_and_h(pair)
        rows.append(
            {
                "p": pair.p,
                "q": pair.q,
                "n": pair.n,
                "signature": sig.as_string(),
                "used_exceptional_fix": sc.used_exceptional_fix,
                "construction_mode": sc.construction_mode,
                "m": ap.m,
            }
        )
    fibers = {
        s: sorted(ps) for s, ps in atlas["fibers"].items()
    }
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "sigmap",
        "max_n": args.max_n,
        "rows": rows,
        "image": atlas["image"],
        "fibers": fibers,
        "shared": {s: sorted(ps) for s, ps in atlas["shared"].items()},
    }
    if args.format == "json":
        return _dump_json(payload), 0
    if args.format == "csv":
        table = [CSV_COLUMNS] + [_csv_row(r) for r in rows]
        fib = [["signature", "count", "pairs"]]
        for s in sorted(fibers):
            fib.append([s, len(fibers[s]), ";".join("%d:%d" % t for t in fibers[s])])
        return _dump_csv(table) + "\n" + _dump_csv(fib), 0
    lines = ["p q n signature"]
    for r in rows:
        lines.append("%d %d %d %s" % (r["p"], r["q"], r["n"], r["signature"] or "()"))
    lines.append("")
    lines.append("fibers:")
    for s in sorted(fibers):
        lines.append("  %r <- %s" % (s, fibers[s]))
    return "\n".join(lines) + "\n", 0


def cmd_diagram(args):
    pair = CoprimePair(args.p, args.q)
    sc = construct(pair)
    fmt = args.diagram or (args.format if args.format in ("ascii", "svg") else None)
    if fmt is None and args.format in (None, "text"):
        fmt = "ascii"
    if fmt not in ("ascii", "svg"):
        raise MeanderError("diagram format must be ascii or svg")
    if fmt == "svg":
        return diagram_mod.svg_diagram(sc), 0
    return diagram_mod.ascii_diagram(sc), 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="slice",
        description="Meander combinatorics and exactly certified adapted pairs for sl(p+q).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, pq=True, max_n=False, formats=("json", "csv", "text"), default="text"):
        if pq:
            sp.add_argument("p", type=int, nargs="?")
            sp.add_argument("q", type=int, nargs="?")
        if max_n:
            sp.add_argument("--max-n", type=int, dest="max_n")
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--diagram", choices=("ascii", "svg"))
        sp.add_argument("--out")
        sp.add_argument("--jobs", type=int, default=1)

    common(sub.add_parser("meander", help="orbit, turning points, signature"))
    common(sub.add_parser("construct", help="modified simple root systems with ledger"))
    common(sub.add_parser("verify", help="full certification, single pair or sweep"), max_n=True)
    common(sub.add_parser("sigmap", help="signature atlas over all coprime pairs"), pq=False, max_n=True)
    common(
        sub.add_parser("diagram", help="ascii/svg rendering of the meander"),
        formats=("json", "csv", "text", "ascii", "svg"),
        default="ascii",
    )
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    env_jobs = os.environ.get("SLICE_JOBS")
    if env_jobs:
        try:
            args.jobs = int(env_jobs)
        except ValueError:
            print("slice: invalid SLICE_JOBS=%r" % env_jobs, file=sys.stderr)
            return 2
    try:
        if args.command == "meander":
            _require_pq(parser, args)
            text, code = cmd_meander(args)
        elif args.command == "construct":
            _require_pq(parser, args)
            text, code = cmd_construct(args)
        elif args.command == "verify":
            if args.max_n is None:
                _require_pq(parser, args)
            text, code = cmd_verify(args)
        elif args.command == "sigmap":
            if args.max_n is None or args.max_n < 3:
                print("slice: sigmap needs --max-n N with N >= 3", file=sys.stderr)
                return 2
            text, code = cmd_sigmap(args)
        elif args.command == "diagram":
            _require_pq(parser, args)
            text, code = cmd_diagram(args)
        else:  # pragma: no cover
            return 2
    except MeanderError as ex:
        print("slice: input error: %s" % ex, file=sys.stderr)
        return 2
    except ConstructionFailed as ex:
        print("slice: verification failure: %s" % ex, file=sys.stderr)
        return 1
    _emit(text, args.out)
    return code


def _require_pq(parser, args):
    if args.p is None or args.q is None:
        parser.error("this command requires p and q")


if __name__ == "__main__":
    sys.exit(main())
