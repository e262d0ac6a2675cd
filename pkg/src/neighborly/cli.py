"""Command-line entry points for the enumeration and verification toolkit.

Exit codes: 0 success, 1 a verification failed, 2 bad usage or unreadable
input, 3 a resource budget ran out (checkpoint written if requested).
"""

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from neighborly.canonical import canonical_form, canonical_key
from neighborly.gale import (
    count_cofacets,
    enumerate_gale_pairs,
    enumerate_minimal_diagrams,
    format_diagram,
    parse_diagram,
)
from neighborly.hull_verify import format_report, parse_points, verify_catalog
from neighborly.incmat import format_matrix, get_facet, parse_matrix
from neighborly.lattice import build_poset
from neighborly.search import load_campaign, run_campaign, solve_star_completion

BUNDLED = Path(__file__).resolve().parent / "data"


def _read_matrix(path):
    return parse_matrix(Path(path).read_text())


# --- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    root = Path(args.catalog) if args.catalog else BUNDLED / "catalog"
    try:
        files = sorted(root.iterdir()) if root.is_dir() else [root]
        entries = [parse_points(p.read_text()) for p in files if p.suffix == ".txt"]
    except (OSError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    report = verify_catalog(entries)
    sys.stdout.write(format_report(report))
    if args.scatter:
        with open(args.scatter, "w") as fh:
            for e in entries:
                fh.write("%d\t%d\t%s\n" % (e.v - e.d - 1, e.f - e.d - 1, e.name))
    ok = all(passed for _, checks in report for _, passed, _ in checks)
    return 0 if ok else 1


# --- gale --------------------------------------------------------------------


def cmd_gale(args) -> int:
    chosen = sum(
        [args.excess is not None, bool(args.minimal), args.cofacets is not None]
    )
    if chosen != 1:
        print("error: pick one of --excess, --minimal, --cofacets", file=sys.stderr)
        return 2
    if args.excess is not None:
        for a, b in enumerate_gale_pairs(args.excess):
            print("{%d,%d}" % (a, b))
        return 0
    if args.minimal:
        for D in enumerate_minimal_diagrams(args.max_label, args.max_n):
            print("%s cofacets=%d" % (format_diagram(D), count_cofacets(D)))
        return 0
    try:
        D = parse_diagram(args.cofacets)
    except ValueError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    print(count_cofacets(D))
    return 0


# --- enumerate ---------------------------------------------------------------


def _fingerprint(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _star_report(spec) -> str:
    res = solve_star_completion(spec)
    out = ["completions: %d" % len(res.completions)]
    seen = set()
    for c in res.completions:
        key = canonical_key(c.matrix)
        if key in seen:
            continue
        seen.add(key)
        out.append("")
        out.append(format_matrix(c.matrix).rstrip("\n"))
        out.append("two_neighborly: %s" % c.two_neighborly)
        for i, r, v in c.facet_failures:
            out.append("row %d extracts to %d facets x %d vertices: not allowed" % (i, r, v))
    out.append("")
    out.append("accepted: %d" % len(res.accepted))
    return "\n".join(out) + "\n"


def cmd_enumerate(args) -> int:
    path = Path(args.campaign)
    try:
        text = path.read_text()
        specs, mode = load_campaign(path)
    except (OSError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2

    if mode == "star":
        report = "".join(_star_report(sp) for sp in specs)
        if args.output:
            Path(args.output).write_text(report)
        else:
            sys.stdout.write(report)
        return 0

    start, seed = (0, 0), []
    fp = _fingerprint(text)
    if args.resume and os.path.exists(args.resume):
        try:
            ck = json.loads(Path(args.resume).read_text())
        except (OSError, ValueError) as e:
            print("error: bad checkpoint: %s" % e, file=sys.stderr)
            return 2
        if ck.get("fingerprint") != fp:
            print("error: checkpoint is for a different campaign", file=sys.stderr)
            return 2
        start = tuple(ck["position"])
        seed = [parse_matrix(b) for b in ck["results"]]

    out = run_campaign(
        specs,
        workers=args.workers,
        max_nodes=args.max_nodes,
        max_seconds=args.max_seconds,
        start=start,
        seed=seed,
    )
    if not out.completed:
        if args.resume:
            ck = {
                "campaign": str(path),
                "fingerprint": fp,
                "position": list(out.position),
                "results": [format_matrix(M) for M in out.matrices],
            }
            Path(args.resume).write_text(json.dumps(ck, indent=1))
            print("aborted at spec %d unit %d; checkpoint written to %s"
                  % (*out.position, args.resume), file=sys.stderr)
        else:
            print("aborted at spec %d unit %d" % out.position, file=sys.stderr)
        return 3

    blocks = "\n".join(format_matrix(M) for M in out.matrices)
    if args.output:
        Path(args.output).write_text(blocks)
        print("%d matrices" % len(out.matrices))
    else:
        sys.stdout.write(blocks)
        print("%d matrices" % len(out.matrices), file=sys.stderr)
    if args.resume and os.path.exists(args.resume):
        os.unlink(args.resume)
    return 0


# --- small wrappers ------------------------------------------------------------


def cmd_facet(args) -> int:
    M = _read_matrix(args.matrix)
    if not 0 <= args.row < M.rows:
        print("error: row %d out of range" % args.row, file=sys.stderr)
        return 2
    sys.stdout.write(format_matrix(get_facet(M, args.row)))
    return 0


def cmd_canon(args) -> int:
    M = _read_matrix(args.matrix)
    F = canonical_form(M)
    sys.stdout.write(format_matrix(F))
    print("key %s" % canonical_key(M).hex())
    return 0


def cmd_faces(args) -> int:
    M = _read_matrix(args.matrix)
    P = build_poset(M)
    for vmask, _, _t in P.faces_of_dim(args.k):
        print(" ".join(str(j) for j in P.vertex_indices(vmask)))
    return 0


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="neighborly")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("verify", help="check catalog coordinates against their matrices")
    p.add_argument("catalog", nargs="?", help="catalog file or directory (default: bundled)")
    p.add_argument("--scatter", help="write a TSV of (v-d-1, f-d-1, name)")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("gale", help="few-vertex classifications via Gale diagrams")
    p.add_argument("--excess", type=int, help="enumerate pair types with v+f-2d-2 = E")
    p.add_argument("--minimal", action="store_true", help="enumerate minimal diagrams")
    p.add_argument("--max-label", type=int, default=3)
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--cofacets", help="count cofacets of one diagram")
    p.set_defaults(fn=cmd_gale)

    p = sub.add_parser("enumerate", help="run a campaign file")
    p.add_argument("campaign")
    p.add_argument("--workers", type=int,
                   default=int(os.environ.get("NEIGHBORLY_WORKERS", "1")))
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--max-seconds", type=float)
    p.add_argument("--resume", help="checkpoint file to read and keep updated")
    p.add_argument("--output", help="write result matrices here instead of stdout")
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("facet", help="extract the facet matrix of one row")
    p.add_argument("matrix")
    p.add_argument("--row", type=int, required=True)
    p.set_defaults(fn=cmd_facet)

    p = sub.add_parser("canon", help="canonical form and key of a matrix")
    p.add_argument("matrix")
    p.set_defaults(fn=cmd_canon)

    p = sub.add_parser("faces", help="list faces of one dimension")
    p.add_argument("matrix")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(fn=cmd_faces)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except OSError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
