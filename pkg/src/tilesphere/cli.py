"""Command line interface: ``tilesphere <verb> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .angles import NUMERIC_TOL
from .avc import DEFAULT_MAX_DEGREE, DEFAULT_MAX_TILES, classify_remainders, enumerate_avcs, \
    enumerate_vertex_types
from .catalog import (EXIT_INCOMPLETE, EXIT_OK, anchored, catalog_codes, get_entry, verify_all)
from .export import export
from .geometry import NotRealizable
from .search import INCOMPLETE, SearchOptions, classify

EXIT_ERROR = 1


def _emit(args, data, text: str) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(data, indent=2))
    else:
        print(text)


def cmd_vertices(args) -> int:
    types = sorted(enumerate_vertex_types(args.m, args.max_degree))
    rem = classify_remainders(args.m, args.max_degree)
    data = {"m": args.m, "types": [str(v) for v in types],
            "remainders": {k: sorted(str(v) for v in vs) for k, vs in rem.as_dict().items()}}
    lines = [f"m={args.m}: {len(types)} vertex types up to degree {args.max_degree}"]
    lines += [f"  {v} (degree {v.degree})" for v in types]
    for k, vs in data["remainders"].items():
        lines.append(f"{k}: {', '.join(vs) or '-'}")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_avcs(args) -> int:
    avcs = enumerate_avcs(args.m, args.max_degree)
    data = [a.to_json() for a in avcs]
    _emit(args, data, "\n".join(str(a) for a in avcs) or "(none)")
    return EXIT_OK


def _options(args) -> SearchOptions:
    return SearchOptions(max_degree=args.max_degree, max_tiles=args.max_tiles,
                         allow_mirrored_quads=not args.single_chirality)


def cmd_classify(args) -> int:
    result = classify(args.m, _options(args))
    known = catalog_codes(max(args.m, 3))
    lines = [f"m={args.m}: {len(result.tilings)} tilings ({result.status}, "
             f"{result.total_nodes} nodes)"]
    for ct in result.sorted_tilings():
        entry = known.get(ct.code)
        name = entry.id if entry else "unknown"
        c = ct.tiling.census()
        realized = ", ".join(str(v) for v in sorted(ct.realized))
        lines.append(f"  {name}: f_P={c.f_P} f_Q={c.f_Q} vertices {{{realized}}}")
    data = result.to_json()
    for item, ct in zip(data["tilings"], result.sorted_tilings()):
        entry = known.get(ct.code)
        item["id"] = entry.id if entry else None
        item["code"] = ct.code.hex()
    _emit(args, data, "\n".join(lines))
    return EXIT_INCOMPLETE if result.status == INCOMPLETE else EXIT_OK


def cmd_verify(args) -> int:
    report = verify_all(args.up_to, _options(args))
    lines = []
    for r in report.per_m:
        flag = "ok" if r.ok else "MISMATCH"
        lines.append(f"m={r.m}: {flag} status={r.status} found={r.found} missing={r.missing} "
                     f"extra={r.extra} nodes={r.nodes}")
    for name, real in report.realizations.items():
        if "error" in real:
            lines.append(f"{name}: realization failed ({real['error']})")
    for a in report.anchors:
        if not a.ok:
            lines.append(f"anchor {a.name}: {a.value!r} vs {a.expected!r} FAILED")
    lines.append(f"exit code {report.exit_code}")
    _emit(args, report.to_json(), "\n".join(lines))
    return report.exit_code


def cmd_realize(args) -> int:
    entry = get_entry(args.id)
    beta = Fraction(args.beta) if args.beta is not None else None
    try:
        r = anchored(entry, beta)
    except (NotRealizable, ValueError) as exc:
        print(f"{args.id}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    data = r.to_json()
    data["id"] = entry.id
    text = (f"{entry.id}: angles {r.assignment.to_json()}\n"
            f"  x = {r.x:.12f}  y = {r.y:.12f}  max residual {r.max_residual:.2e}")
    _emit(args, data, text)
    return EXIT_OK if r.max_residual < NUMERIC_TOL else EXIT_ERROR


def cmd_export(args) -> int:
    entry = get_entry(args.id)
    export(entry, args.format, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tilesphere",
                                description="Tilings of the sphere by a regular polygon and a quadrilateral.")
    sub = p.add_subparsers(dest="verb", required=True)

    def text_or_json(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")

    def search_args(sp):
        sp.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
        sp.add_argument("--max-tiles", type=int, default=DEFAULT_MAX_TILES)
        sp.add_argument("--single-chirality", action="store_true",
                        help="forbid mirrored quadrilaterals")

    sp = sub.add_parser("vertices", help="list vertex types")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    text_or_json(sp)
    sp.set_defaults(func=cmd_vertices)

    sp = sub.add_parser("avcs", help="list candidate vertex sets")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    text_or_json(sp)
    sp.set_defaults(func=cmd_avcs)

    sp = sub.add_parser("classify", help="run the exhaustive search for one m")
    sp.add_argument("--m", type=int, required=True)
    search_args(sp)
    text_or_json(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("verify", help="classify m = 3..M and compare with the catalog")
    sp.add_argument("--up-to", type=int, required=True)
    search_args(sp)
    text_or_json(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("realize", help="edge lengths of a catalog tiling")
    sp.add_argument("--id", required=True)
    sp.add_argument("--beta", help="beta in units of pi, e.g. 7/10")
    text_or_json(sp)
    sp.set_defaults(func=cmd_realize)

    sp = sub.add_parser("export", help="write a catalog tiling as json or svg")
    sp.add_argument("--id", required=True)
    sp.add_argument("--format", choices=("json", "svg"), default="json")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
