"""Command-line entry point ``ekrw``.

Exit codes: 0 success or verified, 1 usage or input error, 2 mismatch against
a formula, 3 inconclusive (budget ran out).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import canonical
from .corpus import corpus
from .family import (
    FamilyFormatError,
    SetFamily,
    degrees,
    embeds_into,
    family_from_json,
    is_intersecting,
    is_trivial,
    max_degree,
)
from .separability import (
    build_prop1_family,
    build_prop2_family,
    cross_intersecting_partitions,
    disjointness_components,
    non_separable,
)
from .shifting import (
    classify_shift_outcome,
    enumerate_shift_preimages,
    guarded_stabilize,
    hm_or_ekr_centers,
    hm_triples,
    is_neither_ekr_nor_hm,
    potential,
    shift_family,
    stabilize,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _read_family(path: str) -> SetFamily:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return family_from_json(text)
    except FamilyFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


# -- output ------------------------------------------------------------------


def _table(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, val in obj.items():
            if isinstance(val, (dict, list)) and val and not _flat_list(val):
                lines.append(f"{pad}{key}:")
                lines.extend(_table(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_cell(val)}")
    elif isinstance(obj, list):
        if obj and all(isinstance(r, dict) for r in obj):
            cols = list(obj[0].keys())
            cells = [[_cell(r.get(c)) for c in cols] for r in obj]
            widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
            lines.append(pad + "  ".join(c.ljust(w) for c, w in zip(cols, widths)))
            for row in cells:
                lines.append(pad + "  ".join(v.ljust(w) for v, w in zip(row, widths)))
        else:
            for item in obj:
                lines.append(f"{pad}- {_cell(item)}")
    else:
        lines.append(pad + _cell(obj))
    return lines


def _flat_list(val) -> bool:
    return isinstance(val, list) and all(not isinstance(v, (dict, list)) or _flat_list(v) for v in val)


def _cell(val) -> str:
    if isinstance(val, (dict, list)):
        return json.dumps(val, separators=(",", ":"))
    if val is None:
        return "-"
    return str(val)


def _emit(args, payload, table_rows=None) -> None:
    if args.format == "table":
        text = "\n".join(_table(table_rows if table_rows is not None else payload)) + "\n"
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.output in (None, "-", "stdout"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- subcommands -------------------------------------------------------------


def cmd_construct(args) -> int:
    kind, idx = canonical.parse_kind(args.kind)
    spec = canonical.CanonicalSpec(
        kind, args.n, args.k, idx,
        center=args.center,
        base=tuple(args.base) if args.base else None,
        jset=tuple(args.jset) if args.jset else None,
    )
    fam = canonical.build(spec)
    if args.format == "json" and args.output in (None, "-", "stdout") and not args.verbose:
        sys.stdout.write(fam.to_json() + "\n")
        return 0
    _emit(args, {"family": fam.to_dict(), "size": len(fam)} if args.verbose else fam.to_dict())
    return 0


def cmd_bounds(args) -> int:
    _emit(args, canonical.all_bounds(args.n, args.k, args.s))
    return 0


def classify_report(fam: SetFamily) -> dict:
    inter = is_intersecting(fam)
    report = {
        "n": fam.n,
        "k": fam.k,
        "size": len(fam),
        "intersecting": inter,
        "trivial_center": is_trivial(fam) if fam.edges else None,
        "hm_or_ekr_centers": sorted(hm_or_ekr_centers(fam)),
        "hm_triples": [list(t) for t in hm_triples(fam)],
        "max_degree": max_degree(fam),
        "degrees": degrees(fam),
    }
    embeds = {}
    targets = [("F0", canonical.star_spec(fam.n, fam.k)), ("F1", canonical.hm_spec(fam.n, fam.k)),
               ("G2", canonical.g_spec(fam.n, fam.k, 2)), ("J2", canonical.j_spec(fam.n, fam.k, 2))]
    for label, spec in targets:
        try:
            target = canonical.build(spec)
        except (ValueError, IndexError):
            embeds[label] = None
            continue
        embeds[label] = embeds_into(fam, target) is not None
    report["embeds_into"] = embeds
    return report


def cmd_classify(args) -> int:
    _emit(args, classify_report(_read_family(args.family)))
    return 0


def cmd_shift(args) -> int:
    fam = _read_family(args.family)
    image = shift_family(fam, args.x, args.y)
    payload = {
        "family": image.to_dict(),
        "trace": {
            "applied": [[args.x, args.y, len(set(fam.edges) - set(image.edges))]],
            "potential_history": [potential(fam), potential(image)],
        },
    }
    if is_intersecting(fam) and is_neither_ekr_nor_hm(fam):
        payload["outcome"] = classify_shift_outcome(fam, args.x, args.y).kind
    _emit(args, payload)
    return 0


def cmd_stabilize(args) -> int:
    fam = _read_family(args.family)
    if args.guarded:
        trace = guarded_stabilize(fam, args.exclude)
        payload = {"family": trace.final.to_dict(), "trace": trace.to_dict()}
    else:
        trace = stabilize(fam, args.exclude)
        payload = {"family": trace.final.to_dict(), "trace": trace.to_dict()}
    _emit(args, payload)
    return 0


def cmd_preimages(args) -> int:
    fam = _read_family(args.family)
    pre = enumerate_shift_preimages(fam, args.x, args.y)
    _emit(args, {"count": len(pre), "preimages": [p.to_dict() for p in pre]})
    return 0


def cmd_separability(args) -> int:
    fam = _read_family(args.family)
    index = {e: i for i, e in enumerate(fam.edges)}
    comps = [[index[e] for e in comp] for comp in disjointness_components(fam)]
    payload = {"non_separable": non_separable(fam), "components": comps}
    if len(comps) <= 12:
        payload["partitions"] = len(cross_intersecting_partitions(fam))
    _emit(args, payload)
    return 0


def cmd_prop1(args) -> int:
    fam = build_prop1_family(args.c, args.a, args.b, args.s)
    _emit(args, {"family": fam.to_dict(), "size": len(fam), "non_separable": non_separable(fam)})
    return 0


def cmd_prop2(args) -> int:
    fam = build_prop2_family(args.m, args.r, args.asize)
    _emit(args, {"family": fam.to_dict(), "size": len(fam), "non_separable": non_separable(fam)})
    return 0


def cmd_search(args) -> int:
    from .search import ConstraintSet, enumerate_maximum, max_family

    cons = ConstraintSet.from_names(args.forbid.split(",") if args.forbid else [], args.degree_cap, args.min_avoid)
    fn = enumerate_maximum if args.enumerate else max_family
    out = fn(args.n, args.k, cons, budget=args.budget, workers=args.workers, backend=args.backend,
             split_depth=args.split_depth, log_limit=args.log)
    payload = out.to_dict()
    _emit(args, payload)
    return 0 if out.complete else 3


def cmd_verify(args) -> int:
    from .verify import EXIT_CODES, parse_theorem, verify_theorem

    name, s = parse_theorem(args.theorem)
    report = verify_theorem(name, args.n, args.k, s, budget=args.budget, workers=args.workers,
                            backend=args.backend)
    if args.format == "table":
        report = {k: v for k, v in report.items() if k != "certificate"}
    _emit(args, report)
    return EXIT_CODES[report["status"]]


def cmd_verify_all(args) -> int:
    from .verify import DEFAULT_GRID, EXIT_CODES, verify_theorem, worst_status

    rows = []
    for name, n, k, s in DEFAULT_GRID:
        r = verify_theorem(name, n, k, s, budget=args.budget, workers=args.workers, backend=args.backend)
        rows.append({
            "theorem": r["theorem"], "n": n, "k": k, "formula": r["formula"], "optimum": r["optimum"],
            "classes": r["witness_classes"], "expected": r["expected_classes"], "status": r["status"],
            "elapsed": r["elapsed"],
        })
        print(f"{r['theorem']:8s} n={n:<3d} k={k:<2d} {r['status']}", file=sys.stderr)
    worst = worst_status(r["status"] for r in rows)
    _emit(args, {"rows": rows, "worst": worst}, table_rows=rows)
    return EXIT_CODES[worst]


def cmd_corpus(args) -> int:
    fams = corpus(args.seed, args.count, args.max_n, args.max_k)
    _emit(args, [f.to_dict() for f in fams])
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", default=None, help="write to this path instead of stdout")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized corpora")
    common.add_argument("--workers", type=int, default=1)

    p = _Parser(prog="ekrw", description="Intersecting families: constructions, shifting, exact search.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("construct", parents=[common], help="build a named family")
    s.add_argument("--kind", required=True, help="star, hm, t3, g:<i> or j:<i>")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--center", type=int)
    s.add_argument("--base", type=_int_list, help="F, S or E as comma-separated elements")
    s.add_argument("--jset", type=_int_list, help="J for j:<i>")
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("bounds", parents=[common], help="evaluate the closed-form bounds")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--s", type=int)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("classify", parents=[common], help="structural report for a family file")
    s.add_argument("--family", required=True)
    s.set_defaults(func=cmd_classify)

    for name, func in (("shift", cmd_shift), ("preimages", cmd_preimages)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--family", required=True)
        s.add_argument("--x", type=int, required=True)
        s.add_argument("--y", type=int, required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("stabilize", parents=[common], help="shift until stable")
    s.add_argument("--family", required=True)
    s.add_argument("--exclude", type=_int_list, default=[])
    s.add_argument("--guarded", action="store_true", help="refuse shifts that reach EKR or HM")
    s.set_defaults(func=cmd_stabilize)

    s = sub.add_parser("separability", parents=[common])
    s.add_argument("--family", required=True)
    s.set_defaults(func=cmd_separability)

    s = sub.add_parser("prop1", parents=[common])
    s.add_argument("--c", type=int, required=True)
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--s", type=int)
    s.set_defaults(func=cmd_prop1)

    s = sub.add_parser("prop2", parents=[common])
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--asize", type=int, required=True)
    s.set_defaults(func=cmd_prop2)

    search_opts = argparse.ArgumentParser(add_help=False)
    search_opts.add_argument("--budget", type=float, default=None, help="seconds (default 300 or EKRW_BUDGET_SECS)")
    search_opts.add_argument("--backend", choices=("compiled", "python"), default=None)

    s = sub.add_parser("search", parents=[common, search_opts], help="exact maximum family")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--forbid", default="", help="comma list from trivial,hm,g2")
    s.add_argument("--degree-cap", type=int, default=None)
    s.add_argument("--min-avoid", type=int, default=0)
    s.add_argument("--enumerate", action="store_true", help="all maximum families up to isomorphism")
    s.add_argument("--split-depth", type=int, default=2)
    s.add_argument("--log", type=int, default=0, help="keep the first N search events in the certificate")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("verify", parents=[common, search_opts], help="check a bound against search")
    s.add_argument("--theorem", required=True, help="ekr, hm, hm2:<s>, main or maxdeg")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("verify-all", parents=[common, search_opts], help="run the whole verification grid")
    s.set_defaults(func=cmd_verify_all)

    s = sub.add_parser("corpus", parents=[common], help="seeded random intersecting families")
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--max-n", type=int, default=10)
    s.add_argument("--max-k", type=int, default=4)
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"ekrw {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
