"""Command-line front end.

Exit codes: 0 success, 1 a mathematical check failed (first witness printed),
2 usage/parse/validation problems.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import free_modal, modal, suites
from .errors import HyperdlError, ParseError, ValidationError
from .fell import nonconvex_limit_report
from .hyperspaces import hyper_family
from .io import InputDocument, emit_dot, family_dot, parse_input, to_canonical_json
from .lattices import priestley_dual, upset_lattice
from .posets import bit_indices, enumerate_posets
from .reports import Report


def _load(path: str) -> InputDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_input(fh.read())


def _doc_poset(doc: InputDocument):
    """The poset payload of any document kind, with its element names."""
    if doc.kind == "poset":
        return doc.poset, doc.names
    if doc.kind == "lattice":
        return doc.lattice.order, doc.names
    if doc.kind == "modal-space":
        return doc.modal_space.space, doc.names
    return doc.modal_algebra.lattice.order, doc.names


def _doc_lattice(doc: InputDocument):
    if doc.kind == "lattice":
        return doc.lattice
    if doc.kind == "modal-algebra":
        return doc.modal_algebra.lattice
    raise ParseError(f"expected a lattice document, got {doc.kind!r}")


def _set_label(mask: int, names) -> str:
    return "{" + ",".join(names[i] for i in bit_indices(mask)) + "}"


def _print_poset(poset, names, out):
    print(f"elements: {', '.join(names)}", file=out)
    covers = ", ".join(f"{names[i]} < {names[j]}" for i, j in poset.covers())
    print(f"covers: {covers if covers else '(none)'}", file=out)


def cmd_dual(args, out) -> int:
    doc = _load(args.file)
    if doc.kind in ("lattice", "modal-algebra"):
        lat = _doc_lattice(doc)
        dual = priestley_dual(lat)
        names = tuple(_set_label(p, doc.names) for p in dual.points)
        if args.json:
            payload = {"kind": "poset", "elements": list(names),
                       "leq": sorted([names[i], names[j]]
                                     for i in range(dual.space.n)
                                     for j in bit_indices(dual.space.up[i]) if j != i)}
            print(json.dumps(payload, indent=2, sort_keys=True), file=out)
        else:
            print(f"prime filter space of the input lattice ({dual.space.n} points)", file=out)
            _print_poset(dual.space, names, out)
        return 0
    poset, names = _doc_poset(doc)
    cu = upset_lattice(poset)
    labels = tuple(_set_label(s, names) for s in cu.sets)
    if args.json:
        payload = {"kind": "lattice", "elements": list(labels),
                   "leq": sorted([labels[i], labels[j]]
                                 for i in range(cu.n)
                                 for j in bit_indices(cu.order.up[i]) if j != i)}
        print(json.dumps(payload, indent=2, sort_keys=True), file=out)
    else:
        print(f"clopen-upset lattice of the input poset ({cu.n} elements)", file=out)
        _print_poset(cu.order, labels, out)
    return 0


def cmd_hyperspace(args, out) -> int:
    doc = _load(args.file)
    poset, names = _doc_poset(doc)
    fam = hyper_family(poset, args.which)
    if args.dot:
        print(family_dot(fam.family.members, fam.family.leq, names), end="", file=out)
        return 0
    if args.json:
        payload = {"which": args.which,
                   "members": [_set_label(m, names) for m in fam.family.members],
                   "order": args.which in ("F", "C") and "egli-milner" or "inclusion"}
        print(json.dumps(payload, indent=2), file=out)
        return 0
    print(f"family {args.which} over {poset.n} points: {len(fam.family)} members", file=out)
    for m in fam.family.members:
        print(f"  {_set_label(m, names)}", file=out)
    return 0


def cmd_free(args, out) -> int:
    doc = _load(args.file)
    lat = _doc_lattice(doc)
    if args.which == "box":
        gl = free_modal.box_lattice(lat.order)
        size = gl.lattice.n
    elif args.which == "diamond":
        gl = free_modal.diamond_lattice(lat.order)
        size = gl.lattice.n
    else:
        route = free_modal.concrete_modal_lattice(lat)
        size = len(route)
    if args.count:
        print(size, file=out)
        return 0
    if args.which in ("box", "diamond"):
        labels = tuple(_set_label(s, doc.names) for s in gl.lattice.sets)
        print(f"free {args.which} lattice: {size} elements", file=out)
        _print_poset(gl.lattice.order, labels, out)
    else:
        print(f"concrete free modal lattice: {size} elements "
              f"over a {route.npoints}-point ambient", file=out)
        print(f"join-irreducibles: {len(route.ji)}", file=out)
    return 0


def cmd_wpp(args, out) -> int:
    doc = _load(args.file)
    lat = _doc_lattice(doc)
    wpf = free_modal.weakly_prime_pairs(lat)
    if args.json:
        payload = [{"filter": _set_label(f, doc.names), "ideal": _set_label(i, doc.names)}
                   for f, i in wpf.pairs]
        print(json.dumps(payload, indent=2), file=out)
        return 0
    print(f"{len(wpf)} weakly prime pairs", file=out)
    for f, i in wpf.pairs:
        print(f"  F={_set_label(f, doc.names)}  I={_set_label(i, doc.names)}", file=out)
    return 0


def cmd_normalize(args, out) -> int:
    doc = _load(args.file)
    lat = _doc_lattice(doc)
    term = free_modal.parse_term(args.term, doc.name_index())
    route = free_modal.concrete_modal_lattice(lat)
    value = free_modal.term_eval(lat, term, route)
    print(free_modal.normal_form(lat, value, route), file=out)
    return 0


def cmd_eq(args, out) -> int:
    doc = _load(args.file)
    lat = _doc_lattice(doc)
    names = doc.name_index()
    t1 = free_modal.parse_term(args.left, names)
    t2 = free_modal.parse_term(args.right, names)
    route = free_modal.concrete_modal_lattice(lat)
    equal = free_modal.term_eval(lat, t1, route) == free_modal.term_eval(lat, t2, route)
    print("equal" if equal else "distinct", file=out)
    return 0


def cmd_dualize(args, out) -> int:
    doc = _load(args.file)
    if doc.kind == "modal-space":
        alg = modal.space_to_algebra(doc.modal_space)
        names = tuple(_set_label(s, doc.names) for s in alg.lattice.sets)
        payload = {"kind": "modal-algebra", "flavor": alg.kind,
                   "elements": list(names),
                   "leq": sorted([names[i], names[j]] for i in range(alg.lattice.n)
                                 for j in bit_indices(alg.lattice.order.up[i]) if j != i)}
        if alg.box is not None:
            payload["box"] = [names[alg.box[i]] for i in range(alg.lattice.n)]
        if alg.dia is not None:
            payload["dia"] = [names[alg.dia[i]] for i in range(alg.lattice.n)]
        print(json.dumps(payload, indent=2, sort_keys=True), file=out)
        return 0
    if doc.kind == "modal-algebra":
        space = modal.algebra_to_space(doc.modal_algebra)
        dual = priestley_dual(doc.modal_algebra.lattice)
        names = tuple(_set_label(p, doc.names) for p in dual.points)
        payload = {"kind": "modal-space", "flavor": space.kind,
                   "elements": list(names),
                   "leq": sorted([names[i], names[j]] for i in range(space.space.n)
                                 for j in bit_indices(space.space.up[i]) if j != i),
                   "R": sorted([names[x], names[y]] for x in range(space.space.n)
                               for y in bit_indices(space.rel[x]))}
        print(json.dumps(payload, indent=2, sort_keys=True), file=out)
        return 0
    raise ParseError("dualize needs a modal-space or modal-algebra document")


def cmd_check(args, out) -> int:
    if args.suite == "counterexample":
        reports = suites.suite_counterexample(args.size or 6)
    else:
        reports = suites.run_suite(args.suite, args.size, args.seed)
    return _emit_reports(reports, args.json, out)


def cmd_counterexample(args, out) -> int:
    reports = [nonconvex_limit_report(args.bound)]
    return _emit_reports(reports, args.json, out)


def _emit_reports(reports: list[Report], as_json: bool, out) -> int:
    if as_json:
        print(json.dumps([r.to_json() for r in reports], indent=2), file=out)
    else:
        for r in reports:
            print(r.summary(), file=out)
    return 0 if all(r.passed for r in reports) else 1


def cmd_enumerate(args, out) -> int:
    count = 0
    for p in enumerate_posets(args.n):
        count += 1
        if not args.count:
            names = tuple(str(i) for i in range(p.n))
            covers = ", ".join(f"{i}<{j}" for i, j in p.covers())
            print(f"poset {count}: covers [{covers}]", file=out)
    if args.count:
        print(count, file=out)
    return 0


def cmd_dot(args, out) -> int:
    doc = _load(args.file)
    poset, names = _doc_poset(doc)
    print(emit_dot(poset, names), end="", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperdl",
        description="Finite Priestley duality, hyperspaces, free modal lattices, "
                    "and exhaustive duality checking.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dual", help="dual space of a lattice / dual lattice of a poset")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_dual)

    p = sub.add_parser("hyperspace", help="list a hyperspace family")
    p.add_argument("file")
    p.add_argument("--which", choices=["F", "F+", "F-", "C"], default="C")
    p.add_argument("--dot", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_hyperspace)

    p = sub.add_parser("free", help="free lattice constructions over a lattice")
    p.add_argument("file")
    p.add_argument("--which", choices=["box", "diamond", "dbox"], default="dbox")
    p.add_argument("--count", action="store_true")
    p.set_defaults(fn=cmd_free)

    p = sub.add_parser("wpp", help="weakly prime filter/ideal pairs")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_wpp)

    p = sub.add_parser("normalize", help="canonical form of a modal term")
    p.add_argument("file")
    p.add_argument("term")
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("eq", help="decide equality of two modal terms")
    p.add_argument("file")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(fn=cmd_eq)

    p = sub.add_parser("dualize", help="modal space <-> modal algebra")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_dualize)

    p = sub.add_parser("check", help="run a verification suite")
    p.add_argument("suite", choices=sorted(suites.SUITES) + ["counterexample"])
    p.add_argument("--size", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("counterexample", help="closure report for the non-convex limit")
    p.add_argument("--bound", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_counterexample)

    p = sub.add_parser("enumerate", help="enumerate posets up to isomorphism")
    p.add_argument("n", type=int)
    p.add_argument("--count", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("dot", help="DOT diagram of the document's poset")
    p.add_argument("file")
    p.set_defaults(fn=cmd_dot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args, sys.stdout)
    except (ParseError, ValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HyperdlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
