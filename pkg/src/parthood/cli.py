"""Command line front end.

Exit codes: 0 success, 1 consistency check failed, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import alternate
from .decomposition import (DEFAULT_TOL, MEASURES, atoms_to_csv, atoms_to_json, decompose,
                            pointwise_to_csv)
from .lattice import (Lattice, LatticeError, children, export_dot, format_antichain,
                      parents, parse_antichain)
from .probability import DistributionError, read_distribution

VIEWS = ("antichain", "bitstring", "statement")


class UsageError(Exception):
    pass


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be > 0")
    return v


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load(args):
    try:
        dist = read_distribution(args.input)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    except DistributionError as exc:
        raise UsageError(f"{args.input}: {exc}") from None
    if args.n is not None and args.n != dist.n:
        raise UsageError(f"--n {args.n} does not match the {dist.n} sources in {args.input}")
    return dist


def _lattice(n: int) -> Lattice:
    try:
        return Lattice(n)
    except LatticeError as exc:
        raise UsageError(str(exc)) from None


def cmd_decompose(args) -> int:
    dist = _load(args)
    lattice = _lattice(dist.n)
    result = decompose(dist, args.measure, lattice, keep_pointwise=args.emit_pointwise,
                       tolerance=args.tolerance)
    split = args.emit_split and args.measure == "sx"
    if args.emit_split and not split:
        print("note: --emit-split only applies to the sx measure", file=sys.stderr)
    if args.format == "json":
        _write(atoms_to_json(result, split=split, pointwise=args.emit_pointwise), args.output)
    else:
        _write(atoms_to_csv(result, split=split), args.output)
        if args.emit_pointwise and result.pointwise:
            text = pointwise_to_csv(result, split=split)
            if args.output in (None, "-"):
                sys.stdout.write("\n" + text)
            else:
                root, ext = os.path.splitext(args.output)
                _write(text, f"{root}_pointwise{ext or '.csv'}")
    print(result.diagnostics.summary(), file=sys.stderr)
    return 0 if result.diagnostics.passed else 1


def cmd_validate(args) -> int:
    dist = _load(args)
    result = decompose(dist, args.measure, _lattice(dist.n), keep_pointwise=False,
                       tolerance=args.tolerance)
    report = result.diagnostics
    doc = report.to_dict()
    doc["measure"] = args.measure
    _write(json.dumps(doc, indent=2) + "\n", args.output)
    print(report.summary(), file=sys.stderr)
    return 0 if report.passed else 1


def cmd_lattice(args) -> int:
    lattice = _lattice(args.n)
    if args.format == "dot":
        _write(export_dot(lattice, args.view), args.output)
        return 0
    nodes = lattice.nodes
    doc = {
        "n": lattice.n,
        "view": args.view,
        "nodes": [{"id": i, "table": x.table, "label": x.label(args.view)}
                  for i, x in enumerate(nodes)],
        "edges": [{"child": c, "parent": p} for c, p in lattice.cover_edges()],
    }
    _write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", args.output)
    return 0


def _describe(node) -> dict:
    return {"antichain": node.label("antichain"), "bitstring": node.label("bitstring"),
            "statement": node.label("statement")}


def cmd_children(args) -> int:
    lattice = _lattice(args.n)
    try:
        alpha = parse_antichain(args.antichain, args.n)
        node = lattice.node(alpha)
    except LatticeError as exc:
        raise UsageError(str(exc)) from None
    doc = {"node": _describe(node), "children": [_describe(c) for c in children(node)]}
    if args.parents:
        doc["parents"] = [_describe(p) for p in parents(node)]
    if args.format == "json":
        _write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", args.output)
        return 0
    lines = [f"node: {format_antichain(node.antichain)}  {node.bitstring()}  {node.statement}"]
    for key in ("children", "parents"):
        if key not in doc:
            continue
        lines.append(f"{key} ({len(doc[key])}):")
        for d in doc[key]:
            lines.append(f"  {d['antichain']}  {d['bitstring']}  {d['statement']}")
    _write("\n".join(lines) + "\n", args.output)
    return 0


def cmd_rankcheck(args) -> int:
    lattice = _lattice(args.n)
    if args.criterion == "syn":
        report = alternate.strong_synergy_rank_check(lattice)
    else:
        report = alternate.rank_check(args.criterion, lattice)
    _write(report.to_json(), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parthood",
                                     description="Exact partial information decomposition.")
    sub = parser.add_subparsers(dest="command", required=True)

    def dist_args(p):
        p.add_argument("--input", "-i", required=True, help="CSV or JSON distribution")
        p.add_argument("--measure", "-m", choices=MEASURES, default="sx")
        p.add_argument("--n", type=int, help="expected number of sources")
        p.add_argument("--tolerance", type=_positive_float, default=DEFAULT_TOL)
        p.add_argument("--output", "-o")

    p = sub.add_parser("decompose", help="decompose a distribution into atoms")
    dist_args(p)
    p.add_argument("--format", "-f", choices=("json", "csv"), default="csv")
    p.add_argument("--emit-pointwise", action="store_true")
    p.add_argument("--emit-split", action="store_true",
                   help="add informative / misinformative atom columns (sx only)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("validate", help="check atoms against mutual information")
    dist_args(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("lattice", help="export the lattice for n sources")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", "-f", choices=("dot", "json"), default="dot")
    p.add_argument("--view", choices=VIEWS, default="antichain")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("children", help="list the children of a node")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("antichain", help='e.g. "1;2,3" for {1}{2,3}')
    p.add_argument("--parents", action="store_true", help="also list parents")
    p.add_argument("--format", "-f", choices=("text", "json"), default="text")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_children)

    p = sub.add_parser("rankcheck", help="rank of a criterion's coefficient matrix")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--criterion", choices=alternate.CRITERIA, default="syn")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_rankcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
