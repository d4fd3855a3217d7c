"""Command line entry point: ``dilacov <command> [options]``.

Exit status is 0 on success, 1 on a domain or format error, 2 when a
size bound would be exceeded and 3 when an internal invariant fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .abelian import DEFAULT_MAX_ORDER, enumerate_subgroups, parse_group
from .cohomology import (
    DEFAULT_ENUM_BOUND,
    DEFAULT_MAX_CLASSES,
    cohomology_groups,
    datum_from_dilation,
    enumerate_h1_classes,
    format_factors,
)
from .covers import (
    certify,
    class_of_cover,
    connectivity,
    contract_cover,
    cover_from_dict,
    cover_to_dict,
    enumerate_covers,
    oracle_check,
    stabilize_cover,
    verify_unramified,
)
from .dilation import enumerate_dilations, load_dilation, trivial_datum
from .errors import DilacovError
from .graph import components, dump_graph, load_graph, stabilize, to_dot, weighted_edge_contraction


class Output:
    """Collects key=value records or a plain table, depending on --format."""

    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def record(self, **kv):
        if self.fmt == "records":
            print(" ".join(f"{k}={_fmt(v)}" for k, v in kv.items()), file=self.stream)
        else:
            print("  ".join(f"{k}: {_fmt(v, keep_spaces=True)}" for k, v in kv.items()), file=self.stream)

    def line(self, text: str):
        print(text, file=self.stream)


def _fmt(v, keep_spaces=False):
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v) if keep_spaces else str(v).replace(" ", "_")


def _elem(grp, g) -> str:
    return grp.format_element(g)


def _load_datum(args, G, grp):
    if getattr(args, "dilation", None):
        return load_dilation(args.dilation, G, grp)
    return trivial_datum(G, grp)


def cmd_subgroups(args, out: Output):
    grp = parse_group(args.group)
    subs = enumerate_subgroups(grp, args.max_order)
    out.record(group=str(grp), order=grp.order, subgroups=len(subs))
    for i, H in enumerate(subs):
        out.record(index=i, subgroup=H.label(), order=H.order, index_in_G=H.index, cyclic=H.is_cyclic())
    return 0


def cmd_cohomology(args, out: Output):
    G = load_graph(args.graph)
    grp = parse_group(args.group)
    D = _load_datum(args, G, grp)
    res = cohomology_groups(datum_from_dilation(D), True, args.max_enum)
    if out.fmt == "records":
        out.record(H0=format_factors(res.h0_factors), H1=format_factors(res.h1_factors),
                   classes=res.class_count, enumeration_checked=res.checked_by_enumeration)
    else:
        out.line(f"H0 = {format_factors(res.h0_factors)}")
        out.line(f"H1 = {format_factors(res.h1_factors)}")
    return 0


def cmd_classes(args, out: Output):
    G = load_graph(args.graph)
    grp = parse_group(args.group)
    D = _load_datum(args, G, grp)
    res = enumerate_h1_classes(D, args.max_classes)
    out.record(H1=format_factors(res.h1_factors), classes=res.class_count)
    if out.fmt != "records":
        out.line("class_index, edge, eta_s, eta_t")
    for i in range(res.class_count):
        eta = res.representative_of(i)
        for e in G.edges:
            es, et = eta[e]
            if out.fmt == "records":
                out.record(class_index=i, edge=f"{e[0]}-{e[1]}", eta_s=_elem(grp, es), eta_t=_elem(grp, et))
            else:
                out.line(f"{i}, {e[0]}-{e[1]}, {_elem(grp, es)}, {_elem(grp, et)}")
    return 0


def cmd_enumerate(args, out: Output):
    G = load_graph(args.graph)
    grp = parse_group(args.group)
    if args.mode == "unramified" and not args.expand_edge_groups:
        print("warning: edge groups pinned to D(s)&D(t); admissibility can differ across "
              "edge-group choices, --expand-edge-groups is authoritative", file=sys.stderr)
    cat = enumerate_covers(
        G, grp, args.mode, args.expand_edge_groups, args.cyclic_edges_only,
        genus="pullback", max_order=args.max_order, max_classes=args.max_classes,
        keep_covers=bool(args.dot or args.save),
    )
    out.record(covers=cat.total, connected=cat.connected, stratifications=len(cat.data),
               mode=cat.mode, group=",".join(map(str, grp.invariant_factors)) or "1")
    for k, (D, n) in enumerate(zip(cat.data, cat.class_counts)):
        out.record(datum_id=k, classes=n, dilation=D.describe().replace(" ", ";"))
    if args.catalog:
        for row in cat.rows:
            out.line(row.record() if out.fmt == "records" else
                     f"{row.datum_id}, {row.class_index}, {row.components}, {int(row.connected)}, "
                     f"{row.total_vertices}, {row.total_edges}")
    if args.save:
        os.makedirs(args.save, exist_ok=True)
        for row in cat.rows:
            with open(os.path.join(args.save, f"cover_{row.datum_id}_{row.class_index}.json"), "w") as fh:
                json.dump(cover_to_dict(row.cover), fh, sort_keys=True)
    if args.dot:
        os.makedirs(args.dot, exist_ok=True)
        for row in cat.rows:
            c = row.cover
            clusters = {f"over v{v}": [y for y in c.fibers[v]] for v in G.vertices}
            with open(os.path.join(args.dot, f"cover_{row.datum_id}_{row.class_index}.dot"), "w") as fh:
                fh.write(to_dot(c.total, "cover", c.edge_degrees(), clusters))
    return 0


def _load_cover(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        from .errors import FormatError

        raise FormatError(f"{path}: {exc}") from None
    return cover_from_dict(raw)


def _report_cover(c, out: Output):
    certify(c)
    cls = class_of_cover(c)
    out.record(certified=True, datum=c.datum.describe().replace(" ", ";"), class_index=cls.class_index)
    if c.base.genus is not None and c.total.genus is not None:
        rr = verify_unramified(c)
        out.record(unramified=rr.unramified, effective=rr.effective, global_rh=rr.global_rh,
                   chi_total=rr.chi_total, chi_base=rr.chi_base, degree=rr.degree)
    if len(components(c.base)) == 1:
        conn = connectivity(c)
        out.record(components=conn.components, connected=conn.connected, witness=conn.describe())


def cmd_verify_cover(args, out: Output):
    _report_cover(_load_cover(args.cover), out)
    return 0


def _parse_edges(text):
    edges = []
    for part in text.split(","):
        a, b = (int(x) for x in part.split("-"))
        edges.append((min(a, b), max(a, b)))
    return edges


def cmd_contract(args, out: Output):
    edges = _parse_edges(args.edges) if args.edges else []
    if args.cover:
        c = contract_cover(_load_cover(args.cover), edges)
        _report_cover(c, out)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(cover_to_dict(c), fh, sort_keys=True)
        return 0
    H = weighted_edge_contraction(load_graph(args.graph), edges)
    out.line(dump_graph(H))
    return 0


def cmd_stabilize(args, out: Output):
    if args.cover:
        c = stabilize_cover(_load_cover(args.cover))
        _report_cover(c, out)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(cover_to_dict(c), fh, sort_keys=True)
        return 0
    out.line(dump_graph(stabilize(load_graph(args.graph))))
    return 0


def cmd_oracle(args, out: Output):
    G = load_graph(args.graph)
    grp = parse_group(args.group)
    if len(G.edges) > args.max_edges:
        from .errors import ResourceLimitError

        raise ResourceLimitError(f"oracle graphs are limited to {args.max_edges} edges, got {len(G.edges)}")
    bad = 0
    total = 0
    for D in enumerate_dilations(G, grp, True, False, False, args.max_order):
        rep = oracle_check(D)
        total += 1
        if not rep.ok:
            bad += 1
            out.record(datum=D.describe().replace(" ", ";"), h1=rep.h1_order, iso_classes=rep.iso_classes,
                       detail=rep.detail)
    out.record(oracle="OK" if not bad else "FAIL", classes_match="all" if not bad else f"{total - bad}/{total}",
               data=total)
    return 0 if not bad else 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dilacov", description="Dilated cohomology and G-covers of graphs")
    p.add_argument("--version", action="version",
                   version=f"dilacov {__version__} (abelian G-covers of graphs via dilated cohomology)")
    _common_options(p, defaults=True)
    common = argparse.ArgumentParser(add_help=False)
    _common_options(common, defaults=False)
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("subgroups", help="list the subgroup lattice")
    s.add_argument("--group", required=True)
    s.set_defaults(func=cmd_subgroups)

    for name, func, helptext in (("cohomology", cmd_cohomology, "H0 and H1 of a dilation datum"),
                                 ("classes", cmd_classes, "explicit H1 class representatives")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--graph", required=True)
        s.add_argument("--group", required=True)
        s.add_argument("--dilation")
        s.set_defaults(func=func)

    s = sub.add_parser("enumerate", help="enumerate covers")
    s.add_argument("--graph", required=True)
    s.add_argument("--group", required=True)
    s.add_argument("--mode", choices=["all", "unramified"], default="unramified")
    s.add_argument("--expand-edge-groups", action="store_true")
    s.add_argument("--cyclic-edges-only", action="store_true")
    s.add_argument("--catalog", action="store_true", help="one line per cover")
    s.add_argument("--dot", metavar="DIR")
    s.add_argument("--save", metavar="DIR", help="write every cover as a cover file")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("verify-cover", help="certify a cover file")
    s.add_argument("--cover", required=True)
    s.set_defaults(func=cmd_verify_cover)

    for name, func in (("contract", cmd_contract), ("stabilize", cmd_stabilize)):
        s = sub.add_parser(name)
        g = s.add_mutually_exclusive_group(required=True)
        g.add_argument("--graph")
        g.add_argument("--cover")
        if name == "contract":
            s.add_argument("--edges", default="", help="edges as h-h2 pairs, comma separated")
        s.add_argument("--out")
        s.set_defaults(func=func)

    s = sub.add_parser("oracle", help="brute-force check of the cover/H1 bijection")
    s.add_argument("--graph", required=True)
    s.add_argument("--group", required=True)
    s.add_argument("--max-edges", type=_positive, default=3)
    s.set_defaults(func=cmd_oracle)
    return p


def _common_options(p, defaults: bool):
    # the subcommand copies use SUPPRESS so they only override when given
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--format", choices=["table", "records"], default=d("table"))
    p.add_argument("--max-order", type=_positive, default=d(DEFAULT_MAX_ORDER), help="largest group order")
    p.add_argument("--max-classes", type=_positive, default=d(DEFAULT_MAX_CLASSES))
    p.add_argument("--max-enum", type=_positive, default=d(DEFAULT_ENUM_BOUND),
                   help="largest cochain group listed element by element")


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("bounds must be positive")
    return v


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.format)
    try:
        return args.func(args, out)
    except DilacovError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_status
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
