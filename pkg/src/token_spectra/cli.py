"""Command-line entry point: ``token-spectra <subcommand> ...``.

Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .graph6 import Graph6Error, emit_graph6, parse_graph6
from .graphs import FAMILY_KINDS, Graph, complement, parse_family
from .harness import SweepConfig, sweep
from .multiset import EigMultiset
from .spectral import SpectralResult, eig_sym, laplacian
from .theory import (
    InvarianceError,
    NoMatchError,
    check_conjecture,
    check_degree_bounds,
    check_pairing,
    find_graph_by_spectra,
    lambda_partition,
    render_pairing_table,
)
from .tokens import GuardExceeded, label_lines, token_graph

EXAMPLE_SPECTRUM = "0,2,4^3,6"
EXAMPLE_COMPLEMENT = "0^2,2^3,4"


class UsageError(Exception):
    pass


def parse_multiset(text: str) -> EigMultiset:
    """'0,2,4^3,6' -> {0, 2, 4^3, 6}."""
    counts: dict[float, int] = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        m = re.fullmatch(r"([-+0-9.eE]+)(?:\^(\d+))?", item)
        if not m:
            raise UsageError(f"bad multiset entry {item!r}")
        v = float(m.group(1))
        counts[v] = counts.get(v, 0) + int(m.group(2) or 1)
    return EigMultiset.of(counts)


def parse_edges(text: str, n: int | None) -> Graph:
    edges = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        m = re.fullmatch(r"(\d+)-(\d+)", item)
        if not m:
            raise UsageError(f"bad edge {item!r}; expected u-v")
        edges.append((int(m.group(1)), int(m.group(2))))
    size = n if n is not None else max((max(e) for e in edges), default=0)
    return Graph.from_edges(size, edges)


def add_graph_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("graph")
    g.add_argument("--family", choices=FAMILY_KINDS)
    g.add_argument("--n", type=int)
    g.add_argument("--parts", help="part sizes for complete_multipartite, e.g. 2,3")
    g.add_argument("--graph6", help="graph in graph6 encoding")
    g.add_argument("--edges", help="edge list such as 1-2,2-3 (vertices 1..n)")


def graph_from_args(args) -> Graph:
    given = [x for x in (args.family, args.graph6, args.edges) if x]
    if len(given) != 1:
        raise UsageError("give exactly one of --family, --graph6, --edges")
    if args.graph6:
        return parse_graph6(args.graph6)
    if args.edges:
        return parse_edges(args.edges, args.n)
    parts = [int(x) for x in args.parts.split(",")] if args.parts else None
    return parse_family(args.family, args.n, parts)


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=1))


def cmd_spectrum(args) -> int:
    g = graph_from_args(args)
    if args.k and args.k > 1:
        g = token_graph(g, args.k).graph
    res: SpectralResult = eig_sym(laplacian(g))
    print(res.to_json())
    return 0


def cmd_token(args) -> int:
    g = graph_from_args(args)
    t = token_graph(g, args.k)
    code = emit_graph6(t.graph)
    labels = "\n".join(label_lines(t)) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(code + "\n")
        with open(args.labels or args.out + ".labels", "w") as fh:
            fh.write(labels)
    else:
        print(code)
        if args.labels:
            with open(args.labels, "w") as fh:
                fh.write(labels)
    return 0


def cmd_check(args) -> int:
    v = check_conjecture(graph_from_args(args), args.k, tol=args.tol)
    _print_json(v.to_dict())
    return 0 if v.holds else 1


def example_graph() -> Graph:
    return find_graph_by_spectra(
        parse_multiset(EXAMPLE_SPECTRUM), parse_multiset(EXAMPLE_COMPLEMENT), 6
    )


def cmd_pair(args) -> int:
    if args.table1 and not (args.family or args.graph6 or args.edges):
        g, k = example_graph(), args.k or 3
    else:
        g, k = graph_from_args(args), args.k
    if not k:
        raise UsageError("pair needs --k")
    cert = check_pairing(g, k, tol=args.tol)
    if args.table1:
        print(f"G = {emit_graph6(g)}  edges {g.edges}")
        print(render_pairing_table(cert))
    else:
        _print_json(cert.to_dict())
    return 0


def cmd_partition(args) -> int:
    part = lambda_partition(graph_from_args(args), args.k, tol=args.tol)
    _print_json(part.to_dict())
    return 1 if part.status == "fail" else 0


def cmd_bounds(args) -> int:
    rep = check_degree_bounds(graph_from_args(args), args.k)
    _print_json(rep.to_dict())
    return 0 if rep.ok else 1


def cmd_find(args) -> int:
    target = parse_multiset(args.spectrum)
    target_bar = parse_multiset(args.complement)
    g = find_graph_by_spectra(target, target_bar, args.n)
    _print_json({"graph6": emit_graph6(g), "edges": g.edges, "complement_edges": complement(g).edges})
    return 0


def cmd_sweep(args) -> int:
    sources = {
        "exhaustive": args.exhaustive,
        "trees": args.trees,
        "family": args.family,
        "graph6": args.graph6_file,
        "random": args.random,
    }
    chosen = [s for s, v in sources.items() if v is not None]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --exhaustive, --trees, --family, --graph6-file, --random")
    source = chosen[0]
    n = {"exhaustive": args.exhaustive, "trees": args.trees, "random": args.random}.get(source, args.n)
    ks = tuple(int(x) for x in args.k.split(",")) if args.k else None
    fmt = args.format or ("json" if args.out and args.out.endswith(".json") else "csv")
    config = SweepConfig(
        source=source,
        n=n,
        n_max=args.n_max,
        family=args.family,
        path=args.graph6_file,
        count=args.count,
        seed=args.seed,
        ks=ks,
        reduce=not args.no_reduce,
        tol=args.tol,
        jobs=args.jobs,
        out=args.out,
        fmt=fmt,
        guard=args.guard,
        timing=args.timing,
        resume=args.resume,
    )
    report = sweep(config, keep_rows=False)
    summary = report.summary_dict(timing=True)
    if len(summary["failures"]) > 20:
        summary["failures"] = summary["failures"][:20] + [{"truncated": True}]
    _print_json(summary)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="token-spectra", description="Token graphs and checks of their Laplacian spectra."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="Laplacian eigenvalues as JSON")
    add_graph_args(p)
    p.add_argument("--k", type=int, help="use the k-token graph instead")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("token", help="emit F_k(G) as graph6 plus a label file")
    add_graph_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--labels")
    p.set_defaults(func=cmd_token)

    p = sub.add_parser("check", help="alpha(F_k(G)) = alpha(G) for one graph")
    add_graph_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("pair", help="pairing certificate of F_k(G) and F_k(co-G)")
    add_graph_args(p)
    p.add_argument("--k", type=int)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--table1", action="store_true", help="render the pairing grid (defaults to the 6-vertex example graph)")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("partition", help="level partition of the pairing")
    add_graph_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("bounds", help="max-degree and spectral-radius bounds")
    add_graph_args(p)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("find", help="search graphs on n vertices by Laplacian spectra")
    p.add_argument("--spectrum", default=EXAMPLE_SPECTRUM)
    p.add_argument("--complement", default=EXAMPLE_COMPLEMENT)
    p.add_argument("--n", type=int, default=6)
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("sweep", help="run the conjecture over a corpus")
    p.add_argument("--exhaustive", type=int, metavar="N", help="all labelled graphs on N vertices")
    p.add_argument("--trees", type=int, metavar="N", help="all labelled trees on N vertices")
    p.add_argument("--family", choices=FAMILY_KINDS)
    p.add_argument("--n", type=int, help="first n for --family")
    p.add_argument("--n-max", type=int, help="last n for --family")
    p.add_argument("--graph6-file", metavar="PATH", help="graph6 corpus, or builtin:graphs7")
    p.add_argument("--random", type=int, metavar="N", help="random G(N, 1/2) graphs")
    p.add_argument("--count", type=int, default=100, help="number of random graphs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", help="comma-separated levels (default: all)")
    p.add_argument("--no-reduce", action="store_true", help="keep levels k > n/2")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--guard", type=int, help="max token-graph order (default $TOKEN_SPECTRA_GUARD or 100000)")
    p.add_argument("--timing", action="store_true", help="record wall_ms and runtime in the report")
    p.add_argument("--resume", action="store_true")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InvarianceError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except (UsageError, Graph6Error, GuardExceeded, NoMatchError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
