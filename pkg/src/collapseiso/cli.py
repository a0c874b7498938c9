"""Command-line front end: iso, classify, tomo, pattern, conjecture, gen,
bench.  JSON on stdout, diagnostics on stderr.

Exit codes: 0 yes/success, 1 no, 2 usage or input error, 3 budget exceeded,
4 conjecture disagreement surfaced.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time

from .conjectures import run_suite
from .engine import (
    EngineConfig,
    ResourceExhausted,
    gi,
    gi_multigraph,
)
from .graphs import (
    FORMATS,
    Graph,
    GraphError,
    MultigraphData,
    emit_graph6,
    parse_edge_list_multigraph,
    parse_graph6,
    permute,
)
from .oracle import BudgetExceeded, enumerate_nonisomorphic
from .symmetry import SearchBudgetError, classify
from .tomography import Pattern, pattern_arc, pattern_nailed, pattern_normal, tomography, varied_pattern

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_DISAGREEMENT = 4


class InputError(Exception):
    pass


def _sniff_format(path: str, override: str | None) -> str:
    if override:
        return override
    if path.endswith(".g6"):
        return "graph6"
    if path.endswith(".edges"):
        return "edge_list"
    raise InputError(f"cannot infer format of {path!r}; use --format")


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from None


def _load_multigraph(path: str, fmt: str | None) -> MultigraphData:
    fmt = _sniff_format(path, fmt)
    data = _read(path)
    try:
        if fmt == "graph6":
            g = parse_graph6(data)
            return MultigraphData(g.n, tuple(g.edges()), ())
        return parse_edge_list_multigraph(data)
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_simple(path: str, fmt: str | None) -> Graph:
    raw = _load_multigraph(path, fmt)
    if raw.loops:
        raise InputError(f"{path}: self-loops not supported by this command")
    try:
        return Graph(raw.n, sorted(set(raw.edges)))
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def cmd_iso(args) -> int:
    cfg = EngineConfig(mode=args.mode)
    ga = _load_multigraph(args.graph_a, args.format)
    gb = _load_multigraph(args.graph_b, args.format)
    out = gi_multigraph(ga, gb, cfg)
    if args.trace:
        print(f"verdict={out.verdict} certified={out.certified} "
              f"disagreements={len(out.disagreements)}", file=sys.stderr)
    payload = out.to_jsonable()
    if not args.emit_mapping:
        payload["mapping"] = None
    _emit(payload)
    if out.verdict == "disagreement":
        return EXIT_DISAGREEMENT
    return EXIT_YES if out.is_iso else EXIT_NO


def cmd_classify(args) -> int:
    g = _load_simple(args.graph, args.format)
    rep = classify(g, exact_budget=args.exact_budget, with_exact=not args.no_exact)
    _emit(rep.to_jsonable())
    return EXIT_YES


def cmd_tomo(args) -> int:
    g = _load_simple(args.graph, args.format)
    if not 0 <= args.nail < g.n:
        raise InputError(f"nail {args.nail} out of range for n={g.n}")
    _emit(tomography(g, args.nail).to_jsonable())
    return EXIT_YES


def _parse_pair(raw: str, g: Graph) -> tuple[int, int]:
    try:
        u, v = (int(x) for x in raw.split(","))
    except ValueError:
        raise InputError(f"expected 'u,v', got {raw!r}") from None
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise InputError(f"pair ({u}, {v}) out of range for n={g.n}")
    return u, v


def cmd_pattern(args) -> int:
    g = _load_simple(args.graph, args.format)
    pat: Pattern
    if args.arc is not None:
        u, v = _parse_pair(args.arc, g)
        if not g.has_edge(u, v):
            raise InputError(f"({u}, {v}) is not an edge")
        pat = pattern_arc(g, u, v)
    elif args.edge is not None:
        u, v = _parse_pair(args.edge, g)
        if not g.has_edge(u, v):
            raise InputError(f"({u}, {v}) is not an edge")
        pat = pattern_nailed(g, (u, v))
    elif args.nail is not None:
        if not 0 <= args.nail < g.n:
            raise InputError(f"nail {args.nail} out of range for n={g.n}")
        if args.varied:
            pat = varied_pattern(g, (args.nail,))
        else:
            pat = pattern_nailed(g, (args.nail,))
    else:
        pat = pattern_normal(g)
    _emit(pat.to_jsonable())
    return EXIT_YES


def cmd_conjecture(args) -> int:
    ids = tuple(int(x) for x in args.ids.split(",")) if args.ids else (1, 2, 3, 4, 5)
    reports = run_suite(
        n_max=args.n_max,
        ids=ids,
        corpus_files=args.corpus,
        jobs=args.jobs,
        seed=args.seed,
        random_pairs=args.random_pairs,
        random_n=args.random_n,
    )
    for rep in reports:
        print(rep.summary_line(), file=sys.stderr)
    if args.plot_dir:
        from .plots import save_conjecture_plot

        save_conjecture_plot(reports, f"{args.plot_dir}/conjectures.png")
    _emit({"seed": args.seed, "reports": [r.to_jsonable() for r in reports]})
    total = sum(len(r.counterexamples) for r in reports)
    return EXIT_DISAGREEMENT if total else EXIT_YES


def cmd_gen(args) -> int:
    if args.n < 0:
        raise InputError("--n must be nonnegative")
    if args.dedup:
        graphs = enumerate_nonisomorphic(args.n)
    else:
        from .oracle import _all_graphs

        graphs = list(_all_graphs(args.n)) if args.n > 0 else []
    for g in graphs:
        sys.stdout.write(emit_graph6(g).decode() + "\n")
    return EXIT_YES


def _random_regular(rng: random.Random, n: int, d: int = 3) -> Graph:
    """Pairing-model sample, retried until simple."""
    while True:
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v or (min(u, v), max(u, v)) in edges:
                ok = False
                break
            edges.add((min(u, v), max(u, v)))
        if ok:
            return Graph(n, sorted(edges))


def _bench_graph(rng: random.Random, family: str, n: int) -> Graph:
    if family == "regular":
        return _random_regular(rng, n)
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < min(0.5, 8.0 / n)
    ]
    return Graph(n, edges)


def cmd_bench(args) -> int:
    sizes = [int(x) for x in args.sizes.split(",")]
    rng = random.Random(args.seed)
    cfg = EngineConfig(mode=args.mode)
    rows = []
    writer = csv.writer(sys.stdout)
    writer.writerow(["family", "n", "trial", "seconds", "verdict", "seed"])
    for n in sizes:
        for trial in range(args.trials):
            g = _bench_graph(rng, args.family, n)
            pi = list(range(n))
            rng.shuffle(pi)
            h = permute(g, pi)
            t0 = time.monotonic()
            out = gi(g, h, cfg)
            dt = time.monotonic() - t0
            rows.append({"family": args.family, "n": n, "trial": trial, "seconds": dt})
            writer.writerow([args.family, n, trial, f"{dt:.6f}", out.verdict, args.seed])
    if args.plot:
        from .plots import save_bench_plot

        save_bench_plot(rows, args.plot)
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="collapseiso", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_format(sp):
        sp.add_argument("--format", choices=FORMATS, default=None,
                        help="input format (default: sniff .g6/.edges extension)")

    sp = sub.add_parser("iso", help="decide isomorphism of two graphs")
    sp.add_argument("graph_a")
    sp.add_argument("graph_b")
    add_format(sp)
    sp.add_argument("--mode", choices=("sound", "conjecture"), default="sound")
    sp.add_argument("--emit-mapping", action="store_true")
    sp.add_argument("--trace", action="store_true")
    sp.set_defaults(func=cmd_iso)

    sp = sub.add_parser("classify", help="regularity and symmetry report")
    sp.add_argument("graph")
    add_format(sp)
    sp.add_argument("--exact-budget", type=int, default=64)
    sp.add_argument("--no-exact", action="store_true")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("tomo", help="collapse tomography of one vertex")
    sp.add_argument("graph")
    add_format(sp)
    sp.add_argument("--nail", type=int, default=0)
    sp.set_defaults(func=cmd_tomo)

    sp = sub.add_parser("pattern", help="collapse pattern (normal/nailed/edge/arc)")
    sp.add_argument("graph")
    add_format(sp)
    sp.add_argument("--nail", type=int, default=None)
    sp.add_argument("--edge", default=None, metavar="U,V")
    sp.add_argument("--arc", default=None, metavar="U,V")
    sp.add_argument("--varied", action="store_true")
    sp.set_defaults(func=cmd_pattern)

    sp = sub.add_parser("conjecture", help="counterexample sweep over small graphs")
    sp.add_argument("--n-max", type=int, default=5)
    sp.add_argument("--ids", default=None, help="comma-separated subset of 1..5")
    sp.add_argument("--corpus", action="append", default=[],
                    help="extra graph6 corpus file (repeatable)")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--random-pairs", type=int, default=0,
                    help="additional randomized spot-check pair count")
    sp.add_argument("--random-n", type=int, default=12)
    sp.add_argument("--plot-dir", default=None)
    sp.set_defaults(func=cmd_conjecture)

    sp = sub.add_parser("gen", help="emit graph6 lines for all graphs of order n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--dedup", action="store_true",
                    help="one representative per isomorphism class")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("bench", help="timing table (CSV) on random families")
    sp.add_argument("--family", choices=("random", "regular"), default="regular")
    sp.add_argument("--sizes", default="50,100,200,400")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=3)
    sp.add_argument("--mode", choices=("sound", "conjecture"), default="conjecture")
    sp.add_argument("--plot", default=None, help="write a timing figure to this path")
    sp.set_defaults(func=cmd_bench)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceeded, ResourceExhausted, SearchBudgetError) as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
