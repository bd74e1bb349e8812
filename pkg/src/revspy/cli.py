"""Command line: solve tiny instances exactly, duel strategies, run
verification suites, and serve the interactive session API.

Graph arguments use a family:params mini-language (path:5, cycle:4, star:5,
hypercube:3, bipartite:16,16, kpartite:18,18,18, random:40,0.5,7, tree:9,3,
webbed:12,5, split:2,4, domsharp:2,2,6, file:graph.txt).

Exit codes: 0 success, 1 check/duel failure or strategy mismatch,
2 argument errors, 3 size-cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import engine, registry, solver, verify
from .engine import GameSpec
from .graphs import (
    CapExceeded,
    Graph,
    GraphError,
    complete_multipartite_graph,
    cycle_graph,
    domination_sharp_construction,
    hypercube_graph,
    parse_graph,
    path_graph,
    random_graph,
    random_tree,
    random_webbed_tree,
    split_graph_construction,
    star_graph,
)

EXIT_FAIL = 1
EXIT_ARGS = 2
EXIT_CAP = 3


def parse_graph_arg(arg: str) -> Graph:
    if "\n" in arg:  # inline graph text
        return parse_graph(arg)
    family, _, params = arg.partition(":")
    args = [p for p in params.split(",") if p] if params else []
    try:
        if family == "path":
            return path_graph(int(args[0]))
        if family == "cycle":
            return cycle_graph(int(args[0]))
        if family == "star":
            return star_graph(int(args[0]))
        if family == "hypercube":
            return hypercube_graph(int(args[0]))
        if family in ("bipartite", "kpartite", "complete_multipartite"):
            return complete_multipartite_graph([int(a) for a in args])
        if family == "random":
            return random_graph(int(args[0]), float(args[1]), int(args[2]))
        if family == "tree":
            return random_tree(int(args[0]), int(args[1]))[0]
        if family in ("webbed", "webbed_tree"):
            return random_webbed_tree(int(args[0]), int(args[1]))[0]
        if family == "split":
            return split_graph_construction(int(args[0]), int(args[1]))[0]
        if family == "domsharp":
            return domination_sharp_construction(
                int(args[0]), int(args[1]), int(args[2])
            )[0]
        if family == "file":
            with open(params) as fh:
                return parse_graph(fh.read())
    except (IndexError, ValueError) as exc:
        raise GraphError(f"bad graph argument {arg!r}: {exc}") from exc
    raise GraphError(f"unknown graph family {family!r}")


def _write_report(path: str | None, report: dict) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    print(text)


def cmd_solve(args) -> int:
    g = parse_graph_arg(args.graph)
    try:
        if args.s is not None:
            spec = GameSpec(
                g, args.m, args.r, args.s, enforce_standing_assumptions=False
            )
            result = solver.solve(spec)
            report = {
                "graph": args.graph,
                "m": args.m,
                "r": args.r,
                "s": args.s,
                "winner": result.winner,
                "states_visited": result.states_visited,
            }
        else:
            sigma = solver.sigma_exact(g, args.m, args.r)
            report = {"graph": args.graph, "m": args.m, "r": args.r, "sigma": sigma}
    except solver.StateCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    _write_report(args.out, report)
    return 0


def _parse_params(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs or []:
        key, _, value = pair.partition("=")
        if not _:
            raise ValueError(f"strategy parameter must be key=value: {pair!r}")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def cmd_duel(args) -> int:
    g = parse_graph_arg(args.graph)
    spec = GameSpec(
        g,
        args.m,
        args.r,
        args.s,
        enforce_standing_assumptions=not args.relax_assumptions,
    )
    try:
        rev = registry.build(args.rev, spec, **_parse_params(args.rev_param))
        spy = registry.build(args.spy, spec, **_parse_params(args.spy_param))
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    transcript = engine.play(spec, rev, spy, horizon=args.horizon, seed=args.seed)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(transcript.to_text() + "\n")
    out = transcript.outcome
    audit_fails = sum(
        1
        for rec in transcript.rounds
        for note in rec.audits.values()
        if any(v is False for v in note.values())
    )
    print(
        f"{out.winner} (round {out.round}"
        + (f", vertex {out.vertex}" if out.vertex is not None else "")
        + f"); rounds played: {len(transcript.rounds)}; "
        + f"audit records with failures: {audit_fails}"
    )
    return 0


def cmd_verify(args) -> int:
    names: list[str] = []
    experiments: list[dict] = []
    if args.suite:
        names.extend(args.suite)
    if args.suite_file:
        with open(args.suite_file) as fh:
            spec = json.load(fh)
        names.extend(spec.get("suites", []))
        experiments.extend(spec.get("duels", []))
    if not names and not experiments:
        print("warning: empty suite list; nothing to verify", file=sys.stderr)
        _write_report(args.out, {"results": [], "passed": True})
        return 0
    results = []
    for name in names:
        try:
            results.extend(verify.run_suite(name))
        except KeyError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ARGS
    for entry in experiments:
        try:
            results.extend(verify.run_experiment(entry))
        except (KeyError, ValueError) as exc:
            print(f"error: bad experiment entry: {exc}", file=sys.stderr)
            return EXIT_ARGS
    report = {
        "results": [r.to_json() for r in results],
        "passed": all(r.passed for r in results),
    }
    _write_report(args.out, report)
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        print(f"[{mark}] {r.suite}/{r.name}: {r.detail} ({r.seconds:.1f}s)", file=sys.stderr)
    return 0 if report["passed"] else EXIT_FAIL


def cmd_serve(args) -> int:
    from .service import serve

    server = serve(args.port, args.host)
    print(f"serving on http://{args.host}:{args.port}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revspy",
        description="revolutionaries-and-spies engine, strategies and solver",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="exact winner or minimum winning spy count")
    p.add_argument("--graph", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("duel", help="play two registered strategies")
    p.add_argument("--graph", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--rev", required=True)
    p.add_argument("--spy", required=True)
    p.add_argument("--rev-param", action="append", default=[])
    p.add_argument("--spy-param", action="append", default=[])
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--relax-assumptions", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_duel)

    p = sub.add_parser("verify", help="run named verification suites")
    p.add_argument("--suite", action="append", default=[])
    p.add_argument("--suite-file", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--port", type=int, default=8023)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
