"""Command-line front end: prover, simulator, event mining and graph tools.

Exit codes: 0 success (for `prove`: satisfiable / valid), 1 refuted
(unsatisfiable / not valid), 2 usage or input error.  Diagnostics go to
stderr, results to stdout or the chosen output file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .agents import DecisionConfig
from .formulas import FormulaSyntaxError, parse
from .knowledge import EventLog, KnowledgeError, SpecStore, Trip, mine_trip
from .simulator import (
    ScenarioError,
    demo_scenario,
    parse_scenario,
    run,
    serialize_report,
    serialize_scenario,
)
from .tableaux import SATISFIABLE, VALID, build_tree, export_tree, is_satisfiable, is_valid
from .worldgraph import GraphError, GraphPartition, export_dot, glue, load_graph, save_graph


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smartlot",
        description="Temporal-logic preference engine for smart parking spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="decide satisfiability or validity of a formula")
    p.add_argument("formula")
    p.add_argument("--valid", action="store_true", help="decide validity instead")
    p.add_argument("--tree", choices=["ascii", "dot"], help="print the truth tree")

    p = sub.add_parser("simulate", help="run a scenario file")
    p.add_argument("scenario", help="scenario path, or '-' for the built-in demo")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    p.add_argument("--dot-graph", help="also write the final world graph as DOT")
    p.add_argument("--fallback-nearest", action="store_true")
    p.add_argument("--never-gate-threshold", type=int, default=3, metavar="K")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("mine", help="reconstruct trips from an event CSV")
    p.add_argument("events", help="CSV of user,node,timestamp")
    p.add_argument("graph", help="world graph file")
    p.add_argument("-o", "--output", help="write the knowledge TSV here")

    p = sub.add_parser("graph", help="graph utilities")
    gsub = p.add_subparsers(dest="graph_command", required=True)
    ps = gsub.add_parser("split", help="partition a graph file into k parts")
    ps.add_argument("path")
    ps.add_argument("-k", type=int, required=True)
    ps.add_argument("-o", "--output-prefix", required=True)
    pg = gsub.add_parser("glue", help="merge part files back into one graph")
    pg.add_argument("paths", nargs="+")
    pg.add_argument("-o", "--output")
    pd = gsub.add_parser("dot", help="render a graph file as Graphviz DOT")
    pd.add_argument("path")
    pd.add_argument("-o", "--output")

    p = sub.add_parser("demo", help="print the built-in demo scenario file")
    return parser


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_prove(args) -> int:
    formula = parse(args.formula)
    if args.valid:
        verdict = is_valid(formula)
        print("VALID" if verdict == VALID else "NOT VALID")
        ok = verdict == VALID
    else:
        verdict = is_satisfiable(formula)
        print("SAT" if verdict == SATISFIABLE else "UNSAT")
        ok = verdict == SATISFIABLE
    if args.tree:
        shown = build_tree(parse(args.formula) if not args.valid else formula)
        sys.stdout.write(export_tree(shown, args.tree))
    return 0 if ok else 1


def cmd_simulate(args) -> int:
    config = DecisionConfig(
        fallback_nearest=args.fallback_nearest,
        never_gate_threshold=args.never_gate_threshold,
        rng_seed=args.seed,
    )
    if args.scenario == "-":
        scenario = demo_scenario(config=config)
    else:
        scenario = parse_scenario(Path(args.scenario).read_text(), config)
    report = run(scenario)
    _emit(serialize_report(report), args.output)
    if args.dot_graph:
        Path(args.dot_graph).write_text(export_dot(report.final_graph))
    return 0


def reconstruct_trips(log: EventLog, graph) -> list[Trip]:
    """Segment raw per-user event streams at gateway detections: each
    gate ... gate stretch is one trip, parked at the last P node seen."""
    trips = []
    users = sorted({e.user for e in log.events})
    for user in users:
        current: list = []
        for event in log.for_user(user):
            label = graph.label(event.node)
            if label == "G" and current:
                parked = next(
                    (e.node for e in reversed(current) if graph.label(e.node) == "P"),
                    None,
                )
                trips.append(
                    Trip(
                        user=user,
                        entry_gate=current[0].node,
                        parked_spot=parked,
                        exit_gate=event.node,
                        events=tuple(current) + (event,),
                    )
                )
                current = []
            else:
                current.append(event)
    return trips


def cmd_mine(args) -> int:
    graph = load_graph(Path(args.graph).read_text())
    log = EventLog.from_csv(Path(args.events).read_text(), known_nodes=graph.nodes)
    store = SpecStore()
    for trip in reconstruct_trips(log, graph):
        for formula in mine_trip(trip):
            store.upsert(trip.user, formula)
    _emit(store.to_tsv(), args.output)
    return 0


def cmd_graph(args) -> int:
    from .worldgraph import split as split_graph

    if args.graph_command == "split":
        g = load_graph(Path(args.path).read_text())
        partition = split_graph(g, args.k)
        for i, part in enumerate(partition.parts):
            Path(f"{args.output_prefix}-{i}.graph").write_text(save_graph(part))
        border = " ".join(sorted(partition.border_nodes))
        print(f"wrote {args.k} parts; border nodes: {border or '(none)'}")
        return 0
    if args.graph_command == "glue":
        parts = [load_graph(Path(p).read_text()) for p in args.paths]
        merged = glue(GraphPartition(parts, set(), {}))
        _emit(save_graph(merged), args.output)
        return 0
    g = load_graph(Path(args.path).read_text())
    _emit(export_dot(g), args.output)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "prove":
            return cmd_prove(args)
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "mine":
            return cmd_mine(args)
        if args.command == "graph":
            return cmd_graph(args)
        if args.command == "demo":
            sys.stdout.write(serialize_scenario(demo_scenario()))
            return 0
    except (FormulaSyntaxError, KnowledgeError, GraphError, ScenarioError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
