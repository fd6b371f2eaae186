"""End-to-end acceptance gate.

Each test checks one release criterion and prints a single pass/fail line,
so `pytest -v -s tests/test_acceptance.py` doubles as a checklist.
"""

import random
import time

from formula_gen import formula_corpus
from pathcheck import bounded_sat
from smartlot.fixtures import parking_fixture
from smartlot.formulas import Not, parse
from smartlot.simulator import demo_scenario, never_gate_scenario, run, serialize_report
from smartlot.tableaux import (
    SATISFIABLE,
    UNSATISFIABLE,
    VALID,
    build_tree,
    is_satisfiable,
    is_valid,
)
from smartlot.worldgraph import GraphError, WorldGraph, glue, split


def report(name, ok):
    print(f"{'PASS' if ok else 'FAIL'}: {name}")
    assert ok, name


def literal_set(branch):
    return {(sign, atom, label.render()) for sign, atom, label in branch.literals}


def test_criterion_1_golden_trees():
    start = time.monotonic()
    ok = True

    tree_a = build_tree(parse("G !g3 & g3"))
    ok &= is_satisfiable(parse("G !g3 & g3")) == UNSATISFIABLE
    ok &= [b.status for b in tree_a.branches] == ["Closed"]
    ok &= literal_set(tree_a.branches[0]) == {("-", "g3", "1.[x]"), ("+", "g3", "")}

    tree_b = build_tree(parse("g2 & (g2 -> F p010)"))
    ok &= is_satisfiable(parse("g2 & (g2 -> F p010)")) == SATISFIABLE
    open_b = [b for b in tree_b.branches if b.status == "Open"]
    ok &= [literal_set(b) for b in open_b] == [
        {("+", "g2", ""), ("+", "p010", "1.[a]")}
    ]

    tree_c = build_tree(parse("g1 & ((g1 -> F p018) | (g1 -> F p015))"))
    ok &= is_satisfiable(parse("g1 & ((g1 -> F p018) | (g1 -> F p015))")) == SATISFIABLE
    open_c = [b for b in tree_c.branches if b.status == "Open"]
    ok &= [literal_set(b) for b in open_c] == [
        {("+", "g1", ""), ("+", "p018", "1.[a]")},
        {("+", "g1", ""), ("+", "p015", "1.[b]")},
    ]

    ok &= time.monotonic() - start < 1.0
    report("criterion 1: golden truth trees match exactly in under 1 s", ok)


CORPUS_SEED = 20140128


def test_criterion_2_validity_coherence():
    corpus = formula_corpus(seed=CORPUS_SEED, count=1000)
    start = time.monotonic()
    mismatches = sum(
        (is_valid(f) == VALID) != (is_satisfiable(Not(f)) == UNSATISFIABLE)
        for f in corpus
    )
    elapsed = time.monotonic() - start
    ok = mismatches == 0 and elapsed < 30.0
    report(
        f"criterion 2: validity/negation coherence on 1000 formulas "
        f"({mismatches} mismatches, {elapsed:.1f} s)",
        ok,
    )


def test_criterion_3_oracle_equivalence():
    corpus = formula_corpus(seed=CORPUS_SEED, count=1000)
    start = time.monotonic()
    mismatches = sum(
        (is_satisfiable(f) == SATISFIABLE) != bounded_sat(f) for f in corpus
    )
    elapsed = time.monotonic() - start
    ok = mismatches == 0 and elapsed < 60.0
    report(
        f"criterion 3: prover agrees with bounded path oracle on 1000 formulas "
        f"({mismatches} mismatches, {elapsed:.1f} s)",
        ok,
    )


def test_criterion_4_preference_scenario():
    start = time.monotonic()
    ok = True

    free = run(demo_scenario())
    counts = {t.formula: t.r for t in free.final_store.triples("idKR55")}
    ok &= counts.get(parse("g2 -> F p018")) == 7
    ok &= counts.get(parse("g2 -> F p015")) == 2
    ok &= (free.decisions[-1].suggestion, free.decisions[-1].rationale) == (
        "p018",
        "Preferred",
    )

    blocked = run(demo_scenario(occupied=("p018",)))
    ok &= blocked.decisions[-1].suggestion == "p015"

    full = run(demo_scenario(occupied=("p018", "p015")))
    ok &= full.decisions[-1].suggestion is None

    ok &= time.monotonic() - start < 1.0
    report("criterion 4: preference scenario (r=7/r=2, p018/p015/none) in under 1 s", ok)


def test_criterion_5_contradiction_scenario():
    start = time.monotonic()
    from smartlot.knowledge import spec_formula

    scenario = never_gate_scenario()
    result = run(scenario)
    ok = result.stats.contradictions_resolved == 1
    ok &= not result.final_store.contains("idKR55", parse("G !g3"))
    # the pre-resolution combination was contradictory, the repaired one is not
    ok &= is_satisfiable(parse("G !g3 & g3")) == UNSATISFIABLE
    repaired = spec_formula(result.final_store, "idKR55", parse("g3"))
    ok &= is_satisfiable(repaired) == SATISFIABLE
    ok &= time.monotonic() - start < 1.0
    report("criterion 5: never-gate contradiction resolved (removes G !g3) in under 1 s", ok)


def _check_invariants(g: WorldGraph) -> bool:
    at_targets = [dst for (src, dst), lab in g.edges.items() if lab == "at"]
    per_car = {}
    for (src, dst), lab in g.edges.items():
        if lab == "at":
            per_car[src] = per_car.get(src, 0) + 1
    one_edge_per_car = all(n == 1 for n in per_car.values())
    cars_have_edges = set(per_car) == set(g.nodes_with_label("C"))
    spots = [n for n in at_targets if g.labels[n] == "P"]
    one_car_per_spot = len(spots) == len(set(spots))
    return one_edge_per_car and cars_have_edges and one_car_per_spot


def _random_graph(rng, size):
    g = WorldGraph()
    names = []
    for i in range(size):
        label = rng.choice("GRRRPP")
        node = f"{label.lower()}{i:03d}"
        g.add_node(node, label)
        names.append(node)
    for _ in range(size * 2):
        src, dst = rng.choice(names), rng.choice(names)
        if src != dst:
            g.add_edge(src, dst, "road")
    return g


def test_criterion_6_graph_invariants():
    start = time.monotonic()
    rng = random.Random(CORPUS_SEED)
    g = parking_fixture()
    targets = g.nodes_with_label("R") + g.nodes_with_label("P") + g.nodes_with_label("G")
    gates = g.nodes_with_label("G")
    cars = [f"car{i}" for i in range(8)]
    ok = True
    for _ in range(10_000):
        op = rng.choice(("enter", "move", "exit"))
        car = rng.choice(cars)
        try:
            if op == "enter":
                g = g.car_enters(car, rng.choice(gates))
            elif op == "move":
                g = g.car_moves(car, rng.choice(targets))
            else:
                g = g.car_exits(car)
        except GraphError:
            pass  # rejected operations must leave the graph untouched
        if not _check_invariants(g):
            ok = False
            break

    for _ in range(6):
        rg = _random_graph(rng, rng.randrange(5, 201))
        for k in (1, 2, 3, 5):
            if glue(split(rg, k)) != rg:
                ok = False

    elapsed = time.monotonic() - start
    ok &= elapsed < 30.0
    report(
        f"criterion 6: 10000 ops keep graph invariants, glue(split(g,k)) == g "
        f"({elapsed:.1f} s)",
        ok,
    )


def test_criterion_7_determinism():
    scenarios = [
        demo_scenario(),
        demo_scenario(occupied=("p018",)),
        never_gate_scenario(),
    ]
    rebuilt = [
        demo_scenario(),
        demo_scenario(occupied=("p018",)),
        never_gate_scenario(),
    ]
    ok = all(
        serialize_report(run(a)).encode() == serialize_report(run(b)).encode()
        for a, b in zip(scenarios, rebuilt)
    )
    report("criterion 7: repeated runs serialize byte-identically", ok)


def test_criterion_8_argmax_invariance():
    from smartlot.agents import a3_decide

    ok = True
    for occupied in ((), ("p018",), ("p018", "p015")):
        base = run(demo_scenario(occupied=occupied))
        store10 = base.final_store.scale(10)
        scaled, _ = a3_decide(store10, base.final_graph, "idKR55", "g2")
        fresh, _ = a3_decide(base.final_store, base.final_graph, "idKR55", "g2")
        ok &= scaled.suggestion == fresh.suggestion
        ok &= [s for s, _ in scaled.candidates] == [s for s, _ in fresh.candidates]
    report("criterion 8: suggestions and candidate order invariant under r x 10", ok)
