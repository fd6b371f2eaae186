from datetime import datetime

from smartlot.cli import main, reconstruct_trips
from smartlot.fixtures import parking_fixture, parking_fixture_text
from smartlot.knowledge import EventLog, EventRecord, SpecStore, Trip, mine_trip
from smartlot.simulator import demo_scenario, never_gate_scenario, run, serialize_report, serialize_scenario
from smartlot.worldgraph import load_graph


def ev(user, node, iso):
    return EventRecord(user, node, datetime.fromisoformat(iso))


# -- prove -------------------------------------------------------------------


def test_prove_sat(capsys):
    assert main(["prove", "g2 & (g2 -> F p010)"]) == 0
    assert capsys.readouterr().out == "SAT\n"


def test_prove_unsat(capsys):
    assert main(["prove", "G !g3 & g3"]) == 1
    assert capsys.readouterr().out == "UNSAT\n"


def test_prove_valid(capsys):
    assert main(["prove", "--valid", "G p -> p"]) == 0
    assert capsys.readouterr().out == "VALID\n"
    assert main(["prove", "--valid", "p"]) == 1
    assert capsys.readouterr().out == "NOT VALID\n"


def test_prove_tree_ascii(capsys):
    assert main(["prove", "--tree", "ascii", "G !g3 & g3"]) == 1
    out = capsys.readouterr().out
    assert out.startswith("UNSAT\n")
    assert "1.[x]: !g3" in out


def test_prove_tree_dot(capsys):
    main(["prove", "--tree", "dot", "p | q"])
    assert "digraph" in capsys.readouterr().out


def test_prove_syntax_error(capsys):
    assert main(["prove", "p & & q"]) == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_command_usage_error(capsys):
    assert main(["frobnicate"]) == 2


# -- simulate ----------------------------------------------------------------


def test_simulate_demo_matches_library(capsys):
    assert main(["simulate", "-"]) == 0
    assert capsys.readouterr().out == serialize_report(run(demo_scenario()))


def test_simulate_file_and_output(tmp_path, capsys):
    scenario_file = tmp_path / "s.scenario"
    scenario_file.write_text(serialize_scenario(never_gate_scenario()))
    out_file = tmp_path / "report.txt"
    dot_file = tmp_path / "world.dot"
    assert main(
        ["simulate", str(scenario_file), "-o", str(out_file), "--dot-graph", str(dot_file)]
    ) == 0
    assert capsys.readouterr().out == ""
    assert out_file.read_text() == serialize_report(run(never_gate_scenario()))
    assert dot_file.read_text().startswith("digraph")


def test_simulate_missing_file(capsys):
    assert main(["simulate", "/nonexistent/path.scenario"]) == 2
    assert "error:" in capsys.readouterr().err


def test_simulate_bad_scenario(tmp_path, capsys):
    bad = tmp_path / "bad.scenario"
    bad.write_text("g1 G\ntimeline:\nnope\n")
    assert main(["simulate", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err


# -- mine --------------------------------------------------------------------


def test_reconstruct_trips():
    g = parking_fixture()
    log = EventLog()
    for user, node, ts in [
        ("idKR55", "g2", "2014-01-28T09:00:00"),
        ("idKR55", "r4", "2014-01-28T09:00:30"),
        ("idKR55", "p018", "2014-01-28T09:01:00"),
        ("idKR55", "g2", "2014-01-28T11:00:00"),
        ("idWX11", "g1", "2014-01-28T09:05:00"),
        ("idWX11", "g1", "2014-01-28T09:30:00"),
    ]:
        log.record(ev(user, node, ts))
    trips = reconstruct_trips(log, g)
    assert [(t.user, t.entry_gate, t.parked_spot, t.exit_gate) for t in trips] == [
        ("idKR55", "g2", "p018", "g2"),
        ("idWX11", "g1", None, "g1"),
    ]


def test_mine_command(tmp_path, capsys):
    graph_file = tmp_path / "world.graph"
    graph_file.write_text(parking_fixture_text())
    events_file = tmp_path / "events.csv"
    rows = []
    for i in range(2):
        base = f"2014-01-28T0{8 + i}"
        rows += [
            f"idKR55,g2,{base}:00:00",
            f"idKR55,p0018,{base}:01:00",  # long-form id in the raw feed
            f"idKR55,g2,{base}:30:00",
        ]
    events_file.write_text("\n".join(rows) + "\n")
    assert main(["mine", str(events_file), str(graph_file)]) == 0
    assert capsys.readouterr().out == "idKR55\tg2 -> F p018\t2\n"


def test_mine_equivalent_to_library(tmp_path, capsys):
    graph_file = tmp_path / "world.graph"
    graph_file.write_text(parking_fixture_text())
    events_file = tmp_path / "events.csv"
    events_file.write_text(
        "u,g1,2014-01-28T08:00:00\nu,p010,2014-01-28T08:01:00\nu,g1,2014-01-28T08:30:00\n"
    )
    main(["mine", str(events_file), str(graph_file)])
    cli_out = capsys.readouterr().out

    store = SpecStore()
    for f in mine_trip(Trip("u", "g1", "p010", "g1")):
        store.upsert("u", f)
    assert cli_out == store.to_tsv()


def test_mine_bad_events(tmp_path, capsys):
    graph_file = tmp_path / "world.graph"
    graph_file.write_text(parking_fixture_text())
    events_file = tmp_path / "events.csv"
    events_file.write_text("u,zz99,2014-01-28T08:00:00\n")
    assert main(["mine", str(events_file), str(graph_file)]) == 2
    assert "line 1" in capsys.readouterr().err


# -- graph -------------------------------------------------------------------


def test_graph_split_and_glue(tmp_path, capsys):
    graph_file = tmp_path / "world.graph"
    graph_file.write_text(parking_fixture_text())
    prefix = str(tmp_path / "part")
    assert main(["graph", "split", str(graph_file), "-k", "3", "-o", prefix]) == 0
    assert "wrote 3 parts" in capsys.readouterr().out
    parts = [str(tmp_path / f"part-{i}.graph") for i in range(3)]
    merged_file = tmp_path / "merged.graph"
    assert main(["graph", "glue", *parts, "-o", str(merged_file)]) == 0
    assert load_graph(merged_file.read_text()) == parking_fixture()


def test_graph_dot(tmp_path, capsys):
    graph_file = tmp_path / "world.graph"
    graph_file.write_text("g1 G\nr1 R\ng1 -> r1 road\n")
    assert main(["graph", "dot", str(graph_file)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph")
    assert '"g1" -> "r1"' in out


def test_graph_split_bad_k(tmp_path, capsys):
    graph_file = tmp_path / "world.graph"
    graph_file.write_text("g1 G\n")
    assert main(["graph", "split", str(graph_file), "-k", "5", "-o", str(tmp_path / "p")]) == 2


# -- demo --------------------------------------------------------------------


def test_demo_prints_scenario(capsys):
    assert main(["demo"]) == 0
    out = capsys.readouterr().out
    assert out == serialize_scenario(demo_scenario())
    assert "timeline:" in out
