"""CLI behavior: exit codes, reports, JSON round trips, determinism."""

import json

from stackdual.cli import main
from stackdual.dsl import parse_session
from stackdual.presets import list_presets, preset_session
from stackdual.session import run_session


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list_presets_sorted_and_nonempty(capsys):
    code, out, _ = run_cli(["list-presets"], capsys)
    assert code == 0
    names = [line.split()[0] for line in out.splitlines()
             if line and not line.lstrip().startswith("expected:")]
    assert names == sorted(names) and len(names) == 10
    assert "p146-curve" in names and "pija-node" in names
    assert "O(-3)" in out and "O(-a)" in out


def test_preset_node_reports_and_exit_zero(capsys, tmp_path):
    json_path = tmp_path / "node.json"
    code, out, _ = run_cli(
        ["preset", "node", "--a", "3", "--i", "1", "--j", "2",
         "--json", str(json_path)], capsys)
    assert code == 0
    assert "free of rank one" in out and "weight 0" in out
    doc = json.loads(json_path.read_text())
    assert doc["schema_version"] == "1"
    verdicts = doc["commands"][0]["verdicts"]
    assert verdicts["is_free_rank_one"] and verdicts["is_sheaf"]
    assert verdicts["fiber_weights"] == [0]


def test_preset_triple_point(capsys):
    code, out, _ = run_cli(["preset", "triple-point"], capsys)
    assert code == 0
    assert "Gorenstein: False" in out
    assert "Cohen-Macaulay: True" in out


def test_malformed_session_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.sdl"
    bad.write_text("ring A = Q[x,y]/(x*w)\n")
    code, _, err = run_cli(["run", str(bad)], capsys)
    assert code == 2
    assert "1:" in err and "unknown symbol" in err


def test_missing_file_exits_2(capsys):
    code, _, err = run_cli(["run", "/nonexistent/session"], capsys)
    assert code == 2


def test_unknown_preset_exits_2(capsys):
    code, _, err = run_cli(["preset", "no-such"], capsys)
    assert code == 2
    assert "unknown preset" in err


def test_failed_compare_exits_1(capsys, tmp_path):
    session = tmp_path / "cmp.sdl"
    session.write_text("""
ring B = Q[x,y]/(x*y) group 2 weights {x:1, y:1}
module M over B gens m:(0,0)
module N over B gens n:(0,1)
compare M N bound 6
""")
    code, out, _ = run_cli(["run", str(session)], capsys)
    assert code == 1
    assert "distinct" in out


def test_run_session_file(capsys, tmp_path):
    session = tmp_path / "ok.sdl"
    session.write_text(preset_session("root-cover", a=5))
    code, out, _ = run_cli(["run", str(session)], capsys)
    assert code == 0
    assert "weight 1 mod 5" in out


def test_json_round_trip_byte_identical(tmp_path):
    ast = parse_session(preset_session("node"))
    report = run_session(ast)
    blob = report.to_json()
    assert json.dumps(json.loads(blob), indent=2, sort_keys=True) + "\n" == blob


def test_json_never_contains_floats():
    ast = parse_session(preset_session("pija-node"))
    report = run_session(ast)

    def walk(value):
        assert not isinstance(value, float)
        if isinstance(value, dict):
            for v in value.values():
                walk(v)
        elif isinstance(value, list):
            for v in value:
                walk(v)

    walk(json.loads(report.to_json()))


def test_resource_cap_exits_3(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("STACKDUAL_TIME_LIMIT_S", "0.000001")
    session = tmp_path / "slow.sdl"
    session.write_text(preset_session("node", a=5, i=2, j=3))
    code, out, _ = run_cli(["run", str(session)], capsys)
    assert code == 3
    assert "aborted" in out


def test_every_preset_parses_and_lists_expectations():
    for name, _desc, expect in list_presets():
        text = preset_session(name)
        ast = parse_session(text)
        assert ast.commands(), name
        assert expect
