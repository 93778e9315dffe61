import csv

import pytest

from condorcet_sim import config as config_mod
from condorcet_sim.cli import main
from condorcet_sim.experiments import CSV_HEADER, PRESET_NAMES, log_grid, make_preset
from condorcet_sim.metrics import CSV_COLUMNS
from condorcet_sim.netsim import AttackConfig, ConfigError, SimConfig

from conftest import THREE_NODE_CFG

THREE_NODE_INI = """
[sim]
n = 3
r = 0.001
honest = 3
honest_offset = 1.0
opaque_ids = false
seed = 3

[attack]
kind = two_tx
tau = 50
"""


def test_config_roundtrip():
    cfg = SimConfig(n=31, r=0.25, r_internal=3.5, reorder_p=0.2, broadcast=True, seed=9,
                    attack=AttackConfig("four_tx", pause=12.5, clones=2, gap=0.02))
    back, _ = config_mod.load(config_mod.dump(cfg))
    assert back == cfg
    none, _ = config_mod.load(config_mod.dump(SimConfig()))
    assert none == SimConfig()


def test_config_parses_three_node():
    cfg, output = config_mod.load(THREE_NODE_INI + "\n[output]\nschemes = ranked-pairs\n")
    assert cfg == THREE_NODE_CFG
    assert output == {"schemes": "ranked-pairs"}


@pytest.mark.parametrize("text", ["[sim]\nbogus = 1\n", "[sim]\nr = inf\n", "[sim]\nn = many\n",
                                  "[attack]\nkind = two_tx\nfoo = 2\n", "not an ini"])
def test_config_errors(text):
    with pytest.raises(ConfigError):
        config_mod.load(text)


def test_list(capsys):
    assert main(["list"]) == 0
    assert capsys.readouterr().out.split() == list(PRESET_NAMES)


def test_single_three_node(tmp_path):
    ini = tmp_path / "attack.ini"
    ini.write_text(THREE_NODE_INI)
    out = tmp_path / "out"
    code = main(["single", "--config", str(ini), "--schemes", "ranked-pairs,hamiltonian-weakest,alphabetical",
                 "--out", str(out)])
    assert code == 0
    dot = (out / "tournament.dot").read_text()
    for edge in ['"A" -> "B"', '"B" -> "tx1"', '"tx1" -> "tx2"', '"tx2" -> "tx3"', '"tx3" -> "A"']:
        assert edge in dot
    assert (out / "final_ranked-pairs.txt").read_text().split() == ["A", "B", "tx1", "tx2", "tx3"]
    assert (out / "final_hamiltonian-weakest.txt").read_text().split() == ["B", "tx1", "tx2", "tx3", "A"]
    assert (out / "final_alphabetical.txt").exists()
    rows = list(csv.DictReader((out / "metrics.csv").open()))
    assert [r["trapped"] for r in rows] == ["3", "3", "3"]
    assert (out / "transactions.csv").read_text().splitlines()[0] == "id,origin,submit_time,keys,clone_group"
    assert (out / "delivery.csv").read_text().startswith("node,tx,time,via\n")
    reloaded, _ = config_mod.load_file(out / "config.ini")
    assert reloaded == THREE_NODE_CFG


def test_single_without_attack_is_acyclic(tmp_path):
    out = tmp_path / "o"
    assert main(["single", "--n", "5", "--r", "0.01", "--honest", "6", "--attack", "none", "--out", str(out)]) == 0
    dot = (out / "tournament.dot").read_text()
    # transitive tournament on 6 vertices has all 15 pairs pointing one way with no cycle
    assert dot.count("->") == 15
    assert "color=red" not in dot


def test_single_uses_env_out(tmp_path, monkeypatch):
    monkeypatch.setenv("CONDORCET_SIM_OUT", str(tmp_path / "envout"))
    assert main(["single", "--n", "4", "--honest", "2"]) == 0
    assert (tmp_path / "envout" / "metrics.csv").exists()


def test_flags_override_config(tmp_path):
    ini = tmp_path / "c.ini"
    ini.write_text(THREE_NODE_INI)
    out = tmp_path / "o"
    assert main(["single", "--config", str(ini), "--honest", "0", "--out", str(out)]) == 0
    assert len((out / "transactions.csv").read_text().splitlines()) == 1 + 2


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["preset", "nope"],
    ["single", "--r", "nan"],
    ["single", "--r", "-1"],
    ["single", "--n", "2"],
    ["single", "--scheme", "kemeny"],
    ["preset", "reorder", "--trials", "0"],
    ["preset", "reorder", "--n", "x"],
])
def test_usage_errors_exit_1(argv, tmp_path, capsys):
    if argv[:1] == ["single"]:
        argv = argv + ["--out", str(tmp_path)]
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(argv))
    assert exc.value.code == 1
    assert capsys.readouterr().err


def test_missing_config_is_usage_error(tmp_path):
    assert main(["single", "--config", str(tmp_path / "missing.ini"), "--out", str(tmp_path)]) == 1


def test_unwritable_output_is_runtime_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["single", "--n", "4", "--out", str(blocker / "sub")]) == 2


def test_preset_writes_csv_summary_and_svg(tmp_path):
    out = tmp_path / "p"
    code = main(["preset", "mitigate-ranked", "--trials", "2", "--points-per-decade", "1", "--n", "21",
                 "--seed", "5", "--out", str(out)])
    assert code == 0
    rows = list(csv.reader((out / "mitigate-ranked.csv").open()))
    assert tuple(rows[0]) == CSV_HEADER
    assert tuple(rows[0][: len(CSV_COLUMNS)]) == CSV_COLUMNS
    # 4 grid points x 2 trials x 3 schemes
    assert len(rows) == 1 + 4 * 2 * 3
    assert (out / "mitigate-ranked_summary.csv").exists()
    assert (out / "mitigate-ranked.svg").read_text().lstrip().startswith("<?xml")


def test_log_grid_endpoints():
    grid = log_grid(0.01, 1000, 20)
    assert grid[0] == 0.01 and grid[-1] == 1000 and len(grid) == 101


def test_preset_defaults():
    assert make_preset("honest-env").trials == 100
    assert make_preset("reorder").trials == 1000
    assert make_preset("reorder").values[-1] == 0.5
    with pytest.raises(ValueError):
        make_preset("nope")


def test_config_allows_inline_comments():
    cfg, _ = config_mod.load(THREE_NODE_INI.replace("kind = two_tx", "kind = two_tx  ; or four_tx"))
    assert cfg == THREE_NODE_CFG
