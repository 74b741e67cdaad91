import json
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vfmarket.fol import PASS, Witnesses, parse_sentence
from vfmarket.game import ConstPlayer, PassPlayer, SuccessorChallenger, TablePlayer
from vfmarket.harness import ConfigError, convergence_report, load_config, parse_config, run_scenario
from vfmarket.harness.cli import main
from vfmarket.harness.templates import TemplateError, instaplayer
from vfmarket.market import InvariantBreach, MarketState
from vfmarket.market.engine import replay_audit

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"

MINIMAL = """
horizon: 5
universe: ["E x. x*x=4"]
agents:
  - template: threshold-buyer
    sentence: "E x. x*x=4"
    buy_below: 3/5
    alpha: "{2}"
    endowment: 2
  - template: passive-holder
    sentence: "A x. x*x!=4"
    quantity: 1
    endowment: 1
"""


# -- config -------------------------------------------------------------------

def test_minimal_config():
    cfg = parse_config(MINIMAL)
    assert cfg.horizon == 5 and len(cfg.agents) == 2
    assert cfg.agents[0].endowment == 2


@pytest.mark.parametrize("text, fragment", [
    ("horizon: 0", "horizon"),
    ("universe: []", "missing 'horizon'"),
    ("horizon: 3\nuniverse: ['E x. y=1']", "universe[0]"),
    ("horizon: 3\nbogus: 1", "unknown keys"),
    ("horizon: 3\nagents:\n  - template: nope\n    sentence: '1=1'", "unknown template"),
    ("horizon: 3\nagents:\n  - template: arbitrageur\n    sentence: '1=1'\n    x: 1/2\n    eps: 0.9", "band"),
    ("horizon: 3\nagents:\n  - template: arbitrageur\n    sentence: '1=1'\n    x: 1/2\n    eps: abc", "rational"),
    ("horizon: 3\nreality: {mode: scripted, script: [[1, 'E x. x=1', true]]}", "Delta0"),
    ("horizon: [1", "invalid YAML"),
    ("- 1\n- 2", "mapping"),
])
def test_config_errors(text, fragment):
    with pytest.raises(ConfigError) as err:
        parse_config(text, "cfg.yaml")
    assert fragment in str(err.value)
    assert str(err.value).startswith("cfg.yaml")


def test_yaml_error_has_line_and_column():
    with pytest.raises(ConfigError) as err:
        parse_config("horizon: 3\nuniverse: [\n", "cfg.yaml")
    assert "cfg.yaml:" in str(err.value)


def test_decimal_literals_are_exact():
    cfg = parse_config(MINIMAL.replace("3/5", "0.6"))
    assert cfg.agents[0].trader is not None
    from vfmarket.harness.config import rational
    assert rational(0.99, "x") == F(99, 100)


def test_enumerated_templates_have_geometric_endowments():
    text = """
horizon: 3
enumerate:
  template: arbitrageur
  total_endowment: 8
  base: {sentence: "E x. x=1", eps: 1/20}
  grid: {x: [1/4, 1/2, 3/4]}
"""
    cfg = parse_config(text)
    assert [a.endowment for a in cfg.agents] == [4, 2, 1]
    assert [a.birthday for a in cfg.agents] == [1, 2, 3]


def test_initial_holdings_must_be_delta0():
    text = MINIMAL + "    holdings: {'E x. x=1': 1}\n"
    with pytest.raises(ConfigError, match="Delta0"):
        parse_config(text)


# -- instaplayer notation ------------------------------------------------------

def test_instaplayer_forms():
    s = parse_sentence("E x. x*x=4")
    assert isinstance(instaplayer("pass"), PassPlayer)
    assert isinstance(instaplayer("successor"), SuccessorChallenger)
    assert instaplayer("{2, 3}").move(s) == Witnesses((2, 3))
    assert instaplayer([4]).move(s) == Witnesses((4,))
    assert instaplayer(5).move(s) == Witnesses((5,))
    table = instaplayer({"table": [["E y. y*y=4", [2]], ["E x. x=1", "pass"]], "default": "diverge"})
    assert isinstance(table, TablePlayer)
    assert table.move(s) == Witnesses((2,))
    assert table.move(parse_sentence("E z. z=1")) is PASS
    assert table.cost(parse_sentence("E x. x=7")) is None
    assert isinstance(instaplayer(ConstPlayer([1])), ConstPlayer)


@pytest.mark.parametrize("bad", ["maybe", {"rows": []}, [-1], 2.5])
def test_instaplayer_errors(bad):
    with pytest.raises(TemplateError):
        instaplayer(bad)


# -- runs --------------------------------------------------------------------

def test_empty_universe_run():
    cfg = parse_config("horizon: 10\nuniverse: []")
    result = run_scenario(cfg)
    assert result.price_csv() == "t,sentence_code,sentence,price\n"
    assert result.conserved and result.state.t == 10


def test_run_reruns_are_byte_identical(tmp_path):
    cfg_path = SCENARIOS / "s1_truth.yaml"
    a = run_scenario(load_config(cfg_path), horizon=60).write(tmp_path / "a")
    b = run_scenario(load_config(cfg_path), horizon=60).write(tmp_path / "b")
    for name in ("prices.csv", "audit.log", "ledger.txt", "report.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_report_contents():
    result = run_scenario(parse_config(MINIMAL, "cfg.yaml"))
    rep = result.report()
    assert rep["conservation_ok"] and rep["max_cash_within_injected"] and rep["steps"] == 5
    info = rep["sentences"]["E x. (x*x)=4"]
    assert info["final_price"] == "4/5" and info["amplitude"] == "0/1"
    assert len(rep["agents"]) == 2
    assert json.loads(json.dumps(rep)) == rep


def test_audit_log_replays_to_final_inventories():
    result = run_scenario(load_config(SCENARIOS / "adv3_scripted.yaml"), horizon=150)
    replayed = replay_audit(result.audit_log().splitlines())
    for a in result.state.agents:
        inv = result.state.inventory(a.id)
        got = replayed.get(a.id, {})
        assert {k: v for k, v in got.items() if v} == {k: v for k, v in inv.items() if v}


def test_ledger_dump_lines():
    result = run_scenario(parse_config(MINIMAL))
    lines = result.ledger_dump().splitlines()
    assert lines and all(line.startswith("pair=") and " P=" in line and " N=" in line for line in lines)


# -- convergence -------------------------------------------------------------

def test_convergence_constant():
    assert convergence_report([F(1, 3)] * 10).amplitude == 0


def test_convergence_oscillating():
    series = [F(1, 2) + (F(1, 10) if i % 2 else -F(1, 10)) for i in range(40)]
    for w in (F(1, 4), F(1, 2), F(1)):
        assert convergence_report(series, w).amplitude == F(1, 5)


def test_convergence_to_one():
    series = [1 - F(1, i + 2) for i in range(400)]
    rep = convergence_report(series)
    assert rep.amplitude <= F(1, 100) and rep.window_len == 100


def test_convergence_errors():
    with pytest.raises(ValueError):
        convergence_report([])
    with pytest.raises(ValueError):
        convergence_report([1], 0)


@given(st.lists(st.fractions(0, 1, max_denominator=20), min_size=1, max_size=50),
       st.fractions(F(1, 20), 1, max_denominator=20))
def test_convergence_tail_bounds(series, window):
    rep = convergence_report(series, window)
    assert 0 <= rep.amplitude <= 1 and rep.last == series[-1]
    assert 1 <= rep.window_len <= len(series)


# -- command line -------------------------------------------------------------

def test_cli_check(capsys):
    assert main(["check", "E x. x*x=4", "--bound", "5"]) == 0
    out = capsys.readouterr().out
    assert "class: Sigma_1" in out and "bounded(5): True" in out


def test_cli_game_transcript(capsys):
    assert main(["game", "E x. A y. x>=y", "--alpha", "{3}", "--beta", "successor", "--fuel", "50"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t=0 mover=V move={3} sentence=E x. A y. x>=y"
    assert lines[1] == "t=1 mover=F move={4} sentence=A y. 3>=y"
    assert lines[-1] == "Resolved(3>=4, false)"


def test_cli_game_table_file(tmp_path, capsys):
    spec = tmp_path / "alpha.yaml"
    spec.write_text("table:\n  - ['E x. x*x=4', [2]]\ndefault: pass\n")
    assert main(["game", "E x. x*x=4", "--alpha", str(spec), "--fuel", "5"]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "Resolved((2*2)=4, true)"


def test_cli_run_writes_outputs(tmp_path, capsys):
    cfg = tmp_path / "s.yaml"
    cfg.write_text(MINIMAL)
    assert main(["run", str(cfg), "--out", str(tmp_path / "out")]) == 0
    out = tmp_path / "out"
    assert (out / "prices.csv").read_text().startswith("t,sentence_code,sentence,price\n")
    assert json.loads((out / "report.json").read_text())["conservation_ok"]
    assert "conservation ok" in capsys.readouterr().out


def test_cli_gbase(capsys):
    assert main(["gbase", str(SCENARIOS / "gbase" / "basic.yaml")]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert set(summary["agents"]) == {"bull", "bear", "late"}
    assert all(F(a["min_valuation"]) >= 0 for a in summary["agents"].values())


@pytest.mark.parametrize("argv", [
    ["check", "E x. y=1"],
    ["game", "E x. x=1", "--alpha", "sometimes"],
    ["run", "/nonexistent/config.yaml"],
])
def test_cli_config_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_cli_bad_config_file_exit_1(tmp_path, capsys):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("horizon: 3\nuniverse: ['E x. x+=1']\n")
    assert main(["run", str(cfg)]) == 1
    assert "universe[0]" in capsys.readouterr().err


def test_cli_invariant_breach_exit_2(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "s.yaml"
    cfg.write_text(MINIMAL)

    def broken(self):
        raise InvariantBreach("conservation: simulated", ["t=0 context"])
    monkeypatch.setattr(MarketState, "verify", broken)
    assert main(["run", str(cfg)]) == 2
    assert "invariant breach" in capsys.readouterr().err


def test_module_entry_point():
    import subprocess
    import sys
    out = subprocess.run([sys.executable, "-m", "vfmarket", "check", "1+1=2"], capture_output=True, text=True)
    assert out.returncode == 0 and "Delta0" in out.stdout
