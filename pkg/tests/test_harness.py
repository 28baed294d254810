import csv
import io

import numpy as np
import pytest

from cfvfp.games import make_game
from cfvfp.harness import (
    ConfigError,
    ExperimentConfig,
    MatchConfig,
    SolverSpec,
    confidence_interval,
    emit_plotdata,
    expected_match_value,
    parse_budget,
    parse_config,
    run_experiment,
    run_match,
    run_trial,
)
from cfvfp.harness.cli import main
from cfvfp.solvers import CFR, save_checkpoint

CONFIG = """
[experiment]
game = kuhn:x=3,y=1,z=1   # standard Kuhn
trials = 2
budget = iters=100
cadence = 10
seed = 4

[solver cfr]

[solver mccfvfp]
weight = linear
prune = yes
"""


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_config():
    cfg = parse_config(CONFIG, out="x")
    assert cfg.game == "kuhn:x=3,y=1,z=1" and cfg.trials == 2
    assert (cfg.budget_kind, cfg.budget, cfg.cadence, cfg.seed, cfg.out) == ("iters", 100, 10, 4, "x")
    assert cfg.solvers == (SolverSpec("cfr"), SolverSpec("mccfvfp", "linear", (("prune", True),)))
    assert cfg.solvers[1].label == "mccfvfp/linear"


@pytest.mark.parametrize(
    "text",
    [
        "[experiment]\ngame = kuhn\n",
        "[experiment]\ngame = kuhn\ntrials = 0\n[solver cfr]\n",
        "[experiment]\ngame = kuhn\nbudget = 100\n[solver cfr]\n",
        "[experiment]\ngame = kuhn\nbudget = steps=100\n[solver cfr]\n",
        "[experiment]\ngame = kuhn\ncadence = 0\n[solver cfr]\n",
        "[experiment]\ngame = chess\n[solver cfr]\n",
        "[experiment]\ngame = kuhn\n[solver dcfr]\n",
        "[experiment]\ngame = kuhn\n[solver cfr]\nweight = cubic\n",
        "[experiment]\ngame = kuhn\n[solver cfr]\nfoo = 1\n",
        "[experiment]\ngame = kuhn\ncolor = red\n[solver cfr]\n",
        "[experiment]\ngame = rps\n[solver rm]\n[solver cfr]\n",
        "[weird]\n",
        "no section",
    ],
)
def test_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_parse_budget():
    assert parse_budget("nodes=1e6") == ("nodes", 1_000_000)
    with pytest.raises(ConfigError):
        parse_budget("iters=lots")


def test_smoke_experiment(tmp_path):
    cfg = parse_config(CONFIG, out=str(tmp_path / "a"))
    res = run_experiment(cfg)
    r = rows(res.results_csv)
    assert list(r[0]) == ["trial", "iter", "algo", "exploitability", "elapsed_ns", "nodes"]
    cfr0 = [x for x in r if x["algo"] == "cfr" and x["trial"] == "0"]
    assert [int(x["iter"]) for x in cfr0] == list(range(10, 101, 10))
    eps = [float(x["exploitability"]) for x in cfr0]
    assert eps[-1] < eps[0]
    summary = rows(res.summary_csv)
    assert len(summary) == 20 and summary[0]["trials"] == "2"
    assert (tmp_path / "a" / "plotdata.csv").exists()


def test_experiment_is_byte_identical(tmp_path):
    a = run_experiment(parse_config(CONFIG, out=str(tmp_path / "a")))
    b = run_experiment(parse_config(CONFIG, out=str(tmp_path / "b")))
    for name in ("results.csv", "summary.csv", "plotdata.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert a.results_csv == b.results_csv


def test_trials_are_independent_of_order():
    cfg = parse_config(CONFIG, out="unused", trials=3)
    spec = cfg.solvers[1]
    forward = [run_trial(cfg, spec, t) for t in range(3)]
    backward = [run_trial(cfg, spec, t) for t in reversed(range(3))][::-1]
    assert forward == backward


def test_nodes_budget_and_wall_timing():
    cfg = ExperimentConfig(
        "kuhn", (SolverSpec("es-mccfr"),), trials=1, budget_kind="nodes", budget=5000, cadence=1000, timing="wall", out="unused"
    )
    rec = run_trial(cfg, cfg.solvers[0], 0)
    nodes = [s.nodes for s in rec.snapshots]
    assert len(nodes) == 5 and nodes == sorted(nodes) and nodes[-1] >= 5000
    assert all(s.elapsed_ns > 0 for s in rec.snapshots)


def test_matrix_experiment():
    cfg = ExperimentConfig(
        "randmat:n=20,m=20,boost=5,rows=3", (SolverSpec("rm"), SolverSpec("fp")), trials=2, budget=200, cadence=50, out="unused"
    )
    res = run_experiment(cfg, write=False)
    r = rows(res.results_csv)
    assert {x["algo"] for x in r} == {"rm", "fp"}
    assert len(r) == 2 * 2 * 4


def test_emit_plotdata():
    cfg = ExperimentConfig("kuhn", (SolverSpec("cfr"),), trials=1, budget=10, cadence=10, out="unused")
    rec = run_trial(cfg, cfg.solvers[0], 0)
    out = emit_plotdata([rec])
    assert len(out) == 3
    assert list(out[0]) == ["game", "solver", "trial", "x_kind", "x", "exploitability"]
    assert [r["x_kind"] for r in out] == ["iteration", "nodes", "time"]
    with pytest.raises(ValueError):
        emit_plotdata([])


def test_plotdata_row_count():
    cfg = ExperimentConfig("kuhn", (SolverSpec("cfr"),), trials=3, budget=40, cadence=10, out="unused")
    res = run_experiment(cfg, write=False)
    assert len(rows(res.plot_csv)) == 3 * 4 * 3


def test_ci_coverage():
    rng = np.random.default_rng(0)
    hits = 0
    for _ in range(1000):
        sample = rng.normal(2.0, 1.0, size=30)
        _, _, lo, hi = confidence_interval(sample)
        hits += lo <= 2.0 <= hi
    assert 850 <= hits <= 950


def test_bootstrap_ci():
    mean, std, lo, hi = confidence_interval([1.0, 2.0, 3.0, 4.0], "bootstrap", 500, 0)
    assert lo <= mean <= hi and std > 0
    assert confidence_interval([5.0]) == (5.0, 0.0, 5.0, 5.0)


def test_match_symmetry_null():
    g = make_game("kuhn")
    prof = CFR(n_iter=200).fit(g).average_profile()
    res = run_match(MatchConfig(g, prof, prof, episodes=4000, seed=1))
    diff = res.r1 - res.r2
    assert abs(diff) <= 3 * (res.r1_se**2 + res.r2_se**2) ** 0.5


def test_match_against_uniform():
    g = make_game("kuhn")
    strong = CFR(n_iter=2000).fit(g).average_profile()
    from cfvfp.game import StrategyProfile

    exact = expected_match_value(g, strong, StrategyProfile())
    assert exact > 0.0  # the game value averaged over seats is 0
    res = run_match(MatchConfig(g, strong, StrategyProfile(), episodes=5000, seed=2))
    assert abs(res.r1 - exact) <= 4 * res.r1_se
    assert res.r1 > 0.0


def test_match_is_deterministic():
    g = make_game("kuhn")
    prof = CFR(n_iter=50).fit(g).average_profile()
    a = run_match(MatchConfig(g, prof, prof, episodes=200, seed=3))
    b = run_match(MatchConfig(g, prof, prof, episodes=200, seed=3))
    assert a.episodes == b.episodes


def test_match_config_errors():
    with pytest.raises(ConfigError):
        MatchConfig(make_game("kuhn"), None, None, players=3)
    with pytest.raises(ConfigError):
        MatchConfig(make_game("kuhn"), None, None, episodes=0)


def test_cli_solve_and_match(tmp_path, capsys):
    out = tmp_path / "run"
    code = main(["solve", "--game", "kuhn", "--algo", "cfr", "--trials", "1", "--budget", "iters=30",
                 "--cadence", "10", "--seed", "2", "--out", str(out), "--checkpoint"])
    assert code == 0
    assert "algo,x_kind,x" in capsys.readouterr().out
    ck = out / "cfr_trial0.jsonl"
    assert ck.exists()
    code = main(["match", "--game", "kuhn", "--profile-a", str(ck), "--profile-b", str(ck), "--episodes", "50", "--log", str(tmp_path / "log.csv")])
    assert code == 0
    assert capsys.readouterr().out.startswith("r1,r1_se,r2,r2_se,episodes")


def test_cli_config_file(tmp_path, capsys):
    path = tmp_path / "exp.ini"
    path.write_text(CONFIG)
    assert main(["solve", "--config", str(path), "--out", str(tmp_path / "o"), "--trials", "1", "--weight", "log"]) == 0
    r = rows((tmp_path / "o" / "results.csv").read_text())
    assert {x["algo"] for x in r} == {"cfr/log", "mccfvfp/log"}


def test_cli_census_and_predict(capsys):
    assert main(["census", "--game", "kuhn:x=3,y=1,z=1"]) == 0
    r = rows(capsys.readouterr().out)
    assert (r[0]["infosets"], r[0]["nodes"]) == ("12", "55")
    assert main(["predict-census", "--g", "3", "--h", "4"]) == 0
    r = rows(capsys.readouterr().out)
    assert (r[0]["blue"], r[0]["pass"]) == ("8", "11")


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--game", "chess", "--algo", "cfr"],
        ["solve", "--game", "kuhn", "--algo", "cfr", "--budget", "weeks=2"],
        ["solve", "--game", "kuhn"],
        ["census", "--game", "kuhn:q=1"],
        ["census", "--game", "pam:rounds=5", "--max-nodes", "100"],
        ["match", "--game", "kuhn", "--profile-a", "/nonexistent", "--profile-b", "/nonexistent"],
        ["predict-census", "--g", "0", "--h", "3"],
    ],
)
def test_cli_config_errors_exit_2(argv, tmp_path, capsys):
    assert main(argv + (["--out", str(tmp_path)] if argv[0] == "solve" else [])) == 2


def test_cli_bad_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--bogus"])
    assert exc.value.code == 2


def test_cli_match_players(tmp_path):
    s = CFR(n_iter=5).fit("kuhn")
    ck = tmp_path / "p.jsonl"
    save_checkpoint(s, ck)
    assert main(["match", "--game", "kuhn", "--profile-a", str(ck), "--profile-b", str(ck), "--players", "3"]) == 2
