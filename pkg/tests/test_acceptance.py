"""Acceptance criteria, each checked at its stated tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the
pytest terminal summary.
"""

import math
import statistics
import subprocess
import sys
import time

import numpy as np

from cfvfp.game import enumerate_tree
from cfvfp.games import CompleteTreeGame, SingleDecisionGame, make_game
from cfvfp.game import StrategyProfile
from cfvfp.metrics import NodeColor, as_tree, census_by_color, counterfactual_values, exploitability, predict_census
from cfvfp.normal_form import (
    FictitiousPlay,
    LearnerState,
    RegretMatching,
    fp_next_action,
    gen_boosted_matrix,
    gen_random_matrix,
    learner_observe,
    next_policy,
    rm_next_policy,
    rps_leaky_rock,
)
from cfvfp.solvers import make_solver
from cfvfp.utils import check_rng, trial_seed

SEED = 2024


def test_criterion_1_game_sizes(report):
    table = {
        "kuhn:x=3,y=1,z=1": (12, 55),
        "kuhn:x=15,y=1,z=1": (60, 1891),
        "kuhn:x=50,y=1,z=1": (200, 22051),
        "kuhn:x=7,y=5,z=3": (364, 6427),
        "leduc:x=3,y=1,z=1": (288, 1945),
        "leduc:x=7,y=1,z=1": (1512, 25985),
        "pam:rounds=4": (224, 68815),
        "pam:rounds=5": (794, 715655),
    }
    wrong = []
    pam5_secs = None
    for sel, expected in table.items():
        start = time.perf_counter()
        c = enumerate_tree(make_game(sel))
        secs = time.perf_counter() - start
        if sel == "pam:rounds=5":
            pam5_secs = secs
        if (c.infosets, c.nodes) != expected:
            wrong.append(f"{sel}={c.infosets, c.nodes}")
    ok = not wrong and pam5_secs <= 60
    report(1, ok, f"{len(table) - len(wrong)}/{len(table)} exact, pam(5) {pam5_secs:.1f}s" + (f", mismatches {wrong}" if wrong else ""))


def test_criterion_2_leaky_rock_step(report):
    g = rps_leaky_rock()
    st = learner_observe(LearnerState.new("rm", 4), g.payoffs[:, 2])
    regrets_ok = st.cumulative.tolist() == [0.775, -1.225, -0.225, 0.675]
    pol = rm_next_policy(st)
    policy_ok = (
        abs(pol[0] - 0.775 / 1.45) <= 1e-12
        and abs(pol[3] - 0.675 / 1.45) <= 1e-12
        and pol[1] == 0.0
        and pol[2] == 0.0
    )
    rng = check_rng(SEED)
    fp = next_policy(learner_observe(LearnerState.new("fp", 4), g.payoffs[:, 2]), rng)
    rock_first = int(np.argmax(fp.policy)) == 0
    lr_picked = 0
    for _ in range(1000):
        fp = next_policy(learner_observe(fp, g.payoffs[:, int(rng.integers(3))]), rng)
        lr_picked += fp_next_action(fp, rng) == 3 or fp.policy[3] == 1.0
    ok = regrets_ok and policy_ok and rock_first and lr_picked == 0
    report(2, ok, f"regrets {st.cumulative.tolist()}, policy {np.round(pol, 4).tolist()}, FP first Rock={rock_first}, LR picks={lr_picked}")


def test_criterion_3_convergence(report):
    game = make_game("kuhn:x=3,y=1,z=1")
    tree = as_tree(game)
    results = {}
    slow = []
    for algo in ("cfr", "cfr+", "cfvfp"):
        start = time.perf_counter()
        s = make_solver(algo, n_iter=10_000, random_state=SEED).fit(game)
        results[algo] = exploitability(tree, s.average_profile()).total
        if time.perf_counter() - start > 120:
            slow.append(algo)
    for algo in ("es-mccfr", "mccfvfp"):
        start = time.perf_counter()
        s = make_solver(algo, random_state=SEED).initialize(game)
        while s.nodes_touched_ < 10**7:
            s.partial_fit(n_iter=1000)
        results[algo] = exploitability(tree, s.average_profile()).total
        if time.perf_counter() - start > 120:
            slow.append(algo)
    ok = all(v < 1e-2 for v in results.values()) and not slow
    detail = ", ".join(f"{k}={v:.2e}" for k, v in results.items())
    report(3, ok, detail + (f", over 2 min: {slow}" if slow else ""))


def _mc_run(algo, game, tree, trial, budget, snapshots):
    s = make_solver(algo, random_state=check_rng(trial_seed(SEED, trial))).initialize(game)
    curve = []
    step = budget // snapshots
    target = step
    while s.nodes_touched_ < budget:
        s.partial_fit(n_iter=1)
        if s.nodes_touched_ >= target:
            curve.append((s.solve_time_ns_, exploitability(tree, s.average_profile()).total))
            target += step
    return curve


def _headline(selector, trials=30, budget=10**6):
    game = make_game(selector)
    tree = as_tree(game)
    wins = 0
    ratios = []
    for k in range(trials):
        fv = _mc_run("mccfvfp", game, tree, k, budget, 20)
        es = _mc_run("es-mccfr", game, tree, k, budget, 1)
        es_time, es_eps = es[-1]
        wins += fv[-1][1] <= es_eps
        reach = next((t for t, e in fv if e <= es_eps), math.inf)
        ratios.append(reach / es_time)
    return wins, statistics.median(ratios)


def test_criterion_4_headline_comparison(report):
    parts = []
    ok = True
    for sel in ("kuhn:x=15,y=5,z=3", "leduc:x=3,y=1,z=1"):
        wins, ratio = _headline(sel)
        good = wins >= 18 and ratio <= 0.8
        ok &= good
        parts.append(f"{sel}: MCCFVFP <= ES in {wins}/30, median time ratio {ratio:.2f}")
    report(4, ok, "; ".join(parts))


def test_criterion_5_census_formulas(report):
    bad = []
    for g in (2, 3, 4):
        for h in range(3, 8):
            game = CompleteTreeGame(g, h)
            rng = check_rng(g * 100 + h)
            prof = StrategyProfile.from_function(game, lambda p, k, a: np.eye(len(a))[rng.integers(len(a))])
            layer = census_by_color(game, prof).layer(h)
            pred = predict_census(g, h)
            got = (layer[NodeColor.RED], layer[NodeColor.BLUE], layer[NodeColor.YELLOW], layer[NodeColor.RED] + layer[NodeColor.BLUE] + layer[NodeColor.YELLOW])
            if got != (pred.red, pred.blue, pred.yellow, pred.passed):
                bad.append((g, h, got))
    f4 = predict_census(3, 4).passed
    report(5, not bad and f4 == 11, f"15 (g,h) pairs checked, F_4(pass) at g=3 is {f4}" + (f", mismatches {bad}" if bad else ""))


def test_criterion_6_pruning_soundness(report):
    parts = []
    ok = True
    for sel in ("kuhn:x=3,y=1,z=1", "leduc:x=3,y=1,z=1"):
        pruned = make_solver("cfvfp", prune=True, prune_threshold=0.0, random_state=SEED).initialize(sel)
        full = make_solver("cfvfp", prune=False, random_state=SEED).initialize(sel)
        fewer = True
        for t in range(1, 101):
            a0, b0 = pruned.nodes_touched_, full.nodes_touched_
            pruned.partial_fit(n_iter=1)
            full.partial_fit(n_iter=1)
            if t > 2 and not pruned.nodes_touched_ - a0 < full.nodes_touched_ - b0:
                fewer = False
        diff = 0.0
        for xs, ys in ((pruned.values_, full.values_), (pruned.avg_num_, full.avg_num_), ([pruned.avg_den_], [full.avg_den_])):
            for x, y in zip(xs, ys):
                diff = max([diff] + [abs(u - v) for u, v in zip(x, y)])
        ok &= diff <= 1e-9 and fewer
        parts.append(f"{sel}: max diff {diff:.1e}, fewer nodes every iteration after 2: {fewer}")
    report(6, ok, "; ".join(parts))


def test_criterion_7_mc_unbiasedness(report):
    game = SingleDecisionGame([[1.0, 0.0, -1.0], [-1.0, 2.0, 0.5]], [0.3, 0.7])
    parts = []
    ok = True
    for algo, kwargs in (("es-mccfr", {"traverser": 0}), ("mccfvfp", {})):
        s = make_solver(algo, n_iter=5, random_state=SEED).fit(game)
        exact = np.array(counterfactual_values(game, s.current_profile(), 0)[(0, b"I")])
        n = 10_000
        draws = np.array([s.sampled_counterfactual_values(random_state=(SEED, k), **kwargs).get((0, b"I"), [0.0] * 3) for k in range(n)])
        se = draws.std(axis=0, ddof=1) / math.sqrt(n)
        z = np.abs(draws.mean(axis=0) - exact) / np.maximum(se, 1e-300)
        ok &= bool(np.all(z <= 4.0))
        parts.append(f"{algo} max |z| {z.max():.2f}")
    report(7, ok, ", ".join(parts) + " over 10^4 samples")


def _figure1(boost):
    rm, fp = [], []
    for k in range(30):
        seed = trial_seed(SEED, k)
        mat = gen_boosted_matrix(100, 100, 10, 5.0, seed) if boost else gen_random_matrix(100, 100, seed)
        rm.append(RegretMatching(n_iter=10_000, eval_every=10_000, random_state=seed).fit(mat).exploitability_)
        fp.append(FictitiousPlay(n_iter=10_000, eval_every=10_000, random_state=seed).fit(mat).exploitability_)
    return statistics.fmean(rm), statistics.fmean(fp)


def test_criterion_8_figure1_clear_games(report):
    rm, fp = _figure1(True)
    rm_u, fp_u = _figure1(False)
    ratio = fp / rm
    report(
        8,
        ratio <= 1.5,
        f"boosted: FP {fp:.4f} vs RM {rm:.4f} (ratio {ratio:.2f}, bound 1.5); unboosted: FP {fp_u:.4f} vs RM {rm_u:.4f} (ratio {fp_u / rm_u:.2f})",
    )


def _cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "cfvfp", *args], cwd=cwd, capture_output=True, check=True).stdout


def test_criterion_9_cli_determinism(report, tmp_path):
    outputs = []
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        blobs = []
        blobs.append(_cli(["solve", "--game", "kuhn", "--algo", "cfr,mccfvfp,es-mccfr", "--trials", "2", "--budget", "iters=200",
                           "--cadence", "50", "--seed", "7", "--out", "out", "--checkpoint"], d))
        blobs.append(_cli(["solve", "--game", "leduc", "--algo", "mccfvfp", "--trials", "2", "--budget", "nodes=20000",
                           "--cadence", "5000", "--seed", "7", "--out", "nodes"], d))
        blobs.append(_cli(["solve", "--game", "randmat:n=20,m=20,boost=5,rows=3", "--algo", "rm,fp", "--trials", "2",
                           "--budget", "iters=500", "--cadence", "100", "--seed", "7", "--out", "mat"], d))
        blobs.append(_cli(["match", "--game", "kuhn", "--profile-a", "out/cfr_trial0.jsonl", "--profile-b",
                           "out/mccfvfp_trial1.jsonl", "--episodes", "300", "--seed", "7", "--log", "log.csv"], d))
        blobs.append(_cli(["census", "--game", "leduc"], d))
        blobs.append(_cli(["predict-census", "--g", "3", "--h", "6"], d))
        files = sorted(p for p in d.rglob("*") if p.is_file())
        blobs += [(p.relative_to(d).as_posix(), p.read_bytes()) for p in files]
        outputs.append(blobs)
    same = outputs[0] == outputs[1]
    report(9, same, f"{len(outputs[0])} outputs (stdout and files) compared byte for byte across two runs")
