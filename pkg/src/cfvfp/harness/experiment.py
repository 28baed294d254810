"""Seeded multi-trial runs with periodic exploitability snapshots."""

from __future__ import annotations

import csv
import io
import math
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..games import make_game, parse_selector
from ..metrics import as_tree, exploitability
from ..normal_form import FictitiousPlay, RegretMatching, make_matrix_game
from ..solvers import make_solver, save_checkpoint
from ..utils import check_rng, trial_seed
from .config import ExperimentConfig, SolverSpec

Z90 = 1.6448536269514722
RESULT_FIELDS = ("trial", "iter", "algo", "exploitability", "elapsed_ns", "nodes")
SUMMARY_FIELDS = ("algo", "x_kind", "x", "trials", "mean", "std", "ci_low", "ci_high")
PLOT_FIELDS = ("game", "solver", "trial", "x_kind", "x", "exploitability")


@dataclass(frozen=True)
class Snapshot:
    trial: int
    iteration: int
    nodes: int | None
    elapsed_ns: int
    exploitability: float


@dataclass(frozen=True)
class RunRecord:
    game: str
    algo: str
    trial: int
    seed: int
    snapshots: tuple[Snapshot, ...]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


# ---------------------------------------------------------------------------
# Single trials


def _run_matrix(cfg: ExperimentConfig, spec: SolverSpec, trial: int) -> list[Snapshot]:
    rng = check_rng(trial_seed(cfg.seed, trial))
    name, params = parse_selector(cfg.game)
    selector = cfg.game
    if name == "randmat" and "seed" not in params:
        selector = f"{cfg.game}{',' if ':' in cfg.game else ':'}seed={int(rng.integers(2**31))}"
    game = make_matrix_game(selector)
    cls = RegretMatching if spec.name == "rm" else FictitiousPlay
    n_iter = cfg.budget if cfg.budget_kind == "iters" else 10**9
    learner = cls(n_iter=n_iter, eval_every=cfg.cadence, random_state=rng, **dict(spec.params))
    if cfg.budget_kind == "ms":
        learner.set_params(time_budget_ns=cfg.budget * 10**6)
    learner.fit(game)
    wall = cfg.timing == "wall"
    return [Snapshot(trial, t, None, ns if wall else 0, float(e)) for t, ns, e in learner.curve_]


_TREES: dict = {}


def _eval_tree(selector: str):
    tree = _TREES.get(selector)
    if tree is None:
        tree = _TREES[selector] = as_tree(make_game(selector))
    return tree


def _run_tree(cfg: ExperimentConfig, spec: SolverSpec, trial: int) -> tuple[list[Snapshot], object]:
    game = make_game(cfg.game)
    tree = _eval_tree(cfg.game)
    rng = check_rng(trial_seed(cfg.seed, trial))
    params = dict(spec.params)
    params.setdefault("weighting", spec.weight)
    solver = make_solver(spec.name, random_state=rng, **params)
    solver.initialize(game)
    wall = cfg.timing == "wall"
    snaps = []

    def snap():
        eps = exploitability(tree, solver.average_profile()).total
        snaps.append(Snapshot(trial, solver.t_, solver.nodes_touched_, solver.solve_time_ns_ if wall else 0, eps))

    kind, budget, cadence = cfg.budget_kind, cfg.budget, cfg.cadence
    if kind == "iters":
        while solver.t_ < budget:
            solver.partial_fit(n_iter=min(cadence, budget - solver.t_))
            snap()
    elif kind == "nodes":
        target = cadence
        while solver.nodes_touched_ < budget:
            target = min(target, budget)
            while solver.nodes_touched_ < target:
                solver.partial_fit(n_iter=1)
            snap()
            while target <= solver.nodes_touched_:
                target += cadence
    else:
        limit = budget * 10**6
        while solver.solve_time_ns_ < limit:
            solver.partial_fit(n_iter=cadence)
            snap()
    return snaps, solver


def run_trial(cfg: ExperimentConfig, spec: SolverSpec, trial: int) -> RunRecord:
    """One seeded run; its output depends only on (config, solver, trial)."""
    if spec.name in ("rm", "fp"):
        snaps = _run_matrix(cfg, spec, trial)
    else:
        snaps, solver = _run_tree(cfg, spec, trial)
        if cfg.checkpoint:
            os.makedirs(cfg.out, exist_ok=True)
            save_checkpoint(solver, os.path.join(cfg.out, checkpoint_name(spec, trial)))
    seed = int(trial_seed(cfg.seed, trial).generate_state(1)[0])
    return RunRecord(cfg.game, spec.label, trial, seed, tuple(snaps))


def checkpoint_name(spec: SolverSpec, trial: int) -> str:
    return f"{spec.label.replace('/', '-')}_trial{trial}.jsonl"


def _job(args):
    return run_trial(*args)


# ---------------------------------------------------------------------------
# Batches and summaries


def run_records(cfg: ExperimentConfig) -> list[RunRecord]:
    jobs = [(cfg, spec, trial) for spec in cfg.solvers for trial in range(cfg.trials)]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(_job, jobs))
    return [_job(j) for j in jobs]


def confidence_interval(values, method="normal", samples=1000, rng=None) -> tuple[float, float, float, float]:
    """Mean, sample std and a 90% interval for the mean."""
    vals = [float(v) for v in values]
    n = len(vals)
    mean = math.fsum(vals) / n
    std = statistics.stdev(vals) if n > 1 else 0.0
    if method == "normal" or n == 1:
        half = Z90 * std / math.sqrt(n)
        return mean, std, mean - half, mean + half
    rng = check_rng(rng)
    arr = np.asarray(vals)
    means = arr[rng.integers(0, n, size=(samples, n))].mean(axis=1)
    lo, hi = np.quantile(means, [0.05, 0.95])
    return mean, std, float(lo), float(hi)


def summarize(cfg: ExperimentConfig, records: list[RunRecord]) -> list[dict]:
    """Per solver and evaluation point: mean exploitability and 90% interval."""
    rng = check_rng(trial_seed(cfg.seed, 2**32 - 1))
    out = []
    by_algo: dict[str, list[RunRecord]] = {}
    for r in records:
        by_algo.setdefault(r.algo, []).append(r)
    x_kind = {"iters": "iteration", "nodes": "nodes", "ms": "iteration"}[cfg.budget_kind]
    for algo, recs in by_algo.items():
        depth = max(len(r.snapshots) for r in recs)
        for k in range(depth):
            snaps = [r.snapshots[k] for r in recs if k < len(r.snapshots)]
            if cfg.budget_kind == "iters":
                x = snaps[0].iteration
            elif cfg.budget_kind == "nodes":
                x = min((k + 1) * cfg.cadence, cfg.budget)
            else:
                x = snaps[0].iteration
            mean, std, lo, hi = confidence_interval(
                [s.exploitability for s in snaps], cfg.ci, cfg.bootstrap_samples, rng
            )
            out.append(
                {"algo": algo, "x_kind": x_kind, "x": x, "trials": len(snaps), "mean": mean, "std": std, "ci_low": lo, "ci_high": hi}
            )
    return out


def emit_plotdata(records: list[RunRecord]) -> list[dict]:
    """Long-format rows, one per snapshot per x-axis kind."""
    rows = []
    for r in records:
        for s in r.snapshots:
            for kind, x in (("iteration", s.iteration), ("nodes", s.nodes), ("time", s.elapsed_ns)):
                rows.append(
                    {"game": r.game, "solver": r.algo, "trial": r.trial, "x_kind": kind, "x": x, "exploitability": s.exploitability}
                )
    if not rows:
        raise ValueError("no snapshots to emit")
    return rows


def _csv(rows, fields) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for row in rows:
        w.writerow([_fmt(row[f]) for f in fields])
    return buf.getvalue()


def result_rows(records: list[RunRecord]) -> list[dict]:
    return [
        {
            "trial": s.trial,
            "iter": s.iteration,
            "algo": r.algo,
            "exploitability": s.exploitability,
            "elapsed_ns": s.elapsed_ns,
            "nodes": s.nodes,
        }
        for r in records
        for s in r.snapshots
    ]


@dataclass(frozen=True)
class ExperimentResult:
    records: list
    results_csv: str
    summary_csv: str
    plot_csv: str


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    """Run every (solver, trial) pair and write results, summary and plot data CSVs."""
    records = run_records(cfg)
    res = ExperimentResult(
        records,
        _csv(result_rows(records), RESULT_FIELDS),
        _csv(summarize(cfg, records), SUMMARY_FIELDS),
        _csv(emit_plotdata(records), PLOT_FIELDS),
    )
    if write:
        os.makedirs(cfg.out, exist_ok=True)
        for name, text in (("results.csv", res.results_csv), ("summary.csv", res.summary_csv), ("plotdata.csv", res.plot_csv)):
            with open(os.path.join(cfg.out, name), "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    return res
