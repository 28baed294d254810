"""Command-line entry point: solve, match, census, predict-census."""

from __future__ import annotations

import argparse
import csv
import sys

from ..game import TreeTooLarge, enumerate_tree
from ..games import InvalidParams, make_game
from .config import ConfigError, SolverSpec, parse_budget, parse_config


def _solve(args) -> int:
    text = ""
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    overrides = {
        "game": args.game,
        "trials": args.trials,
        "cadence": args.cadence,
        "seed": args.seed,
        "out": args.out,
        "timing": args.timing,
        "jobs": args.jobs,
        "checkpoint": True if args.checkpoint else None,
    }
    if args.budget:
        overrides["budget_kind"], overrides["budget"] = parse_budget(args.budget)
    if args.algo:
        names = [n for item in args.algo for n in item.split(",") if n]
        overrides["solvers"] = tuple(SolverSpec(n.strip().lower(), args.weight or "constant") for n in names)
    cfg = parse_config(text, **overrides)
    if args.weight and not args.algo:
        from dataclasses import replace

        cfg = replace(cfg, solvers=tuple(replace(s, weight=args.weight) for s in cfg.solvers))
    from .experiment import run_experiment

    res = run_experiment(cfg)
    sys.stdout.write(res.summary_csv)
    return 0


def _match(args) -> int:
    from ..solvers import CheckpointError, load_profile
    from .match import MatchConfig, run_match

    try:
        a = load_profile(args.profile_a)
        b = load_profile(args.profile_b)
    except (OSError, CheckpointError) as exc:
        raise ConfigError(str(exc)) from None
    try:
        game = make_game(args.game)
    except InvalidParams as exc:
        raise ConfigError(str(exc)) from None
    res = run_match(MatchConfig(game, a, b, args.players, args.episodes, args.seed))
    out = sys.stdout
    out.write("r1,r1_se,r2,r2_se,episodes\n")
    out.write(f"{res.r1!r},{res.r1_se!r},{res.r2!r},{res.r2_se!r},{args.episodes}\n")
    if args.log:
        with open(args.log, "w", encoding="utf-8", newline="") as fh:
            fh.write("episode,competition,seat,payoffs\n")
            for i, e in enumerate(res.episodes):
                fh.write(f"{i},{e.competition},{e.seat},{' '.join(repr(u) for u in e.payoffs)}\n")
    return 0


def _census(args) -> int:
    try:
        game = make_game(args.game)
    except InvalidParams as exc:
        raise ConfigError(str(exc)) from None
    c = enumerate_tree(game, args.max_nodes)
    out = sys.stdout
    players = range(len(c.infosets_per_player))
    header = ["game", "infosets", "nodes", "terminal", "chance"]
    header += [f"decision_p{i}" for i in players] + [f"infosets_p{i}" for i in players]
    row = [game.name, c.infosets, c.nodes, c.terminal_nodes, c.chance_nodes, *c.decision_nodes, *c.infosets_per_player]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerow(row)
    return 0


def _predict(args) -> int:
    from ..metrics import predict_census

    if args.g < 1 or args.h < 1:
        raise ConfigError("g and h must be >= 1")
    p = predict_census(args.g, args.h)
    sys.stdout.write("g,h,red,blue,yellow,green,pass,all\n")
    sys.stdout.write(f"{p.g},{p.h},{p.red},{p.blue},{p.yellow},{p.green},{p.passed},{p.all}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cfvfp", description="Equilibrium solvers for imperfect-information games.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run seeded solver trials and write CSVs")
    s.add_argument("--config", help="experiment config file")
    s.add_argument("--game", help="game selector, e.g. kuhn:x=3,y=1,z=1")
    s.add_argument("--algo", action="append", help="solver name; repeat or comma-separate")
    s.add_argument("--weight", help="averaging weight: constant, log, linear, quadratic")
    s.add_argument("--trials", type=int)
    s.add_argument("--budget", help="iters=N, nodes=N or ms=N")
    s.add_argument("--cadence", type=int, help="evaluate every K iterations (or nodes)")
    s.add_argument("--seed", type=int)
    s.add_argument("--out", help="output directory")
    s.add_argument("--timing", choices=("off", "wall"), help="record wall-clock solve time")
    s.add_argument("--jobs", type=int, help="worker processes")
    s.add_argument("--checkpoint", action="store_true", help="save each trial's final solver state")
    s.set_defaults(func=_solve)

    m = sub.add_parser("match", help="head-to-head play between two saved profiles")
    m.add_argument("--game", required=True)
    m.add_argument("--profile-a", required=True)
    m.add_argument("--profile-b", required=True)
    m.add_argument("--players", type=int, default=2)
    m.add_argument("--episodes", type=int, default=1000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--log", help="write the per-episode log here")
    m.set_defaults(func=_match)

    c = sub.add_parser("census", help="count information sets and nodes")
    c.add_argument("--game", required=True)
    c.add_argument("--max-nodes", type=int, default=10**8)
    c.set_defaults(func=_census)

    p = sub.add_parser("predict-census", help="closed-form node colour counts for layer h")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.set_defaults(func=_predict)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TreeTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
