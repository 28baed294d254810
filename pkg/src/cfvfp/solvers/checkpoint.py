"""Line-delimited JSON checkpoints.

The first line is a header carrying the format tag, version, algorithm,
solver parameters, game selector, iteration counter, nodes touched and
RNG state. Each following line holds one information set: player, key
(hex), cumulative values, average-strategy numerator and denominator,
and current policy. Floats round-trip exactly through ``repr``.
"""

from __future__ import annotations

import json

from ..game import GameSpec, StrategyProfile, uniform

FORMAT = "cfvfp-checkpoint"
VERSION = 1


class CheckpointError(ValueError):
    pass


def _game_name(game: GameSpec) -> str:
    return getattr(game, "selector", None) or game.name


def save_checkpoint(solver, path) -> None:
    tree = solver.tree_
    params = solver.get_params()
    if not isinstance(params.get("random_state"), (int, type(None))):
        params["random_state"] = None  # the stream state below is what matters
    header = {
        "format": FORMAT,
        "version": VERSION,
        "algorithm": solver.algorithm,
        "params": params,
        "game": _game_name(solver.game_),
        "t": solver.t_,
        "nodes_touched": solver.nodes_touched_,
        "rng": solver.rng_.get_state(),
        "init_rng": None if solver._init_rng is None else solver._init_rng.bit_generator.state,
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for i in range(tree.num_infosets):
            rec = {
                "player": tree.infoset_player[i],
                "key": tree.infoset_keys[i].hex(),
                "values": solver.values_[i],
                "avg_num": solver.avg_num_[i],
                "avg_den": solver.avg_den_[i],
                "policy": solver.policy_[i],
            }
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
        for rec in solver._pending.values():
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def _read(path):
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise CheckpointError(f"{path}: empty checkpoint")
    try:
        header = json.loads(lines[0])
        records = [json.loads(ln) for ln in lines[1:]]
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"{path}: {exc}") from None
    if header.get("format") != FORMAT:
        raise CheckpointError(f"{path}: not a solver checkpoint")
    if header.get("version") != VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint version {header.get('version')!r}")
    return header, records


def load_checkpoint(path, game=None):
    """Rebuild a solver so that further iterations continue bit-exactly."""
    from . import make_solver

    header, records = _read(path)
    solver = make_solver(header["algorithm"], **header["params"])
    solver.initialize(header["game"] if game is None else game)
    pending = {}
    for rec in records:
        pending[(int(rec["player"]), bytes.fromhex(rec["key"]))] = rec
    tree = solver.tree_
    for i in range(tree.num_infosets):
        rec = pending.pop((tree.infoset_player[i], tree.infoset_keys[i]), None)
        if rec is None:
            continue
        if len(rec["values"]) != len(tree.infoset_actions[i]):
            raise CheckpointError(f"action count mismatch at {tree.infoset_keys[i]!r}")
        solver.values_[i] = [float(v) for v in rec["values"]]
        solver.avg_num_[i] = [float(v) for v in rec["avg_num"]]
        solver.avg_den_[i] = float(rec["avg_den"])
        solver.policy_[i] = [float(v) for v in rec["policy"]]
    solver._pending = pending
    solver.t_ = int(header["t"])
    solver.nodes_touched_ = int(header["nodes_touched"])
    solver.rng_.set_state(header["rng"])
    if header.get("init_rng") is not None and solver._init_rng is not None:
        solver._init_rng.bit_generator.state = header["init_rng"]
    return solver


def load_profile(path) -> StrategyProfile:
    """Average strategy stored in a checkpoint, uniform where never reached."""
    _, records = _read(path)
    out = {}
    for rec in records:
        den = float(rec["avg_den"])
        num = [float(v) for v in rec["avg_num"]]
        if den > 0.0:
            s = sum(num)
            probs = tuple(v / s for v in num)
        else:
            probs = uniform(len(num))
        out[(int(rec["player"]), bytes.fromhex(rec["key"]))] = probs
    return StrategyProfile(out)
