"""Exact best responses, exploitability and counterfactual values."""

from __future__ import annotations

from dataclasses import dataclass

from ..game import CHANCE, DEFAULT_MAX_NODES, TERMINAL, GameSpec, GameTree, StrategyProfile, _policy_of


def as_tree(game, max_nodes: int = DEFAULT_MAX_NODES) -> GameTree:
    """Fully expanded tree for a game, a selector string, or an existing tree."""
    if isinstance(game, GameTree):
        return game.expand_all()
    if isinstance(game, str):
        from ..games import make_game

        game = make_game(game)
    if not isinstance(game, GameSpec):
        raise TypeError(f"expected a game or GameTree, got {type(game).__name__}")
    return GameTree(game, max_nodes).expand_all()


def _policies(tree: GameTree, profile) -> list:
    lookup = _policy_of(profile)
    return [
        tuple(lookup(tree.infoset_player[i], tree.infoset_keys[i], len(tree.infoset_actions[i])))
        for i in range(tree.num_infosets)
    ]


@dataclass(frozen=True)
class BestResponse:
    value: float
    strategy: StrategyProfile


def _opponent_reach(tree: GameTree, pol: list, player: int) -> list[float]:
    """Product of chance and other players' probabilities on the path to each node."""
    reach = [0.0] * len(tree)
    reach[0] = 1.0
    stack = [0]
    children, kind, probs, infoset = tree.children, tree.player, tree.probs, tree.infoset
    while stack:
        n = stack.pop()
        p = kind[n]
        if p == TERMINAL:
            continue
        r = reach[n]
        ch = children[n]
        if p == CHANCE:
            dist = probs[n]
        elif p == player:
            dist = None
        else:
            dist = pol[infoset[n]]
        for a, c in enumerate(ch):
            reach[c] = r if dist is None else r * dist[a]
            stack.append(c)
    return reach


def best_response_value(game, profile, player: int, max_nodes: int = DEFAULT_MAX_NODES) -> BestResponse:
    """Value of ``player``'s best response to the rest of ``profile``.

    Each of the player's information sets picks the action with the
    highest counterfactual value, summed over the states it contains.
    """
    tree = as_tree(game, max_nodes)
    pol = _policies(tree, profile)
    reach = _opponent_reach(tree, pol, player)
    members: dict[int, list[int]] = {}
    for n, i in enumerate(tree.infoset):
        if i >= 0 and tree.player[n] == player:
            members.setdefault(i, []).append(n)
    children, kind, probs, infoset, payoff = tree.children, tree.player, tree.probs, tree.infoset, tree.payoff
    value = [None] * len(tree)
    choice: dict[int, int] = {}

    def node_value(n):
        v = value[n]
        if v is not None:
            return v
        p = kind[n]
        if p == TERMINAL:
            v = payoff[n][player]
        elif p == CHANCE:
            v = sum(q * node_value(c) for c, q in zip(children[n], probs[n]))
        elif p == player:
            i = infoset[n]
            a = choice.get(i)
            if a is None:
                a = decide(i)
            v = node_value(children[n][a])
        else:
            v = sum(q * node_value(c) for c, q in zip(children[n], pol[infoset[n]]) if q > 0.0)
        value[n] = v
        return v

    def decide(i):
        k = len(tree.infoset_actions[i])
        totals = [0.0] * k
        for h in members[i]:
            r = reach[h]
            if r == 0.0:
                continue
            for a, c in enumerate(children[h]):
                totals[a] += r * node_value(c)
        best = max(range(k), key=lambda a: (totals[a], -a))
        choice[i] = best
        return best

    root = node_value(0)
    for i in members:
        if i not in choice:
            decide(i)
    strategy = StrategyProfile(
        {
            (player, tree.infoset_keys[i]): tuple(1.0 if a == b else 0.0 for a in range(len(tree.infoset_actions[i])))
            for i, b in sorted(choice.items())
        }
    )
    return BestResponse(root, strategy)


def profile_values(game, profile, max_nodes: int = DEFAULT_MAX_NODES) -> tuple[float, ...]:
    """Expected payoff of every player under ``profile``."""
    tree = as_tree(game, max_nodes)
    pol = _policies(tree, profile)
    total = [0.0] * tree.num_players
    stack = [(0, 1.0)]
    while stack:
        n, r = stack.pop()
        p = tree.player[n]
        if p == TERMINAL:
            for j, u in enumerate(tree.payoff[n]):
                total[j] += r * u
            continue
        dist = tree.probs[n] if p == CHANCE else pol[tree.infoset[n]]
        for c, q in zip(tree.children[n], dist):
            if q > 0.0:
                stack.append((c, r * q))
    return tuple(total)


@dataclass(frozen=True)
class Exploitability:
    total: float
    per_player: tuple[float, ...]

    def __float__(self) -> float:
        return self.total


def exploitability(game, profile, max_nodes: int = DEFAULT_MAX_NODES) -> Exploitability:
    """Sum over players of the gain from deviating to a best response."""
    tree = as_tree(game, max_nodes)
    values = profile_values(tree, profile)
    per = tuple(best_response_value(tree, profile, i).value - values[i] for i in range(tree.num_players))
    return Exploitability(sum(per), per)


def counterfactual_values(game, profile, player: int, max_nodes: int = DEFAULT_MAX_NODES) -> dict:
    """Per-action counterfactual values of ``player`` at each of its information sets.

    Keys are ``(player, infoset key)``; values are lists indexed by action.
    """
    tree = as_tree(game, max_nodes)
    pol = _policies(tree, profile)
    reach = _opponent_reach(tree, pol, player)
    children, kind, probs, infoset, payoff = tree.children, tree.player, tree.probs, tree.infoset, tree.payoff
    value = [None] * len(tree)

    def node_value(n):
        v = value[n]
        if v is not None:
            return v
        p = kind[n]
        if p == TERMINAL:
            v = payoff[n][player]
        else:
            dist = probs[n] if p == CHANCE else pol[infoset[n]]
            v = sum(q * node_value(c) for c, q in zip(children[n], dist) if q > 0.0)
        value[n] = v
        return v

    out: dict = {}
    for n in range(len(tree)):
        if kind[n] != player:
            continue
        i = infoset[n]
        key = (player, tree.infoset_keys[i])
        acc = out.setdefault(key, [0.0] * len(children[n]))
        r = reach[n]
        if r == 0.0:
            continue
        for a, c in enumerate(children[n]):
            acc[a] += r * node_value(c)
    return out
