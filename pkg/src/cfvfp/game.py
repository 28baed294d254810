"""Extensive-form game abstraction shared by every game and solver.

A game is described by a :class:`GameSpec` subclass exposing a pure
transition function over immutable states. Nothing here requires the tree
to be materialized; :class:`GameTree` expands nodes on demand and caches
them for the solvers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Mapping, Sequence

State = Hashable
Action = Hashable

CHANCE = -1
TERMINAL = -2

DEFAULT_MAX_NODES = 10**8


class TreeTooLarge(RuntimeError):
    """Raised when a traversal exceeds the configured node cap."""


class NodeKind(enum.Enum):
    CHANCE = "chance"
    DECISION = "decision"
    TERMINAL = "terminal"


class GameSpec:
    """Interface every game implements.

    Subclasses override the abstract methods below. ``current_player``
    returns a player index, :data:`CHANCE` or :data:`TERMINAL`. Legal
    action order is part of the contract: policies are positional.
    """

    num_players: int = 2
    name: str = "game"

    def initial_state(self) -> State:
        raise NotImplementedError

    def current_player(self, state: State) -> int:
        raise NotImplementedError

    def legal_actions(self, state: State) -> Sequence[Action]:
        raise NotImplementedError

    def chance_probs(self, state: State) -> Sequence[float]:
        """Probabilities aligned with ``legal_actions`` at a chance node."""
        raise NotImplementedError

    def next_state(self, state: State, action: Action) -> State:
        raise NotImplementedError

    def payoffs(self, state: State) -> Sequence[float]:
        raise NotImplementedError

    def infoset_key(self, state: State) -> bytes:
        """Key of the acting player's information set at ``state``."""
        raise NotImplementedError

    def node_kind(self, state: State) -> NodeKind:
        p = self.current_player(state)
        if p == TERMINAL:
            return NodeKind.TERMINAL
        if p == CHANCE:
            return NodeKind.CHANCE
        return NodeKind.DECISION

    def action_label(self, state: State, action: Action) -> str:
        return str(action)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


@dataclass(frozen=True)
class TreeCensus:
    nodes: int
    terminal_nodes: int
    chance_nodes: int
    decision_nodes: tuple[int, ...]
    infosets_per_player: tuple[int, ...]

    @property
    def infosets(self) -> int:
        return sum(self.infosets_per_player)


def enumerate_tree(
    game: GameSpec,
    max_nodes: int = DEFAULT_MAX_NODES,
    *,
    check: bool = True,
) -> TreeCensus:
    """Count nodes and information sets by exhaustive depth-first traversal.

    With ``check`` on, chance distributions, zero-sum payoffs and the
    "same key, same actions" rule are verified along the way.
    """
    n = game.num_players
    nodes = terminals = chances = 0
    decisions = [0] * n
    arity: list[dict[bytes, tuple]] = [dict() for _ in range(n)]
    stack = [game.initial_state()]
    cur = game.current_player
    while stack:
        s = stack.pop()
        nodes += 1
        if nodes > max_nodes:
            raise TreeTooLarge(f"{game!r} has more than {max_nodes} nodes")
        p = cur(s)
        if p == TERMINAL:
            terminals += 1
            if check:
                _check_payoffs(game, s)
            continue
        actions = game.legal_actions(s)
        if p == CHANCE:
            chances += 1
            if check:
                _check_chance(game, s, actions)
        else:
            decisions[p] += 1
            key = game.infoset_key(s)
            seen = arity[p].get(key)
            if seen is None:
                arity[p][key] = tuple(actions)
            elif check and seen != tuple(actions):
                raise ValueError(
                    f"infoset {key!r} offers different actions at two states"
                )
        for a in reversed(actions):
            stack.append(game.next_state(s, a))
    return TreeCensus(
        nodes=nodes,
        terminal_nodes=terminals,
        chance_nodes=chances,
        decision_nodes=tuple(decisions),
        infosets_per_player=tuple(len(d) for d in arity),
    )


def _check_chance(game: GameSpec, state: State, actions: Sequence) -> None:
    probs = game.chance_probs(state)
    if len(probs) != len(actions):
        raise ValueError("chance distribution does not match its actions")
    if abs(math.fsum(probs) - 1.0) > 1e-9 or min(probs) < 0:
        raise ValueError(f"chance distribution {probs} is not a distribution")


def _check_payoffs(game: GameSpec, state: State) -> None:
    u = game.payoffs(state)
    if len(u) != game.num_players:
        raise ValueError("payoff vector has the wrong length")
    if game.num_players == 2 and abs(u[0] + u[1]) > 1e-9:
        raise ValueError(f"payoffs {u} are not zero-sum")


def iter_infosets(game: GameSpec, max_nodes: int = DEFAULT_MAX_NODES):
    """Yield ``(player, key, actions)`` once per information set, in DFS order."""
    seen = set()
    stack = [game.initial_state()]
    count = 0
    while stack:
        s = stack.pop()
        count += 1
        if count > max_nodes:
            raise TreeTooLarge(f"{game!r} has more than {max_nodes} nodes")
        p = game.current_player(s)
        if p == TERMINAL:
            continue
        actions = game.legal_actions(s)
        if p != CHANCE:
            key = game.infoset_key(s)
            if (p, key) not in seen:
                seen.add((p, key))
                yield p, key, tuple(actions)
        for a in reversed(actions):
            stack.append(game.next_state(s, a))


# ---------------------------------------------------------------------------
# Policies and strategy profiles


def uniform(k: int) -> tuple[float, ...]:
    return (1.0 / k,) * k


def check_policy(probs: Sequence[float], num_actions: int | None = None) -> tuple[float, ...]:
    probs = tuple(float(p) for p in probs)
    if num_actions is not None and len(probs) != num_actions:
        raise ValueError(f"policy has {len(probs)} entries, expected {num_actions}")
    if not probs or min(probs) < 0 or abs(math.fsum(probs) - 1.0) > 1e-9:
        raise ValueError(f"{probs} is not a probability vector")
    return probs


@dataclass(frozen=True)
class StrategyProfile:
    """Maps ``(player, infoset key)`` to a policy; missing entries are uniform."""

    policies: Mapping[tuple[int, bytes], tuple[float, ...]] = field(default_factory=dict)

    def policy(self, player: int, key: bytes, num_actions: int) -> tuple[float, ...]:
        p = self.policies.get((player, key))
        if p is None:
            return uniform(num_actions)
        return p

    def __call__(self, player: int, key: bytes, num_actions: int) -> tuple[float, ...]:
        return self.policy(player, key, num_actions)

    def __len__(self) -> int:
        return len(self.policies)

    def is_pure(self) -> bool:
        return all(max(p) == 1.0 for p in self.policies.values())

    @classmethod
    def from_function(
        cls, game: GameSpec, fn: Callable[[int, bytes, tuple], Sequence[float]]
    ) -> "StrategyProfile":
        """Build a profile by calling ``fn(player, key, actions)`` on every infoset."""
        return cls(
            {
                (p, key): check_policy(fn(p, key, actions), len(actions))
                for p, key, actions in iter_infosets(game)
            }
        )


UNIFORM = StrategyProfile()


def _policy_of(profile: Any) -> Callable[[int, bytes, int], tuple]:
    if profile is None:
        return UNIFORM.policy
    if isinstance(profile, StrategyProfile):
        return profile.policy
    return profile


# ---------------------------------------------------------------------------
# Path and value queries over the lazy game


def reach_probabilities(
    game: GameSpec, profile: StrategyProfile | None, history: Sequence[Action]
) -> tuple[tuple[float, ...], float]:
    """Per-player and chance reach factors of the state reached by ``history``.

    ``history`` is the sequence of actions from the root. Returns
    ``(player_factors, chance_factor)``.
    """
    policy = _policy_of(profile)
    factors = [1.0] * game.num_players
    chance = 1.0
    s = game.initial_state()
    for a in history:
        p = game.current_player(s)
        if p == TERMINAL:
            raise ValueError("history continues past a terminal state")
        actions = list(game.legal_actions(s))
        i = actions.index(a)
        if p == CHANCE:
            chance *= game.chance_probs(s)[i]
        else:
            factors[p] *= policy(p, game.infoset_key(s), len(actions))[i]
        s = game.next_state(s, a)
    return tuple(factors), chance


def expected_value(game: GameSpec, profile: StrategyProfile | None = None) -> tuple[float, ...]:
    """Exact expected payoff vector under ``profile`` by full traversal."""
    policy = _policy_of(profile)
    n = game.num_players

    def rec(s):
        p = game.current_player(s)
        if p == TERMINAL:
            return tuple(game.payoffs(s))
        actions = game.legal_actions(s)
        if p == CHANCE:
            probs = game.chance_probs(s)
        else:
            probs = policy(p, game.infoset_key(s), len(actions))
        total = [0.0] * n
        for a, q in zip(actions, probs):
            if q == 0.0:
                continue
            v = rec(game.next_state(s, a))
            for i in range(n):
                total[i] += q * v[i]
        return total

    return tuple(rec(game.initial_state()))


def check_perfect_recall(game: GameSpec, max_nodes: int = DEFAULT_MAX_NODES) -> None:
    """Raise ``ValueError`` if two states sharing a key differ in the owner's own history.

    The owner's history is the sequence of ``(key, action)`` pairs for that
    player's own earlier decisions.
    """
    owner_history: dict[tuple[int, bytes], tuple] = {}
    stack = [(game.initial_state(), tuple(() for _ in range(game.num_players)))]
    count = 0
    while stack:
        s, hist = stack.pop()
        count += 1
        if count > max_nodes:
            raise TreeTooLarge(f"{game!r} has more than {max_nodes} nodes")
        p = game.current_player(s)
        if p == TERMINAL:
            continue
        actions = game.legal_actions(s)
        if p == CHANCE:
            for a in actions:
                stack.append((game.next_state(s, a), hist))
            continue
        key = game.infoset_key(s)
        prev = owner_history.setdefault((p, key), hist[p])
        if prev != hist[p]:
            raise ValueError(f"imperfect recall at infoset {key!r} of player {p}")
        for a in actions:
            h = list(hist)
            h[p] = hist[p] + ((key, a),)
            stack.append((game.next_state(s, a), tuple(h)))


# ---------------------------------------------------------------------------
# Cached tree used by the solvers


class GameTree:
    """Lazily expanded, cached view of a game tree with integer node ids.

    Node 0 is the root. ``player[n]`` is the acting player, :data:`CHANCE`
    or :data:`TERMINAL`; ``children[n]`` is ``None`` until :meth:`expand`
    runs. Information sets get dense integer ids in discovery order.
    """

    def __init__(self, game: GameSpec, max_nodes: int = DEFAULT_MAX_NODES):
        self.game = game
        self.max_nodes = max_nodes
        self.num_players = game.num_players
        self.states: list = []
        self.player: list[int] = []
        self.children: list = []
        self.probs: list = []
        self.payoff: list = []
        self.infoset: list[int] = []
        self.infoset_keys: list[bytes] = []
        self.infoset_player: list[int] = []
        self.infoset_actions: list[tuple] = []
        self.key_index: dict[tuple[int, bytes], int] = {}
        self.on_new_infoset = None
        self._add(game.initial_state())

    def __len__(self) -> int:
        return len(self.player)

    @property
    def num_infosets(self) -> int:
        return len(self.infoset_keys)

    def _add(self, s) -> int:
        n = len(self.player)
        if n >= self.max_nodes:
            raise TreeTooLarge(f"{self.game!r} has more than {self.max_nodes} nodes")
        g = self.game
        p = g.current_player(s)
        self.states.append(s)
        self.player.append(p)
        self.children.append(None)
        if p == TERMINAL:
            self.payoff.append(tuple(float(u) for u in g.payoffs(s)))
            self.probs.append(None)
            self.infoset.append(-1)
        elif p == CHANCE:
            self.payoff.append(None)
            self.probs.append(tuple(g.chance_probs(s)))
            self.infoset.append(-1)
        else:
            self.payoff.append(None)
            self.probs.append(None)
            key = g.infoset_key(s)
            idx = self.key_index.get((p, key))
            if idx is None:
                idx = len(self.infoset_keys)
                self.key_index[(p, key)] = idx
                self.infoset_keys.append(key)
                self.infoset_player.append(p)
                self.infoset_actions.append(tuple(g.legal_actions(s)))
                if self.on_new_infoset is not None:
                    self.on_new_infoset(idx)
            self.infoset.append(idx)
        return n

    def expand(self, n: int) -> tuple[int, ...]:
        ch = self.children[n]
        if ch is not None:
            return ch
        if self.player[n] == TERMINAL:
            ch = ()
        else:
            s = self.states[n]
            g = self.game
            ch = tuple(self._add(g.next_state(s, a)) for a in g.legal_actions(s))
        self.children[n] = ch
        return ch

    def expand_all(self) -> "GameTree":
        stack = [0]
        while stack:
            n = stack.pop()
            stack.extend(self.expand(n))
        return self

    def infoset_id(self, player: int, key: bytes) -> int:
        return self.key_index[(player, key)]

    def num_actions(self, infoset: int) -> int:
        return len(self.infoset_actions[infoset])

    def preorder(self) -> list[int]:
        """Node ids of the fully expanded tree in depth-first preorder."""
        order = []
        stack = [0]
        while stack:
            n = stack.pop()
            order.append(n)
            stack.extend(reversed(self.expand(n)))
        return order
