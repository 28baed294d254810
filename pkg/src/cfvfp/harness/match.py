"""Head-to-head play between two strategy profiles.

Competition 1 seats profile A at one random seat and B everywhere else;
competition 2 swaps the roles. ``r1`` is A's mean payoff in competition
1 and ``r2`` is B's mean payoff in competition 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..game import CHANCE, TERMINAL, GameSpec, StrategyProfile, _policy_of
from ..metrics import profile_values
from ..utils import UniformStream, check_game, check_rng
from .config import ConfigError


@dataclass(frozen=True)
class MatchConfig:
    game: GameSpec
    profile_a: StrategyProfile
    profile_b: StrategyProfile
    players: int = 2
    episodes: int = 1000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "game", check_game(self.game))
        if self.episodes < 1:
            raise ConfigError("episodes must be >= 1")
        if self.players != self.game.num_players:
            raise ConfigError(f"{self.game.name} is a {self.game.num_players}-player game, got players={self.players}")


@dataclass(frozen=True)
class Episode:
    competition: int
    seat: int
    payoffs: tuple[float, ...]


@dataclass(frozen=True)
class MatchResult:
    r1: float
    r1_se: float
    r2: float
    r2_se: float
    episodes: tuple[Episode, ...]


def seated(profiles) -> callable:
    """Policy lookup where player ``i`` follows ``profiles[i]``."""
    lookups = [_policy_of(p) for p in profiles]
    return lambda player, key, k: lookups[player](player, key, k)


def play_episode(game: GameSpec, policy, stream: UniformStream) -> tuple[float, ...]:
    s = game.initial_state()
    while True:
        p = game.current_player(s)
        if p == TERMINAL:
            return tuple(float(u) for u in game.payoffs(s))
        actions = game.legal_actions(s)
        if p == CHANCE:
            probs = game.chance_probs(s)
        else:
            probs = policy(p, game.infoset_key(s), len(actions))
        s = game.next_state(s, actions[stream.choice(probs)])


def _mean_se(xs):
    n = len(xs)
    m = math.fsum(xs) / n
    if n < 2:
        return m, 0.0
    var = math.fsum((x - m) ** 2 for x in xs) / (n - 1)
    return m, math.sqrt(var / n)


def run_match(cfg: MatchConfig) -> MatchResult:
    game = cfg.game
    n = game.num_players
    stream = UniformStream(check_rng(cfg.seed))
    episodes = []
    rewards = {1: [], 2: []}
    for comp, (minority, majority) in ((1, (cfg.profile_a, cfg.profile_b)), (2, (cfg.profile_b, cfg.profile_a))):
        for _ in range(cfg.episodes):
            seat = stream.integer(n)
            profiles = [minority if i == seat else majority for i in range(n)]
            u = play_episode(game, seated(profiles), stream)
            episodes.append(Episode(comp, seat, u))
            rewards[comp].append(u[seat])
    r1, se1 = _mean_se(rewards[1])
    r2, se2 = _mean_se(rewards[2])
    return MatchResult(r1, se1, r2, se2, tuple(episodes))


def expected_match_value(game, profile_a, profile_b) -> float:
    """Exact mean payoff of A seated uniformly at random against B elsewhere."""
    game = check_game(game)
    n = game.num_players
    total = 0.0
    for seat in range(n):
        profiles = [profile_a if i == seat else profile_b for i in range(n)]
        total += profile_values(game, seated(profiles))[seat]
    return total / n
