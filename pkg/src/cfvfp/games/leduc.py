"""Leduc-extension poker: x ranks with two copies each, two betting rounds.

Each round allows one opening bet from the ladder ``[1, 2, 4, ...]`` times
the round's bet unit (2 in round one, 4 in round two) followed by up to
``max_raises`` raises, each doubling the round's current level. With the
default parameters this is standard Leduc hold'em.

After the private deal a single-outcome chance node posts the antes; it
has no strategic effect and is kept so node counts agree with the
published game-size table.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..game import CHANCE, TERMINAL, GameSpec
from .kuhn import InvalidParams

ANTE = "ante"


@dataclass(frozen=True)
class LeducExtParams:
    cards: int = 3
    bet_sizes: int = 1
    max_raises: int = 1
    ante: int = 1
    round_units: tuple[int, int] = (2, 4)

    def __post_init__(self):
        if self.cards < 3:
            raise InvalidParams("Leduc-extension needs at least 3 ranks")
        if self.bet_sizes < 1 or self.max_raises < 0:
            raise InvalidParams("bet_sizes must be >= 1 and max_raises >= 0")

    def ladder(self, rnd: int) -> tuple[int, ...]:
        unit = self.round_units[rnd]
        return tuple(unit * 2**k for k in range(self.bet_sizes))


class LeducExtension(GameSpec):
    """States are ``(deal, posted, public, h1, h2)``; ``deal`` is a rank pair."""

    num_players = 2

    def __init__(self, params: LeducExtParams | None = None, **kwargs):
        self.params = params if params is not None else LeducExtParams(**kwargs)
        p = self.params
        self.name = f"leduc:x={p.cards},y={p.bet_sizes},z={p.max_raises}"
        x = p.cards
        deck = 2 * x
        self._deals = tuple((a, b) for a in range(x) for b in range(x))
        self._deal_probs = tuple(
            (2 / deck) * ((1 if a == b else 2) / (deck - 1)) for a, b in self._deals
        )
        self._round_cache: dict[tuple, tuple] = {}

    def initial_state(self):
        return (None, False, None, (), ())

    def _round(self, rnd: int, history: tuple) -> tuple:
        """``(to_act, commits, level, bets, ended)`` for one betting round."""
        key = (rnd, history)
        st = self._round_cache.get(key)
        if st is not None:
            return st
        commits = [0, 0]
        level = bets = 0
        ended = None
        p = 0
        for i, a in enumerate(history):
            if a == "f":
                ended = "fold"
            elif a == "c":
                if level > commits[p]:
                    commits[p] = level
                    ended = "call"
                elif i == 1:
                    ended = "call"
            elif a == "r":
                level *= 2
                commits[p] = level
                bets += 1
            else:
                level = int(a[1:])
                commits[p] = level
                bets += 1
            p = 1 - p
        st = (p, tuple(commits), level, bets, ended)
        self._round_cache[key] = st
        return st

    def _stage(self, state):
        """Return ``(kind, rnd)`` where kind is deal/ante/r1/public/r2/end."""
        deal, posted, public, h1, h2 = state
        if deal is None:
            return "deal", None
        if not posted:
            return "ante", None
        end1 = self._round(0, h1)[4]
        if end1 == "fold":
            return "end", 0
        if end1 is None:
            return "bet", 0
        if public is None:
            return "public", None
        end2 = self._round(1, h2)[4]
        if end2 is None:
            return "bet", 1
        return "end", 1

    def current_player(self, state):
        kind, rnd = self._stage(state)
        if kind == "bet":
            return self._round(rnd, state[3 + rnd])[0]
        if kind == "end":
            return TERMINAL
        return CHANCE

    def _public_counts(self, deal):
        counts = [2] * self.params.cards
        counts[deal[0]] -= 1
        counts[deal[1]] -= 1
        return counts

    def legal_actions(self, state):
        kind, rnd = self._stage(state)
        if kind == "deal":
            return self._deals
        if kind == "ante":
            return (ANTE,)
        if kind == "public":
            counts = self._public_counts(state[0])
            return tuple(r for r, c in enumerate(counts) if c > 0)
        to_act, commits, level, bets, _ = self._round(rnd, state[3 + rnd])
        if level > commits[to_act]:
            if bets <= self.params.max_raises:
                return ("f", "c", "r")
            return ("f", "c")
        return ("c",) + tuple(f"b{s}" for s in self.params.ladder(rnd))

    def chance_probs(self, state):
        kind, _ = self._stage(state)
        if kind == "deal":
            return self._deal_probs
        if kind == "ante":
            return (1.0,)
        counts = self._public_counts(state[0])
        total = sum(counts)
        return tuple(c / total for c in counts if c > 0)

    def next_state(self, state, action):
        deal, posted, public, h1, h2 = state
        kind, rnd = self._stage(state)
        if kind == "deal":
            return (action, False, None, (), ())
        if kind == "ante":
            return (deal, True, None, (), ())
        if kind == "public":
            return (deal, True, action, h1, ())
        if rnd == 0:
            return (deal, True, public, h1 + (action,), h2)
        return (deal, True, public, h1, h2 + (action,))

    def payoffs(self, state):
        deal, _, public, h1, h2 = state
        ante = self.params.ante
        r1 = self._round(0, h1)
        contrib = [ante + r1[1][0], ante + r1[1][1]]
        if r1[4] == "fold":
            loser = 1 - r1[0]
        else:
            r2 = self._round(1, h2)
            contrib[0] += r2[1][0]
            contrib[1] += r2[1][1]
            if r2[4] == "fold":
                loser = 1 - r2[0]
            else:
                s0 = _strength(deal[0], public)
                s1 = _strength(deal[1], public)
                if s0 == s1:
                    return (0.0, 0.0)
                loser = 0 if s0 < s1 else 1
        amount = contrib[loser]
        return (-amount, amount) if loser == 0 else (amount, -amount)

    def infoset_key(self, state):
        deal, _, public, h1, h2 = state
        kind, rnd = self._stage(state)
        own = deal[self._round(rnd, state[3 + rnd])[0]]
        if rnd == 0:
            return f"{own}|{'.'.join(h1)}".encode()
        return f"{own}|{'.'.join(h1)}|{public}|{'.'.join(h2)}".encode()


def _strength(rank: int, public: int) -> int:
    return 1000 + rank if rank == public else rank
