"""Kuhn-extension poker: x cards, y bet sizes, at most z bets per hand."""

from __future__ import annotations

from dataclasses import dataclass

from ..game import CHANCE, TERMINAL, GameSpec


class InvalidParams(ValueError):
    pass


@dataclass(frozen=True)
class KuhnExtParams:
    cards: int = 3
    bet_sizes: int = 1
    max_bets: int = 1
    ante: int = 1

    def __post_init__(self):
        if self.cards < 3:
            raise InvalidParams("Kuhn-extension needs at least 3 cards")
        if self.bet_sizes < 1 or self.max_bets < 1:
            raise InvalidParams("bet_sizes and max_bets must be >= 1")
        if self.ante < 1:
            raise InvalidParams("ante must be >= 1")

    @property
    def ladder(self) -> tuple[int, ...]:
        return tuple(2**k for k in range(self.bet_sizes))


def _bet_token(size: int) -> str:
    return f"b{size}"


class KuhnExtension(GameSpec):
    """Two-player Kuhn poker with a larger deck and a bet-size ladder.

    A bet or raise names a total commitment from the ladder
    ``[1, 2, 4, ...]``; each raise must strictly exceed the current level
    and a hand holds at most ``max_bets`` bets in total. States are
    ``(deal, history)`` with ``deal`` a pair of card ranks.
    """

    num_players = 2

    def __init__(self, params: KuhnExtParams | None = None, **kwargs):
        self.params = params if params is not None else KuhnExtParams(**kwargs)
        p = self.params
        self.name = f"kuhn:x={p.cards},y={p.bet_sizes},z={p.max_bets}"
        self._deals = tuple((a, b) for a in range(p.cards) for b in range(p.cards) if a != b)
        self._deal_prob = 1.0 / len(self._deals)
        self._status_cache: dict[tuple, tuple] = {}

    def initial_state(self):
        return (None, ())

    def _status(self, history: tuple) -> tuple:
        """``(to_act, commits, level, bets, ended)`` with ended in {None, 'fold', 'show'}."""
        st = self._status_cache.get(history)
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
                    ended = "show"
                elif i == 1:
                    ended = "show"
            else:
                level = int(a[1:])
                commits[p] = level
                bets += 1
            p = 1 - p
        st = (p, tuple(commits), level, bets, ended)
        self._status_cache[history] = st
        return st

    def current_player(self, state):
        deal, history = state
        if deal is None:
            return CHANCE
        to_act, _, _, _, ended = self._status(history)
        return TERMINAL if ended else to_act

    def legal_actions(self, state):
        deal, history = state
        if deal is None:
            return self._deals
        to_act, commits, level, bets, _ = self._status(history)
        raises = ()
        if bets < self.params.max_bets:
            raises = tuple(_bet_token(s) for s in self.params.ladder if s > level)
        if level > commits[to_act]:
            return ("f", "c") + raises
        return ("c",) + raises

    def chance_probs(self, state):
        return (self._deal_prob,) * len(self._deals)

    def next_state(self, state, action):
        deal, history = state
        if deal is None:
            return (action, ())
        return (deal, history + (action,))

    def payoffs(self, state):
        deal, history = state
        to_act, commits, _, _, ended = self._status(history)
        ante = self.params.ante
        if ended == "fold":
            loser = 1 - to_act
        else:
            loser = 0 if deal[0] < deal[1] else 1
        amount = ante + commits[loser]
        return (-amount, amount) if loser == 0 else (amount, -amount)

    def infoset_key(self, state):
        deal, history = state
        to_act = self._status(history)[0]
        return f"{deal[to_act]}|{'.'.join(history)}".encode()
