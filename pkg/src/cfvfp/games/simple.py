"""Small synthetic games used as fixtures and measurement probes."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..game import CHANCE, TERMINAL, GameSpec


class MatrixTreeGame(GameSpec):
    """A zero-sum matrix game as a two-level tree.

    The row player moves first; the column player moves without seeing the
    row. Each player has exactly one information set.
    """

    num_players = 2

    def __init__(self, payoffs, row_labels=None, col_labels=None, name="matrix"):
        self.matrix = np.asarray(payoffs, dtype=float)
        if self.matrix.ndim != 2 or self.matrix.size == 0:
            raise ValueError("payoff matrix must be a non-empty 2-D array")
        n, m = self.matrix.shape
        self.row_labels = tuple(row_labels or range(n))
        self.col_labels = tuple(col_labels or range(m))
        self.name = name

    def initial_state(self):
        return ()

    def current_player(self, state):
        return len(state) if len(state) < 2 else TERMINAL

    def legal_actions(self, state):
        return tuple(range(self.matrix.shape[len(state)]))

    def next_state(self, state, action):
        return state + (action,)

    def payoffs(self, state):
        u = float(self.matrix[state[0], state[1]])
        return (u, -u)

    def infoset_key(self, state):
        return b""


class SingleDecisionGame(GameSpec):
    """Chance picks an outcome, then player 0 acts once without observing it.

    ``payoffs[k][a]`` is player 0's payoff for chance outcome ``k`` and
    action ``a``. Player 1 never acts.
    """

    num_players = 2

    def __init__(self, payoffs: Sequence[Sequence[float]], chance: Sequence[float] | None = None):
        self.table = tuple(tuple(float(u) for u in row) for row in payoffs)
        k = len(self.table)
        self.chance = tuple(chance) if chance is not None else (1.0 / k,) * k
        if len(self.chance) != k:
            raise ValueError("chance distribution does not match payoff rows")
        self.name = "single-decision"

    def initial_state(self):
        return ()

    def current_player(self, state):
        if len(state) == 0:
            return CHANCE
        if len(state) == 1:
            return 0
        return TERMINAL

    def legal_actions(self, state):
        if len(state) == 0:
            return tuple(range(len(self.table)))
        return tuple(range(len(self.table[state[0]])))

    def chance_probs(self, state):
        return self.chance

    def next_state(self, state, action):
        return state + (action,)

    def payoffs(self, state):
        u = self.table[state[0]][state[1]]
        return (u, -u)

    def infoset_key(self, state):
        return b"I"


class CompleteTreeGame(GameSpec):
    """Deterministic complete tree: ``depth`` levels, ``branching`` actions per node.

    Players alternate by level starting with player 0 at the root; the
    last level holds the terminals. Every decision node is its own
    information set. Terminal payoffs are drawn from ``seed`` (zero if
    ``seed`` is ``None``).
    """

    num_players = 2

    def __init__(self, branching: int, depth: int, seed: int | None = None):
        if branching < 1 or depth < 1:
            raise ValueError("branching and depth must be >= 1")
        self.branching = branching
        self.depth = depth
        self.seed = seed
        self.name = f"complete:g={branching},h={depth}"
        self._rng_payoffs = {}

    def initial_state(self):
        return ()

    def current_player(self, state):
        if len(state) >= self.depth - 1:
            return TERMINAL
        return len(state) % 2

    def legal_actions(self, state):
        return tuple(range(self.branching))

    def next_state(self, state, action):
        return state + (action,)

    def payoffs(self, state):
        if self.seed is None:
            return (0.0, 0.0)
        u = self._rng_payoffs.get(state)
        if u is None:
            rng = np.random.default_rng([self.seed, *state])
            u = float(rng.standard_normal())
            self._rng_payoffs[state] = u
        return (u, -u)

    def infoset_key(self, state):
        return bytes(state)
