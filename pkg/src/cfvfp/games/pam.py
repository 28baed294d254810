"""Princess and monster: a hidden-position chase on a small grid.

The princess (player 0) and the monster (player 1) first pick a birth
cell, then move one step per round (up, down, left, right or stay).
Within a round the princess moves first and the monster moves without
seeing her, so simultaneous moves are encoded sequentially. Neither ever
observes the other's position. Capture happens only when both stand in
the same cell after a round; swapping cells does not count.

Rounds are numbered from 1 with the placement as round 1. Capture in
round ``n`` pays the princess ``n``; surviving all ``rounds`` pays
``rounds``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..game import TERMINAL, GameSpec
from .kuhn import InvalidParams

MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1), (0, 0))


@dataclass(frozen=True)
class PamParams:
    rounds: int = 4
    rows: int = 3
    cols: int = 3
    blocked: tuple[tuple[int, int], ...] = ((0, 0), (0, 2))

    def __post_init__(self):
        if self.rounds < 1:
            raise InvalidParams("rounds must be >= 1")
        if self.rows < 1 or self.cols < 1:
            raise InvalidParams("grid must have at least one cell")
        if self.rows * self.cols > 255:
            raise InvalidParams("grid too large for byte-encoded keys")
        if len(self.cells) == 0:
            raise InvalidParams("grid has no passable cell")

    @property
    def cells(self) -> tuple[int, ...]:
        blocked = set(self.blocked)
        return tuple(
            r * self.cols + c
            for r in range(self.rows)
            for c in range(self.cols)
            if (r, c) not in blocked
        )


class PrincessMonster(GameSpec):
    """States are ``(princess_path, monster_path)`` tuples of cell ids."""

    num_players = 2

    def __init__(self, params: PamParams | None = None, **kwargs):
        self.params = params if params is not None else PamParams(**kwargs)
        p = self.params
        self.name = f"pam:rounds={p.rounds}"
        cells = set(p.cells)
        self._moves = {}
        for cell in p.cells:
            r, c = divmod(cell, p.cols)
            out = []
            for dr, dc in MOVES:
                rr, cc = r + dr, c + dc
                if 0 <= rr < p.rows and 0 <= cc < p.cols and rr * p.cols + cc in cells:
                    out.append(rr * p.cols + cc)
            self._moves[cell] = tuple(out)

    def initial_state(self):
        return ((), ())

    def current_player(self, state):
        ppath, mpath = state
        n = len(mpath)
        if len(ppath) > n:
            return 1
        if n and (ppath[-1] == mpath[-1] or n == self.params.rounds):
            return TERMINAL
        return 0

    def legal_actions(self, state):
        ppath, mpath = state
        path = mpath if len(ppath) > len(mpath) else ppath
        if not path:
            return self.params.cells
        return self._moves[path[-1]]

    def next_state(self, state, action):
        ppath, mpath = state
        if len(ppath) > len(mpath):
            return (ppath, mpath + (action,))
        return (ppath + (action,), mpath)

    def payoffs(self, state):
        n = float(len(state[1]))
        return (n, -n)

    def infoset_key(self, state):
        ppath, mpath = state
        if len(ppath) > len(mpath):
            return b"M" + bytes(mpath)
        return b"P" + bytes(ppath)

    def reflect_cell(self, cell: int) -> int:
        """Mirror a cell id left-right."""
        r, c = divmod(cell, self.params.cols)
        return r * self.params.cols + (self.params.cols - 1 - c)

    def reflect_key(self, key: bytes) -> bytes:
        return key[:1] + bytes(self.reflect_cell(c) for c in key[1:])
