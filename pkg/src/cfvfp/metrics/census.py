"""Node-colour census under pure profiles and its closed-form prediction.

Under a pure profile every player's reach factor at a node is 0 or 1.
A node is red when all factors are 1 and green when all are 0. Otherwise
it is blue when the player to act there still reaches it and yellow when
only the others do. Green nodes are exactly the ones naive pruning skips.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..game import CHANCE, DEFAULT_MAX_NODES, TERMINAL, _policy_of
from .best_response import as_tree


class NodeColor(enum.Enum):
    RED = "red"
    GREEN = "green"
    BLUE = "blue"
    YELLOW = "yellow"


class NotPureProfile(ValueError):
    pass


class OutOfFormulaRange(ValueError):
    pass


@dataclass(frozen=True)
class ColorCensus:
    """Colour counts per layer; layer 1 is the root."""

    layers: tuple[dict, ...]

    def total(self, color: NodeColor) -> int:
        return sum(layer[color] for layer in self.layers)

    def layer(self, h: int) -> dict:
        return self.layers[h - 1]

    @property
    def passed(self) -> int:
        return self.total(NodeColor.RED) + self.total(NodeColor.BLUE) + self.total(NodeColor.YELLOW)

    @property
    def nodes(self) -> int:
        return sum(sum(layer.values()) for layer in self.layers)


def _classify(reach, own):
    if all(reach):
        return NodeColor.RED
    if not any(reach):
        return NodeColor.GREEN
    others = [r for j, r in enumerate(reach) if j != own]
    if reach[own] and not any(others):
        return NodeColor.BLUE
    if not reach[own] and all(others):
        return NodeColor.YELLOW
    # mixed reach among three or more players: count by the acting player
    return NodeColor.BLUE if reach[own] else NodeColor.YELLOW


def census_by_color(game, pure_profile, max_nodes: int = DEFAULT_MAX_NODES) -> ColorCensus:
    """Classify every node of the tree by its players' reach factors.

    At chance and terminal nodes the "own" player is the one whose turn
    would come next, taken as the player after the last one to act.
    """
    tree = as_tree(game, max_nodes)
    lookup = _policy_of(pure_profile)
    np_ = tree.num_players
    pol = []
    for i in range(tree.num_infosets):
        p = tuple(lookup(tree.infoset_player[i], tree.infoset_keys[i], len(tree.infoset_actions[i])))
        if any(q not in (0.0, 1.0) for q in p):
            raise NotPureProfile(f"policy at {tree.infoset_keys[i]!r} is not pure")
        pol.append(p)
    layers: list[dict] = []
    stack = [(0, 1, (1,) * np_, np_ - 1)]
    while stack:
        n, depth, reach, last = stack.pop()
        p = tree.player[n]
        own = p if p >= 0 else (last + 1) % np_
        while len(layers) < depth:
            layers.append({c: 0 for c in NodeColor})
        layers[depth - 1][_classify(reach, own)] += 1
        if p == TERMINAL:
            continue
        for a, c in enumerate(tree.children[n]):
            if p == CHANCE:
                stack.append((c, depth + 1, reach, last))
            else:
                r = list(reach)
                r[p] = reach[p] if pol[tree.infoset[n]][a] == 1.0 else 0
                stack.append((c, depth + 1, tuple(r), p))
    return ColorCensus(tuple(layers))


@dataclass(frozen=True)
class CensusPrediction:
    """Per-layer colour counts at layer ``h`` of a complete alternating tree."""

    g: int
    h: int
    red: int
    blue: int
    yellow: int
    green: int
    passed: int
    all: int


def census_recurrence(g: int, h: int) -> CensusPrediction:
    """Layer counts by the layer-to-layer recurrence, valid for every h >= 1."""
    if g < 1 or h < 1:
        raise ValueError("g and h must be >= 1")
    r, b, y, gr = 1, 0, 0, 0
    for _ in range(h - 1):
        r, b, y, gr = 1, (g - 1) * r + g * y, b, g * gr + (g - 1) * b
    return CensusPrediction(g, h, r, b, y, gr, r + b + y, sum(g**i for i in range(h)))


def _blue(g, h):
    return (g - 1) * sum(g**i for i in range((h - 2) // 2 + 1))


def predict_census(g: int, h: int, fallback: bool = True) -> CensusPrediction:
    """Closed-form counts for layer ``h`` (g >= 2, h >= 3).

    ``all`` is the number of nodes in layers 1..h. Outside the closed
    form's range the recurrence is used, or :class:`OutOfFormulaRange` is
    raised when ``fallback`` is false.
    """
    if g < 2 or h < 3:
        if not fallback:
            raise OutOfFormulaRange(f"closed form needs g >= 2 and h >= 3, got g={g}, h={h}")
        return census_recurrence(g, h)
    b = _blue(g, h)
    y = _blue(g, h - 1)
    total = (g**h - 1) // (g - 1)
    layer = g ** (h - 1)
    return CensusPrediction(g, h, 1, b, y, layer - 1 - b - y, 1 + b + y, total)


def op_count_model(x: int) -> tuple[int, int, int]:
    """Per-infoset arithmetic for ``x`` actions: CFVFP additions, CFR additions, CFR multiplications."""
    if x < 1:
        raise ValueError("x must be >= 1")
    return 2 * x + 1, 6 * x - 2, 3 * x


def op_ratio(x: int) -> float:
    """CFVFP operations as a fraction of CFR's; tends to 2/9."""
    a, b, c = op_count_model(x)
    return a / (b + c)
