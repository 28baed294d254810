"""Benchmark games and the selector strings that name them."""

from __future__ import annotations

from ..game import GameSpec
from .kuhn import InvalidParams, KuhnExtension, KuhnExtParams
from .leduc import LeducExtension, LeducExtParams
from .pam import PamParams, PrincessMonster
from .simple import CompleteTreeGame, MatrixTreeGame, SingleDecisionGame

__all__ = [
    "CompleteTreeGame",
    "InvalidParams",
    "KuhnExtParams",
    "KuhnExtension",
    "LeducExtParams",
    "LeducExtension",
    "MatrixTreeGame",
    "PamParams",
    "PrincessMonster",
    "SingleDecisionGame",
    "kuhn_ext",
    "leduc_ext",
    "make_game",
    "pam",
    "parse_selector",
]


def kuhn_ext(cards=3, bet_sizes=1, max_bets=1) -> KuhnExtension:
    return KuhnExtension(KuhnExtParams(cards, bet_sizes, max_bets))


def leduc_ext(cards=3, bet_sizes=1, max_raises=1) -> LeducExtension:
    return LeducExtension(LeducExtParams(cards, bet_sizes, max_raises))


def pam(rounds=4) -> PrincessMonster:
    return PrincessMonster(PamParams(rounds=rounds))


def parse_selector(selector: str) -> tuple[str, dict[str, int]]:
    """Split ``"kuhn:x=3,y=1,z=1"`` into ``("kuhn", {"x": 3, "y": 1, "z": 1})``."""
    name, _, rest = selector.strip().partition(":")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise InvalidParams(f"malformed parameter {item!r} in {selector!r}")
        try:
            params[key.strip()] = int(value)
        except ValueError:
            raise InvalidParams(f"parameter {key!r} must be an integer") from None
    return name.strip().lower(), params


_DEFAULTS = {
    "kuhn": {"x": 3, "y": 1, "z": 1},
    "leduc": {"x": 3, "y": 1, "z": 1},
    "pam": {"rounds": 4},
}


def _take(name, params):
    known = _DEFAULTS[name]
    extra = set(params) - set(known)
    if extra:
        raise InvalidParams(f"unknown parameters {sorted(extra)} for {name}")
    return {**known, **params}


def make_game(selector: str) -> GameSpec:
    """Build an extensive-form game from a selector string.

    Matrix selectors (``rps-lr``, ``randmat:...``) are lifted to two-level
    trees; use :func:`cfvfp.normal_form.make_matrix_game` for the matrix form.
    """
    name, params = parse_selector(selector)
    if name == "kuhn":
        p = _take(name, params)
        return kuhn_ext(p["x"], p["y"], p["z"])
    if name == "leduc":
        p = _take(name, params)
        return leduc_ext(p["x"], p["y"], p["z"])
    if name == "pam":
        return pam(_take(name, params)["rounds"])
    if name in ("rps", "rps-lr", "randmat"):
        from ..normal_form import make_matrix_game

        m = make_matrix_game(selector)
        return MatrixTreeGame(m.payoffs, m.row_labels, m.col_labels, name=selector)
    raise InvalidParams(f"unknown game {name!r}")
