import pytest

from cfvfp.game import TERMINAL, enumerate_tree, expected_value, StrategyProfile
from cfvfp.games import (
    CompleteTreeGame,
    InvalidParams,
    KuhnExtension,
    LeducExtension,
    PamParams,
    PrincessMonster,
    kuhn_ext,
    leduc_ext,
    make_game,
    pam,
    parse_selector,
)


def census(g):
    c = enumerate_tree(g)
    return c.infosets, c.nodes


@pytest.mark.parametrize(
    "sel, expected",
    [
        ("kuhn:x=3,y=1,z=1", (12, 55)),
        ("kuhn:x=15,y=1,z=1", (60, 1891)),
        ("kuhn:x=3,y=3,z=3", None),
        ("kuhn:x=7,y=5,z=3", (364, 6427)),
        ("leduc:x=3,y=1,z=1", (288, 1945)),
        ("leduc:x=3,y=3,z=1", (1680, 12529)),
    ],
)
def test_census_table(sel, expected):
    got = census(make_game(sel))
    if expected is not None:
        assert got == expected
    assert got[0] > 0


def test_pam4_census():
    assert census(pam(4)) == (224, 68815)


def test_parse_selector():
    assert parse_selector("Kuhn:x=3, y=1,z=2") == ("kuhn", {"x": 3, "y": 1, "z": 2})
    assert parse_selector("rps") == ("rps", {})
    with pytest.raises(InvalidParams):
        parse_selector("kuhn:x")
    with pytest.raises(InvalidParams):
        parse_selector("kuhn:x=a")


def test_make_game_errors():
    with pytest.raises(InvalidParams):
        make_game("chess")
    with pytest.raises(InvalidParams):
        make_game("kuhn:w=2")
    with pytest.raises(InvalidParams):
        make_game("kuhn:x=2")
    with pytest.raises(InvalidParams):
        make_game("leduc:y=0")
    with pytest.raises(InvalidParams):
        PamParams(rounds=0)


def test_kuhn_payoffs():
    g = kuhn_ext()
    s = g.next_state(g.initial_state(), (2, 0))
    assert g.legal_actions(s) == ("c", "b1")
    both_check = g.next_state(g.next_state(s, "c"), "c")
    assert g.current_player(both_check) == TERMINAL
    assert g.payoffs(both_check) == (1, -1)
    bet_fold = g.next_state(g.next_state(s, "b1"), "f")
    assert g.payoffs(bet_fold) == (1, -1)
    bet_call = g.next_state(g.next_state(s, "b1"), "c")
    assert g.payoffs(bet_call) == (2, -2)


def test_kuhn_raise_ladder():
    g = kuhn_ext(3, 3, 3)
    s = g.next_state(g.initial_state(), (0, 1))
    assert g.legal_actions(s) == ("c", "b1", "b2", "b4")
    s = g.next_state(s, "b2")
    assert g.legal_actions(s) == ("f", "c", "b4")


def test_kuhn_value_is_known():
    # The value of standard Kuhn poker for the first player is -1/18; a
    # known equilibrium (alpha = 0) attains it.
    g = kuhn_ext()
    prof = {}
    for card in range(3):
        prof[(0, f"{card}|".encode())] = (1.0, 0.0)
        prof[(0, f"{card}|c.b1".encode())] = [(1.0, 0.0), (2 / 3, 1 / 3), (0.0, 1.0)][card]
        prof[(1, f"{card}|b1".encode())] = [(1.0, 0.0), (2 / 3, 1 / 3), (0.0, 1.0)][card]
        prof[(1, f"{card}|c".encode())] = [(2 / 3, 1 / 3), (1.0, 0.0), (0.0, 1.0)][card]
    assert expected_value(g, StrategyProfile(prof))[0] == pytest.approx(-1 / 18)


def test_leduc_showdown():
    g = leduc_ext()
    assert isinstance(g, LeducExtension)
    s = g.next_state(g.initial_state(), (0, 1))
    s = g.next_state(s, "ante")
    assert g.legal_actions(s) == ("c", "b2")
    s = g.next_state(g.next_state(s, "c"), "c")
    assert g.chance_probs(s) == pytest.approx((0.25, 0.25, 0.5))
    pair = g.next_state(g.next_state(g.next_state(s, 0), "c"), "c")
    assert g.payoffs(pair) == (1, -1)
    high = g.next_state(s, 2)
    assert g.infoset_key(high) == b"0|c.c|2|"
    high = g.next_state(g.next_state(high, "b4"), "c")
    assert g.payoffs(high) == (-5, 5)


def test_pam_degenerate_one_cell():
    g = PrincessMonster(PamParams(rounds=3, rows=1, cols=1, blocked=()))
    s = g.initial_state()
    s = g.next_state(s, 0)
    s = g.next_state(s, 0)
    assert g.current_player(s) == TERMINAL
    assert g.payoffs(s) == (1, -1)


def test_pam_hidden_moves():
    g = pam(4)
    s = g.next_state(g.initial_state(), 1)
    assert g.current_player(s) == 1
    assert g.infoset_key(s) == b"M"
    assert g.reflect_key(b"P" + bytes([1, 3])) == b"P" + bytes([1, 5])


def test_complete_tree_shape():
    g = CompleteTreeGame(3, 4)
    assert census(g) == (1 + 3 + 9, 1 + 3 + 9 + 27)


def test_game_names_round_trip():
    for sel in ("kuhn:x=7,y=5,z=3", "leduc:x=3,y=1,z=1", "pam:rounds=4"):
        g = make_game(sel)
        assert make_game(g.name).name == g.name
    assert isinstance(make_game("kuhn"), KuhnExtension)
