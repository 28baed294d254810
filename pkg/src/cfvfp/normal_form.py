"""Two-player zero-sum matrix games and the regret-matching / fictitious-play learners.

The learners work on a single player's action set. ``learner_observe``
folds in the payoff vector the player would have received for each of
its actions; for fictitious play against a pure opponent that vector is
just a column of the matrix.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .utils import check_rng


@dataclass(frozen=True)
class MatrixGame:
    """Row player's payoffs; the column player receives the negation."""

    payoffs: np.ndarray
    row_labels: tuple = ()
    col_labels: tuple = ()

    def __post_init__(self):
        a = np.array(self.payoffs, dtype=float)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("payoff matrix must be 2-D with at least one row and column")
        if not np.all(np.isfinite(a)):
            raise ValueError("payoff matrix has non-finite entries")
        a.setflags(write=False)
        object.__setattr__(self, "payoffs", a)
        if not self.row_labels:
            object.__setattr__(self, "row_labels", tuple(range(a.shape[0])))
        if not self.col_labels:
            object.__setattr__(self, "col_labels", tuple(range(a.shape[1])))

    @property
    def shape(self) -> tuple[int, int]:
        return self.payoffs.shape

    def player_matrix(self, player: int) -> np.ndarray:
        """Payoffs of ``player``: rows are its own actions, columns the opponent's."""
        return self.payoffs if player == 0 else -self.payoffs.T

    @property
    def payoff_range(self) -> float:
        return float(self.payoffs.max() - self.payoffs.min())


def rps() -> MatrixGame:
    return MatrixGame(
        np.array([[0, -1, 1], [1, 0, -1], [-1, 1, 0]], dtype=float),
        ("R", "P", "S"),
        ("R", "P", "S"),
    )


def rps_leaky_rock() -> MatrixGame:
    """Rock-paper-scissors with a fourth row that is Rock minus 0.1."""
    return MatrixGame(
        np.array(
            [
                [0.0, -1.0, 1.0],
                [1.0, 0.0, -1.0],
                [-1.0, 1.0, 0.0],
                [-0.1, -1.1, 0.9],
            ]
        ),
        ("R", "P", "S", "LR"),
        ("R", "P", "S"),
    )


def gen_random_matrix(n: int, m: int, seed=None) -> MatrixGame:
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    return MatrixGame(check_rng(seed).standard_normal((n, m)))


def gen_boosted_matrix(n: int, m: int, boosted_rows: int = 10, boost: float = 5.0, seed=None) -> MatrixGame:
    """Standard-normal matrix with ``boost`` added to the first ``boosted_rows`` rows."""
    a = np.array(gen_random_matrix(n, m, seed).payoffs)
    a[:boosted_rows] += boost
    return MatrixGame(a)


def make_matrix_game(selector: str) -> MatrixGame:
    """``rps``, ``rps-lr`` or ``randmat:n=..,m=..,boost=..,rows=..,seed=..``."""
    from .games import InvalidParams, parse_selector

    name, p = parse_selector(selector)
    if name == "rps":
        return rps()
    if name == "rps-lr":
        return rps_leaky_rock()
    if name == "randmat":
        unknown = set(p) - {"n", "m", "boost", "rows", "seed"}
        if unknown:
            raise InvalidParams(f"unknown parameters {sorted(unknown)} for randmat")
        n, m = p.get("n", 100), p.get("m", 100)
        seed = p.get("seed", 0)
        if p.get("boost", 0):
            return gen_boosted_matrix(n, m, p.get("rows", 10), p["boost"], seed)
        return gen_random_matrix(n, m, seed)
    raise InvalidParams(f"unknown matrix game {name!r}")


# ---------------------------------------------------------------------------
# Learners


@dataclass(frozen=True)
class LearnerState:
    """Accumulators of one learner.

    ``cumulative`` holds regrets for ``rule == "rm"`` and summed action
    payoffs (Q) for ``rule == "fp"``. ``policy`` is the strategy the
    learner plays in the next round.
    """

    rule: str
    cumulative: np.ndarray
    average_sum: np.ndarray
    policy: np.ndarray
    t: int = 0

    @classmethod
    def new(cls, rule: str, num_actions: int, policy: Sequence[float] | None = None) -> "LearnerState":
        if rule not in ("rm", "fp"):
            raise ValueError(f"unknown learner rule {rule!r}")
        if policy is None:
            policy = np.full(num_actions, 1.0 / num_actions)
        return cls(rule, np.zeros(num_actions), np.zeros(num_actions), np.asarray(policy, dtype=float))

    @property
    def average_policy(self) -> np.ndarray:
        if self.t == 0:
            return np.full(len(self.cumulative), 1.0 / len(self.cumulative))
        return self.average_sum / self.t


class DimensionMismatch(ValueError):
    pass


def rm_next_policy(state: LearnerState) -> np.ndarray:
    """Probabilities proportional to positive regrets, uniform if none are positive."""
    pos = np.maximum(state.cumulative, 0.0)
    total = pos.sum()
    if total > 0:
        return pos / total
    return np.full(len(pos), 1.0 / len(pos))


def fp_next_action(state: LearnerState, rng=None) -> int:
    """Best response to the opponent's empirical play; ties broken uniformly."""
    q = state.cumulative
    best = np.flatnonzero(q == q.max())
    if len(best) == 1:
        return int(best[0])
    return int(best[check_rng(rng).integers(len(best))])


def learner_observe(state: LearnerState, payoff_vector) -> LearnerState:
    """Fold one round of feedback into the learner.

    ``payoff_vector[a]`` is the payoff action ``a`` would have earned
    against the opponent's play this round.
    """
    u = np.asarray(payoff_vector, dtype=float)
    if u.shape != state.cumulative.shape:
        raise DimensionMismatch(f"expected {state.cumulative.shape[0]} payoffs, got {u.shape}")
    if state.rule == "rm":
        cumulative = state.cumulative + (u - float(state.policy @ u))
    else:
        cumulative = state.cumulative + u
    return replace(
        state,
        cumulative=cumulative,
        average_sum=state.average_sum + state.policy,
        t=state.t + 1,
    )


def next_policy(state: LearnerState, rng=None) -> LearnerState:
    if state.rule == "rm":
        policy = rm_next_policy(state)
    else:
        policy = np.zeros(len(state.cumulative))
        policy[fp_next_action(state, rng)] = 1.0
    return replace(state, policy=policy)


# ---------------------------------------------------------------------------
# Exploitability and dominance


@dataclass(frozen=True)
class Exploitability:
    total: float
    per_player: tuple[float, ...]

    def __float__(self) -> float:
        return self.total


def exploitability_nf(game: MatrixGame, avg1, avg2) -> Exploitability:
    a = game.payoffs
    x = np.asarray(avg1, dtype=float)
    y = np.asarray(avg2, dtype=float)
    if x.shape != (a.shape[0],) or y.shape != (a.shape[1],):
        raise DimensionMismatch("strategies do not match the matrix shape")
    ay = a @ y
    xa = x @ a
    value = float(x @ ay)
    e1 = max(float(ay.max()) - value, 0.0)
    e2 = max(value - float(xa.min()), 0.0)
    return Exploitability(e1 + e2, (e1, e2))


def find_dominated_pure(game: MatrixGame, player: int) -> set[int]:
    """Actions weakly dominated by another pure action (strict in some column)."""
    m = game.player_matrix(player)
    le = np.all(m[:, None, :] <= m[None, :, :], axis=2)
    lt = np.any(m[:, None, :] < m[None, :, :], axis=2)
    dom = le & lt
    np.fill_diagonal(dom, False)
    return {int(i) for i in np.flatnonzero(dom.any(axis=1))}


@dataclass(frozen=True)
class ClearClassification:
    label: str
    non_dominated: int
    num_actions: int

    @property
    def is_clear(self) -> bool:
        return self.label == "clear"


def classify_clear(game: MatrixGame, player: int) -> ClearClassification:
    """Clear iff the non-dominated action count is at most sqrt(|A|)."""
    k = game.shape[player]
    nd = k - len(find_dominated_pure(game, player))
    label = "clear" if nd <= math.sqrt(k) else "tangled"
    return ClearClassification(label, nd, k)


# ---------------------------------------------------------------------------
# Self-play estimators


class _SelfPlay(BaseEstimator):
    """Self-play of one learner rule against itself on a matrix game.

    Both players update together each round unless ``alternating`` is
    set, in which case the column player responds to the row player's
    freshly updated policy. ``curve_`` holds ``(t, elapsed_ns, eps)``
    snapshots every ``eval_every`` rounds; evaluation time is excluded.
    """

    rule = "rm"

    def __init__(self, n_iter=1000, eval_every=100, init="uniform", alternating=False, time_budget_ns=None, random_state=None):
        self.n_iter = n_iter
        self.eval_every = eval_every
        self.init = init
        self.alternating = alternating
        self.time_budget_ns = time_budget_ns
        self.random_state = random_state

    def _initial_policy(self, k, rng):
        if self.init == "uniform":
            return np.full(k, 1.0 / k)
        if self.init == "random":
            return rng.dirichlet(np.ones(k))
        raise ValueError(f"init must be 'uniform' or 'random', got {self.init!r}")

    def _column_payoffs(self, a, state, pure):
        return -a[pure] if pure is not None else -(state.policy @ a)

    def fit(self, game: MatrixGame, y=None):
        if not isinstance(game, MatrixGame):
            game = MatrixGame(game)
        if self.n_iter < 1 or self.eval_every < 1:
            raise ValueError("n_iter and eval_every must be >= 1")
        rng = check_rng(self.random_state)
        a = game.payoffs
        s1 = LearnerState.new(self.rule, a.shape[0], self._initial_policy(a.shape[0], rng))
        s2 = LearnerState.new(self.rule, a.shape[1], self._initial_policy(a.shape[1], rng))
        fp = self.rule == "fp"
        pure = [None, None]
        curve = []
        elapsed = 0
        limit = self.time_budget_ns
        for t in range(1, self.n_iter + 1):
            start = time.perf_counter_ns()
            u1 = a[:, pure[1]] if pure[1] is not None else a @ s2.policy
            u2 = self._column_payoffs(a, s1, pure[0])
            s1 = next_policy(learner_observe(s1, u1), rng)
            if fp:
                pure[0] = int(np.argmax(s1.policy))
            if self.alternating:
                u2 = self._column_payoffs(a, s1, pure[0])
            s2 = next_policy(learner_observe(s2, u2), rng)
            if fp:
                pure[1] = int(np.argmax(s2.policy))
            elapsed += time.perf_counter_ns() - start
            done = t == self.n_iter or (limit is not None and elapsed >= limit)
            if t % self.eval_every == 0 or done:
                eps = exploitability_nf(game, s1.average_policy, s2.average_policy)
                curve.append((t, elapsed, eps.total))
            if done:
                break
        self.states_ = [s1, s2]
        self.average_strategies_ = (s1.average_policy, s2.average_policy)
        self.curve_ = curve
        self.exploitability_ = curve[-1][2]
        return self

    def predict_proba(self, player: int = 0) -> np.ndarray:
        """Average strategy of ``player``."""
        return self.average_strategies_[player]

    def score(self, game: MatrixGame, y=None) -> float:
        """Negative exploitability of the fitted average strategies."""
        return -exploitability_nf(game, *self.average_strategies_).total


class RegretMatching(_SelfPlay):
    """Self-play regret matching on a matrix game."""

    rule = "rm"


class FictitiousPlay(_SelfPlay):
    """Self-play fictitious play on a matrix game."""

    rule = "fp"
