"""Shared machinery for the iterative solvers.

Every solver keeps, per information set, a value vector (cumulative
regrets or cumulative counterfactual values), an average-strategy
numerator and denominator, and the policy for the current iteration.
Policies for the next iteration are computed after a traversal ends, so
all visits to an information set within one iteration see the same
policy.
"""

from __future__ import annotations

import copy
import sys
import time

from sklearn.base import BaseEstimator

from ..game import CHANCE, DEFAULT_MAX_NODES, TERMINAL, GameSpec, GameTree, StrategyProfile, uniform
from ..utils import UniformStream, check_game, check_rng, weight_fn

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))


def regret_matching(values, fallback=None):
    """Policy proportional to positive parts; ``fallback(k)`` when none are positive."""
    pos = [v if v > 0.0 else 0.0 for v in values]
    total = sum(pos)
    if total > 0.0:
        return [v / total for v in pos]
    if fallback is not None:
        return fallback(len(values))
    k = len(values)
    return [1.0 / k] * k


def _normalized(num, den):
    if den <= 0.0:
        return uniform(len(num))
    p = [v / den for v in num]
    s = sum(p)
    return tuple(v / s for v in p)


def plus_clamp(values):
    """Floor accumulated values at zero. Idempotent."""
    return [v if v > 0.0 else 0.0 for v in values]


class Solver(BaseEstimator):
    """Base class: sklearn-style parameters, fit/partial_fit, policy queries.

    Subclasses set ``algorithm`` and implement :meth:`_iterate`.
    """

    algorithm = ""
    full_traversal = True

    def __init__(
        self,
        n_iter=1000,
        weighting="constant",
        weight_target="average",
        prune=True,
        prune_threshold=1e-20,
        simultaneous=True,
        init="uniform",
        random_state=None,
        max_nodes=DEFAULT_MAX_NODES,
    ):
        self.n_iter = n_iter
        self.weighting = weighting
        self.weight_target = weight_target
        self.prune = prune
        self.prune_threshold = prune_threshold
        self.simultaneous = simultaneous
        self.init = init
        self.random_state = random_state
        self.max_nodes = max_nodes

    # -- lifecycle ---------------------------------------------------------

    def _validate_params(self):
        weight_fn(self.weighting)
        if self.weight_target not in ("average", "values"):
            raise ValueError("weight_target must be 'average' or 'values'")
        if not 0.0 <= self.prune_threshold < 1.0:
            raise ValueError("prune_threshold must lie in [0, 1)")
        if self.init not in ("uniform", "random"):
            raise ValueError("init must be 'uniform' or 'random'")
        if int(self.n_iter) < 0:
            raise ValueError("n_iter must be >= 0")

    def initialize(self, game) -> "Solver":
        """Reset all accumulators for ``game`` without iterating."""
        self._validate_params()
        game = check_game(game)
        self.game_ = game
        rng = check_rng(self.random_state)
        self.rng_ = UniformStream(rng)
        self._init_rng = check_rng(rng.integers(2**63)) if self.init == "random" else None
        self.values_: list[list[float]] = []
        self.avg_num_: list[list[float]] = []
        self.avg_den_: list[float] = []
        self.policy_: list[list[float]] = []
        self._pending: dict = {}
        self.t_ = 0
        self.nodes_touched_ = 0
        self.solve_time_ns_ = 0
        self.tree_ = GameTree(game, self.max_nodes)
        self.tree_.on_new_infoset = self._new_infoset
        for i in range(len(self.policy_), self.tree_.num_infosets):
            self._new_infoset(i)
        if self.full_traversal:
            self.tree_.expand_all()
        self._w = weight_fn(self.weighting)
        return self

    def _new_infoset(self, idx: int) -> None:
        while len(self.policy_) <= idx:
            i = len(self.policy_)
            k = len(self.tree_.infoset_actions[i])
            pending = self._pending.pop((self.tree_.infoset_player[i], self.tree_.infoset_keys[i]), None)
            if pending is not None:
                self.values_.append(list(pending["values"]))
                self.avg_num_.append(list(pending["avg_num"]))
                self.avg_den_.append(float(pending["avg_den"]))
                self.policy_.append(list(pending["policy"]))
                continue
            self.values_.append([0.0] * k)
            self.avg_num_.append([0.0] * k)
            self.avg_den_.append(0.0)
            if self._init_rng is not None:
                self.policy_.append(self._random_policy(k))
            else:
                self.policy_.append([1.0 / k] * k)

    def _random_policy(self, k):
        return self._init_rng.dirichlet([1.0] * k).tolist()

    def fit(self, game, y=None):
        self.initialize(game)
        return self.partial_fit(n_iter=self.n_iter)

    def partial_fit(self, game=None, n_iter=1):
        if not hasattr(self, "tree_") or (game is not None and check_game(game) is not self.game_):
            if game is None:
                raise ValueError("partial_fit needs a game on the first call")
            self.initialize(game)
        for _ in range(int(n_iter)):
            start = time.perf_counter_ns()
            self.t_ += 1
            self._iterate()
            self.solve_time_ns_ += time.perf_counter_ns() - start
        return self

    def _iterate(self):
        raise NotImplementedError

    # -- helpers for subclasses -------------------------------------------

    def _updating(self):
        """Players whose accumulators change this iteration."""
        if self.simultaneous:
            return (True, True)
        p = (self.t_ - 1) % 2
        return (p == 0, p == 1)

    def _argmax_policy(self, values):
        best = max(values)
        idx = [a for a, v in enumerate(values) if v == best]
        a = idx[0] if len(idx) == 1 else idx[self.rng_.integer(len(idx))]
        out = [0.0] * len(values)
        out[a] = 1.0
        return out

    def _random_pure(self, k):
        out = [0.0] * k
        out[self.rng_.integer(k)] = 1.0
        return out

    # -- queries -----------------------------------------------------------

    def _id(self, player, key):
        return self.tree_.key_index.get((player, key))

    def average_policy(self, player: int, key: bytes) -> tuple[float, ...]:
        """Reach-weighted average policy; uniform for never-visited infosets."""
        i = self._id(player, key)
        if i is None:
            rec = self._pending.get((player, key))
            if rec is None:
                raise KeyError((player, key))
            return _normalized(rec["avg_num"], rec["avg_den"])
        return self._average(i)

    def _average(self, i):
        return _normalized(self.avg_num_[i], self.avg_den_[i])

    def current_policy(self, player: int, key: bytes) -> tuple[float, ...]:
        i = self._id(player, key)
        if i is None:
            return tuple(self._pending[(player, key)]["policy"])
        return tuple(self.policy_[i])

    def average_profile(self) -> StrategyProfile:
        """Average policies of every known infoset, including restored ones not yet revisited."""
        t = self.tree_
        out = {k: _normalized(r["avg_num"], r["avg_den"]) for k, r in self._pending.items()}
        out.update({(t.infoset_player[i], t.infoset_keys[i]): self._average(i) for i in range(t.num_infosets)})
        return StrategyProfile(out)

    def current_profile(self) -> StrategyProfile:
        t = self.tree_
        out = {k: tuple(r["policy"]) for k, r in self._pending.items()}
        out.update({(t.infoset_player[i], t.infoset_keys[i]): tuple(self.policy_[i]) for i in range(t.num_infosets)})
        return StrategyProfile(out)

    def predict_proba(self, infosets):
        """Average policies for an iterable of ``(player, key)`` pairs."""
        return [self.average_policy(p, k) for p, k in infosets]

    def score(self, game=None, y=None) -> float:
        """Negative exploitability of the average profile (higher is better)."""
        from ..metrics import exploitability

        return -exploitability(self.game_ if game is None else check_game(game), self.average_profile()).total

    def set_policy(self, player: int, key: bytes, probs) -> None:
        """Overwrite the current-iteration policy of one information set."""
        i = self._id(player, key)
        if i is None:
            raise KeyError((player, key))
        if len(probs) != len(self.policy_[i]):
            raise ValueError("policy length does not match the action count")
        self.policy_[i] = [float(p) for p in probs]

    def values(self, player: int, key: bytes) -> list[float]:
        return list(self.values_[self._id(player, key)])

    def copy(self) -> "Solver":
        return copy.deepcopy(self)

    def sampled_counterfactual_values(self, random_state=None, **kwargs) -> dict:
        """Counterfactual action values seen by one extra iteration, leaving accumulators untouched.

        The iteration runs on a copy of the accumulators with its own
        random stream; the cached tree is shared, so nodes it discovers
        stay discovered. Keys are ``(player, infoset key)``; information
        sets the iteration did not update are absent (sampled value zero).
        """
        clone = copy.copy(self)
        clone.values_ = [list(v) for v in self.values_]
        clone.avg_num_ = [list(v) for v in self.avg_num_]
        clone.avg_den_ = list(self.avg_den_)
        clone.policy_ = [list(v) for v in self.policy_]
        clone.rng_ = UniformStream(check_rng(random_state))
        clone._pending = dict(self._pending)
        clone.record = {}
        clone.t_ += 1
        tree = self.tree_
        tree.on_new_infoset = clone._new_infoset
        try:
            clone._iterate(**kwargs)
        finally:
            tree.on_new_infoset = self._new_infoset
            self._new_infoset(tree.num_infosets - 1)
        return {(tree.infoset_player[i], tree.infoset_keys[i]): list(v) for i, v in clone.record.items()}


# ---------------------------------------------------------------------------
# Full-width and chance-sampled traversal shared by CFR/CFR+/CFVFP/MCCFVFP


class TraversalSolver(Solver):
    """Counterfactual-value traversal with naive pruning.

    The recursion returns, for each player, that player's counterfactual
    value at the node: the expected payoff weighted by the reach of the
    opponent (and of chance unless chance is sampled). Subclasses pick
    how values accumulate (``value_mode``), how the next policy is formed
    (``policy_rule``), whether accumulators are clamped (``plus``) and
    whether chance is sampled.
    """

    value_mode = "regret"
    policy_rule = "rm"
    plus = False
    sample_chance = False
    record = None

    def _iterate(self):
        tree = self.tree_
        player = tree.player
        children = tree.children
        probs = tree.probs
        payoff = tree.payoff
        infoset = tree.infoset
        expand = tree.expand
        pol = self.policy_
        vals_acc = self.values_
        num = self.avg_num_
        den = self.avg_den_
        w = self._w(self.t_)
        wa = w if self.weight_target == "average" else 1.0
        wv = w if self.weight_target == "values" else 1.0
        thr = self.prune_threshold if self.prune else -1.0
        regret_mode = self.value_mode == "regret"
        sample = self.sample_chance
        choice = self.rng_.choice
        upd = self._updating()
        dirty = {}
        record = self.record
        touched = 0

        def rec(n, p0, p1, pc):
            nonlocal touched
            touched += 1
            pl = player[n]
            if pl == TERMINAL:
                u = payoff[n]
                return u[0] * p1 * pc, u[1] * p0 * pc
            ch = children[n]
            if ch is None:
                ch = expand(n)
            if pl == CHANCE:
                if sample:
                    return rec(ch[choice(probs[n])], p0, p1, pc)
                r0 = r1 = 0.0
                for c, q in zip(ch, probs[n]):
                    pq = pc * q
                    if p1 * pq <= thr and p0 * pq <= thr:
                        continue
                    v0, v1 = rec(c, p0, p1, pq)
                    r0 += v0
                    r1 += v1
                return r0, r1
            i = infoset[n]
            sigma = pol[i]
            k = len(ch)
            cf = [0.0] * k
            rs = ro = 0.0
            if pl == 0:
                opp = p1 * pc
                for a in range(k):
                    s = sigma[a]
                    q0 = p0 * s
                    if q0 * pc <= thr and opp <= thr:
                        continue
                    v0, v1 = rec(ch[a], q0, p1, pc)
                    cf[a] = v0
                    rs += s * v0
                    ro += v1
                own = p0
                result = (rs, ro)
            else:
                opp = p0 * pc
                for a in range(k):
                    s = sigma[a]
                    q1 = p1 * s
                    if q1 * pc <= thr and opp <= thr:
                        continue
                    v0, v1 = rec(ch[a], p0, q1, pc)
                    cf[a] = v1
                    rs += s * v1
                    ro += v0
                own = p1
                result = (ro, rs)
            if upd[pl]:
                if opp > 0.0:
                    acc = vals_acc[i]
                    if regret_mode:
                        for a in range(k):
                            acc[a] += wv * (cf[a] - rs)
                    else:
                        for a in range(k):
                            acc[a] += wv * cf[a]
                    dirty[i] = None
                    if record is not None:
                        prev = record.get(i)
                        record[i] = cf if prev is None else [x + y for x, y in zip(prev, cf)]
                if own > 0.0:
                    nm = num[i]
                    for a in range(k):
                        nm[a] += wa * own * sigma[a]
                    den[i] += wa * own
            return result

        rec(0, 1.0, 1.0, 1.0)
        self.nodes_touched_ += touched
        self._finish(dirty)

    def _finish(self, dirty):
        pol = self.policy_
        acc = self.values_
        argmax = self.policy_rule == "argmax"
        for i in dirty:
            if self.plus:
                acc[i] = plus_clamp(acc[i])
            pol[i] = self._argmax_policy(acc[i]) if argmax else regret_matching(acc[i])


class ExternalSamplingSolver(Solver):
    """External-sampling MCCFR with alternating traversers.

    The traverser explores all of its actions; chance and the other
    player are sampled once per node. Regrets accumulate the sampled
    action values minus the sampled node value at the traverser's
    information sets.

    ``average_at="opponent"`` adds the current policy to the average at
    every sampled node of the other player; those nodes are reached with
    probability proportional to that player's own reach, so the average
    is unbiased. ``average_at="traverser"`` instead updates the average at
    the traverser's nodes, weighted by the traverser's reach, which is
    biased by the opponent's reach and converges far more slowly.

    When a traverser has no positive regret at an information set its
    next policy is a random pure action.
    """

    full_traversal = False
    record = None

    def __init__(
        self,
        n_iter=1000,
        weighting="constant",
        weight_target="average",
        prune=True,
        prune_threshold=1e-20,
        simultaneous=False,
        init="uniform",
        random_state=None,
        max_nodes=DEFAULT_MAX_NODES,
        average_at="opponent",
    ):
        super().__init__(
            n_iter=n_iter,
            weighting=weighting,
            weight_target=weight_target,
            prune=prune,
            prune_threshold=prune_threshold,
            simultaneous=simultaneous,
            init=init,
            random_state=random_state,
            max_nodes=max_nodes,
        )
        self.average_at = average_at

    def _validate_params(self):
        super()._validate_params()
        if self.average_at not in ("opponent", "traverser"):
            raise ValueError("average_at must be 'opponent' or 'traverser'")

    def _iterate(self, traverser=None):
        if traverser is None:
            traverser = (self.t_ - 1) % 2
        tree = self.tree_
        player = tree.player
        children = tree.children
        probs = tree.probs
        payoff = tree.payoff
        infoset = tree.infoset
        expand = tree.expand
        pol = self.policy_
        regrets = self.values_
        num = self.avg_num_
        den = self.avg_den_
        w = self._w(self.t_)
        wa = w if self.weight_target == "average" else 1.0
        wv = w if self.weight_target == "values" else 1.0
        choice = self.rng_.choice
        at_traverser = self.average_at == "traverser"
        dirty = {}
        record = self.record
        touched = 0

        def rec(n, reach):
            nonlocal touched
            touched += 1
            pl = player[n]
            if pl == TERMINAL:
                return payoff[n][traverser]
            ch = children[n]
            if ch is None:
                ch = expand(n)
            if pl == CHANCE:
                return rec(ch[choice(probs[n])], reach)
            i = infoset[n]
            sigma = pol[i]
            if pl != traverser:
                if not at_traverser:
                    nm = num[i]
                    for a in range(len(sigma)):
                        nm[a] += wa * sigma[a]
                    den[i] += wa
                return rec(ch[choice(sigma)], reach)
            k = len(ch)
            vals = [rec(ch[a], reach * sigma[a]) for a in range(k)]
            v = 0.0
            for s, x in zip(sigma, vals):
                v += s * x
            acc = regrets[i]
            for a in range(k):
                acc[a] += wv * (vals[a] - v)
            if at_traverser and reach > 0.0:
                nm = num[i]
                for a in range(k):
                    nm[a] += wa * reach * sigma[a]
                den[i] += wa * reach
            dirty[i] = None
            if record is not None:
                prev = record.get(i)
                record[i] = vals if prev is None else [x + y for x, y in zip(prev, vals)]
            return v

        rec(0, 1.0)
        self.nodes_touched_ += touched
        for i in dirty:
            pol[i] = regret_matching(regrets[i], self._random_pure)

    def iterate_as(self, traverser: int) -> "ExternalSamplingSolver":
        """Run one iteration with an explicit traverser."""
        start = time.perf_counter_ns()
        self.t_ += 1
        self._iterate(traverser)
        self.solve_time_ns_ += time.perf_counter_ns() - start
        return self
