"""Counterfactual value fictitious play and its variants.

The next policy at every information set is a pure best response to the
accumulated counterfactual values, so a traversal only descends into the
single action each player currently plays plus whatever the opponent's
reach keeps alive. Branches whose reach is zero for both players are
skipped.
"""

from __future__ import annotations

from .base import TraversalSolver


class CFVFP(TraversalSolver):
    """Accumulate counterfactual action values and play their argmax."""

    algorithm = "cfvfp"
    value_mode = "q"
    policy_rule = "argmax"


class CFVFPPlus(TraversalSolver):
    """Argmax over accumulated regrets that are floored at zero."""

    algorithm = "cfvfp+"
    value_mode = "regret"
    policy_rule = "argmax"
    plus = True


class MCCFVFP(CFVFP):
    """CFVFP with chance outcomes sampled once per node."""

    algorithm = "mccfvfp"
    sample_chance = True
    full_traversal = False


class MCCFVFPPlus(CFVFPPlus):
    """CFVFP+ with chance outcomes sampled once per node."""

    algorithm = "mccfvfp+"
    sample_chance = True
    full_traversal = False
