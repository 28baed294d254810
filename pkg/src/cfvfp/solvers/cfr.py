"""Regret-matching solvers: CFR, CFR+ and external-sampling MCCFR."""

from __future__ import annotations

from .base import ExternalSamplingSolver, TraversalSolver


class CFR(TraversalSolver):
    """Vanilla counterfactual regret minimization with full traversals."""

    algorithm = "cfr"


class CFRPlus(TraversalSolver):
    """CFR with regrets floored at zero after every iteration.

    Pass ``simultaneous=False`` and ``weighting="linear"`` for the
    alternating-update, linearly averaged variant.
    """

    algorithm = "cfr+"
    plus = True


class ESMCCFR(ExternalSamplingSolver):
    """Monte Carlo CFR with external sampling."""

    algorithm = "es-mccfr"
