"""Iterative equilibrium solvers."""

from __future__ import annotations

from .base import ExternalSamplingSolver, Solver, TraversalSolver, plus_clamp, regret_matching
from .cfr import CFR, ESMCCFR, CFRPlus
from .cfvfp import CFVFP, MCCFVFP, CFVFPPlus, MCCFVFPPlus
from .checkpoint import CheckpointError, load_checkpoint, load_profile, save_checkpoint

SOLVERS = {
    cls.algorithm: cls for cls in (CFR, CFRPlus, CFVFP, CFVFPPlus, ESMCCFR, MCCFVFP, MCCFVFPPlus)
}

_ALIASES = {"mccfr-es": "es-mccfr", "mccfr": "es-mccfr", "es": "es-mccfr", "cfrplus": "cfr+"}


def solver_class(name: str) -> type[Solver]:
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    try:
        return SOLVERS[key]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; choose from {sorted(SOLVERS)}") from None


def make_solver(name: str, **params) -> Solver:
    return solver_class(name)(**params)


__all__ = [
    "CFR",
    "CFRPlus",
    "CFVFP",
    "CFVFPPlus",
    "CheckpointError",
    "ESMCCFR",
    "ExternalSamplingSolver",
    "MCCFVFP",
    "MCCFVFPPlus",
    "SOLVERS",
    "Solver",
    "TraversalSolver",
    "load_checkpoint",
    "load_profile",
    "make_solver",
    "plus_clamp",
    "regret_matching",
    "save_checkpoint",
    "solver_class",
]
