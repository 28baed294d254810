"""Validation helpers and random-stream plumbing."""

from __future__ import annotations

import math
import numbers

import numpy as np

from .game import GameSpec


def check_rng(seed=None) -> np.random.Generator:
    """Turn ``None``, an int, a seed sequence or a Generator into a PCG64 Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, (numbers.Integral, np.random.SeedSequence, list, tuple)):
        return np.random.Generator(np.random.PCG64(seed))
    raise ValueError(f"{seed!r} cannot be used to seed a generator")


def trial_seed(master_seed: int, trial: int) -> np.random.SeedSequence:
    """Independent stream for one trial; depends only on (master seed, trial index)."""
    return np.random.SeedSequence([int(master_seed), int(trial)])


def check_game(game) -> GameSpec:
    if isinstance(game, str):
        from .games import make_game

        return make_game(game)
    if not isinstance(game, GameSpec):
        raise TypeError(f"expected a GameSpec or selector string, got {type(game).__name__}")
    return game


WEIGHTS = ("constant", "log", "linear", "quadratic")


def weight_fn(scheme: str):
    """Averaging weight w_t for iteration t >= 1."""
    if scheme == "constant":
        return lambda t: 1.0
    if scheme == "log":
        return lambda t: math.log1p(t)
    if scheme == "linear":
        return float
    if scheme == "quadratic":
        return lambda t: float(t) * t
    raise ValueError(f"weight scheme must be one of {WEIGHTS}, got {scheme!r}")


class UniformStream:
    """Buffered uniform draws from a Generator.

    Drawing one float at a time from numpy is slow; this pulls blocks.
    The buffer is part of the state so checkpoints resume bit-exactly.
    """

    block = 4096

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.buf: list[float] = []
        self.pos = 0

    def random(self) -> float:
        if self.pos >= len(self.buf):
            self.buf = self.rng.random(self.block).tolist()
            self.pos = 0
        u = self.buf[self.pos]
        self.pos += 1
        return u

    def choice(self, probs) -> int:
        """Index drawn from the discrete distribution ``probs``."""
        u = self.random()
        acc = 0.0
        last = 0
        for i, p in enumerate(probs):
            if p > 0.0:
                acc += p
                last = i
                if u < acc:
                    return i
        return last

    def integer(self, n: int) -> int:
        return min(int(self.random() * n), n - 1)

    def get_state(self) -> dict:
        return {"bit_generator": self.rng.bit_generator.state, "buf": self.buf[self.pos:]}

    def set_state(self, state: dict) -> None:
        self.rng.bit_generator.state = state["bit_generator"]
        self.buf = list(state["buf"])
        self.pos = 0
