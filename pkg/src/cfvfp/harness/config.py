"""Experiment configuration and its text format.

Config files are INI-style: an ``[experiment]`` section with the run
settings and one ``[solver NAME]`` section per solver::

    [experiment]
    game = kuhn:x=3,y=1,z=1
    trials = 30
    budget = iters=10000        # or nodes=N, ms=N
    cadence = 100               # iterations, or nodes for a nodes budget
    seed = 0
    out = results
    timing = off                # "wall" records elapsed_ns
    ci = normal                 # or bootstrap
    checkpoint = no             # yes: save each trial's final state

    [solver cfr]
    weight = constant

    [solver mccfvfp]
    weight = linear
    prune = yes

Keys other than ``weight`` in a solver section are passed to the solver
as parameters (booleans, ints and floats are recognised). ``#`` and
``;`` start comments.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from ..utils import WEIGHTS

MATRIX_LEARNERS = ("rm", "fp")
BUDGET_KINDS = ("iters", "nodes", "ms")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SolverSpec:
    name: str
    weight: str = "constant"
    params: tuple = ()

    @property
    def label(self) -> str:
        return self.name if self.weight == "constant" else f"{self.name}/{self.weight}"


@dataclass(frozen=True)
class ExperimentConfig:
    game: str
    solvers: tuple[SolverSpec, ...]
    trials: int = 30
    budget_kind: str = "iters"
    budget: int = 1000
    cadence: int = 100
    seed: int = 0
    out: str = "results"
    timing: str = "off"
    ci: str = "normal"
    bootstrap_samples: int = 1000
    checkpoint: bool = False
    jobs: int = 1

    def __post_init__(self):
        validate(self)

    @property
    def is_matrix(self) -> bool:
        return all(s.name in MATRIX_LEARNERS for s in self.solvers)


def validate(cfg: ExperimentConfig) -> None:
    from ..games import InvalidParams, make_game
    from ..normal_form import make_matrix_game
    from ..solvers import solver_class

    if cfg.trials < 1:
        raise ConfigError("trials must be >= 1")
    if cfg.budget_kind not in BUDGET_KINDS:
        raise ConfigError(f"budget kind must be one of {BUDGET_KINDS}")
    if cfg.budget < 1:
        raise ConfigError("budget must be >= 1")
    if cfg.cadence < 1:
        raise ConfigError("cadence must be >= 1")
    if cfg.timing not in ("off", "wall"):
        raise ConfigError("timing must be 'off' or 'wall'")
    if cfg.ci not in ("normal", "bootstrap"):
        raise ConfigError("ci must be 'normal' or 'bootstrap'")
    if cfg.jobs < 1:
        raise ConfigError("jobs must be >= 1")
    if not cfg.solvers:
        raise ConfigError("at least one solver is required")
    matrix = [s.name in MATRIX_LEARNERS for s in cfg.solvers]
    if any(matrix) and not all(matrix):
        raise ConfigError("matrix learners (rm, fp) cannot be mixed with tree solvers")
    for s in cfg.solvers:
        if s.weight not in WEIGHTS:
            raise ConfigError(f"unknown weight scheme {s.weight!r}")
        if s.name in MATRIX_LEARNERS:
            continue
        try:
            cls = solver_class(s.name)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        bad = set(dict(s.params)) - set(cls._get_param_names())
        if bad:
            raise ConfigError(f"unknown parameters {sorted(bad)} for solver {s.name}")
    try:
        if all(matrix):
            if cfg.budget_kind == "nodes":
                raise ConfigError("matrix learners take an iters or ms budget")
            make_matrix_game(cfg.game)
        else:
            make_game(cfg.game)
    except InvalidParams as exc:
        raise ConfigError(str(exc)) from None


def parse_budget(text: str) -> tuple[str, int]:
    kind, eq, value = text.strip().partition("=")
    if not eq:
        raise ConfigError(f"budget must look like iters=N, nodes=N or ms=N, got {text!r}")
    try:
        n = int(float(value))
    except ValueError:
        raise ConfigError(f"budget value {value!r} is not a number") from None
    return kind.strip(), n


def _scalar(value: str):
    v = value.strip()
    low = v.lower()
    if low in ("yes", "true", "on"):
        return True
    if low in ("no", "false", "off"):
        return False
    for conv in (int, float):
        try:
            return conv(v)
        except ValueError:
            pass
    return v


def _bool(value: str) -> bool:
    v = _scalar(value)
    if not isinstance(v, bool):
        raise ConfigError(f"expected yes/no, got {value!r}")
    return v


def _int(value: str, key: str) -> int:
    try:
        return int(float(value))
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from None


def parse_config(text: str, **overrides) -> ExperimentConfig:
    """Parse the config text; keyword overrides replace file values."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    exp = dict(cp["experiment"]) if cp.has_section("experiment") else {}
    solvers = []
    for section in cp.sections():
        if section == "experiment":
            continue
        kind, _, name = section.partition(" ")
        if kind != "solver" or not name.strip():
            raise ConfigError(f"unknown section [{section}]")
        items = dict(cp[section])
        weight = items.pop("weight", "constant")
        params = tuple(sorted((k, _scalar(v)) for k, v in items.items()))
        solvers.append(SolverSpec(name.strip().lower(), weight, params))
    known = {"game", "trials", "budget", "cadence", "seed", "out", "timing", "ci", "bootstrap_samples", "checkpoint", "jobs"}
    unknown = set(exp) - known
    if unknown:
        raise ConfigError(f"unknown experiment keys {sorted(unknown)}")
    kw = {}
    if "game" in exp:
        kw["game"] = exp["game"]
    for key in ("trials", "cadence", "seed", "bootstrap_samples", "jobs"):
        if key in exp:
            kw[key] = _int(exp[key], key)
    if "budget" in exp:
        kw["budget_kind"], kw["budget"] = parse_budget(exp["budget"])
    for key in ("out", "timing", "ci"):
        if key in exp:
            kw[key] = exp[key].strip()
    if "checkpoint" in exp:
        kw["checkpoint"] = _bool(exp["checkpoint"])
    if solvers:
        kw["solvers"] = tuple(solvers)
    kw.update({k: v for k, v in overrides.items() if v is not None})
    if "game" not in kw:
        raise ConfigError("no game given")
    if "solvers" not in kw:
        raise ConfigError("no solver given")
    return ExperimentConfig(**kw)
