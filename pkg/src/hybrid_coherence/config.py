"""Run configuration: per-command defaults, a YAML file, and command-line overrides.

A configuration is a nested dict with the sections ``system``, ``bath``,
``rates``, ``quad``, ``sweep``, ``oracle``, ``ode``, ``mc`` and ``run``.
Values are resolved in this order: built-in defaults for the subcommand,
then the YAML file, then ``--set section.key=value`` and the dedicated flags.
"""
from __future__ import annotations

import copy
import math
import os

import numpy as np
import yaml

from .bath import BathParams, QuadratureConfig, RateModel
from .system import SystemParams


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


COMMANDS = ("fig2", "fig3", "fig4", "evolve", "oracle-check", "selftest")

_COMMON = {
    "system": {"omega0": 1.0, "g": 0.1},
    "bath": {"gamma0": 0.02, "xi_c": 1.0, "s_exp": 1.0, "inv_temp": math.inf},
    "rates": {"model": "full"},
    "quad": {"epsabs": 1e-9, "epsrel": 1e-9, "limit": 400},
    "oracle": {"enabled": False, "n_modes": 4000, "nu_max": 10.0, "t_final": None, "dt": None},
    "ode": {"t_final": None, "n_samples": 201, "dt": None},
    "mc": {"n_traj": 100_000, "seed": 0, "validate_at": None, "n_times": 101},
    "run": {"workers": None, "out": None},
}

_SPECIFIC = {
    "fig2": {"sweep": {"g": {"start": 0.0, "stop": 0.15, "num": 31},
                       "gamma0": [0.01, 0.02, 0.05, 0.1]}},
    "fig3": {"sweep": {"inv_temp": {"start": 1e-3, "stop": 1e2, "num": 51, "log": True}}},
    "fig4": {"bath": {"s_exp": 0.5, "xi_c": 3.0},
             # rates without the Lamb shift: the Markovian high-T regime
             "rates": {"model": "no-lamb"},
             "sweep": {"inv_temp": {"start": 1e-2, "stop": 1e1, "num": 31, "log": True}},
             "mc": {"validate_at": 0.01}},
    "evolve": {"oracle": {"enabled": False}},
    "oracle-check": {"sweep": {"g": [0.02, 0.1], "gamma0": [0.02, 0.05]},
                     "oracle": {"enabled": True}},
    "selftest": {},
}


def _merge(base: dict, extra: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in (extra or {}).items():
        where = f"{path}{key}"
        if isinstance(value, dict) and isinstance(out.get(key), dict) and not _is_grid(value):
            out[key] = _merge(out[key], value, where + ".")
        else:
            out[key] = copy.deepcopy(value)
    return out


def _is_grid(value) -> bool:
    return isinstance(value, dict) and {"start", "stop"} <= set(value)


def default_config(command: str) -> dict:
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    return _merge(_merge({"command": command}, _COMMON), _SPECIFIC[command])


def load_yaml(path: str | os.PathLike) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data


def apply_override(cfg: dict, assignment: str) -> None:
    """Apply one ``section.key=value`` override in place; value is parsed as YAML."""
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} is not of the form key=value")
    key, raw = assignment.split("=", 1)
    parts = key.strip().split(".")
    node = cfg
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override {key!r}: {part!r} is not a section")
    node[parts[-1]] = yaml.safe_load(raw)


def resolve(command: str, path=None, overrides=()) -> dict:
    cfg = default_config(command)
    if path is not None:
        user = load_yaml(path)
        user.pop("command", None)
        cfg = _merge(cfg, user)
    for item in overrides:
        apply_override(cfg, item)
    validate(cfg)
    return cfg


def dump(cfg: dict) -> str:
    return yaml.safe_dump(cfg, sort_keys=False)


# --- typed views ---------------------------------------------------------------

def _float(value, name: str) -> float:
    if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected a number, got {value!r}") from None


def make_grid(spec, name: str) -> np.ndarray:
    """A grid is an explicit list, a scalar, or {start, stop, num[, log]}."""
    if _is_grid(spec):
        num = int(spec.get("num", 2))
        start, stop = _float(spec["start"], name), _float(spec["stop"], name)
        if num < 1:
            raise ConfigError(f"{name}: num must be >= 1")
        if spec.get("log", False):
            if start <= 0 or stop <= 0:
                raise ConfigError(f"{name}: log grid needs positive bounds")
            grid = np.geomspace(start, stop, num)
        else:
            grid = np.linspace(start, stop, num)
    elif isinstance(spec, (list, tuple)):
        grid = np.array([_float(v, name) for v in spec], dtype=float)
    else:
        grid = np.array([_float(spec, name)])
    if grid.size == 0:
        raise ConfigError(f"{name}: grid is empty")
    if np.any(np.diff(grid) < 0):
        raise ConfigError(f"{name}: grid must be sorted ascending")
    return grid


def system_params(cfg: dict, g: float | None = None) -> SystemParams:
    s = cfg["system"]
    try:
        return SystemParams(omega0=_float(s["omega0"], "system.omega0"),
                            g=_float(s["g"] if g is None else g, "system.g"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def bath_params(cfg: dict, **changes) -> BathParams:
    b = {**cfg["bath"], **changes}
    try:
        return BathParams(gamma0=_float(b["gamma0"], "bath.gamma0"),
                          xi_c=_float(b["xi_c"], "bath.xi_c"),
                          s_exp=_float(b["s_exp"], "bath.s_exp"),
                          inv_temp=_float(b["inv_temp"], "bath.inv_temp"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def quad_config(cfg: dict) -> QuadratureConfig:
    q = cfg["quad"]
    return QuadratureConfig(epsabs=_float(q["epsabs"], "quad.epsabs"),
                            epsrel=_float(q["epsrel"], "quad.epsrel"), limit=int(q["limit"]))


def rate_model(cfg: dict) -> RateModel:
    try:
        return RateModel(cfg["rates"]["model"])
    except ValueError:
        choices = ", ".join(m.value for m in RateModel)
        raise ConfigError(f"rates.model must be one of {choices}") from None


def workers(cfg: dict) -> int:
    n = cfg["run"].get("workers")
    if n is None:
        return os.cpu_count() or 1
    n = int(n)
    if n < 1:
        raise ConfigError("run.workers must be >= 1")
    return n


def validate(cfg: dict) -> None:
    """Check every value a command will use; raise ConfigError on the first problem."""
    command = cfg["command"]
    rate_model(cfg)
    quad_config(cfg)
    workers(cfg)
    sweep = cfg.get("sweep", {})
    g_values = make_grid(sweep["g"], "sweep.g") if "g" in sweep else [cfg["system"]["g"]]
    gammas = (make_grid(sweep["gamma0"], "sweep.gamma0") if "gamma0" in sweep
              else [cfg["bath"]["gamma0"]])
    for g in g_values:
        system_params(cfg, g)
    for gamma0 in gammas:
        bath_params(cfg, gamma0=gamma0)
    if "inv_temp" in sweep:
        temps = make_grid(sweep["inv_temp"], "sweep.inv_temp")
        if np.any(temps <= 0) or np.any(~np.isfinite(temps)):
            raise ConfigError("sweep.inv_temp must be positive and finite")
    if command in ("fig2", "oracle-check") and not bath_params(cfg).zero_temperature:
        raise ConfigError(f"{command} is a zero-temperature sweep; set bath.inv_temp: .inf")
    mc = cfg["mc"]
    if int(mc["n_traj"]) < 1:
        raise ConfigError("mc.n_traj must be >= 1")
    if not 0 <= int(mc["seed"]) < 2**64:
        raise ConfigError("mc.seed must fit in 64 bits")
    for key in ("n_modes",):
        if int(cfg["oracle"][key]) < 1:
            raise ConfigError(f"oracle.{key} must be >= 1")
    if int(cfg["ode"]["n_samples"]) < 2:
        raise ConfigError("ode.n_samples must be >= 2")
