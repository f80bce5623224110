"""Run configuration: a key=value file plus command-line overrides (overrides win)."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .homodyne import SimConfig
from .io import read_keyvalue
from .model import PhysicalParams

METHODS = ("radon", "maxlik", "moments", "all")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    g: float = 1.07
    gamma: float = 0.4
    xi: float = 0.9
    eta: float = 0.80
    e: float = 0.0
    mu: float = 0.06
    n0_count: int = 180_000
    n1_count: int = 180_000
    n2_count: int = 105_000
    phases: int = 12
    seed: int = 2006
    method: str = "all"
    out: str = "run"
    bins: int = 64
    grid: int = 64
    radon_cutoff: float = 6.0
    maxlik_nmax: int = 12
    maxlik_iterations: int = 2000
    maxlik_tol: float = 1e-9

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        for name in ("n0_count", "n1_count", "n2_count"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.phases < 2:
            raise ConfigError("need at least two phases for tomography")
        if self.bins < 2 or self.grid < 2:
            raise ConfigError("bins and grid must be at least 2")
        if self.radon_cutoff <= 0:
            raise ConfigError("radon_cutoff must be positive")
        try:
            self.physical
            self.sim
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    @property
    def physical(self) -> PhysicalParams:
        return PhysicalParams(self.g, self.gamma, self.xi, self.eta, self.e, self.mu)

    @property
    def sim(self) -> SimConfig:
        counts = {0: self.n0_count, 1: self.n1_count, 2: self.n2_count}
        return SimConfig(self.physical, counts, self.phases, self.seed)

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_CASTS = {"float": float, "int": int, "str": str}


def _cast(key, value):
    if key not in _TYPES:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        return _CASTS[_TYPES[key]](value)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {value!r}") from None


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    values = {}
    if path is not None:
        for key, value in read_keyvalue(path).items():
            values[key] = _cast(key, value)
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = _cast(key, value)
    try:
        return replace(RunConfig(), **values)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
