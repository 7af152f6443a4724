"""Run configuration: a TOML file with one section per model plus policy, Monte Carlo and mortality."""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .engine import MonteCarloSettings
from .market import BlackScholesParams, HestonParams, VasicekParams
from .mortality import DEFAULT_WINDOW


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PolicyGrid:
    maturities: tuple[float, ...] = (10.0, 20.0, 30.0, 40.0)
    age: float = 50.0
    guarantee_endowment: float = 100.0
    guarantee_death: float = 100.0
    death_benefit: bool = False
    strict_paper: bool = False
    ages: tuple[float, ...] = tuple(float(a) for a in range(20, 85, 5))
    guarantees: tuple[float, ...] = tuple(float(g) for g in range(50, 210, 10))

    def __post_init__(self):
        for name in ("maturities", "ages", "guarantees"):
            if len(getattr(self, name)) == 0:
                raise ConfigError(f"policy.{name} must be non-empty")
        if any(T <= 0 for T in self.maturities):
            raise ConfigError("policy.maturities must be > 0")
        if any(a < 0 for a in self.ages) or self.age < 0:
            raise ConfigError("ages must be >= 0")
        if any(g <= 0 for g in self.guarantees):
            raise ConfigError("policy.guarantees must be > 0")
        if self.guarantee_endowment <= 0 or self.guarantee_death <= 0:
            raise ConfigError("guarantees must be > 0")


@dataclass(frozen=True)
class MortalitySource:
    source: str = "bundled"
    age_lo: float = float(DEFAULT_WINDOW[0])
    age_hi: float = float(DEFAULT_WINDOW[1])

    def __post_init__(self):
        if self.age_hi <= self.age_lo:
            raise ConfigError("mortality.age_hi must exceed age_lo")


@dataclass(frozen=True)
class OutputSettings:
    dir: str = "results"


@dataclass(frozen=True)
class RunConfig:
    vasicek: VasicekParams = VasicekParams(k=0.3, theta=0.01, sigma=0.02, r0=0.01)
    heston: HestonParams = HestonParams(kappa=1e-3, nu_bar=0.01, eta=0.01, nu0=0.04, mu=0.015, s0=100.0)
    blackscholes: BlackScholesParams = BlackScholesParams(s0=100.0, r=0.01, sigma=0.04)
    policy: PolicyGrid = field(default_factory=PolicyGrid)
    mc: MonteCarloSettings = MonteCarloSettings(seed=2018)
    mortality: MortalitySource = field(default_factory=MortalitySource)
    output: OutputSettings = field(default_factory=OutputSettings)


_CLASSES = {
    "vasicek": VasicekParams, "heston": HestonParams, "blackscholes": BlackScholesParams,
    "policy": PolicyGrid, "mc": MonteCarloSettings, "mortality": MortalitySource, "output": OutputSettings,
}


def _coerce(section: str, name: str, value, default):
    where = f"{section}.{name}"
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{where} must be a boolean")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where} must be an integer")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where} must be a number")
        return float(value)
    if isinstance(default, tuple):
        if not isinstance(value, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                                                  for v in value):
            raise ConfigError(f"{where} must be a list of numbers")
        return tuple(float(v) for v in value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(f"{where} must be a string")
        return value
    raise ConfigError(f"{where}: unsupported type")


def from_mapping(data: dict, base: RunConfig | None = None) -> RunConfig:
    base = base or RunConfig()
    unknown = set(data) - set(_CLASSES)
    if unknown:
        raise ConfigError(f"unknown config section(s): {', '.join(sorted(unknown))}")
    sections = {}
    for name, cls in _CLASSES.items():
        current = getattr(base, name)
        given = data.get(name, {})
        if not isinstance(given, dict):
            raise ConfigError(f"[{name}] must be a table")
        fields = {f.name for f in dataclasses.fields(cls)}
        bad = set(given) - fields
        if bad:
            raise ConfigError(f"unknown key(s) in [{name}]: {', '.join(sorted(bad))}")
        values = {k: _coerce(name, k, v, getattr(current, k)) for k, v in given.items()}
        try:
            sections[name] = dataclasses.replace(current, **values)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"[{name}] {exc}") from None
    return RunConfig(**sections)


def loads(text: str, base: RunConfig | None = None) -> RunConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from None
    return from_mapping(data, base)


def load(path: str | Path) -> RunConfig:
    return loads(Path(path).read_text(encoding="utf-8"))


def to_mapping(cfg: RunConfig) -> dict:
    out = {}
    for name in _CLASSES:
        section = dataclasses.asdict(getattr(cfg, name))
        out[name] = {k: list(v) if isinstance(v, tuple) else v for k, v in section.items()}
    return out


def dumps(cfg: RunConfig) -> str:
    return tomli_w.dumps(to_mapping(cfg))


def bundled_config_names() -> list[str]:
    root = resources.files("unitlinked").joinpath("data/configs")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def bundled_config(name: str) -> RunConfig:
    return loads(resources.files("unitlinked").joinpath(f"data/configs/{name}.toml").read_text(encoding="utf-8"))
