"""Benchmark configuration: sectioned key = value files, defaults and seed derivation."""

from __future__ import annotations

import configparser
import json
from dataclasses import dataclass, field
from pathlib import Path

MASK64 = (1 << 64) - 1
DEFAULT_SEED = 42


class ConfigError(ValueError):
    pass


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(master_seed: int, task_index: int) -> int:
    """Per-task 64-bit seed; depends only on (master seed, task index), never on scheduling."""
    return splitmix64(splitmix64(master_seed & MASK64) ^ (task_index & MASK64))


# Every section and key a config file may set, with its default value.
DEFAULTS: dict[str, dict[str, object]] = {
    "run": {"seed": DEFAULT_SEED, "out": "results", "workers": 1},
    "noise": {"gamma_dephasing": 1.0, "p_depolarizing": 0.15, "gamma_ad": 0.1},
    "sweep-noise": {
        "dims": [2, 3],
        "gamma_grid": [0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0],
        "gamma_ad_grid": [0.05, 0.15, 0.25, 0.35, 0.5, 0.65, 0.8, 0.95],
        "p_grid": [0.05, 0.1, 0.2, 0.3, 0.4, 0.5],
    },
    "sweep-dim": {"dims": [2, 4, 8, 16, 32, 64, 128, 256], "samples": 20},
    "sweep-copies": {"copies": [1, 2, 5, 10, 20, 50, 100, 200], "dim": 8, "trials": 10, "eps0": 0.05},
    "sensitivity": {"dims": [4, 8, 16, 64], "deltas": [-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3], "samples": 10},
    "mixed-hybrid": {
        "dim": 8,
        "purity_grid": [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
        "states_per_v": 10,
        "hybrid_dims": [4, 8, 16, 32, 64],
        "w_grid": [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
        "hybrid_samples": 10,
    },
    "qem-compare": {"dims": [2, 4, 8, 16, 32, 64], "samples": 15},
    "correlation": {"dims": [2, 3, 4, 8, 16, 64]},
    "vqe": {"budget": 200, "restarts": 3},
    "circuit-sanity": {"p_gate": 0.1, "noise": "local"},
    "crossover": {"gamma": 1.0, "gamma_ad": 0.1},
}


def _parse_value(raw: str, default):
    raw = raw.strip()
    try:
        if isinstance(default, list):
            items = [s for s in raw.replace(",", " ").split() if s]
            kind = type(default[0]) if default else float
            return [kind(s) for s in items]
        if isinstance(default, bool):
            return raw.lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"cannot parse {raw!r}: {exc}") from exc
    return raw


@dataclass
class BenchmarkConfig:
    sections: dict[str, dict[str, object]] = field(default_factory=dict)

    @classmethod
    def defaults(cls) -> BenchmarkConfig:
        return cls({s: dict(v) for s, v in DEFAULTS.items()})

    @classmethod
    def load(cls, path: str | Path | None = None) -> BenchmarkConfig:
        cfg = cls.defaults()
        if path is None:
            return cfg
        parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        for section in parser.sections():
            if section not in DEFAULTS:
                raise ConfigError(f"unknown section [{section}]")
            for key, raw in parser.items(section):
                if key not in DEFAULTS[section]:
                    raise ConfigError(f"unknown key {key!r} in [{section}]")
                cfg.set(section, key, _parse_value(raw, DEFAULTS[section][key]))
        cfg.validate()
        return cfg

    def get(self, section: str, key: str):
        return self.sections[section][key]

    def set(self, section: str, key: str, value) -> None:
        if section not in DEFAULTS or key not in DEFAULTS[section]:
            raise ConfigError(f"unknown setting {section}.{key}")
        self.sections[section][key] = value

    def section(self, name: str) -> dict:
        return self.sections[name]

    @property
    def seed(self) -> int:
        return int(self.get("run", "seed"))

    def validate(self) -> None:
        for section, values in self.sections.items():
            for key, value in values.items():
                if isinstance(value, list) and not value:
                    raise ConfigError(f"{section}.{key} must not be empty")
        if int(self.get("run", "workers")) < 1:
            raise ConfigError("workers must be at least 1")
        if self.get("circuit-sanity", "noise") not in ("local", "global"):
            raise ConfigError("circuit-sanity.noise must be 'local' or 'global'")
        try:
            from .noise import NoiseParams

            NoiseParams(**self.section("noise"))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid noise parameters: {exc}") from exc

    def as_json(self) -> str:
        return json.dumps(self.sections, sort_keys=True)
