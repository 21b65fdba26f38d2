"""Coverage run configuration files.

A config is TOML with a ``[coverage]`` table::

    [coverage]
    dist = "pareto1 x_m=1 alpha=1"
    u = 2
    n_eff = [10, 20, 40, 80, 160]   # at most one list-valued key: a sweep
    level = 0.95
    reps = 10000
    methods = ["unbiased", "bootstrap", "jackknife"]
    bootstrap_reps = 999
    seed = 1

The distribution may instead be a sub-table ``[coverage.dist]`` with
``family = "pareto1"`` and one key per parameter; a parameter given as a
list sweeps over it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .coverage import CoverageConfig
from .distributions import make_distribution, parse_distribution

SEED_ENV = "PTAIL_SEED"
COVERAGE_KEYS = {"dist", "u", "n_eff", "level", "reps", "methods", "bootstrap_reps", "seed"}
REQUIRED_KEYS = {"dist", "u", "n_eff"}


class ConfigError(ValueError):
    def __init__(self, message: str, keys: list[str] | None = None):
        self.keys = keys or []
        super().__init__(message)


@dataclass(frozen=True)
class Sweep:
    key: str | None
    values: list
    configs: list[CoverageConfig]


PRESETS: dict[str, dict] = {
    "smoke": {
        "dist": "pareto1 x_m=1 alpha=1",
        "u": 2.0,
        "n_eff": 20.0,
        "reps": 100,
        "bootstrap_reps": 49,
        "seed": 1,
    },
    "table2": {
        "dist": "pareto1 x_m=1 alpha=1",
        "u": 2.0,
        "n_eff": [10.0, 20.0, 40.0, 80.0, 160.0],
        "reps": 10_000,
        "methods": ["unbiased", "bootstrap", "jackknife"],
        "bootstrap_reps": 999,
        "seed": 2,
    },
    "table1": {
        "dist": {"family": "pareto1", "x_m": 1.0, "alpha": [0.2, 0.5, 1.0, 2.0, 3.0]},
        "u": 2.0,
        "n_eff": 20.0,
        "reps": 10_000,
        "methods": ["unbiased", "bootstrap", "jackknife"],
        "bootstrap_reps": 999,
        "seed": 1,
    },
}
PRESETS["table1_u3"] = {**PRESETS["table1"], "u": 3.0}


def load_config_file(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid TOML: {exc}") from exc
    if "coverage" not in doc:
        raise ConfigError(f"config {path!r} has no [coverage] section", ["coverage"])
    extra = sorted(set(doc) - {"coverage"})
    if extra:
        raise ConfigError(f"unknown section(s): {', '.join(extra)}", extra)
    return dict(doc["coverage"])


def resolve_seed(flag: int | None, config_value: int | None) -> int:
    """Flag beats ``PTAIL_SEED`` beats the config file."""
    if flag is not None:
        return int(flag)
    env = os.environ.get(SEED_ENV)
    if env not in (None, ""):
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer", [SEED_ENV]) from None
    return int(config_value) if config_value is not None else 0


def build_sweep(raw: dict, overrides: dict | None = None) -> Sweep:
    """Validate a ``[coverage]`` mapping and expand a sweep into configs."""
    raw = dict(raw)
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    unknown = sorted(set(raw) - COVERAGE_KEYS)
    missing = sorted(REQUIRED_KEYS - set(raw))
    if unknown or missing:
        parts = []
        if unknown:
            parts.append(f"unknown key(s): {', '.join(unknown)}")
        if missing:
            parts.append(f"missing key(s): {', '.join(missing)}")
        raise ConfigError("; ".join(parts), unknown + missing)
    seed = resolve_seed(overrides.pop("seed", None), raw.pop("seed", None))
    raw.update(overrides)

    dist_raw = raw.pop("dist")
    sweep_key = None
    sweep_vals: list = [None]
    if isinstance(dist_raw, dict):
        dist_raw = dict(dist_raw)
        family = dist_raw.pop("family", None)
        if family is None:
            raise ConfigError("[coverage.dist] needs a 'family' key", ["dist.family"])
        for k, v in dist_raw.items():
            if isinstance(v, list):
                if sweep_key is not None:
                    raise ConfigError(f"only one key may be a list, got {sweep_key} and dist.{k}", [sweep_key, f"dist.{k}"])
                sweep_key, sweep_vals = f"dist.{k}", v

        def make_dist(val):
            params = dict(dist_raw)
            if sweep_key is not None:
                params[sweep_key[5:]] = val
            try:
                return make_distribution(family, **params)
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"dist: {exc}", ["dist"]) from None
    elif isinstance(dist_raw, str):
        try:
            fixed = parse_distribution(dist_raw)
        except ValueError as exc:
            raise ConfigError(f"dist: {exc}", ["dist"]) from None

        def make_dist(val):
            return fixed
    else:
        raise ConfigError("dist must be a string or a table", ["dist"])

    for k in ("u", "n_eff", "level"):
        if isinstance(raw.get(k), list):
            if sweep_key is not None:
                raise ConfigError(f"only one key may be a list, got {sweep_key} and {k}", [sweep_key, k])
            sweep_key, sweep_vals = k, raw[k]
    methods = raw.get("methods", ["unbiased", "bootstrap", "jackknife"])
    if isinstance(methods, str):
        methods = [m.strip() for m in methods.split(",") if m.strip()]

    configs = []
    for val in sweep_vals:
        fields = {k: raw[k] for k in ("u", "n_eff", "level") if k in raw}
        if sweep_key in fields:
            fields[sweep_key] = val
        try:
            configs.append(
                CoverageConfig(
                    dist=make_dist(val),
                    u=float(fields["u"]),
                    n_eff=float(fields["n_eff"]),
                    level=float(fields.get("level", 0.95)),
                    reps=int(raw.get("reps", 10_000)),
                    methods=tuple(methods),
                    bootstrap_reps=int(raw.get("bootstrap_reps", 999)),
                    seed=seed,
                )
            )
        except ConfigError:
            raise
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"invalid coverage config: {exc}", [sweep_key or "coverage"]) from None
    values = sweep_vals if sweep_key is not None else []
    return Sweep(key=sweep_key, values=values, configs=configs)
