"""Config file loading for the command line driver.

Configs are TOML: top-level keys select the experiment and its scalar
parameters, the [domain] table picks the geometry.  A sha256 hash of the
canonicalized content is stamped into every CSV so outputs can be traced
back to their inputs.
"""

import hashlib
import json
try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

import numpy as np

from .experiments import ExperimentConfig


class ConfigError(ValueError):
    pass


_KNOWN_KEYS = {
    "experiment", "alpha", "beta", "kernel", "mode", "a", "r",
    "ladder", "ladder_hi", "ladder_lo", "ladder_points",
    "n_paths", "seed", "output", "epsilon_fraction",
    "boundary_absorb_delta", "max_steps", "domain", "lemma",
}

_KNOWN_DOMAIN_KEYS = {"type", "n", "slope", "c", "beta", "center", "radius"}


def _ladder_from(raw):
    if "ladder" in raw:
        lad = [float(t) for t in raw["ladder"]]
    else:
        hi = float(raw.get("ladder_hi", 3e-1))
        lo = float(raw.get("ladder_lo", 1e-2))
        m = int(raw.get("ladder_points", 12))
        if not 0 < lo < hi:
            raise ConfigError("need 0 < ladder_lo < ladder_hi")
        if m < 2:
            raise ConfigError("ladder_points must be at least 2")
        lad = list(np.geomspace(hi, lo, m))
    if any(b >= a for a, b in zip(lad, lad[1:])):
        raise ConfigError("ladder must be strictly decreasing")
    return tuple(lad)


def config_hash(raw):
    """Stable sha256 over the canonical JSON form of the parsed config."""
    canon = json.dumps(raw, sort_keys=True, separators=(",", ":"),
                       default=str)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def parse_config(raw):
    """Validate a parsed TOML dict and build an ExperimentConfig."""
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "experiment" not in raw:
        raise ConfigError("config needs an 'experiment' key")
    dom = raw.get("domain", {"type": "halfspace", "n": 2})
    if not isinstance(dom, dict) or "type" not in dom:
        raise ConfigError("[domain] must be a table with a 'type' key")
    unknown = set(dom) - _KNOWN_DOMAIN_KEYS
    if unknown:
        raise ConfigError(f"unknown domain keys: {sorted(unknown)}")
    alpha = float(raw.get("alpha", 1.5))
    if not 0.0 < alpha < 2.0:
        raise ConfigError("alpha must lie in (0, 2)")
    try:
        cfg = ExperimentConfig(
            name=str(raw["experiment"]),
            domain=dom,
            alpha=alpha,
            beta=float(raw["beta"]) if "beta" in raw else None,
            kernel=str(raw.get("kernel", "constant")),
            mode=str(raw.get("mode", "censored")),
            a=float(raw.get("a", 1.0)),
            r=float(raw.get("r", 1.0)),
            ladder=_ladder_from(raw),
            n_paths=int(raw.get("n_paths", 10000)),
            seed=int(raw.get("seed", 0)),
            output=raw.get("output"),
            epsilon_fraction=float(raw.get("epsilon_fraction", 0.25)),
            boundary_absorb_delta=(
                float(raw["boundary_absorb_delta"])
                if "boundary_absorb_delta" in raw else None),
            max_steps=int(raw.get("max_steps", 200000)),
        )
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg, config_hash(raw), raw


def load_config(path):
    """Read and validate a TOML config file."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from exc
    return parse_config(raw)
