"""Experiment configuration: the dataclass, YAML ingestion, and echoing.

The on-disk format is YAML with two nested sections (``topology``,
``noise``) and a versioned ``schema_version`` key; the full schema is
documented in docs/config.md. Loading is strict: unknown keys, wrong
types, and out-of-range values raise :class:`ConfigError` naming the
offending key.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from pathlib import Path as FsPath
from typing import Any, Mapping

import yaml

from ..channels import CollectiveRotationSpec, NoiseConfig
from ..network import TopologySpec

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """A malformed or out-of-range experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one experiment (or sweep)."""

    topology: TopologySpec
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    bits: int = 96
    burst_size: int = 100
    burst_sweep: tuple[int, ...] | None = None
    distance_sweep: tuple[float, ...] | None = None
    trials: int = 10
    seed: int = 0
    attenuation_single_pass: bool = False

    def __post_init__(self) -> None:
        if self.bits < 1:
            raise ConfigError(f"bits must be >= 1, got {self.bits}")
        if self.burst_size < 1:
            raise ConfigError(f"burst_size must be >= 1, got {self.burst_size}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.burst_sweep is not None:
            if not self.burst_sweep:
                raise ConfigError("burst_sweep must be non-empty when present")
            if any(m < 1 for m in self.burst_sweep):
                raise ConfigError("burst_sweep entries must be >= 1")
        if self.distance_sweep is not None:
            if not self.distance_sweep:
                raise ConfigError("distance_sweep must be non-empty when present")
            if any(km < 0 for km in self.distance_sweep):
                raise ConfigError("distance_sweep entries must be non-negative")


_TOP_KEYS = {"schema_version", "bits", "burst_size", "burst_sweep",
             "distance_sweep", "trials", "seed", "attenuation_single_pass",
             "topology", "noise"}
_TOPOLOGY_KEYS = {"kind", "n", "rows", "cols", "link_km"}
_NOISE_KEYS = {"p_ad", "p_dephase", "p_bitflip", "p_bitphase",
               "alpha_db_per_km", "apply_on_links", "apply_at_nodes",
               "apply_once_per_photon", "collective_rotation"}
_CR_KEYS = {"mode", "theta", "theta_max"}


def _reject_unknown(mapping: Mapping[str, Any], allowed: set[str],
                    section: str) -> None:
    for key in mapping:
        if key not in allowed:
            where = f"{section}.{key}" if section else key
            raise ConfigError(f"unknown key {where!r}")


def _as_int(value: Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return value


def _as_float(value: Any, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    out = float(value)
    if not math.isfinite(out):
        raise ConfigError(f"{key} must be finite, got {value!r}")
    return out


def _as_bool(value: Any, key: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{key} must be a boolean, got {value!r}")
    return value


def _topology_from_dict(data: Mapping[str, Any]) -> TopologySpec:
    if not isinstance(data, Mapping):
        raise ConfigError("topology must be a mapping")
    _reject_unknown(data, _TOPOLOGY_KEYS, "topology")
    if "kind" not in data:
        raise ConfigError("topology.kind is required")
    kind = data["kind"]
    link_km = _as_float(data.get("link_km", 20.0), "topology.link_km")
    try:
        if kind == "direct":
            return TopologySpec.direct(link_km)
        if kind == "ring":
            return TopologySpec.ring(_as_int(data.get("n", 8), "topology.n"), link_km)
        if kind in ("grid", "torus"):
            rows = _as_int(data.get("rows", 4), "topology.rows")
            cols = _as_int(data.get("cols", 4), "topology.cols")
            return TopologySpec(kind, rows=rows, cols=cols, link_km=link_km)
        raise ConfigError(f"topology.kind must be one of "
                          f"('direct', 'ring', 'grid', 'torus'), got {kind!r}")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"topology: {exc}") from exc


def _cr_from_dict(data: Mapping[str, Any]) -> CollectiveRotationSpec:
    if not isinstance(data, Mapping):
        raise ConfigError("noise.collective_rotation must be a mapping")
    _reject_unknown(data, _CR_KEYS, "noise.collective_rotation")
    kwargs: dict[str, Any] = {"mode": data.get("mode", "off")}
    if "theta" in data:
        kwargs["theta"] = _as_float(data["theta"], "noise.collective_rotation.theta")
    if "theta_max" in data:
        kwargs["theta_max"] = _as_float(data["theta_max"],
                                        "noise.collective_rotation.theta_max")
    try:
        return CollectiveRotationSpec(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"noise.collective_rotation: {exc}") from exc


def _noise_from_dict(data: Mapping[str, Any]) -> NoiseConfig:
    if not isinstance(data, Mapping):
        raise ConfigError("noise must be a mapping")
    _reject_unknown(data, _NOISE_KEYS, "noise")
    kwargs: dict[str, Any] = {}
    for key in ("p_ad", "p_dephase", "p_bitflip", "p_bitphase", "alpha_db_per_km"):
        if key in data:
            kwargs[key] = _as_float(data[key], f"noise.{key}")
    for key in ("apply_on_links", "apply_at_nodes", "apply_once_per_photon"):
        if key in data:
            kwargs[key] = _as_bool(data[key], f"noise.{key}")
    if "collective_rotation" in data:
        kwargs["cr"] = _cr_from_dict(data["collective_rotation"])
    try:
        return NoiseConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def config_from_dict(data: Mapping[str, Any]) -> ExperimentConfig:
    """Build an :class:`ExperimentConfig` from plain nested dicts."""
    if not isinstance(data, Mapping):
        raise ConfigError("configuration root must be a mapping")
    _reject_unknown(data, _TOP_KEYS, "")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"schema_version {version!r} unsupported "
                          f"(expected {SCHEMA_VERSION})")
    if "topology" not in data:
        raise ConfigError("missing required section 'topology'")

    kwargs: dict[str, Any] = {
        "topology": _topology_from_dict(data["topology"]),
        "noise": _noise_from_dict(data.get("noise", {})),
    }
    for key in ("bits", "burst_size", "trials", "seed"):
        if key in data:
            kwargs[key] = _as_int(data[key], key)
    if "attenuation_single_pass" in data:
        kwargs["attenuation_single_pass"] = _as_bool(
            data["attenuation_single_pass"], "attenuation_single_pass")
    if data.get("burst_sweep") is not None:
        raw = data["burst_sweep"]
        if not isinstance(raw, (list, tuple)):
            raise ConfigError("burst_sweep must be a list of integers")
        kwargs["burst_sweep"] = tuple(_as_int(v, "burst_sweep") for v in raw)
    if data.get("distance_sweep") is not None:
        raw = data["distance_sweep"]
        if not isinstance(raw, (list, tuple)):
            raise ConfigError("distance_sweep must be a list of numbers")
        kwargs["distance_sweep"] = tuple(_as_float(v, "distance_sweep") for v in raw)
    try:
        return ExperimentConfig(**kwargs)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | FsPath) -> ExperimentConfig:
    """Parse a YAML experiment file; missing files raise the usual OSError."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = yaml.safe_load(handle)
        except yaml.YAMLError as exc:
            raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    if data is None:
        raise ConfigError(f"empty configuration file: {path}")
    return config_from_dict(data)


def config_to_dict(cfg: ExperimentConfig) -> dict[str, Any]:
    """Plain-dict echo of a config (inverse of :func:`config_from_dict`)."""
    out: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "bits": cfg.bits,
        "burst_size": cfg.burst_size,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "attenuation_single_pass": cfg.attenuation_single_pass,
        "topology": asdict(cfg.topology),
        "noise": {
            "p_ad": cfg.noise.p_ad,
            "p_dephase": cfg.noise.p_dephase,
            "p_bitflip": cfg.noise.p_bitflip,
            "p_bitphase": cfg.noise.p_bitphase,
            "alpha_db_per_km": cfg.noise.alpha_db_per_km,
            "apply_on_links": cfg.noise.apply_on_links,
            "apply_at_nodes": cfg.noise.apply_at_nodes,
            "apply_once_per_photon": cfg.noise.apply_once_per_photon,
            "collective_rotation": {
                "mode": cfg.noise.cr.mode,
                "theta": cfg.noise.cr.theta,
                "theta_max": cfg.noise.cr.theta_max,
            },
        },
    }
    if cfg.burst_sweep is not None:
        out["burst_sweep"] = list(cfg.burst_sweep)
    if cfg.distance_sweep is not None:
        out["distance_sweep"] = list(cfg.distance_sweep)
    return out
