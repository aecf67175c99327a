"""Pydantic request/response models for the HTTP service.

The config models mirror the YAML schema one to one (docs/config.md);
``extra="forbid"`` keeps unknown keys out at the API boundary just like
the strict file loader does.
"""

from __future__ import annotations

import math
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class CollectiveRotationModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: Literal["off", "fixed", "per_trial", "per_application"] = "off"
    theta: float = 0.0
    theta_max: float = 2.0 * math.pi


class NoiseModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p_ad: float = 0.0
    p_dephase: float = 0.0
    p_bitflip: float = 0.0
    p_bitphase: float = 0.0
    alpha_db_per_km: float = 0.0
    apply_on_links: bool = True
    apply_at_nodes: bool = True
    apply_once_per_photon: bool = False
    collective_rotation: CollectiveRotationModel = Field(
        default_factory=CollectiveRotationModel)


class TopologyModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["direct", "ring", "grid", "torus"]
    n: int = 8
    rows: int = 4
    cols: int = 4
    link_km: float = 20.0


class ExperimentConfigModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: int = 1
    topology: TopologyModel
    noise: NoiseModel = Field(default_factory=NoiseModel)
    bits: int = 96
    burst_size: int = 100
    burst_sweep: Optional[list[int]] = None
    distance_sweep: Optional[list[float]] = None
    trials: int = 10
    seed: int = 0
    attenuation_single_pass: bool = False


class RunRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: ExperimentConfigModel
    workers: int = Field(default=1, ge=1, le=64)


class SummaryRowModel(BaseModel):
    topology: str
    burst_size: int
    link_km: float
    mean_success_qubit_pct: float
    mean_bit_decode_pct: float
    surviving_qubit_pct: float
    trials: int
    seed: int


class BurstRecordModel(BaseModel):
    trial: int
    topology: str
    burst_size: int
    link_km: float
    bit_index: int
    sent: int
    decoded: Optional[int]
    decode_status: str
    received_count: int
    success_fraction: float


class RunResponse(BaseModel):
    meta: dict[str, Any]
    summary: list[SummaryRowModel]
    records: list[BurstRecordModel]


class CrErrorResponse(BaseModel):
    theta: float
    error_probability: float


class AttenuationResponse(BaseModel):
    alpha_db_per_km: float
    length_km: float
    survival_probability: float


class CommutatorResponse(BaseModel):
    p: float
    theta: float
    matrix: list[list[list[float]]]  # 2x2 of [re, im]
    max_abs_entry: float
    is_zero_at_tolerance: bool


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str


class ValidateResponse(BaseModel):
    passed: bool
    checks: list[CheckModel]
