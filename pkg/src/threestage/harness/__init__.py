"""Experiment orchestration: config ingestion, seeded Monte Carlo sweeps,
aggregation, result emission, presets, and the oracle validation suite.
"""

from .checks import CheckResult, validation_suite
from .config import (
    SCHEMA_VERSION,
    ConfigError,
    ExperimentConfig,
    config_from_dict,
    config_to_dict,
    load_config,
)
from .emit import (
    RECORD_COLUMNS,
    SUMMARY_COLUMNS,
    ChartDataError,
    emit_chart,
    emit_csv,
    emit_json,
    load_records_csv,
)
from .runner import (
    BurstRecord,
    ExperimentResult,
    SummaryRow,
    run_experiment,
    summarize_records,
    sweep_burst,
    sweep_distance,
)
from . import presets

__all__ = [
    "CheckResult", "validation_suite",
    "SCHEMA_VERSION", "ConfigError", "ExperimentConfig",
    "config_from_dict", "config_to_dict", "load_config",
    "RECORD_COLUMNS", "SUMMARY_COLUMNS", "ChartDataError",
    "emit_chart", "emit_csv", "emit_json", "load_records_csv",
    "BurstRecord", "ExperimentResult", "SummaryRow",
    "run_experiment", "summarize_records", "sweep_burst", "sweep_distance",
    "presets",
]
