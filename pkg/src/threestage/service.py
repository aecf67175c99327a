"""HTTP service wrapping the simulator.

Endpoints:
    GET  /health                       liveness and version
    POST /run                          one experiment, summary plus records
    POST /sweep/burst                  burst-size sweep
    POST /sweep/distance               link-length sweep
    GET  /theory/cr-error              collective-rotation error law
    GET  /theory/attenuation           fiber survival probability
    GET  /theory/commutator/{which}    damping-operator commutator report
    POST /validate                     run the oracle-equivalence suite

The service is stateless: every run returns its full result in the
response body and writes nothing server-side. Clients (the bundled CLI
included) materialize CSV/JSON/SVG artifacts from the returned rows.
"""

from __future__ import annotations

from dataclasses import asdict
from typing import Callable

from fastapi import FastAPI, HTTPException

from . import __version__
from .harness import (
    ConfigError,
    ExperimentResult,
    config_from_dict,
    run_experiment,
    sweep_burst,
    sweep_distance,
    validation_suite,
)
from .qcore import ComplexMat2
from .channels import attenuation_survival
from .schemas import (
    AttenuationResponse,
    CheckModel,
    CommutatorResponse,
    CrErrorResponse,
    RunRequest,
    RunResponse,
    ValidateResponse,
)
from .theory import CommutatorReport, ad_commutator_e0, ad_commutator_e1, cr_error_probability

app = FastAPI(
    title="threestage",
    version=__version__,
    description="Three-stage multi-photon QKD protocol simulator over noisy "
                "network topologies",
)


def _result_payload(result: ExperimentResult) -> dict:
    return {
        "meta": result.meta,
        "summary": [asdict(row) for row in result.summary],
        "records": [asdict(rec) for rec in result.records],
    }


def _execute(request: RunRequest,
             runner: Callable[..., ExperimentResult]) -> dict:
    try:
        cfg = config_from_dict(request.config.model_dump())
        result = runner(cfg, workers=request.workers)
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return _result_payload(result)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/run", response_model=RunResponse)
def run(request: RunRequest) -> dict:
    return _execute(request, run_experiment)


@app.post("/sweep/burst", response_model=RunResponse)
def burst_sweep_endpoint(request: RunRequest) -> dict:
    return _execute(request, sweep_burst)


@app.post("/sweep/distance", response_model=RunResponse)
def distance_sweep_endpoint(request: RunRequest) -> dict:
    return _execute(request, sweep_distance)


@app.get("/theory/cr-error", response_model=CrErrorResponse)
def theory_cr_error(theta: float) -> dict:
    return {"theta": theta, "error_probability": cr_error_probability(theta)}


@app.get("/theory/attenuation", response_model=AttenuationResponse)
def theory_attenuation(alpha_db_per_km: float, length_km: float) -> dict:
    try:
        survival = attenuation_survival(alpha_db_per_km, length_km)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return {
        "alpha_db_per_km": alpha_db_per_km,
        "length_km": length_km,
        "survival_probability": survival,
    }


def _matrix_json(matrix: ComplexMat2) -> list[list[list[float]]]:
    def pair(z: complex) -> list[float]:
        return [z.real, z.imag]
    return [[pair(matrix.a11), pair(matrix.a12)],
            [pair(matrix.a21), pair(matrix.a22)]]


def _commutator_payload(p: float, theta: float,
                        report: CommutatorReport) -> dict:
    return {
        "p": p,
        "theta": theta,
        "matrix": _matrix_json(report.matrix),
        "max_abs_entry": report.max_abs_entry,
        "is_zero_at_tolerance": report.is_zero_at_tolerance,
    }


@app.get("/theory/commutator/{which}", response_model=CommutatorResponse)
def theory_commutator(which: str, p: float, theta: float) -> dict:
    try:
        if which == "ad-e0":
            return _commutator_payload(p, theta, ad_commutator_e0(p, theta))
        if which == "ad-e1":
            return _commutator_payload(p, theta, ad_commutator_e1(p, theta))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    raise HTTPException(status_code=404,
                        detail=f"unknown commutator {which!r}; "
                               f"use 'ad-e0' or 'ad-e1'")


@app.post("/validate", response_model=ValidateResponse)
def validate() -> dict:
    checks = [CheckModel(name=c.name, passed=c.passed, detail=c.detail)
              for c in validation_suite()]
    return {"passed": all(c.passed for c in checks), "checks": checks}
