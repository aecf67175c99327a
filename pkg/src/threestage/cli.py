"""Command-line client for the simulator service.

All experiment and theory commands go through the HTTP API: against a
remote instance when ``--server URL`` is given, otherwise against the
FastAPI app mounted in-process, so no running server is required. The
client writes the returned rows as CSV/JSON (plus an SVG chart for
sweeps) into the output directory.

Exit codes: 0 success, 2 configuration or usage error, 1 runtime failure.
The output directory resolves as --out-dir, else $THREESTAGE_OUT_DIR,
else ./results.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence

import httpx

from .harness import (
    BurstRecord,
    ConfigError,
    ExperimentResult,
    SummaryRow,
    config_to_dict,
    emit_chart,
    emit_csv,
    emit_json,
    load_config,
)

OUT_DIR_ENV = "THREESTAGE_OUT_DIR"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threestage",
        description="Three-stage multi-photon QKD protocol simulator")
    parser.add_argument("--server", metavar="URL", default=None,
                        help="base URL of a running service; default runs "
                             "the service in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    def experiment_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("config", help="YAML experiment configuration")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--trials", type=int, default=None,
                       help="override the config trial count")
        p.add_argument("--workers", type=int, default=1,
                       help="parallel worker processes (default 1)")
        p.add_argument("--out-dir", default=None,
                       help=f"output directory (default ${OUT_DIR_ENV} "
                            f"or ./results)")

    experiment_args(sub.add_parser("run", help="run one experiment"))
    experiment_args(sub.add_parser("sweep-burst", help="sweep burst sizes"))
    experiment_args(sub.add_parser("sweep-distance", help="sweep link lengths"))

    theory = sub.add_parser("theory", help="print closed-form oracle values")
    theory_sub = theory.add_subparsers(dest="oracle", required=True)
    cr = theory_sub.add_parser("cr-error",
                               help="collective-rotation error probability")
    cr.add_argument("theta", type=float)
    att = theory_sub.add_parser("attenuation", help="fiber survival probability")
    att.add_argument("alpha", type=float)
    att.add_argument("length", type=float)
    for which in ("commutator-e0", "commutator-e1"):
        com = theory_sub.add_parser(
            which, help=f"amplitude-damping {which[-2:].upper()} commutator")
        com.add_argument("p", type=float)
        com.add_argument("theta", type=float)

    sub.add_parser("validate", help="run the oracle-equivalence suite")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _make_client(server: str | None) -> httpx.Client:
    if server is not None:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings
    with warnings.catch_warnings():
        # transitional starlette notice about the future httpx2 package
        warnings.filterwarnings("ignore", message=".*httpx2.*")
        from fastapi.testclient import TestClient

    from .service import app
    return TestClient(app)


def _check_response(response: httpx.Response) -> dict:
    if response.status_code == 200:
        return response.json()
    try:
        detail = response.json().get("detail", response.text)
    except ValueError:
        detail = response.text
    if response.status_code in (400, 404, 422):
        raise ConfigError(f"{detail}")
    raise RuntimeError(f"service error {response.status_code}: {detail}")


def _out_dir(arg: str | None) -> Path:
    if arg is not None:
        return Path(arg)
    env = os.environ.get(OUT_DIR_ENV)
    if env:
        return Path(env)
    return Path("results")


def _result_from_payload(payload: dict) -> ExperimentResult:
    summary = tuple(SummaryRow(**row) for row in payload["summary"])
    records = tuple(BurstRecord(**rec) for rec in payload["records"])
    return ExperimentResult(summary, records, payload["meta"])


_ENDPOINTS = {
    "run": "/run",
    "sweep-burst": "/sweep/burst",
    "sweep-distance": "/sweep/distance",
}

_CHART_FIELDS = {
    "sweep-burst": ("burst_size", "mean_success_qubit_pct"),
    "sweep-distance": ("link_km", "surviving_qubit_pct"),
}


def _run_experiment_command(args: argparse.Namespace,
                            client: httpx.Client) -> int:
    cfg = load_config(args.config)
    if args.seed is not None or args.trials is not None:
        from dataclasses import replace
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.trials is not None:
            overrides["trials"] = args.trials
        cfg = replace(cfg, **overrides)

    payload = {"config": config_to_dict(cfg), "workers": args.workers}
    response = client.post(_ENDPOINTS[args.command], json=payload)
    result = _result_from_payload(_check_response(response))

    out = _out_dir(args.out_dir)
    prefix = args.command.replace("-", "_")
    records_path, summary_path = emit_csv(result.summary, result.records,
                                          out, prefix=prefix)
    json_path = emit_json(result, out / f"{prefix}.json")
    written = [records_path, summary_path, json_path]
    if args.command in _CHART_FIELDS:
        x_field, y_field = _CHART_FIELDS[args.command]
        written.append(emit_chart(result.summary, out / f"{prefix}.svg",
                                  x_field=x_field, y_field=y_field))

    for row in result.summary:
        print(f"{row.topology}  burst={row.burst_size}  link_km={row.link_km:g}  "
              f"qubit_success={row.mean_success_qubit_pct:.2f}%  "
              f"decode={row.mean_bit_decode_pct:.2f}%  "
              f"surviving={row.surviving_qubit_pct:.2f}%")
    for path in written:
        print(f"wrote {path}")
    return 0


def _run_theory_command(args: argparse.Namespace, client: httpx.Client) -> int:
    if args.oracle == "cr-error":
        payload = _check_response(client.get(
            "/theory/cr-error", params={"theta": args.theta}))
        print(repr(payload["error_probability"]))
    elif args.oracle == "attenuation":
        payload = _check_response(client.get(
            "/theory/attenuation",
            params={"alpha_db_per_km": args.alpha, "length_km": args.length}))
        print(repr(payload["survival_probability"]))
    else:
        which = "ad-e0" if args.oracle.endswith("e0") else "ad-e1"
        payload = _check_response(client.get(
            f"/theory/commutator/{which}",
            params={"p": args.p, "theta": args.theta}))
        for row in payload["matrix"]:
            print("  ".join(f"{re:+.6e}{im:+.6e}j" for re, im in row))
        print(f"max_abs_entry={payload['max_abs_entry']!r} "
              f"zero_at_1e-12={payload['is_zero_at_tolerance']}")
    return 0


def _run_validate_command(client: httpx.Client) -> int:
    payload = _check_response(client.post("/validate"))
    for check in payload["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"[{status}] {check['name']}: {check['detail']}")
    return 0 if payload["passed"] else 1


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn
        uvicorn.run("threestage.service:app", host=args.host, port=args.port)
        return 0

    try:
        with _make_client(args.server) as client:
            if args.command in _ENDPOINTS:
                return _run_experiment_command(args, client)
            if args.command == "theory":
                return _run_theory_command(args, client)
            return _run_validate_command(client)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (httpx.HTTPError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
