"""Tests for the HTTP service endpoints."""

import math

import pytest
from fastapi.testclient import TestClient

from threestage.harness import config_from_dict, run_experiment
from threestage.service import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


TINY = {
    "topology": {"kind": "direct", "link_km": 20.0},
    "noise": {"p_bitflip": 0.3},
    "bits": 4,
    "burst_size": 9,
    "trials": 2,
    "seed": 5,
}


class TestHealth:
    def test_health(self, client):
        body = client.get("/health").json()
        assert body["status"] == "ok"
        assert "version" in body


class TestRun:
    def test_run_matches_direct_harness_call(self, client):
        response = client.post("/run", json={"config": TINY})
        assert response.status_code == 200
        body = response.json()
        direct = run_experiment(config_from_dict(TINY))
        assert len(body["records"]) == len(direct.records) == 8
        for got, want in zip(body["summary"], direct.summary):
            assert got["mean_success_qubit_pct"] == want.mean_success_qubit_pct
            assert got["topology"] == want.topology
        for got, want in zip(body["records"], direct.records):
            assert got["success_fraction"] == want.success_fraction
            assert got["decode_status"] == want.decode_status

    def test_run_meta_echoes_config(self, client):
        body = client.post("/run", json={"config": TINY}).json()
        assert body["meta"]["config"]["seed"] == 5
        assert body["meta"]["config"]["noise"]["p_bitflip"] == 0.3

    def test_semantic_config_error_is_422_naming_key(self, client):
        bad = {"topology": {"kind": "direct"}, "noise": {"p_ad": 1.5}}
        response = client.post("/run", json={"config": bad})
        assert response.status_code == 422
        assert "p_ad" in response.json()["detail"]

    def test_unknown_key_rejected(self, client):
        response = client.post(
            "/run", json={"config": {"topology": {"kind": "direct"},
                                     "frobnicate": 1}})
        assert response.status_code == 422

    def test_workers_request_equivalent(self, client):
        base = client.post("/run", json={"config": TINY, "workers": 1}).json()
        multi = client.post("/run", json={"config": TINY, "workers": 2}).json()
        assert base["records"] == multi["records"]


class TestSweeps:
    def test_burst_sweep(self, client):
        cfg = dict(TINY, burst_sweep=[3, 9])
        body = client.post("/sweep/burst", json={"config": cfg}).json()
        assert [row["burst_size"] for row in body["summary"]] == [3, 9]
        assert body["meta"]["sweep"]["kind"] == "burst"

    def test_burst_sweep_requires_list(self, client):
        response = client.post("/sweep/burst", json={"config": TINY})
        assert response.status_code == 422
        assert "burst_sweep" in response.json()["detail"]

    def test_distance_sweep(self, client):
        cfg = dict(TINY, distance_sweep=[0.0, 20.0])
        cfg["noise"] = {"alpha_db_per_km": 0.15}
        body = client.post("/sweep/distance", json={"config": cfg}).json()
        by_km = {row["link_km"]: row for row in body["summary"]}
        assert by_km[0.0]["surviving_qubit_pct"] == 100.0
        assert by_km[20.0]["surviving_qubit_pct"] < 100.0


class TestTheoryEndpoints:
    def test_cr_error(self, client):
        body = client.get("/theory/cr-error",
                          params={"theta": math.pi / 6}).json()
        assert body["error_probability"] == pytest.approx(1.0, abs=1e-12)

    def test_attenuation(self, client):
        body = client.get("/theory/attenuation",
                          params={"alpha_db_per_km": 0.15,
                                  "length_km": 20.0}).json()
        assert body["survival_probability"] == pytest.approx(10 ** -0.3,
                                                             abs=1e-12)

    def test_attenuation_negative_rejected(self, client):
        response = client.get("/theory/attenuation",
                              params={"alpha_db_per_km": -1, "length_km": 5})
        assert response.status_code == 422

    def test_commutator_e0(self, client):
        body = client.get("/theory/commutator/ad-e0",
                          params={"p": 0.36, "theta": math.pi / 2}).json()
        assert body["max_abs_entry"] == pytest.approx(0.2, abs=1e-12)
        assert body["is_zero_at_tolerance"] is False
        assert body["matrix"][0][0] == [pytest.approx(0.0, abs=1e-12)] * 2

    def test_commutator_e1_trivial_case(self, client):
        body = client.get("/theory/commutator/ad-e1",
                          params={"p": 0.0, "theta": 1.0}).json()
        assert body["is_zero_at_tolerance"] is True

    def test_unknown_commutator_404(self, client):
        response = client.get("/theory/commutator/xy",
                              params={"p": 0.1, "theta": 1.0})
        assert response.status_code == 404


class TestValidateEndpoint:
    def test_validate_passes(self, client):
        body = client.post("/validate").json()
        assert body["passed"] is True
        names = [c["name"] for c in body["checks"]]
        assert "kraus_completeness" in names
        assert all(c["passed"] for c in body["checks"])
