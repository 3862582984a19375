import warnings

import numpy as np
import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore", DeprecationWarning)
    from starlette.testclient import TestClient

from episense.experiments import beta_sweep
from episense.scenario import Scenario
from episense.service.app import app

from test_experiments import tiny_scenario


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def scenario_doc(**overrides):
    return tiny_scenario(**overrides).model_dump(by_alias=True, mode="json")


class TestBasics:
    def test_health(self, client):
        data = client.get("/health").json()
        assert data["status"] == "ok"

    def test_presets_listing(self, client):
        names = [p["name"] for p in client.get("/presets").json()["presets"]]
        assert "fig4" in names and "fig9" in names

    def test_preset_detail(self, client):
        data = client.get("/presets/fig4").json()
        assert data["name"] == "fig4"
        assert Scenario.model_validate(data).grid().shape == (51, 1)

    def test_preset_404(self, client):
        assert client.get("/presets/fig99").status_code == 404


class TestGenerate:
    def test_counts_and_serialization(self, client):
        req = {"network": {"kind": "synthetic", "n": 80, "k1": 6.0, "k2": 1.0,
                           "ws_k": 4, "ws_p": 0.3}, "seed": 3}
        data = client.post("/network/generate", json=req).json()
        assert data["nodes"] == 80
        assert data["physical_edges"] == 80 * 4 // 2
        lines = [l for l in data["physical_edge_list"].splitlines() if l]
        assert len(lines) == data["physical_edges"]
        simplex_lines = [l for l in data["simplex_list"].splitlines() if l]
        assert len(simplex_lines) == data["simplices"]

    def test_invalid_parameters_400(self, client):
        req = {"network": {"kind": "synthetic", "n": 100, "k1": 4.0, "k2": 2.5}, "seed": 1}
        resp = client.post("/network/generate", json=req)
        assert resp.status_code == 400
        assert "p1" in resp.json()["detail"]

    def test_unknown_key_422(self, client):
        resp = client.post("/network/generate", json={"network": {"n": 10}, "sneed": 1})
        assert resp.status_code == 422


class TestSolvers:
    def test_threshold_ring_identity(self, client):
        doc = scenario_doc(network={"kind": "synthetic", "n": 300, "k1": 6.0,
                                    "k2": 0.0, "ws_k": 4, "ws_p": 0.0},
                           params={"lambda": 0.0, "lam_star": 0.0, "mu": 0.4,
                                   "enable_sensing": False})
        data = client.post("/solve/threshold", json={"scenario": doc}).json()
        assert data["beta_c"] == pytest.approx(0.1, abs=1e-6)
        assert data["lambda_max"] == pytest.approx(4.0, abs=1e-6)

    def test_mmca_beta_override(self, client):
        doc = scenario_doc()
        lo = client.post("/solve/mmca", json={"scenario": doc, "beta": 0.0}).json()
        hi = client.post("/solve/mmca", json={"scenario": doc, "beta": 0.9}).json()
        assert lo["rho_i"] < 1e-6
        assert hi["rho_i"] > 0.3
        assert hi["converged"]

    def test_mc_matches_direct_call(self, client):
        doc = scenario_doc(sweep=[{"param": "beta", "values": [0.6]}])
        data = client.post("/solve/mc", json={"scenario": doc}).json()
        direct = beta_sweep(tiny_scenario(sweep=[{"param": "beta", "values": [0.6]}]), jobs=1)
        assert data["rho_i_mean"] == pytest.approx(direct.rho_i_mc[0], abs=1e-12)
        assert data["runs_used"] == 6


class TestSweepEndpoint:
    def test_csv_matches_direct_run(self, client):
        doc = scenario_doc()
        data = client.post("/sweep", json={"scenario": doc, "jobs": 1}).json()
        direct = beta_sweep(tiny_scenario(), jobs=1)
        assert data["files"]["tiny.csv"] == direct.to_csv_text()
        assert data["manifest"]["seed"] == 5

    def test_ablation_files(self, client):
        doc = scenario_doc(kind="ablation", solvers=["mc"], threshold=True,
                           sweep=[{"param": "beta", "values": [0.5]}])
        data = client.post("/sweep", json={"scenario": doc, "jobs": 1}).json()
        assert len(data["files"]) == 5
        assert set(data["manifest"]["beta_c_theory_by_channel"]) == {
            "integrated", "pwi", "simplex", "phy", "none"}

    def test_bad_scenario_422(self, client):
        resp = client.post("/sweep", json={"scenario": {"name": "x"}, "jobs": 1})
        assert resp.status_code == 422


class TestReproduce:
    def test_reduced_fig4(self, client):
        req = {"preset": "fig4", "n_runs": 2, "grid_num": 3, "jobs": 2}
        data = client.post("/reproduce", json=req).json()
        csv = data["files"]["fig4.csv"]
        lines = csv.splitlines()
        assert lines[0].startswith("beta,rho_i_mc")
        assert len(lines) == 4
        assert data["manifest"]["scenario"]["run"]["n_runs"] == 2

    def test_unknown_preset_404(self, client):
        assert client.post("/reproduce", json={"preset": "fig0"}).status_code == 404


class TestCompareEndpoint:
    def test_roundtrip(self, client):
        sweep = beta_sweep(tiny_scenario(), jobs=1)
        data = client.post("/compare", json={"csv": sweep.to_csv_text()}).json()
        expect_i = float(np.abs(sweep.rho_i_mc - sweep.rho_i_mmca).mean())
        # CSV carries 6 significant digits
        assert data["mad_rho_i"] == pytest.approx(expect_i, abs=1e-5)

    def test_mangled_csv_400(self, client):
        resp = client.post("/compare", json={"csv": "beta,bogus\n0,1\n"})
        assert resp.status_code == 400
