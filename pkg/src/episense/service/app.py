"""HTTP service exposing the simulation engine.

Endpoints run synchronously; sweeps over full grids can take minutes, so
deployments should size worker timeouts accordingly.  Everything is
deterministic in (scenario, seed) and independent of the `jobs` worker count.
"""

from __future__ import annotations

import dataclasses
import math

from fastapi import FastAPI, HTTPException

from .. import __version__, mc, mmca, threshold
from ..experiments import (
    build_manifest,
    build_network,
    compare_solvers,
    load_preset,
    preset_names,
    result_files,
    run_scenario,
    SweepResult,
)
from ..scenario import Scenario, override_scenario
from ..seeds import DOMAIN_POINT, derive_seed
from . import models

app = FastAPI(
    title="episense",
    version=__version__,
    description="coupled awareness-epidemic dynamics on two-layer networks",
)


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


def _single_point(req: models.SolveRequest) -> tuple:
    """Network, params and run config for a one-point solve."""
    scn = req.scenario
    if req.beta is not None:
        scn = override_scenario(scn, beta=req.beta)
    params = scn.params.to_model()
    beta = scn.sweep[0].resolve()[0]
    params = dataclasses.replace(params, beta_u=float(beta))
    net = build_network(scn.network, scn.seed)
    run_cfg = scn.run.to_config(derive_seed(scn.seed, DOMAIN_POINT, 0))
    return net, params, run_cfg, scn


@app.get("/health", response_model=models.HealthResponse)
def health() -> models.HealthResponse:
    return models.HealthResponse(status="ok", version=__version__)


@app.get("/presets", response_model=models.PresetListResponse)
def presets() -> models.PresetListResponse:
    out = []
    for name in preset_names():
        scn = load_preset(name)
        out.append(models.PresetSummary(name=name, kind=scn.kind, notes=scn.notes))
    return models.PresetListResponse(presets=out)


@app.get("/presets/{name}", response_model=Scenario)
def preset_detail(name: str) -> Scenario:
    try:
        return load_preset(name)
    except FileNotFoundError as exc:
        raise HTTPException(status_code=404, detail=str(exc))


@app.post("/network/generate", response_model=models.GenerateNetworkResponse)
def generate_network(req: models.GenerateNetworkRequest) -> models.GenerateNetworkResponse:
    from .. import network as netmod

    try:
        net = build_network(req.network, req.seed)
    except (ValueError, FileNotFoundError) as exc:
        raise _bad_request(exc)
    cyber, phys = net.cyber, net.physical
    return models.GenerateNetworkResponse(
        nodes=net.n,
        physical_edges=phys.edge_count,
        cyber_edges=int(cyber.adj.nnz // 2),
        simplices=cyber.simplex_count,
        mean_degree_physical=float(phys.degree.mean()),
        mean_degree_cyber=float(cyber.degree.mean()),
        mean_simplex_membership=float(cyber.membership_count().mean()),
        physical_edge_list=netmod.edge_list_text(phys),
        cyber_edge_list=netmod.edge_list_text(cyber),
        simplex_list=netmod.simplices_text(cyber),
    )


@app.post("/solve/mmca", response_model=models.MmcaResponse)
def solve_mmca(req: models.SolveRequest) -> models.MmcaResponse:
    try:
        net, params, _, scn = _single_point(req)
    except (ValueError, FileNotFoundError) as exc:
        raise _bad_request(exc)
    _, dens = mmca.solve(net, params, frac_infected=scn.run.frac_infected)
    return models.MmcaResponse(
        rho_a=dens.rho_a, rho_i=dens.rho_i,
        iterations=dens.iterations, converged=dens.converged,
    )


@app.post("/solve/mc", response_model=models.McResponse)
def solve_mc(req: models.SolveRequest) -> models.McResponse:
    try:
        net, params, run_cfg, _ = _single_point(req)
    except (ValueError, FileNotFoundError) as exc:
        raise _bad_request(exc)
    res = mc.run_ensemble(net, params, run_cfg)
    return models.McResponse(
        rho_a_mean=res.rho_a_mean, rho_i_mean=res.rho_i_mean,
        rho_a_sd=res.rho_a_sd, rho_i_sd=res.rho_i_sd,
        runs_used=res.runs_used, mean_steps=float(res.steps.mean()),
    )


@app.post("/solve/threshold", response_model=models.ThresholdResponse)
def solve_threshold(req: models.SolveRequest) -> models.ThresholdResponse:
    try:
        net, params, _, _ = _single_point(req)
    except (ValueError, FileNotFoundError) as exc:
        raise _bad_request(exc)
    res = threshold.epidemic_threshold(net, params)
    return models.ThresholdResponse(
        beta_c=None if math.isinf(res.beta_c) else res.beta_c,
        lambda_max=res.lambda_max,
        power_iters=res.power_iters,
        converged=res.converged,
        note=res.note,
    )


@app.post("/sweep", response_model=models.SweepResponse)
def sweep(req: models.SweepRequest) -> models.SweepResponse:
    try:
        result = run_scenario(req.scenario, jobs=req.jobs)
    except (ValueError, FileNotFoundError) as exc:
        raise _bad_request(exc)
    files = result_files(result)
    manifest = build_manifest(req.scenario, list(files), jobs=req.jobs)
    if isinstance(result, SweepResult) and result.beta_c_theory is not None:
        manifest["beta_c_theory"] = result.beta_c_theory
    if hasattr(result, "beta_c") and result.beta_c:
        manifest["beta_c_theory_by_channel"] = {
            k: (None if math.isinf(v) else v) for k, v in result.beta_c.items()
        }
    return models.SweepResponse(files=files, manifest=manifest)


@app.post("/reproduce", response_model=models.SweepResponse)
def reproduce(req: models.ReproduceRequest) -> models.SweepResponse:
    try:
        scn = load_preset(req.preset)
    except FileNotFoundError as exc:
        raise HTTPException(status_code=404, detail=str(exc))
    scn = override_scenario(scn, seed=req.seed, n_runs=req.n_runs, grid_num=req.grid_num)
    return sweep(models.SweepRequest(scenario=scn, jobs=req.jobs))


@app.post("/compare", response_model=models.CompareResponse)
def compare(req: models.CompareRequest) -> models.CompareResponse:
    try:
        sweep_result = SweepResult.from_csv_text(req.csv)
        stats = compare_solvers(sweep_result, onset_eps=req.onset_eps)
    except ValueError as exc:
        raise _bad_request(exc)
    beta_c = req.beta_c_theory if req.beta_c_theory is not None else stats.beta_c_theory
    return models.CompareResponse(
        mad_rho_i=stats.mad_rho_i,
        mad_rho_a=stats.mad_rho_a,
        beta_onset_mc=stats.beta_onset_mc,
        beta_c_theory=beta_c,
    )
