"""Request and response schemas of the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from ..scenario import NetworkSpec, Scenario


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class HealthResponse(StrictModel):
    status: str
    version: str


class PresetSummary(StrictModel):
    name: str
    kind: str
    notes: str


class PresetListResponse(StrictModel):
    presets: list[PresetSummary]


class GenerateNetworkRequest(StrictModel):
    network: NetworkSpec = NetworkSpec()
    seed: int = Field(default=1729, ge=0)


class GenerateNetworkResponse(StrictModel):
    nodes: int
    physical_edges: int
    cyber_edges: int
    simplices: int
    mean_degree_physical: float
    mean_degree_cyber: float
    mean_simplex_membership: float
    physical_edge_list: str
    cyber_edge_list: str
    simplex_list: str


class SolveRequest(StrictModel):
    """One-point solve: the scenario's parameters with beta overridden."""

    scenario: Scenario
    beta: float | None = None
    jobs: int | None = Field(default=None, ge=1)


class MmcaResponse(StrictModel):
    rho_a: float
    rho_i: float
    iterations: int
    converged: bool


class McResponse(StrictModel):
    rho_a_mean: float
    rho_i_mean: float
    rho_a_sd: float
    rho_i_sd: float
    runs_used: int
    mean_steps: float


class ThresholdResponse(StrictModel):
    beta_c: float | None  # None encodes an unbounded threshold (no outbreak possible)
    lambda_max: float
    power_iters: int
    converged: bool
    note: str = ""


class SweepRequest(StrictModel):
    scenario: Scenario
    jobs: int | None = Field(default=None, ge=1)


class SweepResponse(StrictModel):
    files: dict[str, str]  # file name -> CSV text
    manifest: dict


class ReproduceRequest(StrictModel):
    preset: str
    seed: int | None = Field(default=None, ge=0)
    n_runs: int | None = Field(default=None, ge=1)
    grid_num: int | None = Field(default=None, ge=2)
    jobs: int | None = Field(default=None, ge=1)


class CompareRequest(StrictModel):
    csv: str
    onset_eps: float = 0.005
    beta_c_theory: float | None = None


class CompareResponse(StrictModel):
    mad_rho_i: float
    mad_rho_a: float
    beta_onset_mc: float | None
    beta_c_theory: float | None
