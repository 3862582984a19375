"""Scenario configuration: a JSON-serializable description of one experiment
(network spec, model parameters, sweep axes, ensemble settings).

These models double as the request schema of the HTTP service; unknown keys
are rejected everywhere.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .kernels import ModelParams
from .mc import RunConfig
from .seeds import DEFAULT_SEED

# scenario axis name -> ModelParams field
AXIS_PARAMS = {
    "beta": "beta_u",
    "lambda": "lam",
    "lambda_star": "lam_star",
    "theta": "theta",
    "alpha": "alpha",
    "delta": "delta",
    "mu": "mu",
    "gamma": "gamma",
}

HEATMAP_SECOND_AXES = ("lambda", "lambda_star", "theta")


class NetworkSpec(BaseModel):
    """Which two-layer network to build.

    `synthetic`: Watts-Strogatz physical layer (ws_k, ws_p) plus a simplicial
    ER cyber layer calibrated to mean degree k1 and mean simplex membership
    k2.  `edge_list`: physical layer read from `path`; the cyber layer either
    mirrors the physical adjacency plus k2-calibrated simplices, or is an
    independent simplicial ER graph.
    """

    model_config = ConfigDict(extra="forbid")

    kind: Literal["synthetic", "edge_list"] = "synthetic"
    n: int = 1000
    k1: float = 10.0
    k2: float = 2.0
    ws_k: int = 4
    ws_p: float = 0.5
    path: str | None = None
    cyber: Literal["mirror", "er"] = "mirror"

    @model_validator(mode="after")
    def _check(self):
        if self.kind == "edge_list" and not self.path:
            raise ValueError("edge_list network needs a path")
        return self


class ParamsSpec(BaseModel):
    """JSON mirror of ModelParams ('lambda' is accepted for the pairwise rate)."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    lam: float = Field(0.1, alias="lambda")
    lam_star: float = 0.1
    delta: float = 0.8
    beta_u: float = 0.2
    gamma: float = 0.0
    mu: float = 0.4
    alpha: float = 10.0
    theta: float = 0.8
    enable_pairwise: bool = True
    enable_simplex: bool = True
    enable_sensing: bool = True
    sensing_requires_infected: bool = False

    def to_model(self) -> ModelParams:
        return ModelParams(**self.model_dump(by_alias=False))


class RunSpec(BaseModel):
    """Ensemble and stopping settings (seed lives on the scenario)."""

    model_config = ConfigDict(extra="forbid")

    n_runs: int = 100
    burn_in: int = 500
    window: int = 100
    max_steps: int = 5000
    stop_tol: float = 1e-3
    frac_infected: float = 0.01
    awareness_timing: Literal["phase_a", "time_t"] = "phase_a"

    def to_config(self, seed: int) -> RunConfig:
        return RunConfig(seed=seed, **self.model_dump())


class AxisSpec(BaseModel):
    """One sweep axis: either an explicit value list or a linspace."""

    model_config = ConfigDict(extra="forbid")

    param: str
    values: list[float] | None = None
    start: float | None = None
    stop: float | None = None
    num: int | None = None

    @model_validator(mode="after")
    def _check(self):
        if self.param not in AXIS_PARAMS:
            raise ValueError(
                f"unknown sweep parameter {self.param!r}; expected one of {sorted(AXIS_PARAMS)}"
            )
        listed = self.values is not None
        ranged = None not in (self.start, self.stop, self.num)
        if listed == ranged:
            raise ValueError("axis needs either `values` or `start`/`stop`/`num`")
        if listed and len(self.values) == 0:
            raise ValueError("axis value list is empty")
        if ranged and self.num < 1:
            raise ValueError("axis needs num >= 1")
        return self

    def resolve(self) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=np.float64)
        return np.linspace(self.start, self.stop, self.num)


class Scenario(BaseModel):
    """Complete description of one reproducible experiment."""

    model_config = ConfigDict(extra="forbid")

    name: str
    kind: Literal["sweep", "heatmap", "ablation"] = "sweep"
    seed: int = DEFAULT_SEED
    network: NetworkSpec = NetworkSpec()
    params: ParamsSpec = ParamsSpec()
    sweep: list[AxisSpec]
    run: RunSpec = RunSpec()
    solvers: list[Literal["mc", "mmca"]] = ["mc"]
    threshold: bool = False
    regenerate_network: bool = False
    onset_eps: float = 0.005
    notes: str = ""

    @model_validator(mode="after")
    def _check(self):
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if not 1 <= len(self.sweep) <= 2:
            raise ValueError("need one or two sweep axes")
        if self.sweep[0].param != "beta":
            raise ValueError("the first sweep axis must be beta")
        if len(self.sweep) == 2 and self.sweep[1].param == "beta":
            raise ValueError("the second sweep axis must not be beta")
        if self.kind == "heatmap":
            if len(self.sweep) != 2:
                raise ValueError("heatmap needs exactly two sweep axes")
            if self.sweep[1].param not in HEATMAP_SECOND_AXES:
                raise ValueError(
                    f"heatmap second axis must be one of {HEATMAP_SECOND_AXES}"
                )
        if "mc" not in self.solvers:
            raise ValueError("the mc solver is required (CSV contract)")
        return self

    def axis_names(self) -> list[str]:
        return [ax.param for ax in self.sweep]

    def grid(self) -> np.ndarray:
        """All grid points as an (P, n_axes) array; the first axis (beta)
        varies fastest, so each block of the second axis is one beta curve."""
        first = self.sweep[0].resolve()
        if len(self.sweep) == 1:
            return first[:, None]
        second = self.sweep[1].resolve()
        b = np.tile(first, second.size)
        s = np.repeat(second, first.size)
        return np.stack([b, s], axis=1)


def override_scenario(
    scenario: Scenario,
    *,
    seed: int | None = None,
    n_runs: int | None = None,
    grid_num: int | None = None,
    beta: float | None = None,
) -> Scenario:
    """Copy a scenario with common knobs replaced.  `grid_num` rescales every
    linspace axis (explicit value lists are kept); `beta` collapses the beta
    axis to one point."""
    data = json.loads(scenario.model_dump_json(by_alias=True))
    if seed is not None:
        data["seed"] = seed
    if n_runs is not None:
        data["run"]["n_runs"] = n_runs
    if grid_num is not None:
        for axis in data["sweep"]:
            if axis.get("num") is not None:
                axis["num"] = grid_num
    if beta is not None:
        data["sweep"][0] = {"param": "beta", "values": [beta]}
        if data["kind"] == "heatmap":
            data["kind"] = "sweep"
    return Scenario.model_validate(data)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"scenario file not found: {path}")
    with path.open() as fh:
        data = json.load(fh)
    return Scenario.model_validate(data)


def dump_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario.model_dump(by_alias=True), indent=2) + "\n"
