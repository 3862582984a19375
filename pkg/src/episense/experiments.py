"""Sweep machinery: run the solvers over parameter grids, collect density
curves and heatmaps, compare MMCA against MC, and emit CSV results.

Grid points are independent jobs scheduled across a process pool; every row is
keyed by its coordinates, and all randomness derives from the scenario seed,
so results are identical for any worker count.

CSV contract (UTF-8, 6 significant digits):
    beta[,<axis2>],rho_i_mc,rho_i_sd,rho_a_mc,rho_a_sd[,rho_i_mmca,rho_a_mmca]
where <axis2> is the second sweep parameter's name when present.  Channel
ablations write one such file per channel configuration.
"""

from __future__ import annotations

import dataclasses
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__, mc, mmca, network, threshold
from .kernels import ModelParams
from .scenario import AXIS_PARAMS, NetworkSpec, Scenario
from .seeds import DOMAIN_NETWORK, DOMAIN_POINT, derive_seed, rng_from

MC_COLUMNS = ["rho_i_mc", "rho_i_sd", "rho_a_mc", "rho_a_sd"]
MMCA_COLUMNS = ["rho_i_mmca", "rho_a_mmca"]

# channel configurations for the ablation studies:
# (label, pairwise, simplex, sensing)
ABLATION_CHANNELS = [
    ("integrated", True, True, True),
    ("pwi", True, False, False),
    ("simplex", False, True, False),
    ("phy", False, False, True),
    ("none", False, False, False),
]

POWERGRID_HINT = (
    "place an undirected edge list there (the US power grid topology is "
    "available from public network dataset collections, e.g. KONECT's "
    "'opsahl-powergrid'), or use the bundled synthetic stand-in "
    "'pkg:powergrid_standin.edges'"
)


def resolve_data_path(path: str) -> Path:
    """Resolve a scenario data path; 'pkg:<name>' refers to bundled files."""
    if path.startswith("pkg:"):
        return Path(resources.files("episense").joinpath("data", path[4:]))
    return Path(path)


def build_network(spec: NetworkSpec, seed: int) -> network.MultiplexNetwork:
    """Construct the two-layer network a scenario describes."""
    if spec.kind == "synthetic":
        phys = network.watts_strogatz(spec.n, spec.ws_k, spec.ws_p, rng_from(seed, DOMAIN_NETWORK, 0))
        cyber = network.simplicial_er(spec.n, spec.k1, spec.k2, rng_from(seed, DOMAIN_NETWORK, 1))
    else:
        path = resolve_data_path(spec.path)
        if not path.exists():
            raise FileNotFoundError(f"edge list not found: {path}; {POWERGRID_HINT}")
        phys = network.load_edge_list(path)
        if spec.cyber == "mirror":
            cyber = network.mirror_layer(phys, spec.k2, rng_from(seed, DOMAIN_NETWORK, 1))
        else:
            cyber = network.simplicial_er(phys.n, spec.k1, spec.k2, rng_from(seed, DOMAIN_NETWORK, 1))
    return network.MultiplexNetwork(cyber=cyber, physical=phys)


@dataclass
class SweepResult:
    """Grid coordinates with per-point densities from MC and optionally MMCA."""

    name: str
    axis_names: list[str]
    coords: np.ndarray  # (P, n_axes)
    rho_i_mc: np.ndarray
    rho_i_sd: np.ndarray
    rho_a_mc: np.ndarray
    rho_a_sd: np.ndarray
    rho_i_mmca: np.ndarray | None = None
    rho_a_mmca: np.ndarray | None = None
    mmca_converged: np.ndarray | None = None
    mc_runs: int = 0
    beta_c_theory: float | None = None

    @property
    def betas(self) -> np.ndarray:
        return self.coords[:, 0]

    def has_mmca(self) -> bool:
        return self.rho_i_mmca is not None

    def to_csv_text(self) -> str:
        cols = [self.axis_names[0]] + self.axis_names[1:] + list(MC_COLUMNS)
        series = [self.coords[:, i] for i in range(self.coords.shape[1])]
        series += [self.rho_i_mc, self.rho_i_sd, self.rho_a_mc, self.rho_a_sd]
        if self.has_mmca():
            cols += MMCA_COLUMNS
            series += [self.rho_i_mmca, self.rho_a_mmca]
        buf = io.StringIO()
        buf.write(",".join(cols) + "\n")
        for row in range(self.coords.shape[0]):
            buf.write(",".join(f"{s[row]:.6g}" for s in series) + "\n")
        return buf.getvalue()

    def to_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv_text(), encoding="utf-8")

    @classmethod
    def from_csv_text(cls, text: str, name: str = "") -> "SweepResult":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty CSV")
        header = lines[0].split(",")
        if header[0] != "beta":
            raise ValueError(f"first column must be beta, got {header[0]!r}")
        try:
            first_mc = header.index("rho_i_mc")
        except ValueError:
            raise ValueError("missing column rho_i_mc") from None
        axis_names = header[:first_mc]
        for extra in axis_names[1:]:
            if extra not in AXIS_PARAMS:
                raise ValueError(f"unknown axis column {extra!r}")
        expected = axis_names + MC_COLUMNS
        with_mmca = len(header) > len(expected)
        if with_mmca:
            expected += MMCA_COLUMNS
        if header != expected:
            raise ValueError(f"header {header} does not match contract {expected}")
        data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        if data.size == 0:
            raise ValueError("CSV has a header but no rows")
        if data.shape[1] != len(expected):
            raise ValueError("row width does not match header")
        k = len(axis_names)
        return cls(
            name=name,
            axis_names=axis_names,
            coords=data[:, :k],
            rho_i_mc=data[:, k],
            rho_i_sd=data[:, k + 1],
            rho_a_mc=data[:, k + 2],
            rho_a_sd=data[:, k + 3],
            rho_i_mmca=data[:, k + 4] if with_mmca else None,
            rho_a_mmca=data[:, k + 5] if with_mmca else None,
        )

    @classmethod
    def from_csv(cls, path: str | Path) -> "SweepResult":
        p = Path(path)
        return cls.from_csv_text(p.read_text(encoding="utf-8"), name=p.stem)


@dataclass
class AblationResult:
    """One density curve per channel configuration, plus theory thresholds."""

    name: str
    curves: dict[str, SweepResult]
    beta_c: dict[str, float]


@dataclass
class ComparisonStats:
    mad_rho_i: float
    mad_rho_a: float
    beta_onset_mc: float | None
    beta_c_theory: float | None


def _apply_axis(params: ModelParams, names: list[str], values: np.ndarray) -> ModelParams:
    fields = {AXIS_PARAMS[name]: float(v) for name, v in zip(names, values)}
    return dataclasses.replace(params, **fields)


def _solve_point(task):
    """Pool job: one grid point.  Returns (key, result dict)."""
    (key, net_or_spec, params, run_cfg, want_mmca, frac, mmca_tol, mmca_max_iter) = task
    if isinstance(net_or_spec, NetworkSpec):
        net = build_network(net_or_spec, run_cfg.seed)
    else:
        net = net_or_spec
    out: dict = {}
    ens = mc.run_ensemble(net, params, run_cfg)
    out["mc"] = (ens.rho_i_mean, ens.rho_i_sd, ens.rho_a_mean, ens.rho_a_sd)
    if want_mmca:
        _, dens = mmca.solve(net, params, tol=mmca_tol, max_iter=mmca_max_iter, frac_infected=frac)
        out["mmca"] = (dens.rho_i, dens.rho_a, dens.converged)
    return key, out


def _run_grid(scenario: Scenario, configs, jobs: int | None):
    """Execute all (config, point) jobs and assemble one SweepResult per
    config.  `configs` is a list of (label, ModelParams)."""
    coords = scenario.grid()
    axis_names = scenario.axis_names()
    points = coords.shape[0]
    want_mmca = "mmca" in scenario.solvers
    shared_net = None
    if not scenario.regenerate_network:
        shared_net = build_network(scenario.network, scenario.seed)

    tasks = []
    for ci, (_, base_params) in enumerate(configs):
        for p in range(points):
            params_p = _apply_axis(base_params, axis_names, coords[p])
            seed_p = derive_seed(scenario.seed, DOMAIN_POINT, ci * points + p)
            run_cfg = scenario.run.to_config(seed_p)
            net_or_spec = shared_net if shared_net is not None else scenario.network
            tasks.append(
                ((ci, p), net_or_spec, params_p, run_cfg, want_mmca,
                 scenario.run.frac_infected, 1e-6, 10_000)
            )

    results: dict[tuple[int, int], dict] = {}
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for key, out in pool.map(_solve_point, tasks, chunksize=1):
                results[key] = out
    else:
        for task in tasks:
            key, out = _solve_point(task)
            results[key] = out

    sweeps = []
    for ci, (label, _) in enumerate(configs):
        mc_block = np.array([results[(ci, p)]["mc"] for p in range(points)])
        sweep = SweepResult(
            name=f"{scenario.name}_{label}" if label else scenario.name,
            axis_names=axis_names,
            coords=coords,
            rho_i_mc=mc_block[:, 0],
            rho_i_sd=mc_block[:, 1],
            rho_a_mc=mc_block[:, 2],
            rho_a_sd=mc_block[:, 3],
            mc_runs=scenario.run.n_runs,
        )
        if want_mmca:
            mm = [results[(ci, p)]["mmca"] for p in range(points)]
            sweep.rho_i_mmca = np.array([v[0] for v in mm])
            sweep.rho_a_mmca = np.array([v[1] for v in mm])
            sweep.mmca_converged = np.array([v[2] for v in mm])
        sweeps.append(sweep)
    return sweeps, shared_net


def beta_sweep(scenario: Scenario, jobs: int | None = None) -> SweepResult:
    """Density curves over the scenario grid on one network realization
    (or per-point realizations when regenerate_network is set)."""
    sweeps, net = _run_grid(scenario, [("", scenario.params.to_model())], jobs)
    sweep = sweeps[0]
    if scenario.threshold and net is not None:
        sweep.beta_c_theory = threshold.epidemic_threshold(net, scenario.params.to_model()).beta_c
    return sweep


def heatmap_sweep(scenario: Scenario, jobs: int | None = None) -> SweepResult:
    """Two-axis MC density grid (beta plus one of lambda, lambda_star, theta)."""
    if scenario.kind != "heatmap" or len(scenario.sweep) != 2:
        raise ValueError("heatmap_sweep needs a heatmap scenario with two axes")
    return beta_sweep(scenario, jobs)


def channel_ablation(scenario: Scenario, jobs: int | None = None) -> AblationResult:
    """The five channel configurations (integrated, pairwise-only,
    simplex-only, sensing-only, none) over the scenario's beta grid."""
    base = scenario.params.to_model()
    configs = [
        (label, base.with_channels(pairwise=pw, simplex=sx, sensing=se))
        for label, pw, sx, se in ABLATION_CHANNELS
    ]
    sweeps, net = _run_grid(scenario, configs, jobs)
    curves = {label: sweep for (label, _, _, _), sweep in zip(ABLATION_CHANNELS, sweeps)}
    beta_c: dict[str, float] = {}
    if scenario.threshold:
        if net is None:
            net = build_network(scenario.network, scenario.seed)
        for (label, _, _, _), (_, params) in zip(ABLATION_CHANNELS, configs):
            beta_c[label] = threshold.epidemic_threshold(net, params).beta_c
            curves[label].beta_c_theory = beta_c[label]
    return AblationResult(name=scenario.name, curves=curves, beta_c=beta_c)


def powergrid_case(scenario: Scenario, jobs: int | None = None) -> AblationResult:
    """Channel ablation on a real topology loaded from an edge list."""
    if scenario.network.kind != "edge_list":
        raise ValueError("powergrid case needs an edge_list network")
    path = resolve_data_path(scenario.network.path)
    if not path.exists():
        raise FileNotFoundError(f"edge list not found: {path}; {POWERGRID_HINT}")
    return channel_ablation(scenario, jobs)


def onset_beta(betas: np.ndarray, rho_i: np.ndarray, eps: float = 0.005) -> float | None:
    """Smallest grid beta whose steady infection density exceeds eps."""
    hit = np.nonzero(rho_i > eps)[0]
    return float(betas[hit[0]]) if hit.size else None


def compare_solvers(sweep: SweepResult, onset_eps: float = 0.005) -> ComparisonStats:
    """Mean absolute deviation between the MMCA and MC curves, the empirical
    MC onset, and the theory threshold when the sweep carries one."""
    if not sweep.has_mmca():
        raise ValueError("sweep has no MMCA curves to compare")
    return ComparisonStats(
        mad_rho_i=float(np.abs(sweep.rho_i_mc - sweep.rho_i_mmca).mean()),
        mad_rho_a=float(np.abs(sweep.rho_a_mc - sweep.rho_a_mmca).mean()),
        beta_onset_mc=onset_beta(sweep.betas, sweep.rho_i_mc, onset_eps),
        beta_c_theory=sweep.beta_c_theory,
    )


def run_scenario(scenario: Scenario, jobs: int | None = None):
    """Dispatch on the scenario kind."""
    if scenario.kind == "ablation":
        if scenario.network.kind == "edge_list":
            return powergrid_case(scenario, jobs)
        return channel_ablation(scenario, jobs)
    if scenario.kind == "heatmap":
        return heatmap_sweep(scenario, jobs)
    return beta_sweep(scenario, jobs)


def result_files(result: SweepResult | AblationResult) -> dict[str, str]:
    """Map output file names to CSV text."""
    if isinstance(result, SweepResult):
        return {f"{result.name}.csv": result.to_csv_text()}
    return {f"{sweep.name}.csv": sweep.to_csv_text() for sweep in result.curves.values()}


def build_manifest(scenario: Scenario, outputs: list[str], jobs: int | None = None) -> dict:
    """Everything needed to reproduce the emitted rows bit-exactly."""
    return {
        "version": f"episense-{__version__}",
        "seed": scenario.seed,
        "scenario": json.loads(scenario.model_dump_json(by_alias=True)),
        "outputs": sorted(outputs),
        "jobs_note": "results are independent of the worker count",
    }


def preset_names() -> list[str]:
    files = resources.files("episense").joinpath("presets")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def load_preset(name: str) -> Scenario:
    files = resources.files("episense").joinpath("presets")
    candidate = files.joinpath(f"{name}.json")
    if not candidate.is_file():
        raise FileNotFoundError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}"
        )
    return Scenario.model_validate(json.loads(candidate.read_text()))
