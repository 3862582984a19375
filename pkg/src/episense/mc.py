"""Stochastic engine: synchronous two-phase updates of discrete node states,
ensemble averaging, and sliding-window steady-state detection.

Each step reads only time-t states.  Phase A (awareness): unaware nodes become
aware with probability 1 - r_i evaluated on the time-t indicator field; aware
nodes forget with probability delta.  Phase B (epidemic): susceptible nodes
are exposed at the time-t infected indicators and use their phase-A awareness
outcome to select the aware/unaware infection rate; infected nodes recover
with probability mu.  A node that forgot but stayed infected remains
aware-infected (the unaware-infected combination never exists), and a newly
infected node is aware-infected regardless of its phase-A outcome.

Randomness contract: run r of an ensemble owns the generator seeded by
(seed, DOMAIN_RUN, r).  Within a run, the initial infected set is drawn first;
each step then consumes two uniform vectors in node-index order (phase A, then
phase B).  Ensembles advance all runs in lock-step as disjoint replicas of the
network inside a single vectorized state, which reproduces the per-run streams
exactly, so results are bit-identical no matter how execution is arranged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, network
from .kernels import ModelParams, NeighborField
from .network import MultiplexNetwork
from .seeds import DOMAIN_RUN, rng_from

US, AS, AI = 0, 1, 2

_STATE_NAMES = {US: "US", AS: "AS", AI: "AI"}


@dataclass(frozen=True)
class McState:
    """Discrete per-node states at one time step."""

    states: np.ndarray  # int8, values in {US, AS, AI}
    t: int = 0

    def validate(self) -> None:
        bad = ~np.isin(self.states, (US, AS, AI))
        if bad.any():
            raise ValueError(f"invalid state code {self.states[bad][0]}")

    def densities(self) -> tuple[float, float]:
        aware = float(np.mean(self.states != US))
        infected = float(np.mean(self.states == AI))
        return aware, infected


@dataclass(frozen=True)
class RunConfig:
    """Ensemble and stopping configuration for the stochastic engine."""

    seed: int
    n_runs: int = 100
    burn_in: int = 500
    window: int = 100
    max_steps: int = 5000
    stop_tol: float = 1e-3
    frac_infected: float = 0.01
    awareness_timing: str = "phase_a"  # or "time_t": which awareness picks the infection rate

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.burn_in + self.window > self.max_steps:
            raise ValueError("burn_in + window must not exceed max_steps")
        if self.n_runs < 1:
            raise ValueError("n_runs must be >= 1")
        if not 0.0 < self.frac_infected < 1.0:
            raise ValueError("frac_infected must be in (0, 1)")
        if self.awareness_timing not in ("phase_a", "time_t"):
            raise ValueError(f"unknown awareness_timing {self.awareness_timing!r}")


@dataclass(frozen=True)
class EnsembleResult:
    rho_a_mean: float
    rho_i_mean: float
    rho_a_sd: float
    rho_i_sd: float
    runs_used: int
    rho_a_runs: np.ndarray
    rho_i_runs: np.ndarray
    steps: np.ndarray


def initial_state(net: MultiplexNetwork | int, frac_infected: float, seed) -> McState:
    """ceil(frac * N) distinct uniformly chosen nodes start aware-infected;
    everyone else starts unaware-susceptible."""
    n = net if isinstance(net, int) else net.n
    if not 0.0 < frac_infected < 1.0:
        raise ValueError("frac_infected must be in (0, 1)")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    states = np.full(n, US, dtype=np.int8)
    count = math.ceil(frac_infected * n)
    states[rng.choice(n, size=count, replace=False)] = AI
    return McState(states=states, t=0)


def _advance(
    states: np.ndarray,
    net: MultiplexNetwork,
    params: ModelParams,
    u_aware: np.ndarray,
    u_infect: np.ndarray,
    timing: str,
):
    """One synchronous update; returns (next_states, detail dict)."""
    aware = states != US
    infected = states == AI
    field = NeighborField(
        p_aware=aware.astype(np.float64), p_infected=infected.astype(np.float64)
    )
    stay_quiet = kernels.not_informed(net, field, params)
    gained = ~aware & (u_aware < 1.0 - stay_quiet)
    forgot = aware & (u_aware < params.delta)
    aware_after = (aware & ~forgot) | gained
    selector = aware_after if timing == "phase_a" else aware

    q_u = kernels.not_infected(net.physical, field, params, aware=False)
    if params.beta_a == 0.0:
        p_inf_aware = np.zeros_like(q_u)
    else:
        p_inf_aware = 1.0 - kernels.not_infected(net.physical, field, params, aware=True)
    p_inf = np.where(selector, p_inf_aware, 1.0 - q_u)

    newly_infected = ~infected & (u_infect < p_inf)
    recovered = infected & (u_infect < params.mu)

    next_states = np.where(
        newly_infected | (infected & ~recovered),
        AI,
        np.where(
            infected & recovered,
            np.where(forgot, US, AS),
            np.where(aware_after, AS, US),
        ),
    ).astype(np.int8)
    detail = {
        "gained_awareness": gained,
        "forgot": forgot,
        "aware_after_phase_a": aware_after,
        "newly_infected": newly_infected,
        "recovered": recovered,
    }
    return next_states, detail


def step(
    state: McState,
    net: MultiplexNetwork,
    params: ModelParams,
    rng: np.random.Generator | None = None,
    draws: tuple[np.ndarray, np.ndarray] | None = None,
    awareness_timing: str = "phase_a",
    return_detail: bool = False,
):
    """Advance one step.  Either pass a generator (two uniform vectors are
    drawn in node-index order) or the pre-drawn (phase A, phase B) pair."""
    n = state.states.shape[0]
    if draws is None:
        if rng is None:
            raise ValueError("need rng or draws")
        u = rng.random((2, n))
        draws = (u[0], u[1])
    next_states, detail = _advance(
        state.states, net, params, draws[0], draws[1], awareness_timing
    )
    new = McState(states=next_states, t=state.t + 1)
    return (new, detail) if return_detail else new


def _ensemble_core(
    net: MultiplexNetwork,
    params: ModelParams,
    cfg: RunConfig,
    run_indices: list[int],
):
    """Advance the given runs in lock-step and return per-run window-averaged
    densities (rho_a, rho_i) plus the step count at which each run stopped."""
    n = net.n
    reps = len(run_indices)
    big = network.replicate(net, reps)
    gens = [rng_from(cfg.seed, DOMAIN_RUN, r) for r in run_indices]

    infect_count = math.ceil(cfg.frac_infected * n)
    states = np.full(reps * n, US, dtype=np.int8)
    for i, g in enumerate(gens):
        states[i * n + g.choice(n, size=infect_count, replace=False)] = AI

    w = cfg.window
    first_check = max(cfg.burn_in, 2 * w)
    cs_i = np.zeros((cfg.max_steps + 1, reps))
    cs_a = np.zeros((cfg.max_steps + 1, reps))
    done = np.zeros(reps, dtype=bool)
    out_a = np.zeros(reps)
    out_i = np.zeros(reps)
    out_steps = np.full(reps, cfg.max_steps, dtype=np.int64)

    chunk = 16 if reps * n <= 200_000 else 4
    buf = np.empty((chunk, 2, reps * n))
    buf_pos = chunk  # forces a refill on first use

    for t in range(1, cfg.max_steps + 1):
        if buf_pos == chunk:
            for i, g in enumerate(gens):
                buf[:, :, i * n : (i + 1) * n] = g.random((chunk, 2, n))
            buf_pos = 0
        states, _ = _advance(
            states, big, params, buf[buf_pos, 0], buf[buf_pos, 1], cfg.awareness_timing
        )
        buf_pos += 1

        per_run = states.reshape(reps, n)
        rho_i_t = (per_run == AI).mean(axis=1)
        rho_a_t = (per_run != US).mean(axis=1)
        cs_i[t] = cs_i[t - 1] + rho_i_t
        cs_a[t] = cs_a[t - 1] + rho_a_t

        if t >= first_check:
            recent = (cs_i[t] - cs_i[t - w]) / w
            previous = (cs_i[t - w] - cs_i[t - 2 * w]) / w
            newly = ~done & (np.abs(recent - previous) < cfg.stop_tol)
            if newly.any():
                out_i[newly] = recent[newly]
                out_a[newly] = ((cs_a[t] - cs_a[t - w]) / w)[newly]
                out_steps[newly] = t
                done |= newly
            if done.all():
                break

    if not done.all():
        t = cfg.max_steps
        rest = ~done
        out_i[rest] = ((cs_i[t] - cs_i[t - w]) / w)[rest]
        out_a[rest] = ((cs_a[t] - cs_a[t - w]) / w)[rest]
        out_steps[rest] = t
    return out_a, out_i, out_steps


def run_to_steady(
    net: MultiplexNetwork, params: ModelParams, cfg: RunConfig, run_index: int = 0
) -> tuple[float, float]:
    """One trajectory: step until the burn-in has elapsed and two consecutive
    window means of the infection density differ by less than stop_tol (or
    max_steps is reached, which is a valid stop).  Returns the last window's
    mean (awareness density, infection density)."""
    out_a, out_i, _ = _ensemble_core(net, params, cfg, [run_index])
    return float(out_a[0]), float(out_i[0])


def run_ensemble(net: MultiplexNetwork, params: ModelParams, cfg: RunConfig) -> EnsembleResult:
    """n_runs independent trajectories on derived substreams; mean and sample
    standard deviation of the per-run steady densities."""
    out_a, out_i, steps = _ensemble_core(net, params, cfg, list(range(cfg.n_runs)))
    sd_a = float(np.std(out_a, ddof=1)) if cfg.n_runs > 1 else 0.0
    sd_i = float(np.std(out_i, ddof=1)) if cfg.n_runs > 1 else 0.0
    return EnsembleResult(
        rho_a_mean=float(out_a.mean()),
        rho_i_mean=float(out_i.mean()),
        rho_a_sd=sd_a,
        rho_i_sd=sd_i,
        runs_used=cfg.n_runs,
        rho_a_runs=out_a,
        rho_i_runs=out_i,
        steps=steps,
    )
