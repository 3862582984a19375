"""Microscopic Markov chain solver: iterate the coupled per-node probability
system to its fixed point and report steady-state densities.

The update is synchronous (Jacobi style): every kernel reads the previous
state.  The three per-node equations sum to 1 identically, so probability
conservation holds up to floating-point drift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .kernels import ModelParams, NeighborField
from .network import MultiplexNetwork


@dataclass(frozen=True)
class MmcaState:
    """Per-node probabilities of the three states (US, AS, AI)."""

    p_us: np.ndarray
    p_as: np.ndarray
    p_ai: np.ndarray

    @classmethod
    def uniform(cls, n: int, frac_infected: float = 0.01, frac_aware_extra: float = 0.0) -> "MmcaState":
        """Uniform mass: p_ai = frac_infected everywhere, optional extra
        aware-susceptible mass, remainder unaware-susceptible."""
        if not 0.0 <= frac_infected <= 1.0 or not 0.0 <= frac_aware_extra <= 1.0:
            raise ValueError("initial fractions must lie in [0, 1]")
        if frac_infected + frac_aware_extra > 1.0:
            raise ValueError("initial fractions exceed 1")
        p_ai = np.full(n, frac_infected)
        p_as = np.full(n, frac_aware_extra)
        return cls(p_us=1.0 - p_ai - p_as, p_as=p_as, p_ai=p_ai)

    def field(self) -> NeighborField:
        return NeighborField(p_aware=self.p_as + self.p_ai, p_infected=self.p_ai)

    def densities(self) -> tuple[float, float]:
        """(awareness density, infection density)."""
        return float(np.mean(self.p_as + self.p_ai)), float(np.mean(self.p_ai))

    def validate(self, tol: float = 1e-10) -> None:
        for name, arr in (("p_us", self.p_us), ("p_as", self.p_as), ("p_ai", self.p_ai)):
            if (arr < -tol).any() or (arr > 1.0 + tol).any():
                raise ValueError(f"{name} outside [0, 1]")
        total = self.p_us + self.p_as + self.p_ai
        if np.abs(total - 1.0).max() > tol:
            raise ValueError("per-node probabilities do not sum to 1")


@dataclass(frozen=True)
class SteadyDensities:
    rho_a: float
    rho_i: float
    iterations: int
    converged: bool


def step(state: MmcaState, net: MultiplexNetwork, params: ModelParams) -> MmcaState:
    """One synchronous update of the coupled probability system."""
    field = state.field()
    r = kernels.not_informed(net, field, params)
    q_u = kernels.not_infected(net.physical, field, params, aware=False)
    q_a = kernels.not_infected(net.physical, field, params, aware=True)

    us, as_, ai = state.p_us, state.p_as, state.p_ai
    delta, mu = params.delta, params.mu

    new_us = us * r * q_u + as_ * delta * q_u + ai * delta * mu
    new_as = us * (1.0 - r) * q_a + as_ * (1.0 - delta) * q_a + ai * (1.0 - delta) * mu
    new_ai = (
        us * (1.0 - r) * (1.0 - q_a)
        + us * r * (1.0 - q_u)
        + as_ * delta * (1.0 - q_u)
        + as_ * (1.0 - delta) * (1.0 - q_a)
        + ai * (1.0 - mu)
    )
    return MmcaState(p_us=new_us, p_as=new_as, p_ai=new_ai)


def solve(
    net: MultiplexNetwork,
    params: ModelParams,
    init: MmcaState | None = None,
    tol: float = 1e-6,
    max_iter: int = 10_000,
    frac_infected: float = 0.01,
) -> tuple[MmcaState, SteadyDensities]:
    """Iterate to the fixed point: stop when no component of any node moves by
    more than `tol` in one step.  Non-convergence is reported in the result,
    never raised."""
    state = init if init is not None else MmcaState.uniform(net.n, frac_infected)
    converged = False
    iterations = max_iter
    for it in range(1, max_iter + 1):
        nxt = step(state, net, params)
        diff = max(
            np.abs(nxt.p_us - state.p_us).max(),
            np.abs(nxt.p_as - state.p_as).max(),
            np.abs(nxt.p_ai - state.p_ai).max(),
        )
        state = nxt
        if diff < tol:
            converged = True
            iterations = it
            break
    rho_a, rho_i = state.densities()
    return state, SteadyDensities(rho_a=rho_a, rho_i=rho_i, iterations=iterations, converged=converged)
