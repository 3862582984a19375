"""Per-node probability kernels shared by the MMCA solver and the MC engine.

Each kernel returns, for every node, the probability that "nothing happened"
through one channel during a step: not informed via a pairwise contact, not
informed via a 2-simplex, not alerted by sensing infected physical contacts,
not infected by physical contacts.  The same formulas serve both solvers: the
MMCA passes continuous neighbour probabilities, the MC engine passes 0/1
indicator fields, and the products then reduce to the Bernoulli branch rates.

Products over neighbours are evaluated as exp(A @ log1p(-rate * field)) so a
sparse mat-vec does the gather; a zero factor becomes -inf and exponentiates
back to an exact 0.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .network import CyberLayer, MultiplexNetwork, PhysicalLayer


@dataclass(frozen=True)
class ModelParams:
    """Dynamical rates and response-shape parameters.

    lam        pairwise information rate
    lam_star   2-simplex information rate
    delta      forgetting rate (aware -> unaware)
    beta_u     infection rate for unaware susceptibles
    gamma      awareness attenuation; infection rate while aware is gamma*beta_u
    mu         recovery rate
    alpha      sensing response intensity (sigmoid steepness)
    theta      vigilance threshold (sigmoid midpoint on the infected fraction)

    Channel toggles: a disabled channel contributes factor 1 everywhere.
    `sensing_requires_infected` clamps the sensing channel to "no alert" when a
    node has zero infected contacts; by default the sigmoid's small nonzero
    baseline is kept exactly as the response function gives it.
    """

    lam: float = 0.1
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

    def __post_init__(self):
        for name in ("lam", "lam_star", "delta", "beta_u", "mu"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must be in [0, 1), got {self.gamma}")
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"theta must be in (0, 1), got {self.theta}")
        if self.alpha <= 0.0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")

    @property
    def beta_a(self) -> float:
        """Infection rate for aware susceptibles."""
        return self.gamma * self.beta_u

    def with_channels(self, pairwise: bool, simplex: bool, sensing: bool) -> "ModelParams":
        return replace(
            self,
            enable_pairwise=pairwise,
            enable_simplex=simplex,
            enable_sensing=sensing,
        )


@dataclass(frozen=True)
class NeighborField:
    """Per-node awareness and infection levels seen by the kernels.

    `p_aware[j]` is the probability (or 0/1 indicator) that node j is aware;
    `p_infected[j]` that it is aware-and-infected.  Infected implies aware,
    so p_infected <= p_aware pointwise.
    """

    p_aware: np.ndarray
    p_infected: np.ndarray

    def validate(self) -> None:
        pa, pi = self.p_aware, self.p_infected
        if pa.shape != pi.shape:
            raise ValueError("field arrays must share one shape")
        if (pi < -1e-12).any() or (pa > 1.0 + 1e-12).any():
            raise ValueError("field values outside [0, 1]")
        if (pi > pa + 1e-12).any():
            raise ValueError("p_infected must not exceed p_aware")


def _product_over_neighbors(adj, rate: float, values: np.ndarray) -> np.ndarray:
    """prod_j (1 - rate * values_j) over each node's neighbours."""
    if rate == 0.0:
        return np.ones(adj.shape[0])
    with np.errstate(divide="ignore"):
        logs = np.log1p(-rate * values)
    return np.exp(adj @ logs)


def not_informed_pairwise(cyber: CyberLayer, field: NeighborField, params: ModelParams) -> np.ndarray:
    """Probability of not being informed through any pairwise cyber contact."""
    if not params.enable_pairwise:
        return np.ones(field.p_aware.shape[0])
    return _product_over_neighbors(cyber.adj, params.lam, field.p_aware)


def not_informed_simplex(cyber: CyberLayer, field: NeighborField, params: ModelParams) -> np.ndarray:
    """Probability of not being informed through any 2-simplex.

    A simplex transmits only when both other members are aware, so each
    membership contributes a factor 1 - p_aware[j] * p_aware[k] * lam_star.
    """
    n = field.p_aware.shape[0]
    if not params.enable_simplex or params.lam_star == 0.0 or cyber.inc_owner.size == 0:
        return np.ones(n)
    pa = field.p_aware
    pair = pa[cyber.inc_u] * pa[cyber.inc_v]
    with np.errstate(divide="ignore"):
        logs = np.log1p(-params.lam_star * pair)
    return np.exp(np.bincount(cyber.inc_owner, weights=logs, minlength=n))


def not_informed_sensing(physical: PhysicalLayer, field: NeighborField, params: ModelParams) -> np.ndarray:
    """Probability of not detecting the outbreak by sensing physical contacts.

    The alert probability is a sigmoid in the infected fraction f among
    physical neighbours: 1/(1 + exp(-alpha (f - theta))).  Isolated nodes
    sense f = 0.
    """
    n = field.p_infected.shape[0]
    if not params.enable_sensing:
        return np.ones(n)
    weight = physical.adj @ field.p_infected
    deg = physical.degree
    f = np.divide(weight, deg, out=np.zeros(n), where=deg > 0)
    alert = 1.0 / (1.0 + np.exp(-params.alpha * (f - params.theta)))
    if params.sensing_requires_infected:
        alert = np.where(weight > 0.0, alert, 0.0)
    return 1.0 - alert


def not_informed(net: MultiplexNetwork, field: NeighborField, params: ModelParams) -> np.ndarray:
    """Product of the three information channels."""
    out = not_informed_pairwise(net.cyber, field, params)
    out = out * not_informed_simplex(net.cyber, field, params)
    out = out * not_informed_sensing(net.physical, field, params)
    return out


def not_infected(physical: PhysicalLayer, field: NeighborField, params: ModelParams, aware: bool) -> np.ndarray:
    """Probability of not being infected by any physical contact, at the
    awareness-dependent rate (gamma * beta_u while aware, beta_u otherwise)."""
    rate = params.beta_a if aware else params.beta_u
    return _product_over_neighbors(physical.adj, rate, field.p_infected)
