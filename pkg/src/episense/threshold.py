"""Outbreak threshold: critical awareness fixed point, the awareness-scaled
adjacency matrix, and its dominant eigenvalue by power iteration.

Near the critical point the infection probabilities vanish, the sensing
channel saturates to "no alert", and the awareness system decouples into
p = (1-delta) p + (1-r) (1-p) with r built from the two cyber channels only.
The threshold is then mu over the Perron root of M, where M scales each
column i of the physical adjacency by 1 - (1-gamma) * p_a[i].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import sparse

from . import kernels
from .kernels import ModelParams, NeighborField
from .network import MultiplexNetwork, PhysicalLayer


@dataclass(frozen=True)
class CriticalAwareness:
    p_a: np.ndarray
    converged: bool
    iterations: int


@dataclass(frozen=True)
class PowerIterationResult:
    value: float
    iterations: int
    converged: bool
    degenerate: bool = False


@dataclass(frozen=True)
class ThresholdResult:
    beta_c: float
    lambda_max: float
    power_iters: int
    converged: bool
    note: str = ""


def critical_awareness(
    net: MultiplexNetwork,
    params: ModelParams,
    tol: float = 1e-8,
    max_iter: int = 50_000,
) -> CriticalAwareness:
    """Fixed point of the awareness system at the epidemic critical point.

    Starts from p = 0.5: below the information threshold the only fixed point
    is 0 and the iteration collapses onto it; above it 0 is unstable and 0.5
    lands on the nontrivial branch.  The sensing channel is held at 1.
    """
    crit = replace(params, enable_sensing=False)
    p = np.full(net.n, 0.5)
    zeros = np.zeros(net.n)
    converged = False
    iterations = max_iter
    for it in range(1, max_iter + 1):
        field = NeighborField(p_aware=p, p_infected=zeros)
        r = kernels.not_informed_pairwise(net.cyber, field, crit)
        r = r * kernels.not_informed_simplex(net.cyber, field, crit)
        nxt = (1.0 - crit.delta) * p + (1.0 - r) * (1.0 - p)
        diff = np.abs(nxt - p).max()
        p = nxt
        if diff < tol:
            converged = True
            iterations = it
            break
    return CriticalAwareness(p_a=p, converged=converged, iterations=iterations)


def awareness_scaled_adjacency(
    physical: PhysicalLayer, p_a: np.ndarray, gamma: float
) -> sparse.csr_matrix:
    """M with entries m_ji = [1 - (1-gamma) p_a[i]] b_ji: column i of the
    physical adjacency scaled by node i's awareness factor."""
    factor = 1.0 - (1.0 - gamma) * np.asarray(p_a, dtype=np.float64)
    return physical.adj.multiply(factor[np.newaxis, :]).tocsr()


def dominant_eigenvalue(
    m, tol: float = 1e-8, max_iter: int = 50_000
) -> PowerIterationResult:
    """Perron root of a nonnegative square matrix by power iteration.

    Iterates on M + I (the identity shift makes periodic structures such as
    bipartite graphs aperiodic without moving the Perron vector), normalizes
    by the max norm, and stops when successive Rayleigh quotients agree to
    `tol`.  A zero matrix reports eigenvalue 0 with the degenerate flag.
    """
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError(f"matrix must be square, got {m.shape}")
    nnz = m.nnz if sparse.issparse(m) else np.count_nonzero(m)
    if nnz == 0:
        return PowerIterationResult(value=0.0, iterations=0, converged=True, degenerate=True)
    v = np.ones(n) / n
    shifted_prev = np.inf
    for it in range(1, max_iter + 1):
        w = m @ v + v
        norm = np.abs(w).max()
        if norm == 0.0:
            return PowerIterationResult(value=0.0, iterations=it, converged=True, degenerate=True)
        w = w / norm
        shifted = float((w @ (m @ w + w)) / (w @ w))
        v = w
        if abs(shifted - shifted_prev) < tol:
            return PowerIterationResult(value=shifted - 1.0, iterations=it, converged=True)
        shifted_prev = shifted
    return PowerIterationResult(value=shifted_prev - 1.0, iterations=max_iter, converged=False)


def epidemic_threshold(
    net: MultiplexNetwork,
    params: ModelParams,
    tol: float = 1e-8,
    max_iter: int = 50_000,
) -> ThresholdResult:
    """Outbreak threshold beta_c = mu / lambda_max(M)."""
    if params.mu <= 0.0:
        raise ValueError("threshold undefined for mu <= 0")
    awareness = critical_awareness(net, params, tol=tol, max_iter=max_iter)
    m = awareness_scaled_adjacency(net.physical, awareness.p_a, params.gamma)
    eig = dominant_eigenvalue(m, tol=tol, max_iter=max_iter)
    if eig.value <= 0.0:
        return ThresholdResult(
            beta_c=math.inf,
            lambda_max=eig.value,
            power_iters=eig.iterations,
            converged=eig.converged and awareness.converged,
            note="spectral radius is zero: no transmission path supports an outbreak",
        )
    return ThresholdResult(
        beta_c=params.mu / eig.value,
        lambda_max=eig.value,
        power_iters=eig.iterations,
        converged=eig.converged and awareness.converged,
    )
