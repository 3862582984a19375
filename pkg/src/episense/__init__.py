"""Coupled awareness-epidemic dynamics on two-layer cyber-physical networks.

Core pieces: network generators (simplicial ER cyber layer, Watts-Strogatz
physical layer, edge-list ingestion), the per-node probability kernels shared
by the deterministic MMCA solver and the stochastic Monte Carlo engine, an
eigenvalue-based outbreak threshold, and an experiment runner that sweeps
parameter grids and emits CSV results.  A FastAPI service wraps the library;
the ``episense`` CLI is a thin client of that service.
"""

__version__ = "0.1.0"
