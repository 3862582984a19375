import numpy as np
import pytest

from episense import network
from episense.kernels import ModelParams


def small_multiplex(n=60, k1=6.0, k2=1.0, ws_k=4, ws_p=0.3, seed=11):
    phys = network.watts_strogatz(n, ws_k, ws_p, seed=seed)
    cyber = network.simplicial_er(n, k1, k2, seed=seed + 1)
    return network.MultiplexNetwork(cyber=cyber, physical=phys)


@pytest.fixture(scope="session")
def tiny_net():
    return small_multiplex()


@pytest.fixture(scope="session")
def base_params():
    return ModelParams(
        lam=0.1, lam_star=0.1, delta=0.8, beta_u=0.2, gamma=0.0,
        mu=0.4, alpha=10.0, theta=0.8,
    )


def path_multiplex(n=3):
    """Path graph 0-1-...-n-1 on both layers, no simplices."""
    edges = np.array([[i, i + 1] for i in range(n - 1)], dtype=np.int64)
    adj = network._adjacency_from_edges(n, edges)
    phys = network.PhysicalLayer(n=n, adj=adj, degree=np.diff(adj.indptr))
    cyber = network.CyberLayer(n=n, adj=adj.copy(), simplices=np.zeros((0, 3), np.int64))
    return network.MultiplexNetwork(cyber=cyber, physical=phys)


def acceptance_line(name: str, ok: bool, detail: str = "") -> None:
    print(f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
