"""Regenerate the bundled synthetic power-grid-like topology.

The real US power grid dataset (4941 nodes, 6594 edges) is not redistributed
here; this script builds a spatial network with the same node and edge counts
so the grid case study runs offline: random plane points, the minimum
spanning tree of their k-nearest-neighbour graph, then the shortest unused
local edges until the edge budget is met.  Output is deterministic.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, minimum_spanning_tree
from scipy.spatial import cKDTree

N_NODES = 4941
N_EDGES = 6594
KNN = 10
SEED = 824


def build_edges() -> np.ndarray:
    rng = np.random.default_rng(SEED)
    pts = rng.random((N_NODES, 2))
    tree = cKDTree(pts)
    dist, idx = tree.query(pts, k=KNN + 1)
    rows = np.repeat(np.arange(N_NODES), KNN)
    cols = idx[:, 1:].ravel()
    wts = dist[:, 1:].ravel()
    keep = rows < cols
    pairs = np.stack([rows[keep], cols[keep]], axis=1)
    wts = wts[keep]
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    pairs, wts = pairs[order], wts[order]
    pairs, uniq = np.unique(pairs, axis=0, return_index=True)
    wts = wts[uniq]

    graph = coo_matrix((wts, (pairs[:, 0], pairs[:, 1])), shape=(N_NODES, N_NODES))
    n_comp, labels = connected_components(graph, directed=False)
    extra = []
    while n_comp > 1:
        # stitch the first component to its nearest outside node
        inside = np.nonzero(labels == labels[0])[0]
        outside = np.nonzero(labels != labels[0])[0]
        out_tree = cKDTree(pts[outside])
        d, j = out_tree.query(pts[inside], k=1)
        best = int(np.argmin(d))
        a, b = int(inside[best]), int(outside[j[best]])
        extra.append((min(a, b), max(a, b), float(d[best])))
        pairs = np.vstack([pairs, [[min(a, b), max(a, b)]]])
        wts = np.append(wts, d[best])
        graph = coo_matrix((wts, (pairs[:, 0], pairs[:, 1])), shape=(N_NODES, N_NODES))
        n_comp, labels = connected_components(graph, directed=False)

    mst = minimum_spanning_tree(graph).tocoo()
    mst_pairs = {(min(i, j), max(i, j)) for i, j in zip(mst.row, mst.col)}
    assert len(mst_pairs) == N_NODES - 1

    by_length = np.argsort(wts, kind="stable")
    chosen = sorted(mst_pairs)
    for k in by_length:
        if len(chosen) == N_EDGES:
            break
        key = (int(pairs[k, 0]), int(pairs[k, 1]))
        if key not in mst_pairs:
            chosen.append(key)
            mst_pairs.add(key)
    assert len(chosen) == N_EDGES, f"only {len(chosen)} edges available; raise KNN"
    return np.array(sorted(chosen), dtype=np.int64)


def main() -> None:
    edges = build_edges()
    out = Path(__file__).resolve().parents[1] / "src" / "episense" / "data" / "powergrid_standin.edges"
    with out.open("w") as fh:
        fh.write(f"# synthetic power-grid-like topology: {N_NODES} nodes, {N_EDGES} edges\n")
        fh.write(f"# generated by scripts/make_powergrid_standin.py (seed {SEED})\n")
        for i, j in edges:
            fh.write(f"{i} {j}\n")
    print(f"wrote {out} ({len(edges)} edges)")


if __name__ == "__main__":
    main()
