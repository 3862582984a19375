"""Two-layer network construction and IO.

The cyber layer is an Erdos-Renyi graph augmented with 2-simplices (triangle
groups through which information spreads only when both other members are
aware); the physical layer is a Watts-Strogatz small world or a real topology
read from an edge list.  Both layers share one node set, matched one-to-one.

Layers are immutable after construction and safe to share across workers.
Adjacency is kept as a scipy CSR matrix of {0,1} floats so the kernels can use
sparse mat-vec products; simplex membership is kept as flat incidence arrays
(owner, other1, other2) for fast segment reductions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import sparse


def _adjacency_from_edges(n: int, edges: np.ndarray) -> sparse.csr_matrix:
    """Symmetric CSR adjacency from unique canonical (i<j) edge pairs."""
    if edges.size == 0:
        return sparse.csr_matrix((n, n), dtype=np.float64)
    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([edges[:, 1], edges[:, 0]])
    a = sparse.coo_matrix(
        (np.ones(rows.size), (rows, cols)), shape=(n, n), dtype=np.float64
    ).tocsr()
    a.data[:] = 1.0
    return a


def _canonical_edges(pairs: np.ndarray) -> np.ndarray:
    """Sort endpoints, drop duplicates and reversed copies.  Keeps self-loops."""
    if pairs.size == 0:
        return pairs.reshape(0, 2).astype(np.int64)
    p = np.sort(np.asarray(pairs, dtype=np.int64), axis=1)
    return np.unique(p, axis=0)


def _edge_keys(n: int, edges: np.ndarray) -> np.ndarray:
    return edges[:, 0].astype(np.int64) * n + edges[:, 1]


def _incidence_from_triples(triples: np.ndarray):
    """Flat (owner, other1, other2) arrays, one row per node-in-simplex."""
    if triples.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    a, b, c = triples[:, 0], triples[:, 1], triples[:, 2]
    owner = np.concatenate([a, b, c]).astype(np.int64)
    u = np.concatenate([b, a, a]).astype(np.int64)
    v = np.concatenate([c, c, b]).astype(np.int64)
    return owner, u, v


@dataclass(frozen=True)
class PhysicalLayer:
    """Contact layer carrying the epidemic."""

    n: int
    adj: sparse.csr_matrix
    degree: np.ndarray
    original_ids: np.ndarray | None = None
    dropped_self_loops: int = 0

    def validate(self) -> None:
        _check_adjacency(self.n, self.adj)
        if not np.array_equal(self.degree, np.diff(self.adj.indptr)):
            raise ValueError("degree array inconsistent with adjacency row sums")

    @property
    def edge_count(self) -> int:
        return self.adj.nnz // 2

    def edges(self) -> np.ndarray:
        coo = sparse.triu(self.adj, k=1).tocoo()
        order = np.lexsort((coo.col, coo.row))
        return np.stack([coo.row[order], coo.col[order]], axis=1).astype(np.int64)


@dataclass(frozen=True)
class CyberLayer:
    """Information layer: pairwise edges plus 2-simplex membership."""

    n: int
    adj: sparse.csr_matrix
    simplices: np.ndarray                 # (S, 3) node triples, rows sorted
    inc_owner: np.ndarray = field(repr=False, default=None)
    inc_u: np.ndarray = field(repr=False, default=None)
    inc_v: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.inc_owner is None:
            owner, u, v = _incidence_from_triples(self.simplices)
            object.__setattr__(self, "inc_owner", owner)
            object.__setattr__(self, "inc_u", u)
            object.__setattr__(self, "inc_v", v)

    @property
    def degree(self) -> np.ndarray:
        return np.diff(self.adj.indptr)

    @property
    def simplex_count(self) -> int:
        return int(self.simplices.shape[0]) if self.simplices.size else 0

    def simplex_index(self) -> list[list[int]]:
        """Per-node list of simplex row indices (the membership roster)."""
        roster: list[list[int]] = [[] for _ in range(self.n)]
        for s, (a, b, c) in enumerate(self.simplices):
            roster[a].append(s)
            roster[b].append(s)
            roster[c].append(s)
        return roster

    def membership_count(self) -> np.ndarray:
        """Number of simplices each node belongs to."""
        counts = np.zeros(self.n, dtype=np.int64)
        if self.inc_owner.size:
            counts += np.bincount(self.inc_owner, minlength=self.n)
        return counts

    def edges(self) -> np.ndarray:
        coo = sparse.triu(self.adj, k=1).tocoo()
        order = np.lexsort((coo.col, coo.row))
        return np.stack([coo.row[order], coo.col[order]], axis=1).astype(np.int64)

    def validate(self) -> None:
        _check_adjacency(self.n, self.adj)
        tri = self.simplices
        if tri.size == 0:
            return
        if tri.ndim != 2 or tri.shape[1] != 3:
            raise ValueError("simplices must be an (S, 3) array")
        rows = np.sort(tri, axis=1)
        if (rows[:, 0] == rows[:, 1]).any() or (rows[:, 1] == rows[:, 2]).any():
            raise ValueError("simplex with repeated nodes")
        if np.unique(rows, axis=0).shape[0] != rows.shape[0]:
            raise ValueError("duplicate simplices")
        keys = _edge_keys(self.n, self.edges())
        for cols in ((0, 1), (0, 2), (1, 2)):
            pair = rows[:, cols]
            missing = ~np.isin(pair[:, 0].astype(np.int64) * self.n + pair[:, 1], keys)
            if missing.any():
                a, b = pair[np.argmax(missing)]
                raise ValueError(f"simplex closure violated: edge ({a}, {b}) absent")


def _check_adjacency(n: int, adj: sparse.csr_matrix) -> None:
    if adj.shape != (n, n):
        raise ValueError(f"adjacency shape {adj.shape} != ({n}, {n})")
    if adj.diagonal().any():
        raise ValueError("self-loop on the diagonal")
    if adj.nnz and not np.all(adj.data == 1.0):
        raise ValueError("adjacency entries must be 0/1 (no multi-edges)")
    if (adj != adj.T).nnz != 0:
        raise ValueError("adjacency not symmetric")


@dataclass(frozen=True)
class MultiplexNetwork:
    """Cyber and physical layers over one matched node set."""

    cyber: CyberLayer
    physical: PhysicalLayer

    def __post_init__(self):
        if self.cyber.n != self.physical.n:
            raise ValueError(
                f"layer sizes differ: cyber {self.cyber.n} vs physical {self.physical.n}"
            )

    @property
    def n(self) -> int:
        return self.physical.n

    def validate(self) -> None:
        self.cyber.validate()
        self.physical.validate()


def connection_probabilities(n: int, k1: float, k2: float) -> tuple[float, float]:
    """Edge and simplex probabilities hitting target mean degree k1 and mean
    simplex membership k2.

    p1 = (k1 - 2 k2) / ((n-1) - 2 k2),  p2 = 2 k2 / ((n-1)(n-2)).
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    if k2 < 0:
        raise ValueError(f"need k2 >= 0, got {k2}")
    p1 = (k1 - 2.0 * k2) / ((n - 1) - 2.0 * k2)
    p2 = 2.0 * k2 / ((n - 1) * (n - 2))
    if p1 < 0.0:
        raise ValueError(f"p1 = {p1:.6g} < 0: requires k1 >= 2*k2")
    if p1 > 1.0:
        raise ValueError(f"p1 = {p1:.6g} > 1: k1 too large for n = {n}")
    if p2 > 1.0:
        raise ValueError(f"p2 = {p2:.6g} > 1: k2 too large for n = {n}")
    return p1, p2


def _bernoulli_pairs(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """All-pairs independent edge draws, row by row (memory-bounded)."""
    out = []
    for i in range(n - 1):
        hit = np.nonzero(rng.random(n - 1 - i) < p)[0]
        if hit.size:
            out.append(np.stack([np.full(hit.size, i, dtype=np.int64), hit + i + 1], axis=1))
    if not out:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(out, axis=0)


def _sample_distinct_triples(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """`count` distinct node triples, uniform over the C(n,3) possibilities.

    Draws batches and rejects repeats; equivalent in distribution to
    per-triple Bernoulli conditioned on the drawn count.
    """
    if count == 0:
        return np.zeros((0, 3), dtype=np.int64)
    if n < 3:
        raise ValueError("need at least 3 nodes for a simplex")
    chosen: set[tuple[int, int, int]] = set()
    out: list[tuple[int, int, int]] = []
    while len(out) < count:
        batch = rng.integers(0, n, size=(max(count - len(out), 32), 3))
        batch.sort(axis=1)
        for a, b, c in batch:
            if a == b or b == c:
                continue
            key = (int(a), int(b), int(c))
            if key in chosen:
                continue
            chosen.add(key)
            out.append(key)
            if len(out) == count:
                break
    return np.array(out, dtype=np.int64)


def _build_cyber(n: int, base_edges: np.ndarray, triples: np.ndarray) -> CyberLayer:
    """Insert simplex closure edges that are absent, then assemble the layer."""
    keys = _edge_keys(n, base_edges) if base_edges.size else np.zeros(0, dtype=np.int64)
    if triples.size:
        tri_pairs = np.concatenate(
            [triples[:, (0, 1)], triples[:, (0, 2)], triples[:, (1, 2)]], axis=0
        )
        keys = np.union1d(keys, _edge_keys(n, tri_pairs))
    edges = np.stack([keys // n, keys % n], axis=1) if keys.size else np.zeros((0, 2), np.int64)
    return CyberLayer(n=n, adj=_adjacency_from_edges(n, edges), simplices=triples)


def simplicial_er(n: int, k1: float, k2: float, seed: int | np.random.Generator) -> CyberLayer:
    """ER graph with edge probability p1 plus Bernoulli(p2) 2-simplices.

    The simplex count is drawn as Binomial(C(n,3), p2) and that many distinct
    uniform triples are sampled, which is distributionally equivalent to the
    per-triple Bernoulli draw but O(S) instead of O(n^3).  Closure edges of
    each simplex are inserted when absent.
    """
    p1, p2 = connection_probabilities(n, k1, k2)
    rng = np.random.default_rng(seed)
    base = _bernoulli_pairs(n, p1, rng)
    total_triples = n * (n - 1) * (n - 2) // 6
    count = int(rng.binomial(total_triples, p2)) if p2 > 0 else 0
    triples = _sample_distinct_triples(n, count, rng)
    return _build_cyber(n, base, triples)


def watts_strogatz(n: int, k: int, p: float, seed: int | np.random.Generator) -> PhysicalLayer:
    """Small-world graph: ring lattice with k nearest neighbours, each edge's
    far endpoint redirected with probability p to a uniform non-duplicate,
    non-self target.  Edge count is exactly n*k/2 for every p.
    """
    if k % 2 != 0:
        raise ValueError(f"ring neighbour count must be even, got {k}")
    if n <= k:
        raise ValueError(f"need n > k, got n={n}, k={k}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"rewiring probability out of [0,1]: {p}")
    rng = np.random.default_rng(seed)
    neighbours: list[set[int]] = [set() for _ in range(n)]
    edges: list[tuple[int, int]] = []
    for d in range(1, k // 2 + 1):
        for i in range(n):
            j = (i + d) % n
            neighbours[i].add(j)
            neighbours[j].add(i)
            edges.append((i, j))
    idx = 0
    for d in range(1, k // 2 + 1):
        for i in range(n):
            a, b = edges[idx]
            if rng.random() < p and len(neighbours[a]) < n - 1:
                while True:
                    t = int(rng.integers(0, n))
                    if t != a and t not in neighbours[a]:
                        break
                neighbours[a].remove(b)
                neighbours[b].remove(a)
                neighbours[a].add(t)
                neighbours[t].add(a)
                edges[idx] = (a, t)
            idx += 1
    arr = _canonical_edges(np.array(edges, dtype=np.int64))
    adj = _adjacency_from_edges(n, arr)
    return PhysicalLayer(n=n, adj=adj, degree=np.diff(adj.indptr))


def load_edge_list(path: str | Path) -> PhysicalLayer:
    """Read an undirected simple graph from a whitespace- or comma-separated
    pair-per-line file.  Lines starting with '#' or '%' are comments.

    Duplicate and reversed pairs collapse to one edge; self-loops are dropped
    and counted; node ids are compacted to 0..n-1 with the original ids kept.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"edge list not found: {path}")
    raw: list[tuple[int, int]] = []
    with path.open() as fh:
        for ln, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#") or text.startswith("%"):
                continue
            tokens = text.replace(",", " ").split()
            if len(tokens) != 2:
                raise ValueError(f"{path}:{ln}: expected two node ids, got {text!r}")
            try:
                raw.append((int(tokens[0]), int(tokens[1])))
            except ValueError:
                raise ValueError(f"{path}:{ln}: non-integer node id in {text!r}") from None
    if not raw:
        raise ValueError(f"{path}: no edges found")
    pairs = np.array(raw, dtype=np.int64)
    loops = pairs[:, 0] == pairs[:, 1]
    dropped = int(loops.sum())
    pairs = pairs[~loops]
    if pairs.size == 0:
        raise ValueError(f"{path}: only self-loops present")
    ids = np.unique(pairs)
    compact = {int(v): i for i, v in enumerate(ids)}
    remapped = np.vectorize(compact.__getitem__)(pairs)
    edges = _canonical_edges(remapped)
    adj = _adjacency_from_edges(len(ids), edges)
    return PhysicalLayer(
        n=len(ids),
        adj=adj,
        degree=np.diff(adj.indptr),
        original_ids=ids,
        dropped_self_loops=dropped,
    )


def mirror_layer(physical: PhysicalLayer, k2: float, seed: int | np.random.Generator) -> CyberLayer:
    """Cyber layer with the physical adjacency plus 2-simplices sampled at
    mean membership k2 (used when a real topology has no cyber counterpart).
    """
    n = physical.n
    if k2 < 0:
        raise ValueError(f"need k2 >= 0, got {k2}")
    p2 = 2.0 * k2 / ((n - 1) * (n - 2))
    if p2 > 1.0:
        raise ValueError(f"p2 = {p2:.6g} > 1: k2 too large for n = {n}")
    rng = np.random.default_rng(seed)
    total_triples = n * (n - 1) * (n - 2) // 6
    count = int(rng.binomial(total_triples, p2)) if p2 > 0 else 0
    triples = _sample_distinct_triples(n, count, rng)
    return _build_cyber(n, physical.edges(), triples)


def save_edge_list(layer: PhysicalLayer | CyberLayer, path: str | Path) -> None:
    """One 'i j' pair per line, canonical order."""
    with Path(path).open("w") as fh:
        for i, j in layer.edges():
            fh.write(f"{i} {j}\n")


def save_simplices(cyber: CyberLayer, path: str | Path) -> None:
    """Companion simplex file: one 'i j k' triple per line."""
    with Path(path).open("w") as fh:
        for a, b, c in cyber.simplices:
            fh.write(f"{a} {b} {c}\n")


def edge_list_text(layer: PhysicalLayer | CyberLayer) -> str:
    return "".join(f"{i} {j}\n" for i, j in layer.edges())


def simplices_text(cyber: CyberLayer) -> str:
    return "".join(f"{a} {b} {c}\n" for a, b, c in cyber.simplices)


def replicate(net: MultiplexNetwork, copies: int) -> MultiplexNetwork:
    """`copies` disjoint copies of `net` as one network (block-diagonal
    adjacency).  Lets an ensemble of independent runs advance in lock-step
    through single vectorized updates.
    """
    if copies == 1:
        return net
    n = net.n
    eye = sparse.identity(copies, format="csr")
    cy_adj = sparse.kron(eye, net.cyber.adj, format="csr")
    ph_adj = sparse.kron(eye, net.physical.adj, format="csr")
    offsets = (np.arange(copies, dtype=np.int64) * n).repeat(net.cyber.simplices.shape[0] or 0)
    if net.cyber.simplices.size:
        tri = np.tile(net.cyber.simplices, (copies, 1)) + offsets[:, None]
    else:
        tri = np.zeros((0, 3), dtype=np.int64)
    cyber = CyberLayer(n=n * copies, adj=cy_adj, simplices=tri)
    physical = PhysicalLayer(
        n=n * copies, adj=ph_adj, degree=np.tile(net.physical.degree, copies)
    )
    return MultiplexNetwork(cyber=cyber, physical=physical)
