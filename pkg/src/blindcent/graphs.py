"""Graph construction, adjacency matrices, and ground-truth centrality.

Graphs are undirected and simple, with nodes 0..n-1 and a dense adjacency
representation. Random generators take an explicit seeded stream and never
resample on their own; connectivity policy belongs to the caller.
"""
from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._rng import as_generator
from .errors import DegenerateLeadingEigenvalueError, NotConnectedError
from .spectral import canonical_sign, eig_sym

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph: node count plus a set of (i, j) pairs, i < j."""

    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one node")
        for i, j in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")
            if i == j:
                raise ValueError(f"self-loop ({i}, {i}) is not allowed")
            if i > j:
                raise ValueError(f"edge ({i}, {j}) must be stored with i < j")

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a graph, normalizing each pair to (min, max) order."""
        normalized = frozenset((min(i, j), max(i, j)) for i, j in edges)
        return cls(n=n, edges=normalized)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj


def adjacency(g: Graph) -> np.ndarray:
    """Dense symmetric 0/1 adjacency matrix of ``g``."""
    a = np.zeros((g.n, g.n), dtype=float)
    for i, j in g.edges:
        a[i, j] = 1.0
        a[j, i] = 1.0
    return a


def graph_hash(a: np.ndarray) -> str:
    """Short content hash of an adjacency matrix, for provenance records."""
    h = hashlib.sha256()
    arr = np.ascontiguousarray(np.asarray(a, dtype=float))
    h.update(str(arr.shape).encode())
    h.update(arr.tobytes())
    return h.hexdigest()[:12]


def erdos_renyi(n: int, p: float, rng) -> Graph:
    """G(n, p): each unordered pair is an edge independently with probability p.

    Args:
        n: node count, >= 1.
        p: edge probability in [0, 1].
        rng: seeded Generator (or int seed); output is deterministic per seed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    gen = as_generator(rng)
    rows, cols = np.triu_indices(n, k=1)
    mask = gen.random(rows.shape[0]) < p
    edges = frozenset(
        (int(i), int(j)) for i, j in zip(rows[mask], cols[mask])
    )
    return Graph(n=n, edges=edges)


def watts_strogatz(n: int, k: int, p: float, rng) -> Graph:
    """Small-world ring-rewiring model.

    Starts from a ring lattice where every node connects to k/2 neighbors on
    each side, then rewires the far endpoint of each lattice edge with
    probability p, scanning offsets 1..k/2 in increasing order. A rewire
    target must not create a self-loop or duplicate edge; after 100 failed
    draws the original edge is kept. Edge count is therefore always n*k/2.

    Args:
        n: node count.
        k: total lattice degree; must be even and < n.
        p: rewiring probability in [0, 1]. p=0 gives the deterministic
           k-regular ring.
        rng: seeded Generator (or int seed).
    """
    if k % 2 != 0:
        raise ValueError("k must be even")
    if not k < n:
        raise ValueError("k must be smaller than n")
    if k < 0:
        raise ValueError("k must be nonnegative")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    gen = as_generator(rng)
    edges: set[Edge] = set()
    for offset in range(1, k // 2 + 1):
        for i in range(n):
            j = (i + offset) % n
            edges.add((min(i, j), max(i, j)))
    for offset in range(1, k // 2 + 1):
        for i in range(n):
            j = (i + offset) % n
            if gen.random() >= p:
                continue
            original = (min(i, j), max(i, j))
            for _ in range(100):
                w = int(gen.integers(0, n))
                candidate = (min(i, w), max(i, w))
                if w != i and candidate not in edges:
                    edges.discard(original)
                    edges.add(candidate)
                    break
    return Graph(n=n, edges=frozenset(edges))


def is_connected(g: Graph) -> bool:
    """True iff the graph is a single connected component (BFS)."""
    if g.n == 1:
        return True
    adj = g.neighbors()
    seen = {0}
    queue = deque([0])
    while queue:
        node = queue.popleft()
        for nbr in adj[node]:
            if nbr not in seen:
                seen.add(nbr)
                queue.append(nbr)
    return len(seen) == g.n


def _matrix_connected(a: np.ndarray) -> bool:
    n = a.shape[0]
    if n == 1:
        return True
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        node = queue.popleft()
        for nbr in np.flatnonzero(a[node]):
            if not seen[nbr]:
                seen[nbr] = True
                queue.append(int(nbr))
    return bool(seen.all())


def eigenvector_centrality(a: np.ndarray) -> np.ndarray:
    """Unit-norm leading eigenvector of the adjacency matrix, all entries >= 0.

    Raises NotConnectedError for disconnected graphs and
    DegenerateLeadingEigenvalueError when the top eigengap is below 1e-12
    (excluded in exact arithmetic for connected graphs, guarded anyway).
    """
    a = np.asarray(a, dtype=float)
    if not _matrix_connected(a):
        raise NotConnectedError("eigenvector centrality requires a connected graph")
    if a.shape[0] == 1:
        return np.ones(1)
    decomposition = eig_sym(a)
    eigenvalues = decomposition.eigenvalues
    if eigenvalues[-1] - eigenvalues[-2] < 1e-12:
        raise DegenerateLeadingEigenvalueError(
            "top adjacency eigenvalue is not numerically simple"
        )
    u = canonical_sign(decomposition.eigenvectors[:, -1])
    return u / float(np.linalg.norm(u))


def write_edge_list(g: Graph, path) -> None:
    """Write the `# n=<N>` header plus one `i,j` line per edge, i < j, sorted."""
    lines = [f"# n={g.n}"]
    lines.extend(f"{i},{j}" for i, j in sorted(g.edges))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_edge_list(path) -> Graph:
    """Parse the edge-list format produced by :func:`write_edge_list`."""
    text = Path(path).read_text(encoding="utf-8")
    n = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.startswith("n="):
                n = int(body[2:])
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'i,j', got {line!r}")
        i, j = int(parts[0]), int(parts[1])
        edges.append((i, j))
    if n is None:
        raise ValueError(f"{path}: missing '# n=<N>' header")
    return Graph(n=n, edges=frozenset(edges))
