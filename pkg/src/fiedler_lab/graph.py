"""Simple undirected graphs, generators and BFS distance machinery."""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .rng import SplitMix64

UNREACHABLE = math.inf


class GraphError(ValueError):
    """Invalid graph construction (self-loop, duplicate edge, bad vertex)."""


class DisconnectedGraphError(GraphError):
    """Operation requires a connected graph."""


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    Build instances with :meth:`from_edges`, which validates the edge list;
    the raw constructor trusts its arguments.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    edge_count: int

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 1:
            raise GraphError(f"vertex count must be >= 1, got {n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop ({u}, {v})")
            if v in nbrs[u]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
            m += 1
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs), m)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    @property
    def max_degree(self) -> int:
        return max(self.degrees())

    def with_edge(self, u: int, v: int) -> "Graph":
        return Graph.from_edges(self.n, self.edges() + [(u, v)])

    def without_edge(self, u: int, v: int) -> "Graph":
        key = (min(u, v), max(u, v))
        rest = [e for e in self.edges() if e != key]
        if len(rest) == self.edge_count:
            raise GraphError(f"no edge ({u}, {v})")
        return Graph.from_edges(self.n, rest)


@dataclass(frozen=True)
class RoseParams:
    """Shape of a Fiedler rose: ``p`` petals and an ``s``-vertex stem.

    Vertex roles (0-based): the path ``0..3+s`` runs from the leaf tip (0)
    through the junction (3) to the stem tip (``3+s``); the hub ``4+s`` hangs
    off the junction and carries the petals ``5+s..4+s+p``. The 1-based
    MATLAB index of any vertex is its id plus one, so the hub is ``r = 5+s``.
    """

    p: int
    s: int

    def __post_init__(self) -> None:
        if self.p < 1 or self.s < 1:
            raise GraphError(f"rose needs p >= 1 and s >= 1, got p={self.p}, s={self.s}")

    @property
    def n(self) -> int:
        return 5 + self.p + self.s

    leaf_tip = 0
    junction = 3

    @property
    def stem_tip(self) -> int:
        return 3 + self.s

    @property
    def hub(self) -> int:
        return 4 + self.s

    @property
    def petals(self) -> range:
        return range(self.hub + 1, self.hub + self.p + 1)

    @property
    def path_vertices(self) -> range:
        return range(0, self.stem_tip + 1)


def build_rose(params: RoseParams) -> Graph:
    hub = params.hub
    edges = [(i, i + 1) for i in range(params.stem_tip)]
    edges.append((params.junction, hub))
    edges.extend((hub, j) for j in params.petals)
    return Graph.from_edges(params.n, edges)


def build_path(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"path needs n >= 1, got {n}")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def build_star(k: int) -> Graph:
    if k < 1:
        raise GraphError(f"star needs k >= 1, got {k}")
    return Graph.from_edges(k + 1, [(0, j) for j in range(1, k + 1)])


def build_complete(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def prufer_decode(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    """Edges of the labeled tree on ``n`` vertices with Prüfer code ``seq``."""
    if n == 1:
        return []
    if len(seq) != n - 2:
        raise GraphError(f"Prüfer sequence for n={n} must have length {n - 2}")
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def random_tree(n: int, seed: int) -> Graph:
    """Uniform random labeled tree: Prüfer code drawn from ``SplitMix64(seed)``.

    Entry ``i`` of the code is ``below(n)`` of the i-th draw, so the result is a
    pure function of ``(n, seed)``.
    """
    if n < 1:
        raise GraphError(f"tree needs n >= 1, got {n}")
    rng = SplitMix64(seed)
    seq = [rng.below(n) for _ in range(max(n - 2, 0))]
    return Graph.from_edges(n, prufer_decode(seq, n))


@dataclass(frozen=True)
class DistanceReport:
    source: int
    dist: tuple[float, ...]


def bfs_distances(g: Graph, source: int) -> DistanceReport:
    if not 0 <= source < g.n:
        raise GraphError(f"source {source} out of range for n={g.n}")
    dist: list[float] = [UNREACHABLE] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in g.adjacency[u]:
            if dist[w] == UNREACHABLE:
                dist[w] = du
                queue.append(w)
    return DistanceReport(source, tuple(dist))


def is_connected(g: Graph) -> bool:
    return UNREACHABLE not in bfs_distances(g, 0).dist


def is_tree(g: Graph) -> bool:
    return g.edge_count == g.n - 1 and is_connected(g)


def all_pairs_distances(g: Graph) -> list[tuple[float, ...]]:
    return [bfs_distances(g, v).dist for v in range(g.n)]


@dataclass(frozen=True)
class DiameterResult:
    diameter: int
    pairs: tuple[tuple[int, int], ...]


def diameter(g: Graph, dist: list[tuple[float, ...]] | None = None) -> DiameterResult:
    """Exact diameter and every unordered pair ``(u, v)``, ``u < v``, attaining it."""
    if dist is None:
        dist = all_pairs_distances(g)
    if UNREACHABLE in dist[0]:
        raise DisconnectedGraphError("diameter is undefined for a disconnected graph")
    best = 0
    pairs: list[tuple[int, int]] = []
    for u in range(g.n):
        row = dist[u]
        for v in range(u + 1, g.n):
            d = row[v]
            if d > best:
                best = int(d)
                pairs = [(u, v)]
            elif d == best:
                pairs.append((u, v))
    if best == 0:
        pairs = []
    return DiameterResult(best, tuple(pairs))
