"""Network topologies (direct, ring, grid, torus), deterministic BFS
shortest-path routing, and effective-distance computation.

Nodes are integers for direct/ring topologies and (row, col) tuples for
grid/torus. All nodes are trusted relays that never fail; intermediate
nodes act only as noise points on the route. BFS breaks ties by expanding
the smallest node index first, so the returned path is reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Union

NodeId = Union[int, tuple[int, int]]

KINDS = ("direct", "ring", "grid", "torus")


class NoPathError(ValueError):
    """The endpoints are not connected."""


@dataclass(frozen=True)
class TopologySpec:
    """Declarative topology description plus the per-link fiber length."""

    kind: str
    n: int = 0            # ring size
    rows: int = 0         # grid/torus
    cols: int = 0
    link_km: float = 20.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"topology.kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "ring" and self.n < 2:
            raise ValueError(f"ring needs n >= 2, got {self.n}")
        if self.kind in ("grid", "torus") and self.rows * self.cols < 2:
            raise ValueError(f"{self.kind} needs rows*cols >= 2, "
                             f"got {self.rows}x{self.cols}")
        if self.link_km < 0.0:
            raise ValueError(f"link_km must be non-negative, got {self.link_km!r}")

    @staticmethod
    def direct(link_km: float = 20.0) -> "TopologySpec":
        return TopologySpec("direct", link_km=link_km)

    @staticmethod
    def ring(n: int, link_km: float = 20.0) -> "TopologySpec":
        return TopologySpec("ring", n=n, link_km=link_km)

    @staticmethod
    def grid(rows: int, cols: int, link_km: float = 20.0) -> "TopologySpec":
        return TopologySpec("grid", rows=rows, cols=cols, link_km=link_km)

    @staticmethod
    def torus(rows: int, cols: int, link_km: float = 20.0) -> "TopologySpec":
        return TopologySpec("torus", rows=rows, cols=cols, link_km=link_km)

    @property
    def label(self) -> str:
        if self.kind == "direct":
            return "direct"
        if self.kind == "ring":
            return f"ring({self.n})"
        return f"{self.kind}({self.rows}x{self.cols})"


@dataclass(frozen=True)
class Graph:
    """Immutable adjacency structure; neighbor lists are sorted."""

    adjacency: dict[NodeId, tuple[NodeId, ...]]
    link_km: float
    label: str

    def neighbors(self, node: NodeId) -> tuple[NodeId, ...]:
        return self.adjacency[node]


@dataclass(frozen=True)
class Path:
    """A hop sequence from Alice to Bob with its attenuation-relevant length."""

    nodes: tuple[NodeId, ...]
    hops: int
    effective_km: float

    def __post_init__(self) -> None:
        if self.hops != len(self.nodes) - 1:
            raise ValueError("hops must equal len(nodes) - 1")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("path must not repeat nodes")


def build_topology(spec: TopologySpec) -> Graph:
    """Adjacency for the four supported layouts.

    direct: two nodes, one edge. ring: a cycle. grid: 4-neighbor lattice.
    torus: grid plus row and column wrap-around edges.
    """
    adjacency: dict[NodeId, set[NodeId]] = {}

    def connect(a: NodeId, b: NodeId) -> None:
        adjacency.setdefault(a, set()).add(b)
        adjacency.setdefault(b, set()).add(a)

    if spec.kind == "direct":
        connect(0, 1)
    elif spec.kind == "ring":
        for i in range(spec.n):
            connect(i, (i + 1) % spec.n)
    else:
        wrap = spec.kind == "torus"
        for r in range(spec.rows):
            for c in range(spec.cols):
                adjacency.setdefault((r, c), set())
                if r + 1 < spec.rows:
                    connect((r, c), (r + 1, c))
                elif wrap and spec.rows > 2:
                    connect((r, c), (0, c))
                if c + 1 < spec.cols:
                    connect((r, c), (r, c + 1))
                elif wrap and spec.cols > 2:
                    connect((r, c), (r, 0))

    frozen = {node: tuple(sorted(nbrs)) for node, nbrs in adjacency.items()}
    return Graph(frozen, spec.link_km, spec.label)


def endpoints(spec: TopologySpec) -> tuple[NodeId, NodeId]:
    """Alice and Bob placements.

    Grid/torus: opposite corners (0,0) and (rows-1, cols-1). Ring: node 0
    and its antipode floor(n/2), the worst-case separation. Direct: 0 and 1.
    """
    if spec.kind == "direct":
        return 0, 1
    if spec.kind == "ring":
        return 0, spec.n // 2
    return (0, 0), (spec.rows - 1, spec.cols - 1)


def bfs_shortest_path(graph: Graph, alice: NodeId, bob: NodeId) -> Path:
    """Minimal-hop path from ``alice`` to ``bob``.

    Deterministic: the frontier expands neighbors in sorted order, so ties
    always resolve toward the smallest node index.
    """
    if alice not in graph.adjacency or bob not in graph.adjacency:
        raise NoPathError(f"endpoint not in graph: {alice!r} or {bob!r}")
    if alice == bob:
        return Path((alice,), 0, 0.0)
    parent: dict[NodeId, NodeId] = {alice: alice}
    queue: deque[NodeId] = deque([alice])
    while queue:
        node = queue.popleft()
        for nbr in graph.neighbors(node):
            if nbr in parent:
                continue
            parent[nbr] = node
            if nbr == bob:
                nodes = [bob]
                while nodes[-1] != alice:
                    nodes.append(parent[nodes[-1]])
                nodes.reverse()
                hops = len(nodes) - 1
                return Path(tuple(nodes), hops, hops * graph.link_km)
            queue.append(nbr)
    raise NoPathError(f"no path from {alice!r} to {bob!r}")


def effective_distance(path: Path, link_km: float) -> float:
    """Hop count times per-link length, the distance driving attenuation."""
    return path.hops * link_km


def route(spec: TopologySpec) -> Path:
    """Convenience: build the topology and return the Alice-Bob BFS path."""
    graph = build_topology(spec)
    alice, bob = endpoints(spec)
    return bfs_shortest_path(graph, alice, bob)
