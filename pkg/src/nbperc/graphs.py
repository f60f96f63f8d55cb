"""Simple undirected graphs with dense integer vertex ids.

Graphs are immutable after construction and safe to share across threads.
All construction funnels through build_graph, which enforces the simple,
symmetric-adjacency contract.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional, Sequence


class GraphError(ValueError):
    """Raised when an edge list violates the simple-graph contract."""


class Graph:
    """Immutable simple undirected graph.

    Attributes:
        n: number of vertices (ids 0 .. n-1).
        adj: tuple of sorted neighbour tuples, one per vertex.
        labels: optional map vertex id -> string (generator provenance).
        family, params, seed: descriptor fields for reports.
    """

    __slots__ = ("n", "adj", "labels", "family", "params", "seed")

    def __init__(self, n, adj, labels=None, family=None, params=None, seed=None):
        self.n = n
        self.adj = adj
        self.labels = labels
        self.family = family
        self.params = params
        self.seed = seed

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(nbrs) for nbrs in self.adj]

    @property
    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self.adj), default=0)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adj) // 2

    def edges(self):
        """Yield each undirected edge once as (u, v) with u < v."""
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def descriptor(self) -> dict:
        return {
            "vertex_count": self.n,
            "edge_count": self.edge_count,
            "family": self.family,
            "parameters": self.params,
            "seed": self.seed,
        }

    def __repr__(self):
        fam = f" {self.family}" if self.family else ""
        return f"<Graph{fam} n={self.n} m={self.edge_count}>"


def build_graph(
    edge_list: Iterable[Sequence[int]],
    vertex_count: Optional[int] = None,
    labels: Optional[dict] = None,
    family: Optional[str] = None,
    params: Optional[dict] = None,
    seed: Optional[int] = None,
) -> Graph:
    """Build a simple undirected graph from an edge list.

    Vertex ids must be non-negative integers.  Self-loops and duplicate
    edges (in either orientation) are rejected; the error names the
    offending pair.  vertex_count may exceed the largest id to allow
    isolated vertices.
    """
    seen = set()
    n = vertex_count or 0
    canon = []
    for pair in edge_list:
        u, v = int(pair[0]), int(pair[1])
        if u < 0 or v < 0:
            raise GraphError(f"negative vertex id in edge ({u}, {v})")
        if u == v:
            raise GraphError(f"self-loop ({u}, {v}) not allowed")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphError(f"duplicate edge ({u}, {v})")
        seen.add(key)
        canon.append(key)
        if u >= n:
            n = u + 1
        if v >= n:
            n = v + 1
    # if an edge names a vertex beyond the vertex_count hint, the larger count wins
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in canon:
        nbrs[u].append(v)
        nbrs[v].append(u)
    adj = tuple(tuple(sorted(lst)) for lst in nbrs)
    return Graph(n, adj, labels=labels, family=family, params=params, seed=seed)


def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} outside 0..{g.n - 1}")


def bfs_distances(g: Graph, source: int) -> list[int]:
    """BFS distances from source; -1 marks unreachable vertices."""
    _check_vertex(g, source)
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in g.adj[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def bfs_distance(g: Graph, u: int, v: int):
    """Shortest-path length between u and v, or None if unreachable."""
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        return 0
    d = bfs_distances(g, u)[v]
    return None if d < 0 else d


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex lists of the connected components, in discovery order."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(comp)
    return comps


def has_cycle(g: Graph) -> bool:
    """True iff the graph is not a forest (|E| exceeds |V| - #components)."""
    return g.edge_count != g.n - len(connected_components(g))


def write_edge_list(g: Graph, path) -> None:
    """Write one 'u v' line per edge; overwrites path."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# vertices {g.n}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def read_edge_list(path, vertex_count: Optional[int] = None) -> Graph:
    """Read the edge-list text format: two ids per line, '#' comments."""
    edges = []
    n_hint = vertex_count
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                # honour the optional "# vertices N" header we emit
                parts = stripped[1:].split()
                if n_hint is None and len(parts) == 2 and parts[0] == "vertices":
                    n_hint = int(parts[1])
                continue
            parts = stripped.split()
            if len(parts) != 2:
                raise GraphError(f"{path}:{lineno}: expected two vertex ids, got {stripped!r}")
            edges.append((int(parts[0]), int(parts[1])))
    return build_graph(edges, vertex_count=n_hint, family="edge-list", params={"path": str(path)})
