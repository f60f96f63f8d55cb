"""Locally finite graphs given by a neighbour rule, and their BFS truncations.

A LocalRuleGraph stands in for an infinite graph: a root key plus a pure
function mapping any vertex key to its finite neighbour set.  Truncation to
the BFS ball of radius t produces an ordinary finite Graph with dense ids in
BFS discovery order, so the balls of increasing radius are nested prefixes
of one another.
"""

from __future__ import annotations

import re
from collections import deque
from typing import Callable, Hashable, Optional, Sequence

from .graphs import Graph, bfs_distances


class LocalRuleError(ValueError):
    """Raised when a neighbour rule is found to be asymmetric."""


class LocalRuleGraph:
    """Root plus symmetric neighbour rule over hashable vertex keys.

    The rule must be deterministic (same key, same neighbour sequence) and
    symmetric; symmetry is checked lazily each time a key is expanded, and
    a violation raises LocalRuleError naming the offending pair.
    """

    def __init__(self, root: Hashable, neighbor_rule: Callable, name: Optional[str] = None):
        self.root = root
        self.neighbor_rule = neighbor_rule
        self.name = name
        self._cache: dict = {}

    def _raw_neighbors(self, key):
        found = self._cache.get(key)
        if found is None:
            seen = set()
            out = []
            for w in self.neighbor_rule(key):
                if w == key or w in seen:
                    continue
                seen.add(w)
                out.append(w)
            found = tuple(out)
            self._cache[key] = found
        return found

    def neighbors(self, key):
        """Neighbour keys of key, deduplicated, in rule order; symmetry-checked."""
        nbrs = self._raw_neighbors(key)
        for w in nbrs:
            if key not in self._raw_neighbors(w):
                raise LocalRuleError(
                    f"asymmetric neighbour rule: {w!r} in rule({key!r}) "
                    f"but {key!r} not in rule({w!r})"
                )
        return nbrs

    def ball(self, radius: int):
        """Induced subgraph on the BFS ball of the given radius.

        Returns (graph, keys) where keys[i] is the original key of dense
        vertex id i; ids follow BFS discovery order, so smaller balls are
        id-prefixes of larger ones.
        """
        if radius < 0:
            raise ValueError("radius must be non-negative")
        index = {self.root: 0}
        keys = [self.root]
        dist = [0]
        queue = deque([0])
        while queue:
            i = queue.popleft()
            if dist[i] == radius:
                continue
            for w in self.neighbors(keys[i]):
                if w not in index:
                    index[w] = len(keys)
                    keys.append(w)
                    dist.append(dist[i] + 1)
                    queue.append(index[w])
        edges = []
        for i, key in enumerate(keys):
            for w in self.neighbors(key):
                j = index.get(w)
                if j is not None and i < j:
                    edges.append((i, j))
        labels = {i: str(k) for i, k in enumerate(keys)}
        g = Graph(
            len(keys),
            _adjacency_from_edges(len(keys), edges),
            labels=labels,
            family=f"ball:{self.name}" if self.name else "ball",
            params={"radius": radius},
        )
        return g, keys


def _adjacency_from_edges(n, edges):
    nbrs = [[] for _ in range(n)]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    return tuple(tuple(sorted(lst)) for lst in nbrs)


def tree_rule(d: int) -> LocalRuleGraph:
    """Infinite d-regular tree; keys are child-index paths from the root."""
    if d < 2:
        raise ValueError("tree rule needs degree >= 2")

    def rule(key):
        if key == ():
            return tuple((i,) for i in range(d))
        return (key[:-1],) + tuple(key + (i,) for i in range(d - 1))

    return LocalRuleGraph((), rule, name=f"tree{d}")


def grid2d_rule() -> LocalRuleGraph:
    """The square lattice on integer pairs."""

    def rule(key):
        x, y = key
        return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))

    return LocalRuleGraph((0, 0), rule, name="grid2d")


def graph_rule(g: Graph, root: int = 0) -> LocalRuleGraph:
    """View a finite graph as a local rule rooted at a vertex."""

    def rule(key):
        return g.adj[key]

    return LocalRuleGraph(root, rule, name=f"graph[{g.family or 'custom'}]")


_RULES = {"grid2d": grid2d_rule, "z2": grid2d_rule}


def rule_from_name(name: str) -> LocalRuleGraph:
    """Resolve rule names used on the command line: treeD, grid2d/z2."""
    m = re.fullmatch(r"tree(\d+)", name)
    if m:
        return tree_rule(int(m.group(1)))
    if name in _RULES:
        return _RULES[name]()
    raise ValueError(f"unknown rule {name!r} (expected treeD, grid2d, or z2)")


class SubgraphSequence:
    """Increasing sequence of finite graphs G_t converging to a source graph.

    Built either from a LocalRuleGraph (G_t = BFS ball of radius t) or from
    an explicit nested list of graphs (ids of G_t must be an id-prefix of
    G_{t+1}).
    """

    def __init__(self, radii: Sequence[int], rule: Optional[LocalRuleGraph] = None,
                 graphs: Optional[Sequence[Graph]] = None):
        radii = list(radii)
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("truncation radii must be strictly increasing")
        if (rule is None) == (graphs is None):
            raise ValueError("provide exactly one of rule or graphs")
        if graphs is not None and len(graphs) != len(radii):
            raise ValueError("one graph per radius required")
        self.radii = radii
        self.rule = rule
        self.graphs = list(graphs) if graphs is not None else None
        self._balls: dict = {}

    @classmethod
    def from_rule(cls, rule: LocalRuleGraph, t_max: int, t_min: int = 0) -> "SubgraphSequence":
        return cls(range(t_min, t_max + 1), rule=rule)

    @classmethod
    def from_graphs(cls, graphs: Sequence[Graph], radii: Optional[Sequence[int]] = None) -> "SubgraphSequence":
        if radii is None:
            radii = range(len(graphs))
        return cls(radii, graphs=list(graphs))

    @classmethod
    def constant(cls, g: Graph, length: int) -> "SubgraphSequence":
        """A finite graph presented as its own constant sequence."""
        return cls(range(length), graphs=[g] * length)

    def truncate(self, t: int) -> Graph:
        """The member graph at radius t (t must be a declared radius)."""
        if t not in self.radii:
            raise ValueError(f"radius {t} not among declared radii {self.radii!r}")
        if self.graphs is not None:
            return self.graphs[self.radii.index(t)]
        if t not in self._balls:
            g, _keys = self.rule.ball(t)
            self._balls[t] = g
        return self._balls[t]


def truncate(sequence: SubgraphSequence, t: int) -> Graph:
    """Module-level alias for SubgraphSequence.truncate."""
    return sequence.truncate(t)


def ball_boundary(g: Graph, root: int, t: int) -> list[int]:
    """Vertices at BFS distance exactly t from root inside g."""
    return [v for v, d in enumerate(bfs_distances(g, root)) if d == t]
