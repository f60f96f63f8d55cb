"""Arc universe and the non-backtracking (Hashimoto) operator of a graph.

Each undirected edge {u, v} contributes two arcs u->v and v->u.  The
Hashimoto matrix H is the adjacency matrix of the oriented line graph:
H[a, b] = 1 iff head(a) = tail(b) and b is not the reverse of a.  Arcs are
ordered by (tail, head), so matrices, Perron vectors, and reports are
byte-stable across runs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import sparse

from .graphs import Graph


@dataclass(frozen=True)
class ArcSet:
    """Directed-edge universe of a graph with the reverse pairing."""

    arcs: tuple                 # arc id -> (tail, head), sorted by (tail, head)
    reverse: tuple              # arc id -> id of the reversed arc (an involution)
    out_arcs: tuple             # vertex -> sorted tuple of arc ids leaving it

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    def index(self, tail: int, head: int) -> int:
        lo = self.out_arcs[tail]
        for a in lo:
            if self.arcs[a][1] == head:
                return a
        raise KeyError(f"no arc {tail}->{head}")


def build_arcs(g: Graph) -> ArcSet:
    """Enumerate both orientations of every edge, sorted by (tail, head)."""
    arcs = []
    for u in range(g.n):
        for v in g.adj[u]:
            arcs.append((u, v))
    index = {arc: i for i, arc in enumerate(arcs)}
    reverse = tuple(index[(v, u)] for (u, v) in arcs)
    out: list[list[int]] = [[] for _ in range(g.n)]
    for i, (u, _v) in enumerate(arcs):
        out[u].append(i)
    return ArcSet(arcs=tuple(arcs), reverse=reverse, out_arcs=tuple(tuple(o) for o in out))


class HashimotoMatrix:
    """Sparse 0/1 matrix over arcs encoding non-backtracking two-step walks."""

    def __init__(self, arc_set: ArcSet, rows: tuple):
        self.arc_set = arc_set
        self.rows = rows
        self._csr: dict = {}
        self._csr_t: dict = {}

    @property
    def dimension(self) -> int:
        return len(self.rows)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def to_csr(self, dtype=np.float64):
        key = np.dtype(dtype).name
        if key not in self._csr:
            indptr = np.zeros(self.dimension + 1, dtype=np.int64)
            for a, row in enumerate(self.rows):
                indptr[a + 1] = indptr[a] + len(row)
            indices = np.fromiter(
                (b for row in self.rows for b in row), dtype=np.int64, count=self.nnz
            )
            data = np.ones(self.nnz, dtype=dtype)
            self._csr[key] = sparse.csr_matrix(
                (data, indices, indptr), shape=(self.dimension, self.dimension)
            )
        return self._csr[key]

    def to_csr_transpose(self, dtype=np.float64):
        key = np.dtype(dtype).name
        if key not in self._csr_t:
            self._csr_t[key] = self.to_csr(dtype).T.tocsr()
        return self._csr_t[key]

    def write_coo(self, fh) -> None:
        """Coordinate text export: header 'dimension nnz', then 'row col 1' lines."""
        fh.write(f"{self.dimension} {self.nnz}\n")
        for a, row in enumerate(self.rows):
            for b in row:
                fh.write(f"{a} {b} 1\n")


def hashimoto(g: Graph) -> HashimotoMatrix:
    """Build the Hashimoto matrix of a graph.

    Row a lists every arc b with tail(b) = head(a) and b != reverse(a);
    the row degree is therefore deg(head(a)) - 1.
    """
    arcs = build_arcs(g)
    rows = []
    for a, (_u, v) in enumerate(arcs.arcs):
        rev = arcs.reverse[a]
        rows.append(tuple(b for b in arcs.out_arcs[v] if b != rev))
    return HashimotoMatrix(arcs, tuple(rows))


@dataclass
class StrongConnectivityReport:
    """Per-arc reverse-reachability in the oriented line graph.

    witness[a] is the length of the shortest connecting walk from arc a to
    its reverse, counted as the number of intermediate arcs strictly
    between them (a triangle detour gives 3); None if the reverse is not
    reached within the cap.
    """

    ell: int
    holds: bool
    witness: dict
    max_witness: Optional[int]  # smallest certifying ell when holds


def _reverse_return_lengths(h: HashimotoMatrix, cap: int) -> list:
    """Shortest connecting-walk length a ~> reverse(a) per arc, capped.

    BFS in the oriented line graph from each arc; a path with k
    intermediate arcs uses k + 1 OLG steps, so the search is capped at
    depth cap + 1.
    """
    n = h.dimension
    rows = h.rows
    reverse = h.arc_set.reverse
    out = [None] * n
    dist = [-1] * n
    for a in range(n):
        target = reverse[a]
        for i in range(n):
            dist[i] = -1
        dist[a] = 0
        queue = deque([a])
        found = -1
        while queue:
            x = queue.popleft()
            dx = dist[x] + 1
            if dx > cap + 1:
                break
            for b in rows[x]:
                if dist[b] < 0:
                    if b == target:
                        found = dx
                        queue.clear()
                        break
                    dist[b] = dx
                    queue.append(b)
        out[a] = (found - 1) if found > 0 else None
    return out


def strong_ell_connected(g: Graph, ell: int, h: Optional[HashimotoMatrix] = None) -> StrongConnectivityReport:
    """Check that every arc reaches its reverse within ell connecting steps."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if h is None:
        h = hashimoto(g)
    lengths = _reverse_return_lengths(h, ell)
    witness = {a: lengths[a] for a in range(h.dimension)}
    holds = all(l is not None and l <= ell for l in lengths)
    max_w = max(lengths) if holds and lengths else None
    return StrongConnectivityReport(ell=ell, holds=holds, witness=witness, max_witness=max_w)


def smallest_strong_ell(g: Graph, ell_max: int, h: Optional[HashimotoMatrix] = None):
    """Smallest ell certifying strong ell-connectivity, or None within ell_max."""
    if h is None:
        h = hashimoto(g)
    if h.dimension == 0:
        return None
    lengths = _reverse_return_lengths(h, ell_max)
    if any(l is None for l in lengths):
        return None
    return max(lengths)
