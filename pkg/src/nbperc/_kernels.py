"""Numba kernels for the percolation trial loops and the enumeration oracle.

The Monte Carlo kernels label clusters with union-find per trial; the
enumeration kernels walk all 2^n open sets with bitmask flood fill.  The
two routes share no connectivity code, so each can serve as a check on
the other.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True, inline="always")
def _uf_find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True, nogil=True, inline="always")
def _uf_union(parent, size, a, b):
    ra = _uf_find(parent, a)
    rb = _uf_find(parent, b)
    if ra == rb:
        return
    if size[ra] < size[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    size[ra] += size[rb]


@njit(cache=True, nogil=True)
def tau_count(opens, eu, ev, u, v):
    """Trials in which u and v are both open and in the same cluster."""
    trials, n = opens.shape
    parent = np.empty(n, np.int64)
    size = np.empty(n, np.int64)
    count = 0
    for t in range(trials):
        row = opens[t]
        if not (row[u] and row[v]):
            continue
        for i in range(n):
            parent[i] = i
            size[i] = 1
        for k in range(eu.size):
            a = eu[k]
            b = ev[k]
            if row[a] and row[b]:
                _uf_union(parent, size, a, b)
        if _uf_find(parent, u) == _uf_find(parent, v):
            count += 1
    return count


@njit(cache=True, nogil=True)
def chi_sums(opens, eu, ev, v):
    """Sum and sum of squares of |C(v)| over trials (0 when v closed)."""
    trials, n = opens.shape
    parent = np.empty(n, np.int64)
    size = np.empty(n, np.int64)
    total = 0.0
    total_sq = 0.0
    for t in range(trials):
        row = opens[t]
        if not row[v]:
            continue
        for i in range(n):
            parent[i] = i
            size[i] = 1
        for k in range(eu.size):
            a = eu[k]
            b = ev[k]
            if row[a] and row[b]:
                _uf_union(parent, size, a, b)
        s = size[_uf_find(parent, v)]
        total += s
        total_sq += s * s
    return total, total_sq


@njit(cache=True, nogil=True)
def reach_count(opens, eu, ev, root, targets):
    """Trials in which C(root) contains at least one open target vertex."""
    trials, n = opens.shape
    parent = np.empty(n, np.int64)
    size = np.empty(n, np.int64)
    count = 0
    for t in range(trials):
        row = opens[t]
        if not row[root]:
            continue
        for i in range(n):
            parent[i] = i
            size[i] = 1
        for k in range(eu.size):
            a = eu[k]
            b = ev[k]
            if row[a] and row[b]:
                _uf_union(parent, size, a, b)
        r0 = _uf_find(parent, root)
        for j in range(targets.size):
            w = targets[j]
            if row[w] and _uf_find(parent, w) == r0:
                count += 1
                break
    return count


@njit(cache=True, nogil=True)
def pair_counts(opens, eu, ev, pair_slot, counts):
    """Accumulate same-cluster counts for the pairs marked in pair_slot.

    pair_slot is a symmetric n x n int32 matrix mapping a vertex pair to
    its slot in counts, or -1 for pairs not tracked.  Open vertices are
    bucketed by cluster root with intrusive linked lists, so the work per
    trial is proportional to the number of open vertices plus the sum of
    squared cluster sizes.
    """
    trials, n = opens.shape
    parent = np.empty(n, np.int64)
    size = np.empty(n, np.int64)
    bucket_head = np.full(n, -1, np.int64)
    bucket_next = np.empty(n, np.int64)
    used_roots = np.empty(n, np.int64)
    for t in range(trials):
        row = opens[t]
        for i in range(n):
            parent[i] = i
            size[i] = 1
        for k in range(eu.size):
            a = eu[k]
            b = ev[k]
            if row[a] and row[b]:
                _uf_union(parent, size, a, b)
        used = 0
        for v in range(n):
            if row[v]:
                r = _uf_find(parent, v)
                if bucket_head[r] < 0:
                    used_roots[used] = r
                    used += 1
                bucket_next[v] = bucket_head[r]
                bucket_head[r] = v
        for ui in range(used):
            r = used_roots[ui]
            a = bucket_head[r]
            while a >= 0:
                b = bucket_next[a]
                while b >= 0:
                    slot = pair_slot[a, b]
                    if slot >= 0:
                        counts[slot] += 1
                    b = bucket_next[b]
                a = bucket_next[a]
            bucket_head[r] = -1


@njit(cache=True, nogil=True, inline="always")
def _popcount(mask):
    c = 0
    while mask:
        mask &= mask - 1
        c += 1
    return c


@njit(cache=True, nogil=True, inline="always")
def _flood(nbr, n, mask, start):
    """Bitmask of the open cluster containing start (start must be open)."""
    comp = 1 << start
    frontier = comp
    while frontier:
        nxt = 0
        for b in range(n):
            if (frontier >> b) & 1:
                nxt |= nbr[b]
        frontier = nxt & mask & ~comp
        comp |= frontier
    return comp


@njit(cache=True, nogil=True)
def enum_pair_probability(nbr, n, u, v, ptable):
    """Exact P(u and v open and connected) by summing over all open sets."""
    total = 0.0
    for mask in range(1 << n):
        if (mask >> u) & 1 == 0 or (mask >> v) & 1 == 0:
            continue
        comp = _flood(nbr, n, mask, v)
        if (comp >> u) & 1:
            total += ptable[_popcount(mask)]
    return total


@njit(cache=True, nogil=True)
def enum_cluster_mean(nbr, n, v, ptable):
    """Exact E|C(v)| by summing over all open sets (0 when v closed)."""
    total = 0.0
    for mask in range(1 << n):
        if (mask >> v) & 1 == 0:
            continue
        comp = _flood(nbr, n, mask, v)
        total += ptable[_popcount(mask)] * _popcount(comp)
    return total


@njit(cache=True, nogil=True)
def enum_reach_probability(nbr, n, root, target_mask, ptable):
    """Exact P(root open and C(root) meets target_mask)."""
    total = 0.0
    for mask in range(1 << n):
        if (mask >> root) & 1 == 0:
            continue
        comp = _flood(nbr, n, mask, root)
        if comp & target_mask:
            total += ptable[_popcount(mask)]
    return total
