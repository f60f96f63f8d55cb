"""Seeded site percolation: sampling, cluster statistics, and estimators.

Randomness is counter-based: the open/closed state of vertex v in trial t
is a pure function of (master_seed, t, v), so trials can run chunked and
threaded with bit-identical results.  Estimator aggregation is a
commutative monoid reduced in fixed chunk order.

Monte Carlo cluster labeling goes through union-find; the exact
enumeration oracle uses bitmask flood fill over all 2^n open sets.  The
two routes are independent implementations of connectivity.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import norm

from . import _kernels
from .graphs import Graph
from .localrules import SubgraphSequence, ball_boundary
from .rng import rand_u64_array, rand_u64_grid, substream
from .unionfind import DisjointSet

ENUM_BUDGET = 22
_CHUNK = 1 << 14


def worker_count() -> int:
    """Worker cap from NBPERC_THREADS (0 = auto, unset = 1)."""
    raw = os.environ.get("NBPERC_THREADS", "1")
    try:
        w = int(raw)
    except ValueError:
        raise ValueError(f"NBPERC_THREADS must be an integer, got {raw!r}") from None
    if w == 0:
        return os.cpu_count() or 1
    return max(1, w)


@dataclass
class Configuration:
    """One open/closed assignment; reproducible from (graph, p, trial_seed)."""

    open: np.ndarray
    p: float
    trial_seed: int


@dataclass
class ClusterLabeling:
    """Component ids over open vertices; closed vertices carry id -1."""

    labels: np.ndarray
    sizes: np.ndarray

    @property
    def n_components(self) -> int:
        return len(self.sizes)


@dataclass
class PercolationEstimate:
    quantity: str
    p: float
    trials: int
    point: float
    ci_low: float
    ci_high: float
    master_seed: int
    confidence: float
    params: dict = field(default_factory=dict)
    graph: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "graph": self.graph,
            "p": self.p,
            "trials": self.trials,
            "point": self.point,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "master_seed": self.master_seed,
            "confidence": self.confidence,
            "params": self.params,
        }


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")


def _open_threshold(p: float) -> int:
    return int(p * 2**64)


def sample(g: Graph, p: float, trial_seed: int) -> Configuration:
    """Open each vertex independently with probability p.

    Vertex v is open iff the (trial_seed, v) counter word falls below
    p * 2^64, so the configuration is independent of evaluation order.
    """
    _check_p(p)
    thr = _open_threshold(p)
    words = rand_u64_array(trial_seed, np.arange(g.n, dtype=np.uint64))
    if thr >= 2**64:
        opens = np.ones(g.n, dtype=np.bool_)
    elif thr <= 0:
        opens = np.zeros(g.n, dtype=np.bool_)
    else:
        opens = words < np.uint64(thr)
    return Configuration(open=opens, p=p, trial_seed=trial_seed)


def label_clusters(g: Graph, config: Configuration) -> ClusterLabeling:
    """Union-find labeling of the subgraph induced by open vertices."""
    if config.open.shape != (g.n,):
        raise ValueError("configuration does not match graph size")
    opens = config.open
    ds = DisjointSet(g.n)
    for u, v in g.edges():
        if opens[u] and opens[v]:
            ds.union(u, v)
    labels = np.full(g.n, -1, dtype=np.int64)
    root_id: dict = {}
    sizes = []
    for v in range(g.n):
        if not opens[v]:
            continue
        r = ds.find(v)
        if r not in root_id:
            root_id[r] = len(sizes)
            sizes.append(ds.size[r])
        labels[v] = root_id[r]
    return ClusterLabeling(labels=labels, sizes=np.array(sizes, dtype=np.int64))


def _edge_arrays(g: Graph):
    m = g.edge_count
    eu = np.empty(m, dtype=np.int64)
    ev = np.empty(m, dtype=np.int64)
    for k, (u, v) in enumerate(g.edges()):
        eu[k] = u
        ev[k] = v
    return eu, ev


def _open_block(n: int, p: float, master_seed: int, lo: int, hi: int) -> np.ndarray:
    """Open matrix for trials lo..hi-1; row t-lo belongs to trial t."""
    trial_seeds = rand_u64_array(master_seed, np.arange(lo, hi, dtype=np.uint64))
    thr = _open_threshold(p)
    if thr >= 2**64:
        return np.ones((hi - lo, n), dtype=np.bool_)
    if thr <= 0:
        return np.zeros((hi - lo, n), dtype=np.bool_)
    words = rand_u64_grid(trial_seeds, np.arange(n, dtype=np.uint64))
    return words < np.uint64(thr)


def _run_chunks(trials: int, fn):
    """Apply fn(lo, hi) over fixed-size trial chunks; results in chunk order."""
    ranges = [(lo, min(lo + _CHUNK, trials)) for lo in range(0, trials, _CHUNK)]
    workers = worker_count()
    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(lambda r: fn(r[0], r[1]), ranges))
    return [fn(lo, hi) for lo, hi in ranges]


def wilson_interval(successes: int, trials: int, confidence: float = 0.95):
    """Wilson score interval for a binomial proportion.

    The endpoints at 0 and at `trials` successes are exactly 0 and 1,
    matching the closed form rather than its rounded evaluation.
    """
    z = float(norm.ppf(0.5 + confidence / 2.0))
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


def _normal_interval(mean: float, sum_sq: float, trials: int, confidence: float):
    z = float(norm.ppf(0.5 + confidence / 2.0))
    if trials < 2:
        return max(0.0, mean), mean
    var = max(0.0, (sum_sq - trials * mean * mean) / (trials - 1))
    half = z * math.sqrt(var / trials)
    return max(0.0, mean - half), mean + half


def _validate_trial_args(g: Graph, p: float, trials: int, vertices: Sequence[int]) -> None:
    _check_p(p)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    for v in vertices:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} outside 0..{g.n - 1}")


def estimate_tau(g: Graph, p: float, u: int, v: int, trials: int, master_seed: int,
                 confidence: float = 0.95) -> PercolationEstimate:
    """Monte Carlo estimate of P(u and v open and in the same cluster).

    u == v is allowed and estimates P(v open) = p.
    """
    _validate_trial_args(g, p, trials, (u, v))
    eu, ev = _edge_arrays(g)

    def job(lo, hi):
        opens = _open_block(g.n, p, master_seed, lo, hi)
        return int(_kernels.tau_count(opens, eu, ev, u, v))

    successes = sum(_run_chunks(trials, job))
    lo_ci, hi_ci = wilson_interval(successes, trials, confidence)
    return PercolationEstimate(
        quantity="tau",
        p=p,
        trials=trials,
        point=successes / trials,
        ci_low=lo_ci,
        ci_high=hi_ci,
        master_seed=master_seed,
        confidence=confidence,
        params={"u": u, "v": v},
        graph=g.descriptor(),
    )


def estimate_chi(g: Graph, p: float, v: int, trials: int, master_seed: int,
                 confidence: float = 0.95) -> PercolationEstimate:
    """Monte Carlo estimate of E|C(v)| (cluster size 0 when v is closed)."""
    _validate_trial_args(g, p, trials, (v,))
    eu, ev_arr = _edge_arrays(g)

    def job(lo, hi):
        opens = _open_block(g.n, p, master_seed, lo, hi)
        return _kernels.chi_sums(opens, eu, ev_arr, v)

    parts = _run_chunks(trials, job)
    total = 0.0
    total_sq = 0.0
    for s, sq in parts:
        total += s
        total_sq += sq
    mean = total / trials
    lo_ci, hi_ci = _normal_interval(mean, total_sq, trials, confidence)
    return PercolationEstimate(
        quantity="chi",
        p=p,
        trials=trials,
        point=mean,
        ci_low=min(lo_ci, mean),
        ci_high=max(hi_ci, mean),
        master_seed=master_seed,
        confidence=confidence,
        params={"v": v},
        graph=g.descriptor(),
    )


def estimate_theta_proxy(seq: SubgraphSequence, t: int, p: float, trials: int,
                         master_seed: int, root: int = 0,
                         confidence: float = 0.95) -> PercolationEstimate:
    """Boundary-reach proxy for the percolation probability on the ball G_t.

    Estimates the probability that the open cluster of `root` inside the
    radius-t truncation contains a vertex at BFS distance exactly t from
    root.  This is a finite-volume stand-in; the radius is recorded with
    the estimate so no claim about an infinite cluster is implied.
    """
    g = seq.truncate(t)
    _validate_trial_args(g, p, trials, (root,))
    boundary = np.array(ball_boundary(g, root, t), dtype=np.int64)
    eu, ev = _edge_arrays(g)

    def job(lo, hi):
        opens = _open_block(g.n, p, master_seed, lo, hi)
        if boundary.size == 0:
            return 0
        return int(_kernels.reach_count(opens, eu, ev, root, boundary))

    successes = sum(_run_chunks(trials, job))
    lo_ci, hi_ci = wilson_interval(successes, trials, confidence)
    return PercolationEstimate(
        quantity="theta_proxy",
        p=p,
        trials=trials,
        point=successes / trials,
        ci_low=lo_ci,
        ci_high=hi_ci,
        master_seed=master_seed,
        confidence=confidence,
        params={"root": root, "t": t, "boundary_size": int(boundary.size)},
        graph=g.descriptor(),
    )


def pair_connectivity_counts(g: Graph, p: float, pairs: Sequence, trials: int,
                             master_seed: int) -> np.ndarray:
    """Same-cluster trial counts for many vertex pairs from shared trials.

    All pairs are measured on the same trial stream, which keeps batch
    verification cheap; counts[k] corresponds to pairs[k].
    """
    _validate_trial_args(g, p, trials, [w for pr in pairs for w in pr])
    eu, ev = _edge_arrays(g)
    slot = np.full((g.n, g.n), -1, dtype=np.int32)
    for k, (a, b) in enumerate(pairs):
        if a == b:
            raise ValueError("pair endpoints must differ")
        slot[a, b] = k
        slot[b, a] = k

    def job(lo, hi):
        opens = _open_block(g.n, p, master_seed, lo, hi)
        counts = np.zeros(len(pairs), dtype=np.int64)
        _kernels.pair_counts(opens, eu, ev, slot, counts)
        return counts

    parts = _run_chunks(trials, job)
    total = np.zeros(len(pairs), dtype=np.int64)
    for c in parts:
        total += c
    return total


def _enum_setup(g: Graph, p: float):
    _check_p(p)
    if g.n > ENUM_BUDGET:
        raise ValueError(
            f"exact enumeration is limited to {ENUM_BUDGET} vertices, got {g.n}"
        )
    nbr = np.zeros(g.n, dtype=np.int64)
    for u in range(g.n):
        m = 0
        for v in g.adj[u]:
            m |= 1 << v
        nbr[u] = m
    ptable = np.array([p**k * (1.0 - p) ** (g.n - k) for k in range(g.n + 1)])
    return nbr, ptable


def exact_tau(g: Graph, p: float, u: int, v: int) -> float:
    """Exact P(u and v open and connected) by enumeration over 2^n open sets."""
    for w in (u, v):
        if not 0 <= w < g.n:
            raise ValueError(f"vertex {w} outside 0..{g.n - 1}")
    nbr, ptable = _enum_setup(g, p)
    return float(_kernels.enum_pair_probability(nbr, g.n, u, v, ptable))


def exact_chi(g: Graph, p: float, v: int) -> float:
    """Exact E|C(v)| by enumeration over 2^n open sets."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} outside 0..{g.n - 1}")
    nbr, ptable = _enum_setup(g, p)
    return float(_kernels.enum_cluster_mean(nbr, g.n, v, ptable))


def exact_reach(g: Graph, p: float, root: int, targets: Sequence[int]) -> float:
    """Exact P(root open and C(root) meets targets) by enumeration."""
    if not 0 <= root < g.n:
        raise ValueError(f"vertex {root} outside 0..{g.n - 1}")
    tmask = 0
    for w in targets:
        if not 0 <= w < g.n:
            raise ValueError(f"vertex {w} outside 0..{g.n - 1}")
        tmask |= 1 << w
    if tmask == 0:
        return 0.0
    nbr, ptable = _enum_setup(g, p)
    return float(_kernels.enum_reach_probability(nbr, g.n, root, tmask, ptable))


def exact_theta_proxy(seq: SubgraphSequence, t: int, p: float, root: int = 0) -> float:
    """Exact boundary-reach probability on the ball G_t (enumeration oracle)."""
    g = seq.truncate(t)
    boundary = ball_boundary(g, root, t)
    return exact_reach(g, p, root, boundary)


def trial_configuration(g: Graph, p: float, master_seed: int, t: int) -> Configuration:
    """The exact configuration estimators use for trial t of master_seed."""
    return sample(g, p, substream(master_seed, t))
