"""Spectral bounds on percolation transitions and pairwise connectivity.

Computes the reciprocal growth-rate lower bounds on the susceptibility and
percolation thresholds, the reciprocal rho_0 lower bound on the uniqueness
transition, the explicit per-pair connectivity envelope available when the
oriented line graph is strongly ell-connected and p * rho(H) < 1, and an
exponential-decay diagnostic fit.  Each report embeds the inputs used so
results can be audited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .graphs import Graph, bfs_distances
from .growth import GraphGrowth, growth_for_graph
from .hashimoto import HashimotoMatrix, hashimoto, smallest_strong_ell
from .localrules import SubgraphSequence
from .percolation import pair_connectivity_counts, wilson_interval
from .rng import shuffled, substream
from .spectral import SpectralResult, spectral_radius


def _reciprocal(x: float) -> float:
    """1/x with the 1/0 = +inf convention used by the threshold bounds."""
    return math.inf if x <= 0.0 else 1.0 / x


def _ordered(a: float, b: float) -> bool:
    """a <= b up to the numerical noise of the growth estimators."""
    if math.isinf(b):
        return True
    return a <= b * (1.0 + 1e-9) + 1e-12


@dataclass
class RhoSequenceReport:
    """Spectral radii rho(H_t) along an increasing subgraph sequence."""

    radii: list
    rho_t: list
    vertex_counts: list
    arc_counts: list
    d_max_t: list
    monotone: bool
    rho_0_estimate: float
    converged: bool
    plateau_tol: float
    partial: bool = False


def rho_sequence(seq: SubgraphSequence, t_max: Optional[int] = None,
                 plateau_tol: float = 1e-3, spectral_tol: float = 1e-10,
                 arc_budget: int = 200_000) -> RhoSequenceReport:
    """rho(H_t) for each declared radius up to t_max, with a plateau detector.

    The sequence is flagged converged when the last three successive steps
    are all below plateau_tol; rho_0_estimate is the last computed value,
    not an extrapolation.  Truncations whose arc count exceeds arc_budget
    are skipped and the report is marked partial.
    """
    radii = [t for t in seq.radii if t_max is None or t <= t_max]
    if not radii:
        raise ValueError("no radii at or below t_max")
    rho_t: list = []
    used: list = []
    nv: list = []
    na: list = []
    dmax: list = []
    partial = False
    for t in radii:
        g = seq.truncate(t)
        h = hashimoto(g)
        if h.dimension > arc_budget:
            partial = True
            break
        res = spectral_radius(h, tol=spectral_tol)
        used.append(t)
        rho_t.append(res.rho)
        nv.append(g.n)
        na.append(h.dimension)
        dmax.append(g.max_degree)
    monotone = all(b >= a - 1e-9 for a, b in zip(rho_t, rho_t[1:]))
    steps = [abs(b - a) for a, b in zip(rho_t, rho_t[1:])]
    converged = len(steps) >= 3 and all(s < plateau_tol for s in steps[-3:])
    return RhoSequenceReport(
        radii=used,
        rho_t=rho_t,
        vertex_counts=nv,
        arc_counts=na,
        d_max_t=dmax,
        monotone=monotone,
        rho_0_estimate=rho_t[-1] if rho_t else 0.0,
        converged=converged,
        plateau_tol=plateau_tol,
        partial=partial,
    )


@dataclass
class ThresholdBounds:
    """Reciprocal lower bounds on the three percolation transitions.

    p_T_lower = 1 / (sup-limsup growth), p_c_lower = 1 / (sup-liminf
    growth), p_u_lower = 1 / rho_0; 1/0 is reported as +inf.  The growth
    and rho_0 inputs are embedded for audit.  ordering_ok records whether
    p_T_lower <= p_c_lower <= p_u_lower up to estimator noise (relative
    1e-9); the raw bounds are reported unclipped either way.
    """

    p_T_lower: float
    p_c_lower: float
    p_u_lower: float
    gr1_liminf: float
    gr1_limsup: float
    rho_0: float
    ordering_ok: bool
    source: dict
    growth: Optional[GraphGrowth] = None
    rho_report: Optional[RhoSequenceReport] = None
    spectral: Optional[SpectralResult] = None

    def summary_dict(self) -> dict:
        return {
            "p_T_lower": self.p_T_lower,
            "p_c_lower": self.p_c_lower,
            "p_u_lower": self.p_u_lower,
            "gr1_liminf": self.gr1_liminf,
            "gr1_limsup": self.gr1_limsup,
            "rho_0": self.rho_0,
            "ordering_ok": self.ordering_ok,
        }


def threshold_bounds(source: Union[Graph, SubgraphSequence], m_max: int = 200,
                     window: Optional[int] = None, seed_sample: Optional[int] = None,
                     plateau_tol: float = 1e-3, spectral_tol: float = 1e-10,
                     arc_budget: int = 200_000) -> ThresholdBounds:
    """Threshold lower bounds for a finite graph or a subgraph sequence.

    For a finite graph, rho_0 is rho(H) (the graph is its own constant
    sequence).  For a sequence, growth is estimated on the largest
    affordable truncation and rho_0 from the full rho(H_t) sequence.
    """
    if isinstance(source, Graph):
        g = source
        spec = spectral_radius(hashimoto(g), tol=spectral_tol)
        rho_0 = spec.rho
        rho_report = None
        src = {"kind": "graph", "graph": g.descriptor()}
    else:
        rho_report = rho_sequence(source, plateau_tol=plateau_tol,
                                  spectral_tol=spectral_tol, arc_budget=arc_budget)
        if not rho_report.radii:
            raise ValueError(
                f"arc budget {arc_budget} is below the first truncation's arc count"
            )
        g = source.truncate(rho_report.radii[-1])
        spec = None
        rho_0 = rho_report.rho_0_estimate
        src = {
            "kind": "sequence",
            "largest_radius": rho_report.radii[-1],
            "graph": g.descriptor(),
        }
    growth = growth_for_graph(g, p_norm=1, m_max=m_max, window=window,
                              seed_sample=seed_sample)
    p_t = _reciprocal(growth.sup_limsup)
    p_c = _reciprocal(growth.sup_liminf)
    p_u = _reciprocal(rho_0)
    ordering_ok = _ordered(p_t, p_c) and _ordered(p_c, p_u)
    return ThresholdBounds(
        p_T_lower=p_t,
        p_c_lower=p_c,
        p_u_lower=p_u,
        gr1_liminf=growth.sup_liminf,
        gr1_limsup=growth.sup_limsup,
        rho_0=rho_0,
        ordering_ok=ordering_ok,
        source=src,
        growth=growth,
        rho_report=rho_report,
        spectral=spec,
    )


@dataclass
class ConnectivityEnvelope:
    """Per-pair connectivity upper bounds on a finite graph.

    For each unordered pair (i, j):
        bound = max(deg i, deg j) * (1 + rho^ell) / (1 - lam) * lam^d(i, j)
    with lam = p * rho(H) < 1 and ell the smallest certified strong
    connectivity length.  Pairs in different components get bound 0.
    """

    p: float
    rho: float
    ell: int
    lam: float
    pair_i: np.ndarray
    pair_j: np.ndarray
    deg_i: np.ndarray
    deg_j: np.ndarray
    dist: np.ndarray          # -1 for unreachable pairs
    prefactor: np.ndarray     # max(deg i, deg j) * (1 + rho^ell) / (1 - lam)
    bound: np.ndarray
    applicable: bool = True

    @property
    def n_pairs(self) -> int:
        return len(self.pair_i)


@dataclass
class EnvelopeInapplicable:
    """Returned when an envelope gate fails; this is a value, not an error."""

    failed_gate: str          # "strong-ell-connectivity" or "lambda"
    detail: str
    p: float
    rho: float
    ell_max: int
    applicable: bool = False


def connectivity_envelope(g: Graph, p: float, ell_max: int = 64,
                          spectral_tol: float = 1e-10,
                          h: Optional[HashimotoMatrix] = None):
    """Per-pair envelope, or the named failed gate when it does not apply."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if h is None:
        h = hashimoto(g)
    spec = spectral_radius(h, tol=spectral_tol)
    rho = spec.rho
    ell = smallest_strong_ell(g, ell_max, h=h)
    if ell is None:
        return EnvelopeInapplicable(
            failed_gate="strong-ell-connectivity",
            detail=f"some arc does not reach its reverse within {ell_max} steps",
            p=p,
            rho=rho,
            ell_max=ell_max,
        )
    lam = p * rho
    if lam >= 1.0:
        return EnvelopeInapplicable(
            failed_gate="lambda",
            detail=f"lambda = p * rho = {lam:.6g} >= 1",
            p=p,
            rho=rho,
            ell_max=ell_max,
        )
    degs = g.degrees()
    n_pairs = g.n * (g.n - 1) // 2
    pi = np.empty(n_pairs, dtype=np.int64)
    pj = np.empty(n_pairs, dtype=np.int64)
    di = np.empty(n_pairs, dtype=np.int64)
    dj = np.empty(n_pairs, dtype=np.int64)
    dist = np.empty(n_pairs, dtype=np.int64)
    k = 0
    for i in range(g.n):
        d_from_i = bfs_distances(g, i)
        for j in range(i + 1, g.n):
            pi[k] = i
            pj[k] = j
            di[k] = degs[i]
            dj[k] = degs[j]
            dist[k] = d_from_i[j]
            k += 1
    maxdeg = np.maximum(di, dj).astype(np.float64)
    prefactor = maxdeg * (1.0 + rho**ell) / (1.0 - lam)
    bound = np.where(dist >= 0, prefactor * lam ** np.maximum(dist, 0), 0.0)
    return ConnectivityEnvelope(
        p=p, rho=rho, ell=ell, lam=lam,
        pair_i=pi, pair_j=pj, deg_i=di, deg_j=dj, dist=dist,
        prefactor=prefactor, bound=bound,
    )


@dataclass
class EnvelopeVerification:
    """Monte Carlo check of an envelope: one verdict per measured pair.

    A pair holds iff the Wilson lower confidence limit of tau-hat is at or
    below the bound; an upper bound should not be refuted by sampling
    noise, so violations require the whole interval above it.
    """

    p: float
    trials: int
    master_seed: int
    confidence: float
    pair_i: np.ndarray
    pair_j: np.ndarray
    dist: np.ndarray
    bound: np.ndarray
    tau_hat: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    holds: np.ndarray
    violations: int
    pairs_measured: int
    pairs_total: int


def verify_envelope(g: Graph, p: float, envelope: ConnectivityEnvelope, trials: int,
                    master_seed: int, confidence: float = 0.95,
                    max_pairs: int = 20000) -> EnvelopeVerification:
    """Estimate tau for the envelope's pairs and count bound violations.

    Beyond max_pairs, a deterministic seeded subset of pairs is measured.
    """
    if not envelope.applicable:
        raise ValueError("envelope is not applicable; nothing to verify")
    if envelope.p != p:
        raise ValueError(f"envelope was computed for p={envelope.p}, got p={p}")
    idx = list(range(envelope.n_pairs))
    if len(idx) > max_pairs:
        idx = sorted(shuffled(idx, substream(master_seed, 0xE17))[:max_pairs])
    pairs = [(int(envelope.pair_i[k]), int(envelope.pair_j[k])) for k in idx]
    counts = pair_connectivity_counts(g, p, pairs, trials, master_seed)
    tau_hat = counts / trials
    lo = np.empty(len(idx))
    hi = np.empty(len(idx))
    for k, c in enumerate(counts):
        lo[k], hi[k] = wilson_interval(int(c), trials, confidence)
    bound = envelope.bound[idx]
    holds = lo <= bound
    return EnvelopeVerification(
        p=p,
        trials=trials,
        master_seed=master_seed,
        confidence=confidence,
        pair_i=envelope.pair_i[idx],
        pair_j=envelope.pair_j[idx],
        dist=envelope.dist[idx],
        bound=bound,
        tau_hat=tau_hat,
        ci_low=lo,
        ci_high=hi,
        holds=holds,
        violations=int((~holds).sum()),
        pairs_measured=len(idx),
        pairs_total=envelope.n_pairs,
    )


@dataclass
class DecayFit:
    """Least-squares fit of ln(tau-hat) against graph distance.

    Diagnostic evidence of exponential connectivity decay; base is
    exp(slope), to compare with lam = p * rho(H).  prefactor_floor is the
    reported floor d_max / (1 - lam) on the decay constant; it is a floor,
    not an envelope, and is never used as a bound.
    """

    defined: bool
    slope: Optional[float]
    intercept: Optional[float]
    base: Optional[float]
    lam: float
    rho: float
    prefactor_floor: Optional[float]
    pairs_used: int
    p: float
    trials: int
    master_seed: int
    distances: list = field(default_factory=list)
    tau_hats: list = field(default_factory=list)


def decay_diagnostic(g: Graph, p: float, trials: int, master_seed: int,
                     max_sources: int = 12, pairs_per_distance: int = 24,
                     spectral_tol: float = 1e-10) -> DecayFit:
    """Fit the empirical decay of tau-hat with distance on one graph.

    Pairs are sampled deterministically from master_seed: BFS from a
    seeded set of source vertices, then up to pairs_per_distance pairs per
    distance value.  Pairs with tau-hat = 0 are excluded from the log fit;
    if every pair is zero the fit is reported undefined.
    """
    spec = spectral_radius(hashimoto(g), tol=spectral_tol)
    lam = p * spec.rho
    sources = shuffled(range(g.n), substream(master_seed, 0xDECA))[:max_sources]
    by_distance: dict = {}
    seen = set()
    for s in sources:
        dist = bfs_distances(g, s)
        for v in range(g.n):
            d = dist[v]
            if d < 1 or (s, v) in seen or (v, s) in seen:
                continue
            seen.add((s, v))
            by_distance.setdefault(d, []).append((s, v))
    pairs = []
    dists = []
    for d in sorted(by_distance):
        bucket = by_distance[d]
        if len(bucket) > pairs_per_distance:
            bucket = shuffled(bucket, substream(master_seed, 0xD0 + d))[:pairs_per_distance]
        for pr in bucket:
            pairs.append(pr)
            dists.append(d)
    counts = pair_connectivity_counts(g, p, pairs, trials, master_seed)
    tau_hat = counts / trials
    dist_arr = np.array(dists, dtype=np.float64)
    mask = tau_hat > 0
    floor = None if lam >= 1.0 else g.max_degree / (1.0 - lam)
    # a slope needs at least two pairs at two distinct distances
    if mask.sum() < 2 or len(set(dist_arr[mask])) < 2:
        return DecayFit(
            defined=False, slope=None, intercept=None, base=None,
            lam=lam, rho=spec.rho, prefactor_floor=floor,
            pairs_used=int(mask.sum()), p=p, trials=trials, master_seed=master_seed,
            distances=[int(d) for d in dist_arr[mask]],
            tau_hats=[float(t) for t in tau_hat[mask]],
        )
    slope, intercept = np.polyfit(dist_arr[mask], np.log(tau_hat[mask]), 1)
    return DecayFit(
        defined=True,
        slope=float(slope),
        intercept=float(intercept),
        base=float(math.exp(slope)),
        lam=lam,
        rho=spec.rho,
        prefactor_floor=floor,
        pairs_used=int(mask.sum()),
        p=p,
        trials=trials,
        master_seed=master_seed,
        distances=[int(d) for d in dist_arr[mask]],
        tau_hats=[float(t) for t in tau_hat[mask]],
    )
