"""Spectral radius of the Hashimoto matrix by power iteration.

The iteration starts from the all-ones vector over arcs.  A first pass runs
in exact integer arithmetic so that nilpotency (the matrix of any forest)
is detected by an exactly-zero iterate rather than by a floating-point
threshold.  The floating-point phase iterates H + I, which has the same
eigenvectors and spectral radius rho(H) + 1 but is aperiodic, so the
iteration converges even when H itself is periodic (e.g. on bipartite
graphs); the reported residual is measured on H directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .hashimoto import HashimotoMatrix


class PowerIterationError(RuntimeError):
    """Power iteration failed to reach the residual tolerance.

    Carries the last two spectral-radius estimates so the caller can
    decide whether to retry from a perturbed vector.
    """

    def __init__(self, message, estimates):
        super().__init__(message)
        self.estimates = estimates


@dataclass
class SpectralResult:
    rho: float
    iterations: int
    residual: float
    nilpotent: bool
    perron_vector: Optional[np.ndarray]
    dimension: int

    def to_json_dict(self, include_vector: bool = False) -> dict:
        out = {
            "rho": self.rho,
            "iterations": self.iterations,
            "residual": self.residual,
            "nilpotent": self.nilpotent,
            "dimension": self.dimension,
        }
        if include_vector and self.perron_vector is not None:
            out["perron_vector"] = [float(x) for x in self.perron_vector]
        return out


def _nilpotency_probe(h: HashimotoMatrix):
    """Exact integer iteration from all-ones; returns (nilpotent, steps).

    The nilpotency index of an n x n matrix is at most n, so n steps
    without extinction are conclusive.  Three shortcuts keep this cheap:
    a matrix with no empty row (every arc has a successor) has a cycle and
    cannot be nilpotent; a nonzero fixed point certifies the same; and
    once entries exceed any forest's walk-count bound (the vertex count,
    far below the overflow guard) the graph cannot be a forest either.
    """
    n = h.dimension
    if all(len(row) > 0 for row in h.rows):
        return False, 0
    max_row = max((len(row) for row in h.rows), default=0)
    guard = (1 << 62) // max(max_row, 1)  # one more step stays within int64
    hi = h.to_csr(np.int64)
    x = np.ones(n, dtype=np.int64)
    for step in range(1, n + 1):
        y = hi @ x
        if not y.any():
            return True, step
        if int(y.max()) > guard or np.array_equal(y, x):
            return False, step
        x = y
    return False, n


def spectral_radius(h: HashimotoMatrix, tol: float = 1e-10, max_iter: Optional[int] = None) -> SpectralResult:
    """Spectral radius, Perron vector, and nilpotency flag of H.

    Args:
        h: Hashimoto matrix.
        tol: residual tolerance ||Hx - rho x||_1 / ||x||_1 for convergence.
        max_iter: cap on floating-point iterations (default 100 * dimension).

    Raises:
        PowerIterationError: residual tolerance not reached within max_iter.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = h.dimension
    if max_iter is None:
        max_iter = 100 * max(n, 1)
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if n == 0:
        return SpectralResult(0.0, 0, 0.0, True, None, 0)

    nilpotent, int_steps = _nilpotency_probe(h)
    if nilpotent:
        return SpectralResult(0.0, int_steps, 0.0, True, None, n)

    hf = h.to_csr(np.float64)
    x = np.ones(n, dtype=np.float64) / n
    last = (np.nan, np.nan)
    for it in range(1, max_iter + 1):
        hx = hf @ x
        rho_est = hx.sum()         # ||x||_1 == 1 and x >= 0
        residual = np.abs(hx - rho_est * x).sum()
        last = (last[1], float(rho_est))
        if residual <= tol:
            return SpectralResult(float(rho_est), int_steps + it, float(residual), False, x, n)
        y = hx + x                 # one step of H + I, aperiodic
        x = y / y.sum()
    raise PowerIterationError(
        f"no convergence to tol={tol} within {max_iter} iterations; "
        f"last estimates {last[0]!r}, {last[1]!r}",
        estimates=last,
    )
