"""Centered, rescaled adjacency-matrix ensemble of dilute random graphs.

An n-vertex random graph with edge probability p/n is realized through its
centered adjacency matrix: every off-diagonal entry independently takes the
value ``1/sqrt(p) - sqrt(p)/n`` (an edge, probability p/n) or ``-sqrt(p)/n``
(no edge), the diagonal is identically zero, and the matrix is symmetric.
The same entry law with p = alpha*n serves as the Wigner-comparison ensemble.

Randomness is split per replica by a counter-based scheme: replica ``r`` of
master seed ``s`` draws from a Philox4x64 generator keyed with the 128-bit
key ``(s, r)``.  The upper triangle is filled from a single vectorized
uniform draw in row-major order, so a replica is a pure function of
``(params, r)`` regardless of execution order or worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

DILUTED_GRAPH = "diluted_graph"
WIGNER_COMPARISON = "wigner_comparison"
_KINDS = (DILUTED_GRAPH, WIGNER_COMPARISON)


@dataclass(frozen=True)
class EnsembleParams:
    """Ensemble description: dimension n, edge intensity p, kind label, master seed.

    ``kind`` is advisory metadata (dilute intends p << n, the Wigner comparison
    intends p = alpha*n); both kinds use the same entry law.
    """

    n: int
    p: float
    kind: str = DILUTED_GRAPH
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise ParameterError(f"matrix dimension n must be an integer >= 2, got {self.n!r}")
        if not (0.0 < float(self.p) <= float(self.n)):
            raise ParameterError(f"edge intensity p must lie in (0, n], got p={self.p!r}")
        if self.kind not in _KINDS:
            raise ParameterError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if not isinstance(self.seed, (int, np.integer)) or not (0 <= int(self.seed) < 2**64):
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


@dataclass(frozen=True)
class EntryMoments:
    """Closed-form moments of the two-point off-diagonal entry law.

    ``kappa4`` is the fourth-cumulant excess n^2*(E[a^4] - 3*E[a^2]^2) and
    ``w2 = n*E[a_ii^2]`` is zero because the diagonal is identically zero.
    """

    mean: float
    variance: float
    kappa4: float
    w2: float


def entry_values(params: EnsembleParams) -> tuple[float, float]:
    """Return the two admissible off-diagonal values (edge, non-edge).

    The edge value is computed as ``(1 - p/n)/sqrt(p)``, algebraically equal to
    ``1/sqrt(p) - sqrt(p)/n`` but free of cancellation; in particular it is an
    exact 0.0 when p == n.
    """
    n, p = params.n, float(params.p)
    return (1.0 - p / n) / math.sqrt(p), -math.sqrt(p) / n


def _replica_rng(seed: int, replica: int) -> np.random.Generator:
    """Philox stream for one replica: key = (master seed, replica index)."""
    if replica < 0:
        raise ParameterError(f"replica index must be non-negative, got {replica}")
    key = np.array([seed, replica], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample(params: EnsembleParams, replica: int = 0) -> np.ndarray:
    """Draw one symmetric matrix of the ensemble as a dense (n, n) float array.

    The draw depends only on ``(params.seed, replica)``; calling twice with the
    same pair yields bitwise-identical matrices.  Entries are placed into the
    upper triangle in row-major order and mirrored, so symmetry is exact and
    the diagonal is exactly zero.
    """
    rng = _replica_rng(params.seed, replica)
    n = params.n
    edge, hole = entry_values(params)
    iu = np.triu_indices(n, k=1)
    u = rng.random(iu[0].shape[0])
    vals = np.where(u < float(params.p) / n, edge, hole)
    a = np.zeros((n, n))
    a[iu] = vals
    a.T[iu] = vals
    return a


def entry_moments(params: EnsembleParams) -> EntryMoments:
    """Exact moments of the entry law, evaluated from the two-point distribution.

    The mean is identically zero (the ensemble is centered) and the variance is
    ``(1/n)(1 - p/n)``; both are returned in closed form.  ``kappa4`` is
    computed from E[a^4] = (p/n)*v1^4 + (1 - p/n)*v2^4 without asymptotic
    shortcuts, so it carries the full finite-size correction to n/p - 3.
    """
    n, p = params.n, float(params.p)
    edge, hole = entry_values(params)
    prob = p / n
    variance = (1.0 / n) * (1.0 - prob)
    fourth = prob * edge**4 + (1.0 - prob) * hole**4
    kappa4 = n * n * (fourth - 3.0 * variance * variance)
    return EntryMoments(mean=0.0, variance=variance, kappa4=kappa4, w2=0.0)
