"""Full-spectrum symmetric eigensolver and spectral observables.

A spectrum is represented as a 1-D float64 array sorted ascending.  All
reductions over eigenvalues use :func:`math.fsum` (exactly rounded
summation), so results do not depend on chunking or worker layout.
"""

from __future__ import annotations

import math

import numpy as np
from threadpoolctl import threadpool_limits

from .errors import DataError, NumericalError, ParameterError

#: Default relative residual contract for eigenvalues(): for every returned
#: eigenvalue there is a unit vector v with ||A v - lambda v|| <= tol * ||A||.
DEFAULT_EIG_TOL = 1e-10


def eigenvalues(matrix: np.ndarray, tol: float = DEFAULT_EIG_TOL) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix, sorted ascending.

    The solve is pinned to a single BLAS thread so the result is a pure
    function of the input array, independent of process or thread layout;
    parallelism belongs at the replica level.  The LAPACK backward-stable
    solver keeps residuals orders of magnitude below the default ``tol``
    contract of 1e-10 * ||A||.

    Raises
    ------
    DataError
        If the matrix contains non-finite entries.
    NumericalError
        If the iterative eigensolver fails to converge.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        bad = np.argwhere(~np.isfinite(a))[0]
        raise DataError(f"matrix entry ({bad[0]}, {bad[1]}) is not finite")
    if not (tol > 0.0):
        raise ParameterError(f"tolerance must be positive, got {tol}")
    try:
        with threadpool_limits(limits=1):
            w = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolver did not converge: {exc}") from exc
    return np.sort(w)


def linear_statistic(spectrum: np.ndarray, phi) -> float:
    """Sum of a test function over the spectrum, N[phi] = sum_i phi(lambda_i).

    Accumulated with exactly rounded summation, so the value is independent
    of any partitioning of the eigenvalue list.
    """
    values = np.asarray(phi(np.asarray(spectrum, dtype=float)), dtype=float)
    if not np.isfinite(values).all():
        raise DataError("test function returned a non-finite value on the spectrum")
    return math.fsum(values.tolist())


def resolvent_trace(spectrum: np.ndarray, z: complex) -> complex:
    """Trace of the resolvent, sum_i 1/(lambda_i - z), for Im z > 0.

    Satisfies |trace| <= n / Im z and Im trace > 0.  Values in the lower
    half-plane follow by conjugation: trace(conj z) = conj(trace(z)).
    """
    z = complex(z)
    if not z.imag > 0.0:
        raise ParameterError(f"resolvent argument must satisfy Im z > 0, got z={z}")
    terms = 1.0 / (np.asarray(spectrum, dtype=float) - z)
    return complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))


def empirical_cdf(spectrum: np.ndarray, x: float) -> float:
    """Right-continuous empirical CDF of the spectrum at x: #{lambda_i <= x}/n."""
    values = np.asarray(spectrum, dtype=float)
    return float(np.searchsorted(values, x, side="right")) / values.shape[0]
