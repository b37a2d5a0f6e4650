"""Limiting spectral objects: semicircle law, Stieltjes transform, CLT variance.

Everything here is deterministic: closed forms plus Gauss-Chebyshev quadrature
with the arcsine weight 1/sqrt(4 - mu^2) on [-2, 2].  The central quantities
are the condition integral

    I[phi] = Int_{-2}^{2} phi(mu) (2 - mu^2) / sqrt(4 - mu^2) dmu,

the limiting fluctuation variance V[phi] = I[phi]^2 / (2 pi^2) of the rescaled
linear eigenvalue statistic, the Wigner-ensemble comparison variance with its
kappa_4 and diagonal terms, and the resolvent covariance kernel

    C(z1, z2) = 2 f(z1)^2 f(z2)^2 / (sqrt(z1^2 - 4) sqrt(z2^2 - 4)),

where f(z) = (sqrt(z^2 - 4) - z)/2 is the Stieltjes transform of the
semicircle law.  The square root is taken on the branch sqrt(z-2)*sqrt(z+2)
(principal roots), which behaves like z at infinity and keeps Im f > 0 on the
upper half-plane.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

#: default starting order for the self-refining quadrature
DEFAULT_QUADRATURE_ORDER = 64
#: refinement cap; past this a divergence warning is emitted
MAX_QUADRATURE_ORDER = 4096
#: cap for the (quadratically more expensive) tensor rule in wigner_variance
MAX_TENSOR_ORDER = 1024
#: |I[phi]| below this flags the degenerate case of the CLT condition
DEFAULT_DEGENERACY_THRESHOLD = 1e-8
#: difference quotients switch to phi' below this node separation
_DIAGONAL_CUTOFF = 1e-8


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Chebyshev (first kind) rule on [-2, 2] for the arcsine weight.

    Nodes are mu_k = 2 cos((2k - 1) pi / (2 N)) and all weights equal pi / N;
    the rule reproduces Int q(mu)/sqrt(4 - mu^2) dmu exactly for polynomials
    q of degree <= 2N - 1.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    @staticmethod
    def gauss_chebyshev(order: int) -> "QuadratureRule":
        if not isinstance(order, int) or order < 1:
            raise ParameterError(f"quadrature order must be a positive int, got {order!r}")
        k = np.arange(1, order + 1)
        nodes = 2.0 * np.cos((2 * k - 1) * math.pi / (2 * order))
        weights = np.full(order, math.pi / order)
        return QuadratureRule(nodes=nodes, weights=weights, order=order)

    def integrate(self, values):
        """Sum(w_k * values_k), i.e. Int f(mu)/sqrt(4-mu^2) dmu for f sampled at nodes."""
        v = np.asarray(values)
        if np.iscomplexobj(v):
            return complex(math.fsum((self.weights * v.real).tolist()),
                           math.fsum((self.weights * v.imag).tolist()))
        return math.fsum((self.weights * v.astype(float)).tolist())


@dataclass(frozen=True)
class VarianceResult:
    """Condition integral I[phi], the variance I^2/(2 pi^2), and the degeneracy flag."""

    condition_integral: float
    variance: float
    degenerate: bool


def semicircle_density(lam):
    """Semicircle density (1/2 pi) sqrt(4 - lam^2) on [-2, 2], zero outside."""
    lv = np.asarray(lam, dtype=float)
    out = np.where(np.abs(lv) < 2.0,
                   np.sqrt(np.clip(4.0 - lv * lv, 0.0, None)) / (2.0 * math.pi),
                   0.0)
    return float(out) if np.ndim(lam) == 0 else out


def semicircle_cdf(x):
    """Closed-form semicircle CDF: 1/2 + x sqrt(4-x^2)/(4 pi) + arcsin(x/2)/pi."""
    xv = np.clip(np.asarray(x, dtype=float), -2.0, 2.0)
    out = 0.5 + xv * np.sqrt(4.0 - xv * xv) / (4.0 * math.pi) + np.arcsin(xv / 2.0) / math.pi
    return float(out) if np.ndim(x) == 0 else out


def _sqrt_upper(z: complex) -> complex:
    """sqrt(z^2 - 4) on the branch sqrt(z-2)*sqrt(z+2), for Im z > 0."""
    return np.sqrt(complex(z) - 2.0) * np.sqrt(complex(z) + 2.0)


def _sqrt_any(z: complex) -> complex:
    if z.imag > 0.0:
        return _sqrt_upper(z)
    return _sqrt_upper(z.conjugate()).conjugate()


def stieltjes_f(z: complex) -> complex:
    """Stieltjes transform of the semicircle law, f(z) = (sqrt(z^2-4) - z)/2.

    Defined here for Im z > 0, where Im f(z) > 0 and f solves
    f^2 + z f + 1 = 0; lower half-plane values follow by conjugation.
    Evaluated as -2 / (z + sqrt(z^2-4)), which is the same branch but free
    of the cancellation the difference form suffers for large |z|.
    """
    z = complex(z)
    if not z.imag > 0.0:
        raise ParameterError(f"stieltjes_f needs Im z > 0, got z={z}")
    return -2.0 / (z + _sqrt_upper(z))


def _f_any(z: complex) -> complex:
    if z.imag > 0.0:
        return stieltjes_f(z)
    return stieltjes_f(z.conjugate()).conjugate()


def condition_integral(phi, rule: QuadratureRule) -> float:
    """I[phi] = Int phi(mu) (2 - mu^2)/sqrt(4 - mu^2) dmu by the given rule.

    Exact (up to roundoff) for polynomial phi of degree <= 2N - 3.
    """
    mu = rule.nodes
    return rule.integrate(np.asarray(phi(mu), dtype=float) * (2.0 - mu * mu))


def _refined(evaluate, start: int, cap: int, tol: float, what: str):
    """Evaluate at doubling orders until two successive values agree within tol."""
    order = start
    prev = evaluate(order)
    while order < cap:
        order *= 2
        cur = evaluate(order)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    warnings.warn(
        f"{what} did not stabilize to {tol:g} by quadrature order {cap}; "
        f"returning the last value", RuntimeWarning, stacklevel=3)
    return prev


def clt_variance(phi, rule: QuadratureRule | None = None,
                 degeneracy_threshold: float = DEFAULT_DEGENERACY_THRESHOLD) -> VarianceResult:
    """Limiting variance V[phi] = I[phi]^2 / (2 pi^2) of the rescaled fluctuation.

    With ``rule=None`` the order is doubled from 64 until two successive
    values of I[phi] agree to 1e-10 (capped at 4096 with a warning).  The
    ``degenerate`` flag marks |I[phi]| below the threshold: the CLT hypothesis
    fails there and no Gaussian comparison is meaningful.
    """
    if not degeneracy_threshold > 0.0:
        raise ParameterError(f"degeneracy threshold must be positive, got {degeneracy_threshold}")
    if rule is not None:
        integral = condition_integral(phi, rule)
    else:
        integral = _refined(
            lambda n: condition_integral(phi, QuadratureRule.gauss_chebyshev(n)),
            DEFAULT_QUADRATURE_ORDER, MAX_QUADRATURE_ORDER, 1e-10, "condition integral")
    return VarianceResult(condition_integral=integral,
                          variance=integral * integral / (2.0 * math.pi ** 2),
                          degenerate=abs(integral) < degeneracy_threshold)


def _wigner_variance_at(phi, kappa4: float, w2: float, rule: QuadratureRule) -> float:
    mu = rule.nodes
    values = np.asarray(phi(mu), dtype=float)

    # two-point term: difference quotient squared against the (4 - l1 l2) kernel
    diff = values[:, None] - values[None, :]
    sep = mu[:, None] - mu[None, :]
    near = np.abs(sep) < _DIAGONAL_CUTOFF
    quot = np.where(near,
                    np.broadcast_to(np.asarray(phi.derivative(mu), dtype=float)[:, None],
                                    sep.shape),
                    diff / np.where(near, 1.0, sep))
    kern = 4.0 - mu[:, None] * mu[None, :]
    wgrid = rule.weights[:, None] * rule.weights[None, :]
    term_pair = math.fsum((quot * quot * kern * wgrid).ravel().tolist()) / (2.0 * math.pi ** 2)

    integral = condition_integral(phi, rule)
    term_kappa = kappa4 * integral * integral / (2.0 * math.pi ** 2)

    odd = rule.integrate(values * mu)
    term_diag = (w2 - 2.0) * odd * odd / (4.0 * math.pi ** 2)
    return term_pair + term_kappa + term_diag


def wigner_variance(phi, kappa4: float, w2: float,
                    rule: QuadratureRule | None = None) -> float:
    """Wigner-ensemble limiting variance of the unrescaled fluctuation.

    Three terms: the double integral of the squared difference quotient
    against (4 - l1 l2) with the product arcsine weight (the quotient is
    replaced by phi'(l1) within 1e-8 of the diagonal), the fourth-cumulant
    term kappa4 * I[phi]^2 / (2 pi^2), and the diagonal-law term
    (w2 - 2)/(4 pi^2) * (Int phi(mu) mu / sqrt(4 - mu^2) dmu)^2.
    """
    if rule is not None:
        return _wigner_variance_at(phi, kappa4, w2, rule)
    return _refined(
        lambda n: _wigner_variance_at(phi, kappa4, w2, QuadratureRule.gauss_chebyshev(n)),
        DEFAULT_QUADRATURE_ORDER, MAX_TENSOR_ORDER, 1e-9, "Wigner comparison variance")


def covariance_kernel(z1: complex, z2: complex) -> complex:
    """Limit of (p/n) Cov(gamma_n(z1), gamma_n(z2)) for the rescaled ensemble.

    C(z1, z2) = 2 f(z1)^2 f(z2)^2 / (sqrt(z1^2-4) sqrt(z2^2-4)); arguments may
    lie in either open half-plane, with lower half-plane values obtained by
    conjugating the upper half-plane branch.
    """
    z1, z2 = complex(z1), complex(z2)
    if z1.imag == 0.0 or z2.imag == 0.0:
        raise ParameterError("covariance kernel arguments must lie off the real axis")
    f1, f2 = _f_any(z1), _f_any(z2)
    return 2.0 * f1 * f1 * f2 * f2 / (_sqrt_any(z1) * _sqrt_any(z2))


def arcsine_identities_check(z: complex, rule: QuadratureRule) -> float:
    """Max residual of the two arcsine-weight identities at z (a rule self-test).

    Checks (1/pi) Int dl / ((z - l) sqrt(4 - l^2)) = 1/sqrt(z^2 - 4) and
    (1/pi) Int dl / sqrt(4 - l^2) = 1 by the given quadrature.
    """
    z = complex(z)
    if not z.imag > 0.0:
        raise ParameterError(f"identity check needs Im z > 0, got z={z}")
    cauchy = rule.integrate(1.0 / (z - rule.nodes)) / math.pi
    res1 = abs(cauchy - 1.0 / _sqrt_upper(z))
    mass = rule.integrate(np.ones_like(rule.nodes)) / math.pi
    res2 = abs(mass - 1.0)
    return max(res1, res2)
