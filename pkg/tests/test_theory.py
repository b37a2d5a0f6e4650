"""Closed-form limiting objects against quadrature and trig-substitution oracles."""

import math

import numpy as np
import pytest

from graphclt import (
    ChebyshevPoly,
    Combination,
    GaussianBump,
    Monomial,
    QuadratureRule,
    ResolventIm,
    ResolventRe,
    arcsine_identities_check,
    clt_variance,
    condition_integral,
    covariance_kernel,
    semicircle_cdf,
    semicircle_density,
    stieltjes_f,
    wigner_variance,
)
from graphclt.errors import ParameterError

RULE64 = QuadratureRule.gauss_chebyshev(64)


def test_semicircle_density_values():
    assert semicircle_density(0.0) == pytest.approx(1.0 / math.pi, rel=1e-15)
    assert semicircle_density(2.0) == 0.0
    assert semicircle_density(-2.0) == 0.0
    assert semicircle_density(2.5) == 0.0


def test_semicircle_moments_by_quadrature():
    # Int q * rho d lambda = (1/2 pi) * rule-integral of q(mu) (4 - mu^2)
    mu = RULE64.nodes
    for q, expected in [(np.ones_like(mu), 1.0), (mu**2, 1.0), (mu**4, 2.0)]:
        value = RULE64.integrate(q * (4.0 - mu * mu)) / (2.0 * math.pi)
        assert value == pytest.approx(expected, abs=1e-13)


def test_semicircle_cdf_matches_density():
    xs = np.linspace(-1.95, 1.95, 31)
    h = 1e-6
    deriv = (semicircle_cdf(xs + h) - semicircle_cdf(xs - h)) / (2 * h)
    np.testing.assert_allclose(deriv, semicircle_density(xs), atol=1e-8)
    assert semicircle_cdf(-2.0) == 0.0
    assert semicircle_cdf(2.0) == pytest.approx(1.0, rel=1e-15)


def test_gauss_chebyshev_rule_structure():
    rule = QuadratureRule.gauss_chebyshev(16)
    assert rule.order == 16
    assert np.all((rule.nodes > -2.0) & (rule.nodes < 2.0))
    assert np.all(rule.weights == math.pi / 16)


def test_gauss_chebyshev_polynomial_exactness():
    # arcsine moments: Int mu^{2j} / sqrt(4 - mu^2) dmu = pi * binom(2j, j)
    rule = QuadratureRule.gauss_chebyshev(8)
    for j in range(8):  # degree 2j <= 2N - 1 = 15
        value = rule.integrate(rule.nodes ** (2 * j))
        assert value == pytest.approx(math.pi * math.comb(2 * j, j), rel=1e-13)
        if j:
            assert rule.integrate(rule.nodes ** (2 * j - 1)) == pytest.approx(0.0, abs=1e-12)


def test_stieltjes_closed_point():
    assert stieltjes_f(2j) == pytest.approx(1j * (math.sqrt(2.0) - 1.0), abs=1e-14)


def test_stieltjes_against_semicircle_quadrature():
    # Int rho(l)/(l - z) dl = (1/2 pi) * rule-integral of (4 - mu^2)/(mu - z)
    for z in (2j, 1.0 + 1.5j, -0.7 + 0.9j):
        oracle = RULE64.integrate((4.0 - RULE64.nodes**2) / (RULE64.nodes - z)) / (2 * math.pi)
        assert stieltjes_f(z) == pytest.approx(oracle, abs=1e-10)


def test_stieltjes_asymptotic():
    z = 1e6j
    assert abs(stieltjes_f(z) - (-1.0 / z)) < 1e-11 * abs(1.0 / z)


def test_stieltjes_quadratic_identity_on_grid():
    res = [abs(stieltjes_f(z) ** 2 + z * stieltjes_f(z) + 1.0)
           for z in (x + 1j * y for x in np.linspace(-3, 3, 5) for y in (0.1, 0.5, 1.0, 4.0))]
    assert len(res) == 20 and max(res) < 1e-12


def test_stieltjes_maps_upper_half_plane_to_itself():
    pts = [x + 1j * y for x in np.linspace(-5, 5, 20) for y in np.geomspace(0.01, 10, 5)]
    assert all(stieltjes_f(z).imag > 0.0 for z in pts)


def test_stieltjes_rejects_lower_half_plane():
    with pytest.raises(ParameterError):
        stieltjes_f(1.0 - 1j)


def test_variance_chebyshev_orthogonality():
    # 2 - mu^2 = -2 T_2(mu/2): only the second Chebyshev component contributes
    res = clt_variance(ChebyshevPoly(2), rule=RULE64)
    assert res.condition_integral == pytest.approx(-math.pi, abs=1e-12)
    assert res.variance == pytest.approx(0.5, abs=1e-12)
    assert not res.degenerate
    for k in (1, 3, 4, 5):
        res_k = clt_variance(ChebyshevPoly(k), rule=RULE64)
        assert res_k.degenerate
        assert res_k.variance == pytest.approx(0.0, abs=1e-12)


def test_variance_monomials():
    assert clt_variance(Monomial(1), rule=RULE64).degenerate
    res2 = clt_variance(Monomial(2), rule=RULE64)
    assert res2.condition_integral == pytest.approx(-2.0 * math.pi, abs=1e-12)
    assert res2.variance == pytest.approx(2.0, abs=1e-12)
    res4 = clt_variance(Monomial(4), rule=RULE64)
    assert res4.condition_integral == pytest.approx(-8.0 * math.pi, abs=1e-12)
    assert res4.variance == pytest.approx(32.0, abs=1e-12)


def test_variance_stable_across_orders_and_autorule():
    for phi in (Monomial(2), ChebyshevPoly(2), GaussianBump()):
        at64 = clt_variance(phi, rule=RULE64).condition_integral
        at128 = clt_variance(phi, rule=QuadratureRule.gauss_chebyshev(128)).condition_integral
        auto = clt_variance(phi).condition_integral
        assert at64 == pytest.approx(at128, abs=1e-12)
        assert auto == pytest.approx(at128, abs=1e-12)


def test_condition_integral_is_linear():
    rng = np.random.default_rng(5)
    phi, psi = ChebyshevPoly(2), Monomial(4)
    for _ in range(5):
        a, b = rng.normal(size=2)
        combo = Combination(((a, phi), (b, psi)))
        lhs = condition_integral(combo, RULE64)
        rhs = a * condition_integral(phi, RULE64) + b * condition_integral(psi, RULE64)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
    tripled = clt_variance(Combination(((3.0, phi),)), rule=RULE64)
    assert tripled.variance == pytest.approx(9.0 * 0.5, abs=1e-11)


def test_variance_ignores_non_t2_chebyshev_components():
    base = Combination(((1.0, Monomial(2)), (0.7, Monomial(4))))
    v_base = clt_variance(base, rule=RULE64).variance
    for k in (1, 3, 4, 5):
        shifted = base + ChebyshevPoly(k)
        assert clt_variance(shifted, rule=RULE64).variance == pytest.approx(v_base, rel=1e-11)


def test_wigner_variance_square():
    # E_arcsine[(l1 + l2)^2 (4 - l1 l2)] = 8, so the pair term alone gives 4
    assert wigner_variance(Monomial(2), 0.0, 2.0, rule=RULE64) == pytest.approx(4.0, abs=1e-12)
    assert wigner_variance(Monomial(2), 1.0, 2.0, rule=RULE64) == pytest.approx(6.0, abs=1e-12)


def test_wigner_variance_constant_vanishes():
    assert wigner_variance(Monomial(0), 5.0, 0.0, rule=RULE64) == pytest.approx(0.0, abs=1e-12)


def test_wigner_variance_identity_function_with_zero_diagonal():
    # Tr A = 0 exactly for a zero-diagonal ensemble: the w2 = 0 formula agrees
    assert wigner_variance(Monomial(1), 0.0, 0.0, rule=RULE64) == pytest.approx(0.0, abs=1e-12)


def test_wigner_dominates_in_dilute_limit():
    # (p/n) * V_W[mu^2] with kappa4 = n/p - 3 equals 2 - 2 p/n -> V[mu^2] = 2
    for ratio in (1e-2, 1e-3, 1e-4):
        kappa4 = 1.0 / ratio - 3.0
        value = ratio * wigner_variance(Monomial(2), kappa4, 0.0, rule=RULE64)
        assert value == pytest.approx(2.0 - 2.0 * ratio, abs=1e-9)


def test_covariance_kernel_closed_values():
    target = (3.0 - 2.0 * math.sqrt(2.0)) ** 2 / 4.0
    assert covariance_kernel(2j, 2j) == pytest.approx(-target, abs=1e-14)
    assert covariance_kernel(2j, -2j) == pytest.approx(target, abs=1e-14)
    assert abs(covariance_kernel(2j, 2j) + 7.3593e-3) < 1e-7


def test_covariance_kernel_symmetry():
    rng = np.random.default_rng(23)
    for _ in range(10):
        x1, x2 = rng.uniform(-3, 3, 2)
        y1, y2 = rng.uniform(0.05, 3, 2)
        z1 = complex(x1, y1 if rng.random() < 0.5 else -y1)
        z2 = complex(x2, y2)
        assert abs(covariance_kernel(z1, z2) - covariance_kernel(z2, z1)) <= 1e-13


def test_kernel_variance_decays_in_imaginary_part():
    # consistent with the C / (Im z)^4 shape of the uniform variance bound
    closer = covariance_kernel(2j, -2j).real
    farther = covariance_kernel(4j, -4j).real
    assert 0.0 < farther < closer


def test_covariance_kernel_rejects_real_axis():
    with pytest.raises(ParameterError):
        covariance_kernel(2.0, 2j)
    with pytest.raises(ParameterError):
        covariance_kernel(2j, -1.5)


def test_kernel_consistent_with_condition_integral_bilinear_form():
    # I[phi_z] = I[Re part] + i I[Im part] satisfies I[phi_z1] I[phi_z2] / (2 pi^2) = C(z1, z2)
    rule = QuadratureRule.gauss_chebyshev(256)
    pairs = [(2j, 2j), (2j, -2j), (1 + 1j, 2j), (0.5 + 0.8j, -0.3 + 1.2j), (3j, 1 - 1j)]
    for z1, z2 in pairs:
        parts = []
        for z in (z1, z2):
            zu = z if z.imag > 0 else z.conjugate()
            i_z = complex(condition_integral(ResolventRe(zu), rule),
                          condition_integral(ResolventIm(zu), rule))
            parts.append(i_z if z.imag > 0 else i_z.conjugate())
        bilinear = parts[0] * parts[1] / (2.0 * math.pi**2)
        assert bilinear == pytest.approx(covariance_kernel(z1, z2), abs=1e-8)


def test_arcsine_identities():
    assert arcsine_identities_check(2j, RULE64) < 1e-10
    for order in (1, 7, 64):
        rule = QuadratureRule.gauss_chebyshev(order)
        mass = rule.integrate(np.ones(order)) / math.pi
        assert abs(mass - 1.0) < 5e-16
    # near the spectral cut convergence is slower; N = 512 still reaches 1e-6
    assert arcsine_identities_check(0.1 + 0.05j, QuadratureRule.gauss_chebyshev(512)) < 1e-6
