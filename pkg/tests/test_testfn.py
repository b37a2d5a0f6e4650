"""Test-function family: evaluation, transforms, Sobolev norms, smoothing."""

import math

import numpy as np
import pytest
from scipy import integrate

from graphclt import (
    ChebyshevPoly,
    Combination,
    CoshWeighted,
    GaussianBump,
    Monomial,
    PoissonSmoothed,
    ResolventIm,
    ResolventRe,
    from_record,
    poisson_smooth,
)
from graphclt.errors import DivergenceError, ParameterError, RangeError

TWO_PI = 2.0 * math.pi


def direct_transform_oracle(fn, k, upper):
    """(1/2 pi) Int e^{ikx} fn(x) dx by quadrature on [-upper, upper]."""
    if k == 0.0:
        return complex(integrate.quad(fn, -upper, upper, limit=400)[0], 0.0) / TWO_PI
    re = integrate.quad(fn, -upper, upper, weight="cos", wvar=k, limit=400)[0]
    im = integrate.quad(fn, -upper, upper, weight="sin", wvar=k, limit=400)[0]
    return complex(re, im) / TWO_PI


def test_chebyshev_endpoint():
    assert ChebyshevPoly(2)(2.0) == 1.0  # T_2(1) = 1


def test_monomial_value():
    assert Monomial(2)(1.5) == 2.25


def test_chebyshev_recurrence_matches_cosine_form():
    mu = np.linspace(-2.0, 2.0, 401)
    for k in range(9):
        direct = np.cos(k * np.arccos(mu / 2.0))
        np.testing.assert_allclose(ChebyshevPoly(k)(mu), direct, atol=1e-12)


@pytest.mark.parametrize("phi", [
    ChebyshevPoly(3),
    Monomial(4),
    GaussianBump(0.3, 0.8),
    CoshWeighted(1.0, GaussianBump()),
    ResolventRe(0.5 + 1j),
    ResolventIm(0.5 + 1j),
    Combination(((0.5, ChebyshevPoly(2)), (2.0, Monomial(1)))),
])
def test_derivative_matches_finite_differences(phi):
    h = 1e-6
    for x in (-1.3, 0.0, 0.7, 1.9):
        fd = (phi(x + h) - phi(x - h)) / (2.0 * h)
        assert phi.derivative(x) == pytest.approx(fd, rel=5e-8, abs=5e-8)


def test_combination_arithmetic_and_labels():
    combo = 0.5 * ChebyshevPoly(2) + 1.0 * Monomial(4)
    assert combo(1.0) == pytest.approx(0.5 * ChebyshevPoly(2)(1.0) + 1.0)
    assert combo.label == "0.5*chebyshev:2+1*monomial:4"
    diff = Monomial(2) - Monomial(2)
    assert diff(0.7) == 0.0


def test_records_round_trip():
    functions = [
        ChebyshevPoly(5),
        Monomial(0),
        GaussianBump(-0.5, 2.0),
        CoshWeighted(0.7, GaussianBump()),
        PoissonSmoothed(GaussianBump(), 0.25),
        ResolventRe(1 + 2j),
        ResolventIm(-1 + 0.5j),
        Combination(((0.5, ChebyshevPoly(2)), (-1.5, Monomial(4)))),
    ]
    for phi in functions:
        assert from_record(phi.to_record()) == phi


def test_from_record_rejects_garbage():
    with pytest.raises(ParameterError):
        from_record({"family": "polynomial", "degree": 2})
    with pytest.raises(ParameterError):
        from_record({"degree": 2})
    with pytest.raises(ParameterError):
        from_record({"family": "cosh_weighted", "rate": 1.0})


def test_gaussian_transform_closed_form_and_oracle():
    phi = GaussianBump()
    assert phi.fourier(0.0) == pytest.approx(1.0 / math.sqrt(TWO_PI), rel=1e-14)
    for k in (0.0, 0.7, -1.3):
        oracle = direct_transform_oracle(phi, k, 12.0)
        assert phi.fourier(k) == pytest.approx(oracle, abs=1e-12)
    shifted = GaussianBump(1.5, 0.5)
    for k in (0.5, 2.0):
        oracle = direct_transform_oracle(shifted, k, 12.0)
        assert shifted.fourier(k) == pytest.approx(oracle, abs=1e-12)


def test_zero_function_transform_and_norm():
    zero = 0.0 * GaussianBump()
    for k in (0.0, 1.0, -2.5):
        assert zero.fourier(k) == 0.0
    assert zero.sobolev_norm(2.0) == 0.0


def test_cosh_weighted_transform_against_closed_form():
    # (1/2 pi) Int e^{ikx} cosh(x) e^{-x^2/2} dx = e^{(1 - k^2)/2} cos(k) / sqrt(2 pi)
    phi = CoshWeighted(1.0, GaussianBump())
    for k in (0.0, 0.8, 2.0):
        expected = math.exp(0.5 * (1.0 - k * k)) * math.cos(k) / math.sqrt(TWO_PI)
        assert phi.fourier(k) == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_windowed_polynomial_transform_parity():
    # real even phi -> real transform; real odd phi -> purely imaginary
    even, odd = Monomial(2), Monomial(1)
    for k in (0.5, 2.0):
        assert abs(even.fourier(k).imag) < 1e-10
        assert abs(odd.fourier(k).real) < 1e-10
    assert even.transform_note is not None


def test_resolvent_transforms_invert_to_the_function():
    # slow Lorentzian tails make the forward transform a poor quadrature
    # target; check the exponentially decaying inverse instead:
    # phi(x) = Int phihat(k) e^{-ikx} dk
    z = 0.4 + 0.9j
    for part in (ResolventRe(z), ResolventIm(z)):
        for x in (-1.0, 0.4, 2.3):
            recovered = integrate.quad(
                lambda k: (part.fourier(k) * np.exp(-1j * k * x)).real,
                -40.0, 40.0, points=[0.0], limit=200)[0]
            assert recovered == pytest.approx(part(x), abs=1e-9)
    im_part = ResolventIm(z)
    for k in (0.6, -1.1):
        assert im_part.fourier(k) == pytest.approx(
            0.5 * np.exp(1j * k * z.real - abs(k) * z.imag), rel=1e-14)


def test_sobolev_norm_gaussian_dual_quadrature():
    # ||gauss||_2^2 = (1/pi) Int_0^inf (1+2k)^4 e^{-k^2} dk = (12.5 sqrt(pi) + 20)/pi
    phi = GaussianBump()
    closed = math.sqrt((12.5 * math.sqrt(math.pi) + 20.0) / math.pi)
    nodes, weights = np.polynomial.legendre.leggauss(400)
    k = 20.0 * (nodes + 1.0)  # [0, 40]
    gl = math.sqrt(2.0 * 20.0 * np.sum(
        weights * (1 + 2 * k) ** 4 * np.abs([phi.fourier(kk) for kk in k]) ** 2))
    value = phi.sobolev_norm(2.0)
    assert value == pytest.approx(3.663136295310723, rel=1e-6)
    assert value == pytest.approx(closed, rel=1e-6)
    assert value == pytest.approx(gl, rel=1e-6)


def test_sobolev_norm_homogeneity():
    phi = GaussianBump()
    assert (3.0 * phi).sobolev_norm(1.5) == pytest.approx(3.0 * phi.sobolev_norm(1.5), rel=1e-9)


def test_sobolev_norm_function_carries_index():
    from graphclt import sobolev_norm
    result = sobolev_norm(GaussianBump(), 1.5)
    assert result.s == 1.5
    assert result.value == pytest.approx(GaussianBump().sobolev_norm(1.5), rel=1e-12)


def test_sobolev_norm_monotone_in_s():
    phi = GaussianBump(0.2, 1.3)
    norms = [phi.sobolev_norm(s) for s in (0.5, 1.0, 2.0, 3.0)]
    assert all(a <= b * (1 + 1e-9) for a, b in zip(norms, norms[1:]))


def test_sobolev_norm_rejects_bad_s():
    with pytest.raises(ParameterError):
        GaussianBump().sobolev_norm(0.0)


def test_sobolev_norm_of_resolvent_converges():
    # |phihat|^2 = e^{-2|k| y}/4 decays exponentially: finite for every s
    norm = ResolventIm(2j).sobolev_norm(1.75)
    closed_sq = 0.5 * integrate.quad(
        lambda k: (1 + 2 * k) ** 3.5 * math.exp(-4.0 * k), 0, np.inf)[0]
    assert norm == pytest.approx(math.sqrt(closed_sq), rel=1e-6)


def test_poisson_smoothing_preserves_constants():
    one = Monomial(0)
    smoothed = poisson_smooth(one, 0.7)
    for x in (-3.0, 0.0, 5.5):
        assert smoothed(x) == pytest.approx(1.0, abs=1e-10)


def test_poisson_smoothing_semigroup():
    base = GaussianBump()
    double = poisson_smooth(poisson_smooth(base, 0.4), 0.3)  # nested quadrature
    single = poisson_smooth(base, 0.7)
    for x in (-2.0, -0.5, 0.0, 0.8, 2.5):
        assert double(x) == pytest.approx(single(x), abs=1e-8)


def test_poisson_smoothing_averages_down_a_strict_maximum():
    base = GaussianBump()
    assert poisson_smooth(base, 0.5)(0.0) < base(0.0)


def test_poisson_smoothing_transform_factor():
    base = GaussianBump()
    eta = 0.35
    smoothed = poisson_smooth(base, eta)
    for k in (1.0, -1.0):
        assert smoothed.fourier(k) == pytest.approx(
            base.fourier(k) * math.exp(-eta * abs(k)), rel=1e-13)
        # direct transform of the evaluated convolution: Lorentzian tails need
        # the semi-infinite Fourier rule
        re = 2.0 * integrate.quad(smoothed, 0.0, np.inf, weight="cos", wvar=k,
                                  limit=400)[0] / TWO_PI
        assert smoothed.fourier(k) == pytest.approx(complex(re, 0.0), abs=2e-6)


def test_poisson_smoothing_of_resolvent_is_pole_shift():
    z, eta = 0.3 + 0.6j, 0.5
    smoothed = poisson_smooth(ResolventIm(z), eta)
    direct = ResolventIm(z + 1j * eta)
    for x in (-1.0, 0.0, 2.0):
        assert smoothed(x) == pytest.approx(direct(x), rel=1e-14)


def test_poisson_smoothing_l1_error_decreases_with_eta():
    phi = GaussianBump()
    span = 4.0

    def l1_error(eta):
        smoothed = poisson_smooth(phi, eta)
        return integrate.quad(lambda x: abs(phi(x) - smoothed(x)), -span, span,
                              limit=100, epsabs=1e-9)[0]

    errs = [l1_error(eta) for eta in (0.5, 0.25, 0.125)]
    assert errs[0] > errs[1] > errs[2] > 0.0


def test_poisson_smoothing_parameter_errors():
    with pytest.raises(ParameterError):
        poisson_smooth(GaussianBump(), 0.0)
    with pytest.raises(ParameterError):
        poisson_smooth(GaussianBump(), -0.5)
    with pytest.raises(ParameterError):
        poisson_smooth(Monomial(2), 0.5)  # not integrable


def test_cosh_overflow_raises_range_error():
    phi = CoshWeighted(1.0, GaussianBump())
    assert phi(1.0) == pytest.approx(math.cosh(1.0) * math.exp(-0.5), rel=1e-14)
    with pytest.raises(RangeError):
        phi(800.0)
    with pytest.raises(RangeError):
        phi(np.array([0.0, -900.0]))


def test_cosh_requires_positive_rate():
    with pytest.raises(ParameterError):
        CoshWeighted(0.0, GaussianBump())


def test_cosh_without_decay_has_no_transform():
    from graphclt.errors import UnsupportedTransformError
    grows = CoshWeighted(1.0, Monomial(2))
    with pytest.raises(UnsupportedTransformError):
        grows.fourier(1.0)


def test_sobolev_divergence_reports_partial_sums():
    # cooked transform with no decay: a bare resolvent real part at tiny y has
    # slow decay e^{-2|k| y}; fake a rough function via a combination that is
    # legal but far from H_s at large s to exercise the divergence guard
    class Rough(GaussianBump):
        def fourier(self, k):
            return 1.0 / (1.0 + abs(k))  # |phihat|^2 (1+2|k|)^{2s} grows for s >= 1

    with pytest.raises(DivergenceError) as err:
        Rough().sobolev_norm(2.0)
    assert len(err.value.partial_sums) >= 3
