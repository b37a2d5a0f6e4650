"""The closed family of test functions phi and their integral transforms.

Families
--------
``ChebyshevPoly(k)``
    phi(mu) = T_k(mu/2), evaluated by the exact three-term recurrence.
``Monomial(k)``
    phi(mu) = mu^k.
``GaussianBump(center, width)``
    phi(x) = exp(-(x - center)^2 / (2 width^2)).
``CoshWeighted(rate, base)``
    phi(x) = cosh(rate * x) * base(x), the exponential-growth family.
``PoissonSmoothed(base, eta)``
    phi = P_eta * base with the Poisson kernel P_y(x) = y / (pi (x^2 + y^2)).
``ResolventRe(z)`` / ``ResolventIm(z)``
    Real and imaginary parts of x -> 1/(x - z), Im z > 0.
``Combination``
    Finite linear combinations with real weights; built with ``+`` and ``*``.

Fourier transforms use the convention ``phihat(k) = (1/2 pi) Int e^{ikx} phi(x) dx``
and the Sobolev norm is ``||phi||_s = (Int (1+2|k|)^{2s} |phihat(k)|^2 dk)^{1/2}``.
Polynomial families are not integrable; for transform purposes they are
multiplied by a fixed smooth cutoff equal to 1 on [-3, 3] and supported on
[-4, 4] (spectra of interest concentrate on [-2, 2]).  The cutoff is part of
the definition of those transforms and is announced in ``transform_note``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import (
    DivergenceError,
    NumericalError,
    ParameterError,
    RangeError,
    UnsupportedTransformError,
)

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# cosh overflows near exp(710); refuse a little earlier.
_COSH_ARG_LIMIT = 700.0

# Cutoff window for transforms of polynomial families.
_WINDOW_FLAT = 3.0
_WINDOW_SUPPORT = 4.0

# Sobolev shell integration: double the k-range until the tail is negligible.
_SOBOLEV_MAX_K = 2.0**20
_SOBOLEV_REL_TOL = 1e-9


def _as_float_array(x):
    return np.asarray(x, dtype=float)


def _scalar_like(out, x):
    return float(out) if np.ndim(x) == 0 else out


def _smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    t = np.clip(_as_float_array(t), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(t > 0.0, np.exp(-1.0 / np.where(t > 0.0, t, 1.0)), 0.0)
        b = np.where(t < 1.0, np.exp(-1.0 / np.where(t < 1.0, 1.0 - t, 1.0)), 0.0)
    return a / (a + b)


def transform_window(x):
    """Smooth cutoff: exactly 1 on [-3, 3], exactly 0 outside [-4, 4]."""
    ax = np.abs(_as_float_array(x))
    return _smooth_step((_WINDOW_SUPPORT - ax) / (_WINDOW_SUPPORT - _WINDOW_FLAT))


def _quad_checked(func, a, b, **kwargs):
    """quad with the IntegrationWarning replaced by an explicit error guard."""
    out = integrate.quad(func, a, b, full_output=1, **kwargs)
    value, abserr = out[0], out[1]
    if abserr > 1e-6 * max(abs(value), 1.0):
        raise NumericalError(
            f"quadrature error estimate {abserr:g} too large for value {value:g}")
    return value


def _oscillatory_transform(func, a, b, k):
    """(1/2 pi) Int_a^b e^{ikx} func(x) dx via QUADPACK oscillatory rules."""
    if k == 0.0:
        re = _quad_checked(func, a, b, limit=256, epsabs=1e-13, epsrel=1e-11)
        return complex(re / TWO_PI, 0.0)
    re = _quad_checked(func, a, b, weight="cos", wvar=k, limit=256,
                       epsabs=1e-13, epsrel=1e-11)
    im = _quad_checked(func, a, b, weight="sin", wvar=k, limit=256,
                       epsabs=1e-13, epsrel=1e-11)
    return complex(re, im) / TWO_PI


class TestFunction:
    """Base class; concrete families are frozen dataclasses below."""

    #: absolutely integrable on the real line
    integrable = False
    #: human-readable note about transform conventions (e.g. windowing)
    transform_note = None

    def __call__(self, x):
        raise NotImplementedError

    def derivative(self, x):
        raise NotImplementedError

    def fourier(self, k: float) -> complex:
        """Fourier transform at wavenumber k, (1/2 pi) Int e^{ikx} phi(x) dx."""
        raise UnsupportedTransformError(
            f"{self.label} has no Fourier transform (not integrable, no window)")

    @property
    def smoothable(self) -> bool:
        """Whether Poisson smoothing of this function is defined."""
        return self.integrable

    def support_hint(self):
        """Interval carrying essentially all mass, or None; guides quadrature."""
        return None

    @property
    def label(self) -> str:
        raise NotImplementedError

    def to_record(self) -> dict:
        raise NotImplementedError

    def sobolev_norm(self, s: float) -> float:
        """Sobolev norm ||phi||_s, s > 0, by shell quadrature over wavenumbers.

        Integrates 2 * (1+2k)^{2s} |phihat(k)|^2 over doubling shells
        [0,1], [1,2], [2,4], ... and stops once the tail is negligible.
        Relative accuracy is 1e-6 for families with closed-form transforms.

        Raises
        ------
        DivergenceError
            If shell contributions fail to decay (phi too rough for this s);
            the exception carries the partial sums seen so far.
        """
        if not s > 0.0:
            raise ParameterError(f"smoothness index s must be positive, got {s}")

        def integrand(k):
            return (1.0 + 2.0 * abs(k)) ** (2.0 * s) * abs(self.fourier(k)) ** 2

        total = 0.0
        partials = []
        prev = math.inf
        rising = 0
        lo, hi = 0.0, 1.0
        while lo < _SOBOLEV_MAX_K:
            shell = integrate.quad(integrand, lo, hi, limit=200,
                                   epsabs=1e-15, epsrel=_SOBOLEV_REL_TOL)[0]
            total += shell
            partials.append(total)
            if hi >= 2.0 and shell <= _SOBOLEV_REL_TOL * max(total, 1e-300):
                return math.sqrt(2.0 * total)
            if shell > prev:
                rising += 1
                if rising >= 3:
                    raise DivergenceError(
                        f"Sobolev integral for {self.label} at s={s} is not "
                        f"converging (growing shell contributions)", partials)
            else:
                rising = 0
            prev = shell
            lo, hi = hi, 2.0 * hi
        raise DivergenceError(
            f"Sobolev integral for {self.label} at s={s} shows no tail decay "
            f"by |k| = {_SOBOLEV_MAX_K:g}", partials)

    def smoothed(self, eta: float) -> "PoissonSmoothed":
        """Poisson smoothing P_eta * phi as a new test function."""
        return PoissonSmoothed(base=self, eta=eta)

    def __mul__(self, a):
        if not isinstance(a, (int, float)):
            return NotImplemented
        return Combination(((float(a), self),))

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, TestFunction):
            return NotImplemented
        return Combination(_terms_of(self) + _terms_of(other))

    def __sub__(self, other):
        if not isinstance(other, TestFunction):
            return NotImplemented
        return Combination(_terms_of(self) + tuple((-w, f) for w, f in _terms_of(other)))


def _terms_of(fn: TestFunction):
    if isinstance(fn, Combination):
        return fn.terms
    return ((1.0, fn),)


def _chebyshev_t(x, k):
    """T_k(x) by the exact recurrence T_{j+1} = 2x T_j - T_{j-1}."""
    x = _as_float_array(x)
    if k == 0:
        return np.ones_like(x)
    prev, cur = np.ones_like(x), x.copy()
    for _ in range(k - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


def _chebyshev_u(x, k):
    """U_k(x) by the recurrence U_{j+1} = 2x U_j - U_{j-1}."""
    x = _as_float_array(x)
    if k < 0:
        return np.zeros_like(x)
    if k == 0:
        return np.ones_like(x)
    prev, cur = np.ones_like(x), 2.0 * x
    for _ in range(k - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


@dataclass(frozen=True)
class ChebyshevPoly(TestFunction):
    """phi(mu) = T_degree(mu / 2)."""

    degree: int

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 0:
            raise ParameterError(f"Chebyshev degree must be a non-negative int, got {self.degree!r}")

    transform_note = "transform applies to the [-3,3]-flat windowed function"

    def __call__(self, x):
        return _scalar_like(_chebyshev_t(_as_float_array(x) / 2.0, self.degree), x)

    def derivative(self, x):
        # d/dmu T_k(mu/2) = (k/2) U_{k-1}(mu/2)
        xv = _as_float_array(x) / 2.0
        return _scalar_like(0.5 * self.degree * _chebyshev_u(xv, self.degree - 1), x)

    def fourier(self, k):
        return _oscillatory_transform(
            lambda x: self(x) * transform_window(x), -_WINDOW_SUPPORT, _WINDOW_SUPPORT, k)

    @property
    def smoothable(self):
        return self.degree == 0  # the constant function

    @property
    def label(self):
        return f"chebyshev:{self.degree}"

    def to_record(self):
        return {"family": "chebyshev", "degree": self.degree}


@dataclass(frozen=True)
class Monomial(TestFunction):
    """phi(mu) = mu^degree."""

    degree: int

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 0:
            raise ParameterError(f"monomial degree must be a non-negative int, got {self.degree!r}")

    transform_note = "transform applies to the [-3,3]-flat windowed function"

    def __call__(self, x):
        return _scalar_like(_as_float_array(x) ** self.degree, x)

    def derivative(self, x):
        xv = _as_float_array(x)
        if self.degree == 0:
            return _scalar_like(np.zeros_like(xv), x)
        return _scalar_like(self.degree * xv ** (self.degree - 1), x)

    def fourier(self, k):
        return _oscillatory_transform(
            lambda x: self(x) * transform_window(x), -_WINDOW_SUPPORT, _WINDOW_SUPPORT, k)

    @property
    def smoothable(self):
        return self.degree == 0

    @property
    def label(self):
        return f"monomial:{self.degree}"

    def to_record(self):
        return {"family": "monomial", "degree": self.degree}


@dataclass(frozen=True)
class GaussianBump(TestFunction):
    """phi(x) = exp(-(x - center)^2 / (2 width^2)); transform in closed form."""

    center: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if not self.width > 0.0:
            raise ParameterError(f"Gaussian width must be positive, got {self.width}")

    integrable = True

    def __call__(self, x):
        u = (_as_float_array(x) - self.center) / self.width
        return _scalar_like(np.exp(-0.5 * u * u), x)

    def derivative(self, x):
        xv = _as_float_array(x)
        u = (xv - self.center) / self.width
        return _scalar_like(-(u / self.width) * np.exp(-0.5 * u * u), x)

    def fourier(self, k):
        # (1/2 pi) Int e^{ikx} e^{-(x-c)^2/(2 w^2)} dx = (w/sqrt(2 pi)) e^{ikc - k^2 w^2/2}
        return (self.width / math.sqrt(TWO_PI)) * complex(
            np.exp(complex(0.0, k * self.center) - 0.5 * (k * self.width) ** 2))

    def support_hint(self):
        return (self.center - 9.0 * self.width, self.center + 9.0 * self.width)

    @property
    def label(self):
        return f"gauss:{self.center:g},{self.width:g}"

    def to_record(self):
        return {"family": "gaussian_bump", "center": self.center, "width": self.width}


@dataclass(frozen=True)
class CoshWeighted(TestFunction):
    """phi(x) = cosh(rate * x) * base(x), the exponentially weighted class.

    Evaluation refuses arguments where cosh would overflow (RangeError) rather
    than returning infinity.
    """

    rate: float
    base: TestFunction

    def __post_init__(self):
        if not self.rate > 0.0:
            raise ParameterError(f"cosh growth rate must be positive, got {self.rate}")
        if not isinstance(self.base, TestFunction):
            raise ParameterError("cosh weight needs a TestFunction base")

    def _guard(self, xv):
        if xv.size and float(np.max(np.abs(xv))) * self.rate > _COSH_ARG_LIMIT:
            raise RangeError(
                f"cosh({self.rate} * x) overflows at |x| > {_COSH_ARG_LIMIT / self.rate:.3g}")

    def __call__(self, x):
        xv = _as_float_array(x)
        self._guard(np.atleast_1d(xv))
        return _scalar_like(np.cosh(self.rate * xv) * self.base(xv), x)

    def derivative(self, x):
        xv = _as_float_array(x)
        self._guard(np.atleast_1d(xv))
        c = self.rate
        return _scalar_like(
            c * np.sinh(c * xv) * self.base(xv) + np.cosh(c * xv) * self.base.derivative(xv), x)

    def fourier(self, k):
        lo, hi = self._decay_domain()
        return _oscillatory_transform(self, lo, hi, k)

    def _decay_domain(self):
        """Truncation interval [-L, L] outside which |phi| < 1e-14 * peak."""
        grid = np.linspace(-8.0, 8.0, 257)
        ref = max(float(np.max(np.abs(self(grid)))), 1e-300)
        half = 8.0
        while half <= _COSH_ARG_LIMIT / self.rate / 2.0:
            edge = max(abs(float(self(half))), abs(float(self(-half))))
            if edge < 1e-14 * ref:
                log.debug("cosh-weighted transform truncated to [-%g, %g]", half, half)
                return -half, half
            half *= 2.0
        raise UnsupportedTransformError(
            f"{self.label} does not decay; no Fourier transform")

    def support_hint(self):
        return self.base.support_hint()

    @property
    def label(self):
        if isinstance(self.base, GaussianBump):
            return f"coshgauss:{self.rate:g},{self.base.center:g},{self.base.width:g}"
        return f"cosh:{self.rate:g}({self.base.label})"

    def to_record(self):
        return {"family": "cosh_weighted", "rate": self.rate, "base": self.base.to_record()}


@dataclass(frozen=True)
class ResolventRe(TestFunction):
    """phi(x) = Re 1/(x - z) for a fixed z in the upper half-plane.

    Not absolutely integrable; its transform (i/2) sign(k) e^{ikx - |k|y} is
    understood in the principal-value sense and provided in closed form.
    """

    z: complex

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if not self.z.imag > 0.0:
            raise ParameterError(f"resolvent point must have Im z > 0, got {self.z}")

    def __call__(self, x):
        return _scalar_like((1.0 / (_as_float_array(x) - self.z)).real, x)

    def derivative(self, x):
        return _scalar_like((-1.0 / (_as_float_array(x) - self.z) ** 2).real, x)

    def fourier(self, k):
        if k == 0.0:
            return 0.0 + 0.0j
        x, y = self.z.real, self.z.imag
        return 0.5j * math.copysign(1.0, k) * np.exp(complex(0.0, k * x) - abs(k) * y)

    @property
    def smoothable(self):
        return True  # pole shift, see PoissonSmoothed

    def support_hint(self):
        x, y = self.z.real, self.z.imag
        return (x - 100.0 * y, x + 100.0 * y)

    @property
    def label(self):
        return f"resolvent_re:{self.z.real:g},{self.z.imag:g}"

    def to_record(self):
        return {"family": "resolvent_re", "z": [self.z.real, self.z.imag]}


@dataclass(frozen=True)
class ResolventIm(TestFunction):
    """phi(x) = Im 1/(x - z) = y / ((x - Re z)^2 + y^2), a scaled Poisson kernel."""

    z: complex

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if not self.z.imag > 0.0:
            raise ParameterError(f"resolvent point must have Im z > 0, got {self.z}")

    integrable = True

    def __call__(self, x):
        return _scalar_like((1.0 / (_as_float_array(x) - self.z)).imag, x)

    def derivative(self, x):
        return _scalar_like((-1.0 / (_as_float_array(x) - self.z) ** 2).imag, x)

    def fourier(self, k):
        x, y = self.z.real, self.z.imag
        return 0.5 * np.exp(complex(0.0, k * x) - abs(k) * y)

    def support_hint(self):
        x, y = self.z.real, self.z.imag
        return (x - 100.0 * y, x + 100.0 * y)

    @property
    def label(self):
        return f"resolvent_im:{self.z.real:g},{self.z.imag:g}"

    def to_record(self):
        return {"family": "resolvent_im", "z": [self.z.real, self.z.imag]}


@dataclass(frozen=True)
class PoissonSmoothed(TestFunction):
    """phi = P_eta * base, the Poisson-kernel smoothing of an integrable base.

    Evaluation substitutes t = x + eta tan(theta), which turns the convolution
    into (1/pi) Int_{-pi/2}^{pi/2} base(x + eta tan theta) dtheta, and applies
    adaptive quadrature; resolvent bases use the exact pole shift z -> z + i eta
    instead.  The transform is base's transform times e^{-eta |k|}.
    """

    base: TestFunction
    eta: float

    def __post_init__(self):
        if not isinstance(self.base, TestFunction):
            raise ParameterError("Poisson smoothing needs a TestFunction base")
        if not self.eta > 0.0:
            raise ParameterError(f"smoothing width must be positive, got {self.eta}")
        if not self.base.smoothable:
            raise ParameterError(
                f"Poisson smoothing needs an integrable base, got {self.base.label}")

    @property
    def integrable(self):
        return self.base.integrable

    @property
    def smoothable(self):
        return True

    def _point(self, x, want_derivative):
        base, eta = self.base, self.eta
        if isinstance(base, Combination):
            return math.fsum(
                w * PoissonSmoothed(f, eta)._point(x, want_derivative)
                for w, f in base.terms)
        if isinstance(base, (ResolventRe, ResolventIm)):
            shifted = type(base)(base.z + 1j * eta)
            return shifted.derivative(x) if want_derivative else shifted(x)
        func = base.derivative if want_derivative else base
        hint = base.support_hint()
        points = None
        if hint is not None:
            lo, hi = hint
            cuts = sorted({math.atan((h - x) / eta) for h in (lo, 0.5 * (lo + hi), hi)})
            points = [t for t in cuts if -math.pi / 2 < t < math.pi / 2] or None
        val = integrate.quad(lambda t: func(x + eta * math.tan(t)),
                             -math.pi / 2, math.pi / 2, points=points,
                             limit=200, epsabs=1e-12, epsrel=1e-10)[0]
        return val / math.pi

    def __call__(self, x):
        xv = _as_float_array(x)
        if xv.ndim == 0:
            return self._point(float(xv), False)
        return np.array([self._point(v, False) for v in xv.ravel()]).reshape(xv.shape)

    def derivative(self, x):
        xv = _as_float_array(x)
        if xv.ndim == 0:
            return self._point(float(xv), True)
        return np.array([self._point(v, True) for v in xv.ravel()]).reshape(xv.shape)

    def fourier(self, k):
        return self.base.fourier(k) * math.exp(-self.eta * abs(k))

    def support_hint(self):
        hint = self.base.support_hint()
        if hint is None:
            return None
        lo, hi = hint
        return (lo - 50.0 * self.eta, hi + 50.0 * self.eta)

    @property
    def transform_note(self):
        return self.base.transform_note

    @property
    def label(self):
        return f"smooth:{self.eta:g}({self.base.label})"

    def to_record(self):
        return {"family": "poisson_smoothed", "eta": self.eta, "base": self.base.to_record()}


@dataclass(frozen=True)
class Combination(TestFunction):
    """Finite weighted sum of test functions."""

    terms: tuple

    def __post_init__(self):
        flat = []
        for w, f in self.terms:
            if not isinstance(f, TestFunction):
                raise ParameterError("combination terms must be (weight, TestFunction)")
            for w2, f2 in _terms_of(f):
                flat.append((float(w) * w2, f2))
        object.__setattr__(self, "terms", tuple(flat))
        if not self.terms:
            raise ParameterError("combination needs at least one term")

    @property
    def integrable(self):
        return all(f.integrable for _, f in self.terms)

    @property
    def smoothable(self):
        return all(f.smoothable for _, f in self.terms)

    def __call__(self, x):
        xv = _as_float_array(x)
        out = sum(w * np.asarray(f(xv)) for w, f in self.terms)
        return _scalar_like(out, x)

    def derivative(self, x):
        xv = _as_float_array(x)
        out = sum(w * np.asarray(f.derivative(xv)) for w, f in self.terms)
        return _scalar_like(out, x)

    def fourier(self, k):
        return sum(w * f.fourier(k) for w, f in self.terms)

    def support_hint(self):
        hints = [f.support_hint() for _, f in self.terms]
        hints = [h for h in hints if h is not None]
        if not hints:
            return None
        return (min(h[0] for h in hints), max(h[1] for h in hints))

    @property
    def transform_note(self):
        notes = {f.transform_note for _, f in self.terms if f.transform_note}
        return "; ".join(sorted(notes)) or None

    @property
    def label(self):
        return "+".join(f"{w:g}*{f.label}" for w, f in self.terms)

    def to_record(self):
        return {"family": "combination",
                "terms": [{"weight": w, "fn": f.to_record()} for w, f in self.terms]}


_FAMILIES = {
    "chebyshev": lambda r: ChebyshevPoly(int(r["degree"])),
    "monomial": lambda r: Monomial(int(r["degree"])),
    "gaussian_bump": lambda r: GaussianBump(float(r.get("center", 0.0)),
                                            float(r.get("width", 1.0))),
    "cosh_weighted": lambda r: CoshWeighted(float(r["rate"]), from_record(r["base"])),
    "poisson_smoothed": lambda r: PoissonSmoothed(from_record(r["base"]), float(r["eta"])),
    "resolvent_re": lambda r: ResolventRe(complex(r["z"][0], r["z"][1])),
    "resolvent_im": lambda r: ResolventIm(complex(r["z"][0], r["z"][1])),
    "combination": lambda r: Combination(
        tuple((float(t["weight"]), from_record(t["fn"])) for t in r["terms"])),
}


def from_record(record: dict) -> TestFunction:
    """Rebuild a test function from its configuration record."""
    try:
        family = record["family"]
    except (TypeError, KeyError):
        raise ParameterError(f"test-function record needs a 'family' key: {record!r}")
    try:
        builder = _FAMILIES[family]
    except KeyError:
        raise ParameterError(
            f"unknown test-function family {family!r}; known: {sorted(_FAMILIES)}")
    try:
        return builder(record)
    except (KeyError, TypeError, IndexError) as exc:
        raise ParameterError(f"malformed {family!r} record {record!r}: {exc}") from exc


def evaluate(phi: TestFunction, x):
    """Pointwise value phi(x); module-level alias for phi(x)."""
    return phi(x)


def fourier_transform(phi: TestFunction, k: float) -> complex:
    """phihat(k) with the (1/2 pi) Int e^{ikx} phi(x) dx normalization."""
    return phi.fourier(k)


@dataclass(frozen=True)
class SobolevNorm:
    """A computed norm ||phi||_s together with its smoothness index."""

    s: float
    value: float


def sobolev_norm(phi: TestFunction, s: float) -> SobolevNorm:
    """||phi||_s with its index; see TestFunction.sobolev_norm for the method."""
    return SobolevNorm(s=float(s), value=phi.sobolev_norm(s))


def poisson_smooth(phi: TestFunction, eta: float) -> PoissonSmoothed:
    """P_eta * phi as a new test function node."""
    return phi.smoothed(eta)
