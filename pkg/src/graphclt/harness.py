"""Monte Carlo experiment engine.

Runs replicas of the ensemble, forms the rescaled fluctuation samples
S_m = sqrt(p/n) * (N_m[phi] - mean), and tests them against the limiting
Gaussian: moments, one-sample Kolmogorov-Smirnov, empirical characteristic
function, resolvent covariance kernel, variance bounds and the semicircle law.

Replicas are pure functions of (ensemble params, replica index); they may run
in any number of worker processes.  Aggregation always reduces in replica
order with exactly rounded summation, so reports are bitwise independent of
the worker count.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats as scipy_stats
from scipy.special import kolmogorov, ndtr

from . import eigen, ensemble, theory
from .ensemble import EnsembleParams
from .errors import ConfigError, ParameterError, ReplicaError
from .testfn import TestFunction


@dataclass(frozen=True)
class StatisticsFlags:
    """Which statistics an experiment computes."""

    clt: bool = True
    kernel: bool = False
    semicircle: bool = False
    variance_bound: bool = False
    char_function: bool = True


@dataclass(frozen=True)
class Tolerances:
    """Thresholds used by the report's pass/fail checks.

    The CLT variance bracket is theory +/- variance_sigma combined standard
    deviations, where one combined deviation is V * (sqrt(2/M) statistical
    + finite-size allowance).  Moment thresholds are moment_sigma times the
    null standard errors sqrt(6/M) and sqrt(24/M).
    """

    variance_sigma: float = 3.5
    finite_size_allowance: float = 0.06
    moment_sigma: float = 3.3
    ks_alpha: float = 0.01
    char_envelope: float = 4.0
    semicircle_ks: float = 0.05
    kernel_band: float = 0.4
    bound_envelope: float = 10.0
    degeneracy_threshold: float = 1e-8


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one Monte Carlo experiment."""

    ensemble: EnsembleParams
    replicas: int
    test_functions: tuple = ()
    resolvent_points: tuple = ()
    statistics: StatisticsFlags = StatisticsFlags()
    tolerances: Tolerances = Tolerances()
    char_grid: tuple = (0.0, 0.5, 1.0, 1.5, 2.0)

    def __post_init__(self):
        object.__setattr__(self, "test_functions", tuple(self.test_functions))
        object.__setattr__(self, "resolvent_points",
                           tuple(complex(z) for z in self.resolvent_points))
        object.__setattr__(self, "char_grid", tuple(float(x) for x in self.char_grid))
        if not isinstance(self.replicas, int) or self.replicas < 1:
            raise ConfigError(f"replica count must be a positive int, got {self.replicas!r}")
        if self.statistics.clt and self.replicas < 30:
            raise ConfigError(
                f"normality testing needs at least 30 replicas, got {self.replicas}")
        if self.statistics.kernel and self.replicas < 100:
            raise ConfigError(
                f"kernel checks are refused below 100 replicas, got {self.replicas}")
        if self.statistics.clt and not self.test_functions:
            raise ConfigError("CLT statistics requested but no test functions given")
        if self.statistics.kernel and not self.resolvent_points:
            raise ConfigError("kernel statistics requested but no resolvent points given")
        for phi in self.test_functions:
            if not isinstance(phi, TestFunction):
                raise ConfigError(f"test functions must be TestFunction instances, got {phi!r}")
        for z in self.resolvent_points:
            if not z.imag > 0.0:
                raise ConfigError(f"resolvent points must have Im z > 0, got {z}")


@dataclass(frozen=True)
class ReplicaResult:
    """Observables of a single replica."""

    index: int
    statistics: tuple          # N_n[phi] per test function
    traces: tuple              # gamma_n(z) per resolvent point
    spectrum_min: float
    spectrum_max: float
    ks_semicircle: float
    eigenvalues: np.ndarray | None = None


@dataclass(frozen=True)
class NormalityResult:
    skewness: float
    excess_kurtosis: float
    ks_statistic: float
    ks_p_value: float


@dataclass(frozen=True)
class PhiReport:
    """Aggregated fluctuation statistics for one test function.

    For degenerate test functions (condition integral below threshold) the
    Gaussian comparison is refused: KS and characteristic-function targets
    are None and only the raw moments are reported.
    """

    label: str
    record: dict
    statistic_mean: float
    fluctuations: tuple
    variance: float
    skewness: float
    excess_kurtosis: float
    theory: theory.VarianceResult
    ks_statistic: float | None
    ks_p_value: float | None
    char_grid: tuple | None
    char_empirical: tuple | None
    char_predicted: tuple | None
    checks: dict


@dataclass(frozen=True)
class KernelReport:
    z1: complex
    z2: complex
    empirical: complex
    predicted: complex
    ratio: complex
    within_band: bool


@dataclass(frozen=True)
class CltReport:
    """Everything a run produced; serialized as report.json by the CLI."""

    ensemble: EnsembleParams
    replicas: int
    resolvent_points: tuple
    phi_reports: tuple
    kernel_reports: tuple
    semicircle_ks: float | None
    replica_results: tuple
    passes: dict


def _exact_centered(values):
    """Differences from the sample mean whose exactly rounded sum is 0.0.

    After subtracting the fsum-mean, the residual (a few ulps at most) is
    absorbed into entries that can represent it, iterating until math.fsum
    of the differences is exactly zero.
    """
    vals = [float(v) for v in values]
    mean = math.fsum(vals) / len(vals)
    d = [v - mean for v in vals]
    order = sorted(range(len(d)), key=lambda i: -abs(d[i]))
    for _ in range(64):
        r = math.fsum(d)
        if r == 0.0:
            break
        for j in order:
            if d[j] - r != d[j]:
                d[j] -= r
                break
        else:
            break
    return d


def _fsum_complex(values) -> complex:
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def ks_distance_semicircle(values) -> float:
    """Exact sup distance between the ECDF of `values` and the semicircle CDF."""
    xs = np.sort(np.asarray(values, dtype=float).ravel())
    n = xs.shape[0]
    if n == 0:
        raise ParameterError("KS distance needs at least one eigenvalue")
    cdf = theory.semicircle_cdf(xs)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))


def semicircle_check(spectra) -> float:
    """Pooled KS distance of one or more replica spectra to the semicircle CDF."""
    arrays = [np.asarray(s, dtype=float).ravel() for s in spectra]
    if not arrays:
        raise ParameterError("semicircle check needs at least one spectrum")
    return ks_distance_semicircle(np.concatenate(arrays))


def compute_replica(cfg: ExperimentConfig, index: int,
                    keep_spectrum: bool = False) -> ReplicaResult:
    """Sample replica `index`, solve its spectrum, evaluate all observables."""
    matrix = ensemble.sample(cfg.ensemble, index)
    spectrum = eigen.eigenvalues(matrix)
    stats = tuple(eigen.linear_statistic(spectrum, phi) for phi in cfg.test_functions)
    traces = tuple(eigen.resolvent_trace(spectrum, z) for z in cfg.resolvent_points)
    return ReplicaResult(
        index=index,
        statistics=stats,
        traces=traces,
        spectrum_min=float(spectrum[0]),
        spectrum_max=float(spectrum[-1]),
        ks_semicircle=ks_distance_semicircle(spectrum),
        eigenvalues=spectrum if keep_spectrum else None,
    )


def _replica_task(args):
    cfg, index, keep = args
    try:
        return compute_replica(cfg, index, keep)
    except Exception as exc:  # re-raised as ReplicaError with the index by the parent
        return (index, f"{type(exc).__name__}: {exc}")


def _run_replicas(cfg: ExperimentConfig, workers: int, keep_spectra: bool):
    tasks = [(cfg, m, keep_spectra) for m in range(cfg.replicas)]
    if workers > 1:
        # fork keeps __main__-less callers (REPLs, stdin scripts) working;
        # replica tasks are pure and single-BLAS-threaded, so it is safe
        method = "fork" if "fork" in multiprocessing.get_all_start_methods() else "spawn"
        ctx = multiprocessing.get_context(method)
        chunk = max(1, cfg.replicas // (workers * 8))
        with ctx.Pool(processes=workers) as pool:
            results = pool.map(_replica_task, tasks, chunksize=chunk)
    else:
        results = [_replica_task(t) for t in tasks]
    failures = [r for r in results if isinstance(r, tuple)]
    if failures:
        index, message = min(failures, key=lambda f: f[0])
        raise ReplicaError(index, message)
    return results


def normality_tests(samples, target_variance: float) -> NormalityResult:
    """Moments and one-sample KS of `samples` against N(0, target_variance).

    Skewness and excess kurtosis use the standard bias-corrected estimators.
    The KS p-value applies the asymptotic Kolmogorov survival function to
    (sqrt(M) + 0.12 + 0.11/sqrt(M)) * D, the usual finite-sample correction.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or x.shape[0] < 30:
        raise ParameterError(f"normality tests need >= 30 samples, got {x.shape}")
    if not target_variance > 0.0:
        raise ParameterError(
            f"target variance must be positive, got {target_variance} "
            f"(degenerate case must be caught upstream)")
    m = x.shape[0]
    centered = x - math.fsum(x.tolist()) / m
    if float(np.max(np.abs(centered))) == 0.0:
        skew, kurt = 0.0, -3.0  # point mass convention
    else:
        skew = float(scipy_stats.skew(x, bias=False))
        kurt = float(scipy_stats.kurtosis(x, fisher=True, bias=False))
    xs = np.sort(x)
    cdf = ndtr(xs / math.sqrt(target_variance))
    i = np.arange(1, m + 1)
    d = float(max(np.max(i / m - cdf), np.max(cdf - (i - 1) / m)))
    p = float(kolmogorov((math.sqrt(m) + 0.12 + 0.11 / math.sqrt(m)) * d))
    return NormalityResult(skewness=skew, excess_kurtosis=kurt,
                           ks_statistic=d, ks_p_value=p)


def empirical_char_function(samples, x_grid) -> np.ndarray:
    """Zhat(x) = (1/M) sum_m exp(i x S_m) on the grid, exactly reduced."""
    s = np.asarray(samples, dtype=float)
    if s.size == 0:
        raise ParameterError("characteristic function needs at least one sample")
    out = np.empty(len(x_grid), dtype=complex)
    for j, x in enumerate(x_grid):
        out[j] = complex(math.fsum(np.cos(x * s).tolist()),
                         math.fsum(np.sin(x * s).tolist())) / s.size
    return out


def kernel_check(cfg, z1: complex, z2: complex, traces) -> KernelReport:
    """Empirical (p/n)-rescaled resolvent covariance against the kernel C(z1, z2).

    `traces` holds per-replica pairs (gamma_m(z1), gamma_m(z2)); the product
    is complex bilinear (no conjugation), so passing conj(gamma_m(z)) as the
    second member with z2 = conj(z1) yields the rescaled variance of the
    trace.  Refused below 100 replicas.
    """
    params = cfg.ensemble if isinstance(cfg, ExperimentConfig) else cfg
    pairs = [(complex(a), complex(b)) for a, b in traces]
    m = len(pairs)
    if m < 100:
        raise ConfigError(f"kernel check is refused below 100 replicas, got {m}")
    mean1 = _fsum_complex([a for a, _ in pairs]) / m
    mean2 = _fsum_complex([b for _, b in pairs]) / m
    ratio_pn = float(params.p) / params.n
    cov = _fsum_complex([(a - mean1) * (b - mean2) for a, b in pairs]) / (m - 1)
    empirical = ratio_pn * cov
    predicted = theory.covariance_kernel(z1, z2)
    ratio = empirical / predicted if predicted != 0 else complex("nan")
    band = Tolerances().kernel_band if not isinstance(cfg, ExperimentConfig) \
        else cfg.tolerances.kernel_band
    return KernelReport(z1=complex(z1), z2=complex(z2), empirical=empirical,
                        predicted=predicted, ratio=ratio,
                        within_band=abs(ratio - 1.0) <= band)


def _phi_report(cfg: ExperimentConfig, phi, stats_values) -> PhiReport:
    m = cfg.replicas
    mean = math.fsum(float(v) for v in stats_values) / m
    scale = math.sqrt(float(cfg.ensemble.p) / cfg.ensemble.n)
    fluct = _exact_centered([scale * float(v) for v in stats_values])
    variance = math.fsum(d * d for d in fluct) / (m - 1) if m > 1 else 0.0

    target = theory.clt_variance(
        phi, degeneracy_threshold=cfg.tolerances.degeneracy_threshold)
    tol = cfg.tolerances

    if target.degenerate:
        # CLT hypothesis fails: report raw moments, refuse the Gaussian targets
        if float(np.max(np.abs(fluct))) == 0.0:
            skew, kurt = 0.0, -3.0
        else:
            skew = float(scipy_stats.skew(np.asarray(fluct), bias=False))
            kurt = float(scipy_stats.kurtosis(np.asarray(fluct), fisher=True, bias=False))
        checks = {"degenerate": True}
        return PhiReport(label=phi.label, record=phi.to_record(),
                         statistic_mean=mean, fluctuations=tuple(fluct),
                         variance=variance, skewness=skew, excess_kurtosis=kurt,
                         theory=target, ks_statistic=None, ks_p_value=None,
                         char_grid=None, char_empirical=None, char_predicted=None,
                         checks=checks)

    norm = normality_tests(fluct, target.variance)
    combined_sd = target.variance * (math.sqrt(2.0 / m) + tol.finite_size_allowance)
    checks = {
        "degenerate": False,
        "variance_ok": abs(variance - target.variance) <= tol.variance_sigma * combined_sd,
        "skewness_ok": abs(norm.skewness) < tol.moment_sigma * math.sqrt(6.0 / m),
        "kurtosis_ok": abs(norm.excess_kurtosis) < tol.moment_sigma * math.sqrt(24.0 / m),
        "ks_ok": norm.ks_p_value > tol.ks_alpha,
    }

    char_grid = char_emp = char_pred = None
    if cfg.statistics.char_function:
        char_grid = cfg.char_grid
        char_emp = tuple(complex(v) for v in empirical_char_function(fluct, char_grid))
        char_pred = tuple(math.exp(-0.5 * x * x * target.variance) for x in char_grid)
        envelope = tol.char_envelope / math.sqrt(m)
        checks["char_function_ok"] = all(
            abs(e - p) < envelope for e, p in zip(char_emp, char_pred))

    return PhiReport(label=phi.label, record=phi.to_record(),
                     statistic_mean=mean, fluctuations=tuple(fluct),
                     variance=variance, skewness=norm.skewness,
                     excess_kurtosis=norm.excess_kurtosis, theory=target,
                     ks_statistic=norm.ks_statistic, ks_p_value=norm.ks_p_value,
                     char_grid=char_grid, char_empirical=char_emp,
                     char_predicted=char_pred, checks=checks)


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> CltReport:
    """Execute all replicas and aggregate the requested statistics.

    Fully reproducible from cfg.ensemble.seed: replicas draw from per-index
    Philox streams and every reduction is performed in replica order with
    exactly rounded summation, so reports are identical for any `workers`.
    """
    keep_spectra = cfg.statistics.semicircle
    results = _run_replicas(cfg, workers, keep_spectra)

    phi_reports = tuple(
        _phi_report(cfg, phi, [r.statistics[j] for r in results])
        for j, phi in enumerate(cfg.test_functions)) if cfg.statistics.clt else ()

    kernel_reports = []
    if cfg.statistics.kernel:
        for j1, z1 in enumerate(cfg.resolvent_points):
            for j2 in range(j1, len(cfg.resolvent_points)):
                z2 = cfg.resolvent_points[j2]
                plain = [(r.traces[j1], r.traces[j2]) for r in results]
                conj = [(r.traces[j1], r.traces[j2].conjugate()) for r in results]
                kernel_reports.append(kernel_check(cfg, z1, z2, plain))
                kernel_reports.append(kernel_check(cfg, z1, z2.conjugate(), conj))
    kernel_reports = tuple(kernel_reports)

    semicircle_ks = None
    if cfg.statistics.semicircle:
        semicircle_ks = semicircle_check([r.eigenvalues for r in results])
        results = [replace(r, eigenvalues=None) for r in results]

    passes = {}
    if cfg.statistics.clt:
        live = [p for p in phi_reports if not p.checks.get("degenerate")]
        passes["variance_pass"] = all(p.checks["variance_ok"] for p in live)
        passes["normality_pass"] = all(
            p.checks["skewness_ok"] and p.checks["kurtosis_ok"] and p.checks["ks_ok"]
            for p in live)
        if cfg.statistics.char_function:
            passes["char_function_pass"] = all(
                p.checks["char_function_ok"] for p in live)
    if cfg.statistics.kernel:
        passes["kernel_pass"] = all(k.within_band for k in kernel_reports)
    if cfg.statistics.semicircle:
        passes["semicircle_pass"] = semicircle_ks < cfg.tolerances.semicircle_ks
    passes["all_pass"] = all(passes.values()) if passes else True

    return CltReport(ensemble=cfg.ensemble, replicas=cfg.replicas,
                     resolvent_points=cfg.resolvent_points,
                     phi_reports=phi_reports, kernel_reports=kernel_reports,
                     semicircle_ks=semicircle_ks, replica_results=tuple(results),
                     passes=passes)


def replica_spectra(cfg: ExperimentConfig, workers: int = 1):
    """Full eigenvalue arrays of every replica, in replica order."""
    results = _run_replicas(cfg, workers, keep_spectra=True)
    return [r.eigenvalues for r in results]


@dataclass(frozen=True)
class BoundRow:
    n: int
    p: float
    rescaled_variance: float
    kernel_value: float
    ratio: float
    within_envelope: bool


def _mixed_seed(seed: int, n: int) -> int:
    # sub-seed per sweep entry so different n do not share uniform streams
    return (seed ^ (n * 0x9E3779B97F4A7C15)) % 2**64


def variance_bound_check(n_grid, theta: float, z: complex, replicas: int,
                         seed: int, envelope: float = 10.0,
                         workers: int = 1) -> list[BoundRow]:
    """Rescaled resolvent-trace variances along p = floor(n^theta), n in n_grid.

    Each row reports (p/n) Var{gamma_n(z)} estimated over `replicas` draws,
    the limiting kernel value C(z, conj z), their ratio, and whether the
    ratio stays within the uniform-boundedness envelope.
    """
    grid = [int(n) for n in n_grid]
    if not grid:
        raise ParameterError("variance bound check needs a non-empty n grid")
    if not 0.0 < theta < 1.0:
        raise ParameterError(f"dilute sweep requires 0 < theta < 1, got {theta}")
    if any(n < 100 for n in grid):
        raise ParameterError(f"variance bound check needs every n >= 100, got {grid}")
    z = complex(z)
    kernel_value = theory.covariance_kernel(z, z.conjugate()).real
    rows = []
    for n in grid:
        p = float(math.floor(n ** theta))
        params = EnsembleParams(n=n, p=p, seed=_mixed_seed(seed, n))
        cfg = ExperimentConfig(ensemble=params, replicas=replicas,
                               statistics=StatisticsFlags(clt=False, char_function=False),
                               resolvent_points=(z,))
        results = _run_replicas(cfg, workers, keep_spectra=False)
        traces = [r.traces[0] for r in results]
        mean = _fsum_complex(traces) / len(traces)
        var = (p / n) * math.fsum(abs(t - mean) ** 2 for t in traces) / (len(traces) - 1)
        rows.append(BoundRow(n=n, p=p, rescaled_variance=var,
                             kernel_value=kernel_value, ratio=var / kernel_value,
                             within_envelope=var <= envelope * kernel_value))
    return rows


@dataclass(frozen=True)
class SobolevBoundResult:
    rescaled_variance: float
    sobolev_norm: float
    smoothness: float
    envelope: float
    holds: bool


def sobolev_bound_check(params: EnsembleParams, replicas: int, phi,
                        smoothness: float = 1.75, envelope: float = 100.0,
                        workers: int = 1) -> SobolevBoundResult:
    """Check (p/n) Var{N_n[phi]} <= envelope * ||phi||_s^2 by Monte Carlo.

    The inequality direction is the theory's; the envelope constant stands in
    for its unquantified C.
    """
    cfg = ExperimentConfig(ensemble=params, replicas=replicas,
                           test_functions=(phi,),
                           statistics=StatisticsFlags(clt=False, char_function=False))
    results = _run_replicas(cfg, workers, keep_spectra=False)
    values = [r.statistics[0] for r in results]
    mean = math.fsum(values) / len(values)
    var = math.fsum((v - mean) ** 2 for v in values) / (len(values) - 1)
    rescaled = float(params.p) / params.n * var
    norm = phi.sobolev_norm(smoothness)
    return SobolevBoundResult(rescaled_variance=rescaled, sobolev_norm=norm,
                              smoothness=smoothness, envelope=envelope,
                              holds=rescaled <= envelope * norm * norm)
