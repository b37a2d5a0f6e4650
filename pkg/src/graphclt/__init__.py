"""graphclt: spectral-fluctuation laboratory for dilute random-graph matrices.

Samples the centered, rescaled adjacency ensemble, measures linear eigenvalue
statistics and resolvent traces by Monte Carlo, and checks their fluctuations
against closed-form limiting variances and covariance kernels evaluated by
independent Gauss-Chebyshev quadrature.
"""

__version__ = "0.1.0"

from .ensemble import (
    DILUTED_GRAPH,
    WIGNER_COMPARISON,
    EnsembleParams,
    EntryMoments,
    entry_moments,
    entry_values,
    sample,
)
from .eigen import eigenvalues, empirical_cdf, linear_statistic, resolvent_trace
from .testfn import (
    ChebyshevPoly,
    Combination,
    CoshWeighted,
    GaussianBump,
    Monomial,
    PoissonSmoothed,
    ResolventIm,
    ResolventRe,
    SobolevNorm,
    TestFunction,
    from_record,
    poisson_smooth,
    sobolev_norm,
)
from .theory import (
    QuadratureRule,
    VarianceResult,
    arcsine_identities_check,
    clt_variance,
    condition_integral,
    covariance_kernel,
    semicircle_cdf,
    semicircle_density,
    stieltjes_f,
    wigner_variance,
)
from .harness import (
    CltReport,
    ExperimentConfig,
    StatisticsFlags,
    Tolerances,
    empirical_char_function,
    kernel_check,
    normality_tests,
    run_experiment,
    semicircle_check,
    sobolev_bound_check,
    variance_bound_check,
)

__all__ = [
    "__version__",
    "DILUTED_GRAPH", "WIGNER_COMPARISON",
    "EnsembleParams", "EntryMoments", "entry_moments", "entry_values", "sample",
    "eigenvalues", "empirical_cdf", "linear_statistic", "resolvent_trace",
    "TestFunction", "ChebyshevPoly", "Monomial", "GaussianBump", "CoshWeighted",
    "PoissonSmoothed", "ResolventRe", "ResolventIm", "Combination", "SobolevNorm",
    "from_record", "poisson_smooth", "sobolev_norm",
    "QuadratureRule", "VarianceResult", "semicircle_density", "semicircle_cdf",
    "stieltjes_f", "condition_integral", "clt_variance", "wigner_variance",
    "covariance_kernel", "arcsine_identities_check",
    "ExperimentConfig", "StatisticsFlags", "Tolerances", "CltReport",
    "run_experiment", "normality_tests", "empirical_char_function",
    "kernel_check", "variance_bound_check", "sobolev_bound_check",
    "semicircle_check",
]
