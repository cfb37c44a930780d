"""Jointly Gaussian rate-distortion-perception function (JG-RDPF) for a scalar
Gaussian source under MSE distortion and alpha-divergence perception."""
from .divergence import (
    AlphaSpec,
    DivergenceValue,
    GaussianParams,
    alpha_divergence,
    kl_gaussian,
    perception_sup,
    validity_margin,
)
from .estimator import GaussianRDPF
from .exceptions import (
    DegenerateError,
    DomainError,
    Infeasible,
    NoSignChange,
    NonConvergent,
    RangeError,
    RdpfError,
    SpuriousRoot,
    TangentError,
)
from .polynomial import (
    Bracket,
    PolynomialInstance,
    RootPair,
    bisect,
    brackets,
    coefficient_c,
    eval_f,
    eval_f1,
    eval_f2,
    hellinger_roots,
    pearson_roots,
    solve_roots,
    stationary_point,
)
from .solver import (
    RdpfQuery,
    RdpfSolution,
    Regime,
    classical_rd,
    classify,
    g_boundary,
    jg_rdpf,
    min_distortion_at_perception,
    rdpf,
)

__version__ = "0.1.0"
