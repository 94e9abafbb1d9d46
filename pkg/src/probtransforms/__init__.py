"""Generating-function and Laplace-transform calculus for nonnegative random variables."""

from .discrete import (
    Atoms,
    Binomial,
    Cox,
    Dirac,
    DiscreteDist,
    ExplicitPmf,
    FiniteMixture,
    GammaMix,
    Geometric,
    InvalidDistribution,
    NegBinomial,
    Poisson,
    TwoPoint,
    mean,
    pgf_coeffs,
    pgf_eval,
    pgf_extended_eval,
    pmf,
)
from .laplace import (
    ContDist,
    Convolution,
    Erlang,
    Exponential,
    Mixture,
    PointMassZero,
    UnsupportedShape,
    discretize,
    failure_measure,
    laplace_eval,
    pgf_to_laplace,
    survival,
    survival_as_cdf,
)
from .transforms import (
    NotThickable,
    PositivityRequired,
    ThickabilityCertificate,
    ThickeningInconclusive,
    Verdict,
    complete_monotone_check,
    cox,
    is_p_thickable,
    m_transform_cdf,
    thicken,
    thin,
)

__version__ = "0.1.0"
