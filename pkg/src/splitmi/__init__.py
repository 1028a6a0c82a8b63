"""Mutual-information analysis of the ED-CD power-splitting receiver.

A receiver that splits received power between coherent detection (CD)
and envelope detection (ED) and decodes from both streams jointly.
This package provides the signal model, a seeded Monte-Carlo estimator
of the joint mutual information under Gaussian input, the closed-form
high-SNR results (MI approximation, optimal splitting ratio, gains over
the traditional single-chain receivers), and a CLI that reproduces the
reference sweep and table data as CSV.
"""

from ._backend import backend_name
from .analytic import (
    AsymptoticTerms,
    DegenerateNoiseError,
    FiniteGain,
    GainBreakdown,
    QuadraticCoefficients,
    gain_asymptotic,
    gain_finite,
    mi_cd_exact,
    mi_cone_normal,
    mi_ed_upper_bound,
    mi_high_snr,
    optimal_rho,
    quadratic_coefficients,
    roots_upsilon_phi,
)
from .channel import (
    ChannelParams,
    NoiseProfile,
    SampleBatch,
    SplittingRatio,
    normalize_channel,
    sample_batch,
    sample_symbol,
)
from .density import (
    DensityUnderflowError,
    QuadratureError,
    QuadratureRule,
    log_pdf_pair_given_x,
    log_pdf_pair_marginal,
    log_pdf_pair_marginal_radial,
    log_pdf_y1_given_xw,
    log_pdf_y2_given_xw,
)
from .estimator import (
    ConvergenceReport,
    EstimatorConfig,
    MiEstimate,
    estimate_mi,
    estimate_mi_converged,
    sweep_rho,
)
from .optimize import ScanResult, argmax_mc, maximize_over_rho

__version__ = "0.1.0"

__all__ = [
    "AsymptoticTerms",
    "ChannelParams",
    "ConvergenceReport",
    "DegenerateNoiseError",
    "DensityUnderflowError",
    "EstimatorConfig",
    "FiniteGain",
    "GainBreakdown",
    "MiEstimate",
    "NoiseProfile",
    "QuadraticCoefficients",
    "QuadratureError",
    "QuadratureRule",
    "SampleBatch",
    "ScanResult",
    "SplittingRatio",
    "argmax_mc",
    "backend_name",
    "estimate_mi",
    "estimate_mi_converged",
    "gain_asymptotic",
    "gain_finite",
    "log_pdf_pair_given_x",
    "log_pdf_pair_marginal",
    "log_pdf_pair_marginal_radial",
    "log_pdf_y1_given_xw",
    "log_pdf_y2_given_xw",
    "maximize_over_rho",
    "mi_cd_exact",
    "mi_cone_normal",
    "mi_ed_upper_bound",
    "mi_high_snr",
    "normalize_channel",
    "optimal_rho",
    "quadratic_coefficients",
    "roots_upsilon_phi",
    "sample_batch",
    "sample_symbol",
    "sweep_rho",
]
